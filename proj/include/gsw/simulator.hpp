// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file simulator.hpp
 * @brief Dense statevector engine for fermionic excitation circuits.
 *
 * A gate with excitation operator E (single p->q: E = a+_q a_p; double
 * (i,j)->(a,b): E = a+_a a+_b a_j a_i) has generator G = (i/2)(E - E+) and
 * acts as exp(-i theta G). On the coupled pair |A> (E|A> = s|B>) it is
 *   |A> -> cos(theta/2)|A> + s sin(theta/2)|B>,
 *   |B> -> cos(theta/2)|B> - s sin(theta/2)|A>,
 * where s = +-1 is the Jordan-Wigner parity sign. Other states are fixed.
 */

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gsw/core.hpp"
#include "gsw/pauli.hpp"

namespace gsw {

inline constexpr int kMaxStateQubits = 16;

/// Amplitudes over 2^n basis states; bit q of the index is qubit q.
using StateVector = CVec;

inline int qubits_of(const StateVector& s) {
    const std::size_t d = s.size();
    if (d == 0 || (d & (d - 1)) != 0) throw Error("state length is not a power of two");
    return std::countr_zero(d);
}

struct ExcitationGate {
    enum class Kind { Single, Double };
    Kind kind = Kind::Single;
    std::vector<int> wires;  ///< occupied first, then virtual

    static ExcitationGate single(int p, int q) { return {Kind::Single, {p, q}}; }
    static ExcitationGate dbl(int i, int j, int a, int b) { return {Kind::Double, {i, j, a, b}}; }

    friend bool operator==(const ExcitationGate&, const ExcitationGate&) = default;
};

inline std::string to_string(const ExcitationGate& g) {
    std::string s = g.kind == ExcitationGate::Kind::Single ? "single(" : "double(";
    for (std::size_t i = 0; i < g.wires.size(); ++i) s += (i ? "," : "") + std::to_string(g.wires[i]);
    return s + ")";
}

/// Throws unless wires are in range, distinct, and spin-conserving.
inline void check_gate(const ExcitationGate& g, int n) {
    const std::size_t want = g.kind == ExcitationGate::Kind::Single ? 2 : 4;
    if (g.wires.size() != want) throw Error("invalid wires for " + to_string(g));
    std::uint32_t seen = 0;
    for (int w : g.wires) {
        if (w < 0 || w >= n) throw Error("wire out of range in " + to_string(g));
        if (seen & (1u << w)) throw Error("repeated wire in " + to_string(g));
        seen |= 1u << w;
    }
    const auto alpha = [](int w) { return w % 2 == 0 ? 1 : 0; };
    int ann = 0, cre = 0;
    const std::size_t half = want / 2;
    for (std::size_t i = 0; i < want; ++i) (i < half ? ann : cre) += alpha(g.wires[i]);
    if (ann != cre) throw Error("gate does not conserve spin: " + to_string(g));
}

struct Circuit {
    int n_qubits = 0;
    std::vector<ExcitationGate> gates;

    [[nodiscard]] std::size_t n_params() const { return gates.size(); }
};

inline StateVector hartree_fock_state(int n_qubits, int n_electrons) {
    if (n_qubits < 0 || n_qubits > kMaxStateQubits) throw Error("hartree_fock_state: qubit count out of range");
    if (n_electrons < 0 || n_electrons > n_qubits) throw Error("hartree_fock_state: n_electrons > n_qubits");
    StateVector s(std::size_t{1} << n_qubits, cplx{0, 0});
    s[(std::size_t{1} << n_electrons) - 1] = 1.0;
    return s;
}

inline StateVector basis_state(int n_qubits, std::size_t index) {
    StateVector s(std::size_t{1} << n_qubits, cplx{0, 0});
    s.at(index) = 1.0;
    return s;
}

namespace detail {

/// Applies a (dagger=false) or a+ (dagger=true) on orbital p to bitstring b.
/// Returns false when the result vanishes; flips sign for JW parity.
inline bool ladder_on_bits(std::uint32_t& b, int p, bool dagger, int& sign) {
    const std::uint32_t bit = 1u << p;
    if (((b & bit) != 0) == dagger) return false;
    if (std::popcount(b & (bit - 1u)) & 1) sign = -sign;
    b ^= bit;
    return true;
}

struct GateMasks {
    std::uint32_t a_mask;  ///< bits set in |A>
    std::uint32_t b_mask;  ///< bits set in |B>
};

inline GateMasks gate_masks(const ExcitationGate& g) {
    const std::size_t half = g.wires.size() / 2;
    GateMasks m{0, 0};
    for (std::size_t i = 0; i < g.wires.size(); ++i) (i < half ? m.a_mask : m.b_mask) |= 1u << g.wires[i];
    return m;
}

/// JW sign s = <B|E|A> for basis state A that the gate couples.
inline int excitation_sign(const ExcitationGate& g, std::uint32_t A) {
    int sign = 1;
    std::uint32_t b = A;
    if (g.kind == ExcitationGate::Kind::Single) {
        ladder_on_bits(b, g.wires[0], false, sign);
        ladder_on_bits(b, g.wires[1], true, sign);
    } else {
        ladder_on_bits(b, g.wires[0], false, sign);
        ladder_on_bits(b, g.wires[1], false, sign);
        ladder_on_bits(b, g.wires[3], true, sign);
        ladder_on_bits(b, g.wires[2], true, sign);
    }
    return sign;
}

/// Calls fn(A, B, s) for every coupled pair.
template <typename Fn>
void for_each_pair(const ExcitationGate& g, std::size_t dim, Fn&& fn) {
    const GateMasks m = gate_masks(g);
    const std::uint32_t both = m.a_mask | m.b_mask;
    for (std::size_t idx = 0; idx < dim; ++idx) {
        const auto A = static_cast<std::uint32_t>(idx);
        if ((A & both) != m.a_mask) continue;
        const std::uint32_t B = A ^ both;
        fn(A, B, excitation_sign(g, A));
    }
}

}  // namespace detail

/// In-place exp(-i theta G).
inline void apply_gate_inplace(StateVector& s, const ExcitationGate& g, double theta) {
    check_gate(g, qubits_of(s));
    const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
    detail::for_each_pair(g, s.size(), [&](std::uint32_t A, std::uint32_t B, int sign) {
        const cplx a = s[A], b = s[B];
        s[A] = c * a - sign * sn * b;
        s[B] = sign * sn * a + c * b;
    });
}

inline StateVector apply_gate(StateVector s, const ExcitationGate& g, double theta) {
    apply_gate_inplace(s, g, theta);
    return s;
}

/// G v for the Hermitian generator G = (i/2)(E - E+).
inline StateVector apply_generator(const StateVector& v, const ExcitationGate& g) {
    check_gate(g, qubits_of(v));
    StateVector out(v.size(), cplx{0, 0});
    detail::for_each_pair(g, v.size(), [&](std::uint32_t A, std::uint32_t B, int sign) {
        out[B] += cplx{0, 0.5 * sign} * v[A];
        out[A] += cplx{0, -0.5 * sign} * v[B];
    });
    return out;
}

/// Pauli decomposition of G; its 1-norm is 1/2 for singles and doubles.
inline PauliSum generator_pauli(const ExcitationGate& g, int n) {
    check_gate(g, n);
    const auto up = [n](int p) { return jordan_wigner_ladder(p, true, n); };
    const auto dn = [n](int p) { return jordan_wigner_ladder(p, false, n); };
    const auto& w = g.wires;
    PauliSum E = g.kind == ExcitationGate::Kind::Single ? up(w[1]) * dn(w[0])
                                                        : up(w[2]) * up(w[3]) * dn(w[1]) * dn(w[0]);
    PauliSum G = (E - E.adjoint()) * cplx{0, 0.5};
    G.simplify();
    return G;
}

inline void check_params(const Circuit& c, const RVec& theta, const StateVector& init) {
    if (theta.size() != c.n_params()) throw Error("parameter count does not match circuit");
    if (qubits_of(init) != c.n_qubits) throw Error("initial state width does not match circuit");
}

inline StateVector run_circuit(const Circuit& c, const RVec& theta, const StateVector& init) {
    check_params(c, theta, init);
    StateVector s = init;
    for (std::size_t a = 0; a < c.gates.size(); ++a) apply_gate_inplace(s, c.gates[a], theta[a]);
    return s;
}

/**
 * Full derivative vectors d|psi>/d theta_a. Each vector needs the remainder
 * of the circuit applied after the inserted generator, so this costs
 * O(N_P^2) gate applications. Use overlap_jacobian for projected quantities.
 */
inline std::vector<StateVector> state_jacobian(const Circuit& c, const RVec& theta, const StateVector& init) {
    check_params(c, theta, init);
    const std::size_t np = c.gates.size();
    std::vector<StateVector> out(np);
    StateVector prefix = init;
    for (std::size_t a = 0; a < np; ++a) {
        apply_gate_inplace(prefix, c.gates[a], theta[a]);
        StateVector d = apply_generator(prefix, c.gates[a]);
        for (auto& x : d) x *= -kI;
        for (std::size_t b = a + 1; b < np; ++b) apply_gate_inplace(d, c.gates[b], theta[b]);
        out[a] = std::move(d);
    }
    return out;
}

/**
 * g_a = <bra| d psi / d theta_a> for all a by one forward pass and one
 * reverse (adjoint) sweep: O(N_P) gate applications.
 */
inline CVec overlap_jacobian(const Circuit& c, const RVec& theta, const StateVector& init,
                             const StateVector& bra, StateVector* psi_out = nullptr) {
    check_params(c, theta, init);
    if (bra.size() != init.size()) throw Error("overlap_jacobian: size mismatch");
    const std::size_t np = c.gates.size();
    StateVector phi = run_circuit(c, theta, init);
    if (psi_out) *psi_out = phi;
    StateVector lam = bra;
    CVec g(np);
    for (std::size_t k = np; k-- > 0;) {
        g[k] = -kI * inner(lam, apply_generator(phi, c.gates[k]));
        apply_gate_inplace(phi, c.gates[k], -theta[k]);
        apply_gate_inplace(lam, c.gates[k], -theta[k]);
    }
    return g;
}

/// Dressed generator: W G_a W+ v with W the gates after position a.
inline StateVector apply_dressed_generator(const Circuit& c, const RVec& theta, std::size_t a,
                                           const StateVector& v) {
    if (a >= c.gates.size() || theta.size() != c.gates.size()) throw Error("dressed generator index out of range");
    StateVector w = v;
    for (std::size_t b = c.gates.size(); b-- > a + 1;) apply_gate_inplace(w, c.gates[b], -theta[b]);
    w = apply_generator(w, c.gates[a]);
    for (std::size_t b = a + 1; b < c.gates.size(); ++b) apply_gate_inplace(w, c.gates[b], theta[b]);
    return w;
}

inline cplx overlap(const StateVector& a, const StateVector& b) { return inner(a, b); }

inline double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

/// <s|H|s>; throws if the imaginary part exceeds 1e-10.
inline double expectation(const StateVector& s, const PauliSum& h) {
    const cplx e = inner(s, apply_pauli_sum(h, s));
    if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real()))) {
        throw Error("expectation: operator is not Hermitian");
    }
    return e.real();
}

}  // namespace gsw
