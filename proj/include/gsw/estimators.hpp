// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file estimators.hpp
 * @brief Shot-level gradient protocols for the fidelity f_i = |<psi_i|psi>|^2:
 * Hadamard-test circuits, the importance-sampled incoherent estimator with
 * its Hoeffding budget, and the PREP/SELECT construction behind the
 * coherent (amplitude-estimation) budget.
 *
 * Controlled dressed generators are not unitary, so every controlled-H_a is
 * realized through the Pauli decomposition H_a = sum_l c_l W P_l W+, one
 * unitary term per circuit. All circuits are simulated explicitly on an
 * ancilla-extended register.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "gsw/core.hpp"
#include "gsw/pauli.hpp"
#include "gsw/simulator.hpp"
#include "gsw/trainer.hpp"

namespace gsw {

/// System register plus `n_anc` ancilla qubits stored as 2^n_anc blocks.
class AncillaRegister {
public:
    AncillaRegister(int n_anc, const StateVector& sys) : n_anc_(n_anc), dim_(sys.size()) {
        if (n_anc < 0 || n_anc > 20) throw Error("AncillaRegister: ancilla count out of range");
        amp_.assign(dim_ << n_anc, cplx{0, 0});
        std::copy(sys.begin(), sys.end(), amp_.begin());
    }

    [[nodiscard]] std::size_t n_blocks() const { return std::size_t{1} << n_anc_; }
    [[nodiscard]] std::size_t block_dim() const { return dim_; }

    [[nodiscard]] StateVector block(std::size_t b) const {
        return {amp_.begin() + static_cast<long>(b * dim_), amp_.begin() + static_cast<long>((b + 1) * dim_)};
    }
    void set_block(std::size_t b, const StateVector& v) {
        std::copy(v.begin(), v.end(), amp_.begin() + static_cast<long>(b * dim_));
    }

    /// 2x2 unitary {u00, u01, u10, u11} on ancilla qubit j.
    void apply_1q(int j, const std::array<cplx, 4>& u) {
        const std::size_t bit = std::size_t{1} << j;
        for (std::size_t b = 0; b < n_blocks(); ++b) {
            if (b & bit) continue;
            cplx* lo = amp_.data() + b * dim_;
            cplx* hi = amp_.data() + (b | bit) * dim_;
            for (std::size_t i = 0; i < dim_; ++i) {
                const cplx x = lo[i], y = hi[i];
                lo[i] = u[0] * x + u[1] * y;
                hi[i] = u[2] * x + u[3] * y;
            }
        }
    }

    void hadamard(int j) {
        const double r = 1.0 / std::numbers::sqrt2;
        apply_1q(j, {cplx{r, 0}, cplx{r, 0}, cplx{r, 0}, cplx{-r, 0}});
    }
    void phase_s(int j) { apply_1q(j, {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, kI}); }

    /// Probability that ancilla qubit j reads 0.
    [[nodiscard]] double prob_zero(int j) const {
        const std::size_t bit = std::size_t{1} << j;
        double p = 0.0;
        for (std::size_t b = 0; b < n_blocks(); ++b) {
            if (b & bit) continue;
            for (std::size_t i = 0; i < dim_; ++i) p += std::norm(amp_[b * dim_ + i]);
        }
        return p;
    }

private:
    int n_anc_;
    std::size_t dim_;
    CVec amp_;
};

enum class HadamardVariant { Plain, Reflected };

/**
 * Target |psi_i>, the circuit at angles theta, the slot a whose dressed
 * generator is measured, and (reflected variant) the model state |psi>.
 */
struct HadamardSpec {
    const Circuit* circuit = nullptr;
    RVec theta;
    StateVector target;
    StateVector psi;
    std::size_t a = 0;
    HadamardVariant variant = HadamardVariant::Plain;
};

namespace detail {

/// One unitary LCU term: sign * W P W+ (times R in the reflected variant).
struct UnitaryTerm {
    PauliKey key;
    double weight = 0.0;  ///< |c_l|
    double sign = 1.0;    ///< sign of the real coefficient c_l
};

inline std::vector<UnitaryTerm> generator_terms(const ExcitationGate& g, int n) {
    std::vector<UnitaryTerm> out;
    const PauliSum gp = generator_pauli(g, n);
    for (const auto& [k, c] : gp.terms()) {
        if (std::abs(c.imag()) > 1e-12) throw Error("generator has a non-real Pauli coefficient");
        out.push_back({k, std::abs(c.real()), c.real() < 0 ? -1.0 : 1.0});
    }
    return out;
}

/// v -> W P W+ v, with W the gates after slot a.
inline StateVector apply_dressed_pauli(const Circuit& c, const RVec& theta, std::size_t a, const PauliKey& key,
                                       const StateVector& v) {
    StateVector w = v;
    for (std::size_t b = c.gates.size(); b-- > a + 1;) apply_gate_inplace(w, c.gates[b], -theta[b]);
    StateVector pw(w.size(), cplx{0, 0});
    accumulate_pauli(key, 1.0, w, pw);
    for (std::size_t b = a + 1; b < c.gates.size(); ++b) apply_gate_inplace(pw, c.gates[b], theta[b]);
    return pw;
}

/// (2|psi><psi| - 1) v
inline StateVector reflect(const StateVector& psi, const StateVector& v) {
    const cplx o = inner(psi, v);
    StateVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = 2.0 * o * psi[i] - v[i];
    return out;
}

inline StateVector apply_term_unitary(const HadamardSpec& s, const PauliKey& key, const StateVector& v) {
    const StateVector in = s.variant == HadamardVariant::Reflected ? reflect(s.psi, v) : v;
    return apply_dressed_pauli(*s.circuit, s.theta, s.a, key, in);
}

inline void check_spec(const HadamardSpec& s) {
    if (!s.circuit) throw Error("HadamardSpec: no circuit");
    if (s.a >= s.circuit->gates.size() || s.theta.size() != s.circuit->gates.size()) {
        throw Error("HadamardSpec: slot out of range");
    }
    if (qubits_of(s.target) != s.circuit->n_qubits) throw Error("HadamardSpec: target width mismatch");
    if (s.variant == HadamardVariant::Reflected && s.psi.size() != s.target.size()) {
        throw Error("HadamardSpec: reflected variant needs the model state");
    }
}

}  // namespace detail

/**
 * Hadamard test for one unitary V on |psi_i>: ancilla H, S, controlled-V, H.
 * P(0) = (1 - Im<V>)/2, so the returned P(1) - P(0) equals Im<psi_i|V|psi_i>.
 */
inline double hadamard_term_expectation(const HadamardSpec& s, const PauliKey& key) {
    detail::check_spec(s);
    AncillaRegister reg(1, s.target);
    reg.hadamard(0);
    reg.phase_s(0);
    reg.set_block(1, detail::apply_term_unitary(s, key, reg.block(1)));
    reg.hadamard(0);
    const double p0 = reg.prob_zero(0);
    return 1.0 - 2.0 * p0;
}

/// Im<psi_i|H_a|psi_i> (plain) or Im<psi_i|H_a (2|psi><psi|-1)|psi_i> (reflected).
inline double hadamard_expectation(const HadamardSpec& s) {
    detail::check_spec(s);
    double sum = 0.0;
    for (const auto& t : detail::generator_terms(s.circuit->gates[s.a], s.circuit->n_qubits)) {
        sum += t.sign * t.weight * hadamard_term_expectation(s, t.key);
    }
    return sum;
}

/// Mean of `shots` i.i.d. +-1 outcomes whose expectation is `e` in [-1, 1].
inline double sample_pm1_mean(double e, std::mt19937_64& rng, std::uint64_t shots) {
    if (shots == 0) throw Error("sample: shots must be at least 1");
    if (!(std::abs(e) <= 1.0 + 1e-12)) throw Error("sample: expectation outside [-1, 1]");
    const double p_plus = std::clamp((1.0 + e) / 2.0, 0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::int64_t acc = 0;
    for (std::uint64_t k = 0; k < shots; ++k) acc += u(rng) < p_plus ? 1 : -1;
    return static_cast<double>(acc) / static_cast<double>(shots);
}

/**
 * Shot estimate of hadamard_expectation: each shot picks a Pauli term with
 * probability |c_l|/lambda, runs its circuit once and records
 * sign(c_l) * (+-1), where ancilla 1 maps to +1. The returned lambda * mean
 * is unbiased.
 */
inline double sample_hadamard(const HadamardSpec& s, std::mt19937_64& rng, std::uint64_t shots) {
    if (shots == 0) throw Error("sample_hadamard: shots must be at least 1");
    const auto terms = detail::generator_terms(s.circuit->gates.at(s.a), s.circuit->n_qubits);
    std::vector<double> w, p_plus;
    double lambda = 0.0;
    for (const auto& t : terms) {
        w.push_back(t.weight);
        lambda += t.weight;
        p_plus.push_back(std::clamp((1.0 + hadamard_term_expectation(s, t.key)) / 2.0, 0.0, 1.0));
    }
    if (lambda == 0.0) return 0.0;
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double acc = 0.0;
    for (std::uint64_t k = 0; k < shots; ++k) {
        const std::size_t l = pick(rng);
        acc += terms[l].sign * (u(rng) < p_plus[l] ? 1.0 : -1.0);
    }
    return lambda * acc / static_cast<double>(shots);
}

/// d f_i / d gamma_k from the exact adjoint derivative (the oracle).
inline double exact_fidelity_gradient(const GenerativeModel& m, const RVec& R, const StateVector& target,
                                      std::size_t k) {
    m.check();
    const RVec theta = m.net.forward(R);
    StateVector psi;
    const CVec g = overlap_jacobian(m.circuit, theta, m.init_state(), target, &psi);
    const cplx o = inner(psi, target);
    RVec u(g.size());
    for (std::size_t a = 0; a < g.size(); ++a) u[a] = 2.0 * std::real(o * g[a]);
    const RVec full = m.net.backward(R, u);
    if (k >= full.size()) throw Error("gamma index out of range");
    return full[k];
}

/// Column k of d nu / d gamma at R.
inline RVec jacobian_column(const GenerativeModel& m, const RVec& R, std::size_t k) {
    if (k >= m.net.num_params()) throw Error("gamma index out of range");
    const auto rows = m.net.jacobian(R);
    RVec col(rows.size());
    for (std::size_t a = 0; a < rows.size(); ++a) col[a] = rows[a][k];
    return col;
}

/**
 * Precomputed circuits of the incoherent estimator for one (i, k). Slots
 * 0..N_P-1 are plain, N_P..2N_P-1 reflected. Slot a has weight
 * lambda_a |J_a| with lambda_a the generator's Pauli 1-norm.
 */
class IncoherentSampler {
public:
    IncoherentSampler(const GenerativeModel& m, const RVec& R, const StateVector& target, std::size_t k) {
        m.check();
        J_ = jacobian_column(m, R, k);
        const std::size_t np = J_.size();
        const RVec theta = m.net.forward(R);
        const StateVector psi = m.state(R);
        slot_weight_.assign(2 * np, 0.0);
        terms_.resize(2 * np);
        for (std::size_t a = 0; a < np; ++a) {
            if (J_[a] == 0.0) continue;
            const auto gt = detail::generator_terms(m.circuit.gates[a], m.circuit.n_qubits);
            double lambda = 0.0;
            for (const auto& t : gt) lambda += t.weight;
            for (int v = 0; v < 2; ++v) {
                const HadamardSpec spec{&m.circuit, theta, target, psi, a,
                                        v == 0 ? HadamardVariant::Plain : HadamardVariant::Reflected};
                Slot& s = terms_[a + static_cast<std::size_t>(v) * np];
                s.sign = J_[a] < 0 ? -1.0 : 1.0;
                for (const auto& t : gt) {
                    s.weights.push_back(t.weight);
                    s.signs.push_back(t.sign);
                    s.p_plus.push_back(std::clamp((1.0 + hadamard_term_expectation(spec, t.key)) / 2.0, 0.0, 1.0));
                }
                slot_weight_[a + static_cast<std::size_t>(v) * np] = lambda * std::abs(J_[a]);
            }
        }
        scale_ = 0.0;
        for (double w : slot_weight_) scale_ += w;
    }

    [[nodiscard]] bool trivial() const { return scale_ == 0.0; }

    /// Normalized slot probabilities p_a.
    [[nodiscard]] RVec weights() const {
        RVec p(slot_weight_.size(), 0.0);
        if (trivial()) return p;
        for (std::size_t t = 0; t < p.size(); ++t) p[t] = slot_weight_[t] / scale_;
        return p;
    }

    /// Prefactor multiplying the sample mean: sum over slots of lambda_a |J_a|.
    [[nodiscard]] double scale() const { return scale_; }

    /// Expectation of the estimator implied by the circuit probabilities.
    [[nodiscard]] double mean() const {
        double s = 0.0;
        for (std::size_t t = 0; t < terms_.size(); ++t) {
            const Slot& sl = terms_[t];
            for (std::size_t l = 0; l < sl.weights.size(); ++l) {
                s += std::abs(J_[t % J_.size()]) * sl.sign * sl.signs[l] * sl.weights[l] * (2.0 * sl.p_plus[l] - 1.0);
            }
        }
        return s;
    }

    /// One estimate from m shots.
    double sample(std::mt19937_64& rng, std::uint64_t m) const {
        if (trivial()) return 0.0;
        if (m == 0) throw Error("incoherent_gradient: shots must be at least 1");
        std::discrete_distribution<std::size_t> pick_slot(slot_weight_.begin(), slot_weight_.end());
        std::vector<std::discrete_distribution<std::size_t>> pick_term(terms_.size());
        for (std::size_t t = 0; t < terms_.size(); ++t) {
            if (!terms_[t].weights.empty()) {
                pick_term[t] = std::discrete_distribution<std::size_t>(terms_[t].weights.begin(),
                                                                       terms_[t].weights.end());
            }
        }
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double acc = 0.0;
        for (std::uint64_t s = 0; s < m; ++s) {
            const std::size_t t = pick_slot(rng);
            const Slot& sl = terms_[t];
            const std::size_t l = pick_term[t](rng);
            const double outcome = u(rng) < sl.p_plus[l] ? 1.0 : -1.0;
            acc += sl.sign * sl.signs[l] * outcome;
        }
        return scale_ * acc / static_cast<double>(m);
    }

private:
    struct Slot {
        double sign = 1.0;
        std::vector<double> weights, signs, p_plus;
    };
    RVec J_;
    RVec slot_weight_;
    std::vector<Slot> terms_;
    double scale_ = 0.0;
};

/// Shot estimate of d f_i / d gamma_k; exactly 0 for a zero Jacobian column.
inline double incoherent_gradient(const GenerativeModel& m, const RVec& R, const StateVector& target, std::size_t k,
                                  std::mt19937_64& rng, std::uint64_t shots) {
    return IncoherentSampler(m, R, target, k).sample(rng, shots);
}

struct ShotBudget {
    double epsilon = 0.0;
    double delta = 0.0;
    std::vector<std::uint64_t> per_geometry;
    std::uint64_t total = 0;
};

inline void check_eps_delta(double eps, double delta) {
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw Error("epsilon and delta must lie in (0, 1)");
    }
}

/// m_i = ceil(8/eps^2 ln(2/delta) (sum_j |J_ij|)^2), floored at 1.
inline std::uint64_t incoherent_shots(double eps, double delta, double jac_l1) {
    check_eps_delta(eps, delta);
    const double m = std::ceil(8.0 / (eps * eps) * std::log(2.0 / delta) * jac_l1 * jac_l1);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

inline double l1(const RVec& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

/// One Jacobian column (d nu(R_i)/d gamma_k) per geometry.
inline ShotBudget budget_incoherent(double eps, double delta, const std::vector<RVec>& columns) {
    check_eps_delta(eps, delta);
    ShotBudget b{eps, delta, {}, 0};
    for (const auto& c : columns) {
        b.per_geometry.push_back(incoherent_shots(eps, delta, l1(c)));
        b.total += b.per_geometry.back();
    }
    return b;
}

struct LcuResult {
    double p0 = 0.0;         ///< P(phase qubit = 0)
    double beta = 0.0;       ///< sum of LCU weights
    int index_qubits = 0;    ///< PREP/SELECT register width
    std::size_t n_terms = 0;
};

/**
 * PREP/SELECT circuit for d f_i / d gamma_k. Terms run over both slot
 * families and each generator's Pauli terms: beta_t = |J_a||c_l| and
 * V_t = sign(J_a) sign(c_l) W P_l W+ (times the reflection for slots
 * past N_P). The phase qubit gets H, S, controls SELECT, then H.
 */
inline LcuResult lcu_success_probability(const GenerativeModel& m, const RVec& R, const StateVector& target,
                                         std::size_t k) {
    m.check();
    const RVec J = jacobian_column(m, R, k);
    const std::size_t np = J.size();
    const RVec theta = m.net.forward(R);
    const StateVector psi = m.state(R);
    struct Term {
        std::size_t a;
        HadamardVariant v;
        detail::UnitaryTerm u;
        double beta;
        double sign;
    };
    std::vector<Term> terms;
    double beta = 0.0;
    for (int v = 0; v < 2; ++v) {
        for (std::size_t a = 0; a < np; ++a) {
            for (const auto& t : detail::generator_terms(m.circuit.gates[a], m.circuit.n_qubits)) {
                const double b = std::abs(J[a]) * t.weight;
                terms.push_back({a, v == 0 ? HadamardVariant::Plain : HadamardVariant::Reflected, t, b,
                                 (J[a] < 0 ? -1.0 : 1.0) * t.sign});
                beta += b;
            }
        }
    }
    if (!(beta > 0.0)) throw Error("lcu: beta is zero (the Jacobian column vanishes)");
    int s = 0;
    while ((std::size_t{1} << s) < terms.size()) ++s;
    // ancilla bit 0 is the phase qubit, bits 1..s the index register
    AncillaRegister reg(1 + s, target);
    // PREP|0> = sum_t sqrt(beta_t / beta)|t>
    const StateVector base = reg.block(0);
    for (std::size_t t = 0; t < terms.size(); ++t) {
        StateVector b = base;
        const double amp = std::sqrt(terms[t].beta / beta);
        for (auto& x : b) x *= amp;
        reg.set_block(t << 1, b);
    }
    reg.hadamard(0);
    reg.phase_s(0);
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::size_t blk = (t << 1) | 1u;
        const HadamardSpec spec{&m.circuit, theta, target, psi, terms[t].a, terms[t].v};
        StateVector out = detail::apply_term_unitary(spec, terms[t].u.key, reg.block(blk));
        for (auto& x : out) x *= terms[t].sign;
        reg.set_block(blk, out);
    }
    reg.hadamard(0);
    return {reg.prob_zero(0), beta, s, terms.size()};
}

struct CoherentBudget {
    double epsilon = 0.0;
    double delta = 0.0;
    std::uint64_t repetitions = 0;
    std::vector<std::uint64_t> rounds;   ///< ceil(36 pi^2 beta_i / eps)
    std::vector<std::uint64_t> queries;  ///< rounds * repetitions
    std::uint64_t total = 0;
};

inline std::uint64_t coherent_rounds(double beta, double eps) {
    if (!(eps > 0.0)) throw Error("epsilon must be positive");
    if (!(beta >= 0.0)) throw Error("beta must be non-negative");
    return static_cast<std::uint64_t>(std::ceil(36.0 * std::numbers::pi * std::numbers::pi * beta / eps));
}

inline std::uint64_t median_repetitions(double delta, double c = 1.0) {
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(c * std::log(1.0 / delta))));
}

/// beta_i = 2 sum_j |J_ij| for unit-norm V_a.
inline CoherentBudget budget_coherent(double eps, double delta, const std::vector<RVec>& columns, double c = 1.0) {
    check_eps_delta(eps, delta);
    CoherentBudget b;
    b.epsilon = eps;
    b.delta = delta;
    b.repetitions = median_repetitions(delta, c);
    for (const auto& col : columns) {
        b.rounds.push_back(coherent_rounds(2.0 * l1(col), eps));
        b.queries.push_back(b.rounds.back() * b.repetitions);
        b.total += b.queries.back();
    }
    return b;
}

}  // namespace gsw
