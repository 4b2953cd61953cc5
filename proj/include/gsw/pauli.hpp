// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file pauli.hpp
 * @brief Weighted Pauli strings in symplectic (x, z) bitmask form and the
 * Jordan-Wigner image of fermionic ladder operators.
 *
 * A key (x, z) denotes i^{|x&z|} X^x Z^z, so bit q set in both masks is Y_q.
 * Qubit q is bit q of a basis-state index; |1> means orbital q is occupied.
 */

#pragma once

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "gsw/core.hpp"

namespace gsw {

inline constexpr int kMaxPauliQubits = 32;
inline constexpr double kPauliDropTol = 1e-12;

struct PauliKey {
    std::uint32_t x = 0;
    std::uint32_t z = 0;

    friend bool operator<(const PauliKey& a, const PauliKey& b) {
        return a.x != b.x ? a.x < b.x : a.z < b.z;
    }
    friend bool operator==(const PauliKey& a, const PauliKey& b) = default;
};

/// Phase of P_a P_b = i^k P_{a^b}; returns k mod 4.
inline int pauli_product_phase(const PauliKey& a, const PauliKey& b) {
    const int k = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) +
                  2 * std::popcount(a.z & b.x) - std::popcount((a.x ^ b.x) & (a.z ^ b.z));
    return ((k % 4) + 4) % 4;
}

inline cplx i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

class PauliSum {
public:
    using Map = std::map<PauliKey, cplx>;

    PauliSum() = default;
    explicit PauliSum(int n_qubits) : n_(n_qubits) {
        if (n_qubits < 0 || n_qubits > kMaxPauliQubits) throw Error("PauliSum: qubit count out of range");
    }

    static PauliSum identity(int n, cplx c = 1.0) {
        PauliSum s(n);
        s.add({0, 0}, c);
        return s;
    }

    /// Parses "Z0 X1 Y3"; an empty string is the identity.
    static PauliSum from_string(int n, const std::string& letters, cplx c = 1.0) {
        PauliKey k;
        std::size_t i = 0;
        while (i < letters.size()) {
            const char L = letters[i];
            if (L == ' ') {
                ++i;
                continue;
            }
            std::size_t j = i + 1;
            while (j < letters.size() && std::isdigit(static_cast<unsigned char>(letters[j]))) ++j;
            if (j == i + 1) throw Error("PauliSum: missing qubit index in '" + letters + "'");
            const int q = std::stoi(letters.substr(i + 1, j - i - 1));
            if (q < 0 || q >= n) throw Error("PauliSum: qubit index out of range");
            const std::uint32_t bit = 1u << q;
            if ((k.x | k.z) & bit) throw Error("PauliSum: repeated qubit in '" + letters + "'");
            switch (L) {
                case 'X': k.x |= bit; break;
                case 'Y': k.x |= bit; k.z |= bit; break;
                case 'Z': k.z |= bit; break;
                default: throw Error(std::string("PauliSum: bad letter ") + L);
            }
            i = j;
        }
        PauliSum s(n);
        s.add(k, c);
        return s;
    }

    [[nodiscard]] int n_qubits() const { return n_; }
    [[nodiscard]] const Map& terms() const { return terms_; }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    void add(const PauliKey& k, cplx c) { terms_[k] += c; }

    [[nodiscard]] cplx coeff(const PauliKey& k) const {
        const auto it = terms_.find(k);
        return it == terms_.end() ? cplx{0, 0} : it->second;
    }

    /// Drops terms with |c| <= tol.
    PauliSum& simplify(double tol = kPauliDropTol) {
        for (auto it = terms_.begin(); it != terms_.end();) {
            it = std::abs(it->second) <= tol ? terms_.erase(it) : std::next(it);
        }
        return *this;
    }

    PauliSum& operator+=(const PauliSum& o) {
        check_width(o);
        for (const auto& [k, c] : o.terms_) terms_[k] += c;
        return *this;
    }
    PauliSum& operator-=(const PauliSum& o) {
        check_width(o);
        for (const auto& [k, c] : o.terms_) terms_[k] -= c;
        return *this;
    }
    PauliSum& operator*=(cplx s) {
        for (auto& kv : terms_) kv.second *= s;
        return *this;
    }

    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
    friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
    friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }

    friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
        a.check_width(b);
        PauliSum out(a.n_);
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) {
                const PauliKey k{ka.x ^ kb.x, ka.z ^ kb.z};
                out.terms_[k] += i_pow(pauli_product_phase(ka, kb)) * ca * cb;
            }
        }
        return out;
    }

    [[nodiscard]] PauliSum adjoint() const {
        PauliSum out(n_);
        for (const auto& [k, c] : terms_) out.terms_[k] = std::conj(c);
        return out;
    }

    /// Largest |c| over terms; 0 for the empty sum.
    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (const auto& kv : terms_) m = std::max(m, std::abs(kv.second));
        return m;
    }

    /// Sum of |c| over terms (the LCU normalization).
    [[nodiscard]] double one_norm() const {
        double m = 0.0;
        for (const auto& kv : terms_) m += std::abs(kv.second);
        return m;
    }

    [[nodiscard]] bool is_hermitian(double tol = 1e-10) const {
        for (const auto& kv : terms_) {
            if (std::abs(kv.second.imag()) > tol) return false;
        }
        return true;
    }

    [[nodiscard]] static std::string letters(const PauliKey& k, int n) {
        std::string s;
        for (int q = 0; q < n; ++q) {
            const bool x = (k.x >> q) & 1u, z = (k.z >> q) & 1u;
            if (!x && !z) continue;
            if (!s.empty()) s += ' ';
            s += (x && z) ? 'Y' : (x ? 'X' : 'Z');
            s += std::to_string(q);
        }
        return s.empty() ? "I" : s;
    }

private:
    void check_width(const PauliSum& o) const {
        if (o.n_ != n_) throw Error("PauliSum: qubit count mismatch");
    }

    int n_ = 0;
    Map terms_;
};

inline PauliSum commutator(const PauliSum& a, const PauliSum& b) { return a * b - b * a; }

/// Jordan-Wigner image: a_p = Z_{<p} (X_p + iY_p)/2, a+_p = Z_{<p} (X_p - iY_p)/2.
inline PauliSum jordan_wigner_ladder(int p, bool dagger, int n) {
    if (p < 0 || p >= n) throw Error("jordan_wigner_ladder: orbital index out of range");
    const std::uint32_t tail = (1u << p) - 1u;
    const std::uint32_t bit = 1u << p;
    PauliSum s(n);
    s.add({bit, tail}, 0.5);
    s.add({bit, tail | bit}, dagger ? cplx{0, -0.5} : cplx{0, 0.5});
    return s;
}

/// Number operator sum_p a+_p a_p = sum_p (I - Z_p)/2.
inline PauliSum number_operator(int n) {
    PauliSum s(n);
    for (int p = 0; p < n; ++p) {
        s.add({0, 0}, 0.5);
        s.add({0, 1u << p}, -0.5);
    }
    return s;
}

/// out = P_k v, accumulated with weight c.
inline void accumulate_pauli(const PauliKey& k, cplx c, const CVec& v, CVec& out) {
    const cplx ph = c * i_pow(std::popcount(k.x & k.z));
    const std::size_t dim = v.size();
    for (std::size_t b = 0; b < dim; ++b) {
        const double sgn = (std::popcount(static_cast<std::uint32_t>(b) & k.z) & 1) ? -1.0 : 1.0;
        out[b ^ k.x] += ph * sgn * v[b];
    }
}

/// H v for a state vector of length 2^n.
inline CVec apply_pauli_sum(const PauliSum& h, const CVec& v) {
    if (v.size() != (std::size_t{1} << h.n_qubits())) throw Error("apply_pauli_sum: size mismatch");
    CVec out(v.size(), cplx{0, 0});
    for (const auto& [k, c] : h.terms()) accumulate_pauli(k, c, v, out);
    return out;
}

}  // namespace gsw
