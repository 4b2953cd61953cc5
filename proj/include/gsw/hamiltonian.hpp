// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hamiltonian.hpp
 * @brief Qubit Hamiltonians from integral records and exact low-lying spectra.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gsw/core.hpp"
#include "gsw/dataset.hpp"
#include "gsw/pauli.hpp"

namespace gsw {

/**
 * H = core I + sum h_pq a+_p a_q + 1/2 sum h_pqrs a+_p a+_q a_r a_s
 * under Jordan-Wigner, combined and with |c| <= 1e-12 dropped.
 */
inline PauliSum build_hamiltonian(const GeometryRecord& rec) {
    const int n = rec.n_spin_orbitals;
    std::vector<PauliSum> up, dn;
    up.reserve(static_cast<std::size_t>(n));
    dn.reserve(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) {
        up.push_back(jordan_wigner_ladder(p, true, n));
        dn.push_back(jordan_wigner_ladder(p, false, n));
    }
    PauliSum h = PauliSum::identity(n, rec.core_energy);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            const double v = rec.one(p, q);
            if (v != 0.0) h += (up[p] * dn[q]) * cplx{v};
        }
    }
    // pair products are reused across the n^4 loop
    std::vector<PauliSum> cc(static_cast<std::size_t>(n * n)), aa(static_cast<std::size_t>(n * n));
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            cc[static_cast<std::size_t>(p * n + q)] = up[p] * up[q];
            aa[static_cast<std::size_t>(p * n + q)] = dn[p] * dn[q];
        }
    }
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            for (int r = 0; r < n; ++r) {
                for (int s = 0; s < n; ++s) {
                    if (r == s) continue;
                    const double v = rec.two(p, q, r, s);
                    if (v == 0.0) continue;
                    h += (cc[static_cast<std::size_t>(p * n + q)] *
                          aa[static_cast<std::size_t>(r * n + s)]) *
                         cplx{0.5 * v};
                }
            }
        }
    }
    h.simplify();
    return h;
}

using SparseCMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor, std::int64_t>;

inline constexpr int kDefaultSparseCap = 16;

/// Matrix of the PauliSum in the computational basis (index bit q = qubit q).
inline SparseCMatrix pauli_sum_to_sparse(const PauliSum& h, int max_qubits = kDefaultSparseCap) {
    const int n = h.n_qubits();
    if (n > max_qubits) throw Error("pauli_sum_to_sparse: " + std::to_string(n) + " qubits exceeds cap");
    const std::int64_t dim = std::int64_t{1} << n;
    std::vector<Eigen::Triplet<cplx, std::int64_t>> trip;
    trip.reserve(static_cast<std::size_t>(dim) * h.size());
    for (const auto& [k, c] : h.terms()) {
        const cplx ph = c * i_pow(std::popcount(k.x & k.z));
        for (std::int64_t b = 0; b < dim; ++b) {
            const double sgn = (std::popcount(static_cast<std::uint32_t>(b) & k.z) & 1) ? -1.0 : 1.0;
            trip.emplace_back(b ^ static_cast<std::int64_t>(k.x), b, ph * sgn);
        }
    }
    SparseCMatrix m(dim, dim);
    m.setFromTriplets(trip.begin(), trip.end());
    m.prune(cplx{0, 0}, 0.0);
    return m;
}

struct SpectrumResult {
    RVec eigenvalues;  ///< ascending
    CVec ground_state;
    double gap = std::numeric_limits<double>::quiet_NaN();
    double residual = 0.0;  ///< max ||Hv - lambda v|| over returned pairs
};

/// Restricts the solve to fixed particle number and, optionally, fixed S_z.
struct SectorSpec {
    std::optional<int> n_electrons;
    std::optional<int> n_alpha;  ///< electrons on even spin orbitals
};

/// Electron-number and S_z sector of the closed-prefix reference determinant.
inline SectorSpec reference_sector(int n_electrons) {
    return {n_electrons, (n_electrons + 1) / 2};
}

inline constexpr std::size_t kDenseSectorLimit = 1024;
inline constexpr double kEigenResidualTol = 1e-10;

namespace detail {

inline std::vector<std::uint32_t> sector_basis(int n, const SectorSpec& sec) {
    std::vector<std::uint32_t> basis;
    std::uint32_t even = 0;
    for (int q = 0; q < n; q += 2) even |= 1u << q;
    const std::uint64_t dim = std::uint64_t{1} << n;
    for (std::uint64_t b = 0; b < dim; ++b) {
        const auto u = static_cast<std::uint32_t>(b);
        if (sec.n_electrons && std::popcount(u) != *sec.n_electrons) continue;
        if (sec.n_alpha && std::popcount(u & even) != *sec.n_alpha) continue;
        basis.push_back(u);
    }
    return basis;
}

/// Hamiltonian restricted to the listed basis states; rejects leakage.
inline SparseCMatrix sector_matrix(const PauliSum& h, const std::vector<std::uint32_t>& basis) {
    const int n = h.n_qubits();
    std::vector<std::int64_t> pos(std::size_t{1} << n, -1);
    for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<std::int64_t>(i);
    std::vector<Eigen::Triplet<cplx, std::int64_t>> trip;
    double leak = 0.0;
    for (const auto& [k, c] : h.terms()) {
        const cplx ph = c * i_pow(std::popcount(k.x & k.z));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const std::uint32_t b = basis[i];
            const double sgn = (std::popcount(b & k.z) & 1) ? -1.0 : 1.0;
            const std::int64_t j = pos[b ^ k.x];
            if (j < 0) {
                leak = std::max(leak, std::abs(c));
                continue;
            }
            trip.emplace_back(j, static_cast<std::int64_t>(i), ph * sgn);
        }
    }
    const auto d = static_cast<std::int64_t>(basis.size());
    SparseCMatrix m(d, d);
    m.setFromTriplets(trip.begin(), trip.end());
    // leaking single terms may cancel in the sum; check the summed action instead
    if (leak > 0.0) {
        CVec probe(std::size_t{1} << n, cplx{0, 0});
        for (std::size_t i = 0; i < basis.size(); ++i) {
            probe[basis[i]] = cplx{1.0 + 0.01 * static_cast<double>(i % 7), 0.003 * static_cast<double>(i % 5)};
        }
        const CVec hp = apply_pauli_sum(h, probe);
        double out = 0.0;
        for (std::size_t b = 0; b < hp.size(); ++b) {
            if (pos[b] < 0) out = std::max(out, std::abs(hp[b]));
        }
        if (out > 1e-10) throw Error("exact_spectrum: Hamiltonian does not conserve the requested sector");
    }
    return m;
}

inline void canonicalize_phase(CVec& v) {
    double best = 0.0;
    for (const auto& a : v) best = std::max(best, std::abs(a));
    if (best == 0.0) return;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= best * (1.0 - 1e-12)) {
            idx = i;
            break;
        }
    }
    const cplx ph = std::conj(v[idx]) / std::abs(v[idx]);
    for (auto& a : v) a *= ph;
    v[idx] = cplx{v[idx].real(), 0.0};
}

struct Eigenpairs {
    RVec values;
    std::vector<Eigen::VectorXcd> vectors;
};

inline Eigenpairs dense_lowest(const SparseCMatrix& m, std::size_t k) {
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success) throw Error("exact_spectrum: dense eigensolver failed");
    Eigenpairs out;
    const std::size_t take = std::min<std::size_t>(k, static_cast<std::size_t>(dense.rows()));
    for (std::size_t i = 0; i < take; ++i) {
        out.values.push_back(es.eigenvalues()(static_cast<Eigen::Index>(i)));
        out.vectors.push_back(es.eigenvectors().col(static_cast<Eigen::Index>(i)));
    }
    return out;
}

/**
 * Lanczos with full reorthogonalization against the Krylov basis and the
 * locked vectors. On breakdown the basis is extended with a fresh vector.
 */
inline Eigenpairs lanczos_run(const SparseCMatrix& m, std::size_t k,
                              const std::vector<Eigen::VectorXcd>& locked, std::mt19937_64& rng) {
    const auto dim = static_cast<std::size_t>(m.rows());
    const std::size_t cap = std::min<std::size_t>(dim - locked.size(), 1200);
    std::normal_distribution<double> nd;
    const auto orthogonalize = [&](Eigen::VectorXcd& w, const std::vector<Eigen::VectorXcd>& V) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : locked) w -= u * u.dot(w);
            for (const auto& u : V) w -= u * u.dot(w);
        }
    };
    const auto fresh = [&](const std::vector<Eigen::VectorXcd>& V) {
        Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = cplx{nd(rng), 0.0};
        orthogonalize(v, V);
        return Eigen::VectorXcd(v.normalized());
    };
    std::vector<Eigen::VectorXcd> V;
    RVec alpha, beta;  // beta[j] couples V[j] and V[j+1]
    Eigen::VectorXcd v = fresh(V);
    const std::size_t want = std::min(k, cap);
    double last_res = std::numeric_limits<double>::infinity();
    while (V.size() < cap) {
        V.push_back(v);
        Eigen::VectorXcd w = m * v;
        alpha.push_back(std::real(v.dot(w)));
        orthogonalize(w, V);
        double b = w.norm();
        const std::size_t mdim = V.size();
        if (mdim >= want && (mdim % 8 == 0 || mdim == cap || b < 1e-12)) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(mdim),
                                                      static_cast<Eigen::Index>(mdim));
            for (std::size_t i = 0; i < mdim; ++i) {
                T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
                if (i + 1 < mdim) {
                    T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
                    T(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            Eigenpairs out;
            double worst = 0.0;
            for (std::size_t i = 0; i < want; ++i) {
                const auto y = es.eigenvectors().col(static_cast<Eigen::Index>(i));
                Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
                for (std::size_t j = 0; j < mdim; ++j) x += V[j] * y(static_cast<Eigen::Index>(j));
                x.normalize();
                const double lam = es.eigenvalues()(static_cast<Eigen::Index>(i));
                worst = std::max(worst, (m * x - lam * x).norm());
                out.values.push_back(lam);
                out.vectors.push_back(std::move(x));
            }
            last_res = worst;
            if (worst <= kEigenResidualTol) return out;
        }
        if (b < 1e-12) {
            // invariant subspace: continue with a fresh orthogonal direction
            if (V.size() >= cap) break;
            w = fresh(V);
            b = 0.0;
        } else {
            w /= b;
        }
        beta.push_back(b);
        v = w;
    }
    throw Error("exact_spectrum: Lanczos did not converge (residual " + std::to_string(last_res) + ")");
}

/**
 * Lowest k pairs. A single Krylov run finds one copy of each degenerate
 * level, so converged pairs are locked and the run repeated in their
 * orthogonal complement until it produces nothing below the current k-th.
 */
inline Eigenpairs lanczos_lowest(const SparseCMatrix& m, std::size_t k) {
    const auto dim = static_cast<std::size_t>(m.rows());
    k = std::min(k, dim);
    std::mt19937_64 rng(0x5eedULL);
    Eigenpairs locked;
    while (locked.values.size() < dim) {
        const Eigenpairs run = lanczos_run(m, k, locked.vectors, rng);
        if (locked.values.size() >= k && run.values.front() >= locked.values[k - 1] - kEigenResidualTol) break;
        for (std::size_t i = 0; i < run.values.size(); ++i) {
            locked.values.push_back(run.values[i]);
            locked.vectors.push_back(run.vectors[i]);
        }
        // sort locked pairs ascending
        std::vector<std::size_t> order(locked.values.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return locked.values[a] < locked.values[b]; });
        Eigenpairs sorted;
        for (std::size_t i : order) {
            sorted.values.push_back(locked.values[i]);
            sorted.vectors.push_back(locked.vectors[i]);
        }
        locked = std::move(sorted);
    }
    locked.values.resize(k);
    locked.vectors.resize(k);
    return locked;
}

}  // namespace detail

/**
 * Lowest k eigenpairs, optionally restricted to a particle/spin sector.
 * The ground state is embedded in the full 2^n space with its largest
 * amplitude made real-positive (lowest index on ties).
 */
inline SpectrumResult exact_spectrum(const PauliSum& h, std::size_t k, const SectorSpec& sector = {}) {
    if (k == 0) throw Error("exact_spectrum: k must be positive");
    const int n = h.n_qubits();
    if (n > kDefaultSparseCap) throw Error("exact_spectrum: too many qubits");
    const auto basis = detail::sector_basis(n, sector);
    if (basis.empty()) throw Error("exact_spectrum: empty sector");
    const SparseCMatrix m = detail::sector_matrix(h, basis);
    const detail::Eigenpairs ep =
        basis.size() <= kDenseSectorLimit ? detail::dense_lowest(m, k) : detail::lanczos_lowest(m, k);

    SpectrumResult res;
    res.eigenvalues = ep.values;
    double worst = 0.0;
    for (std::size_t i = 0; i < ep.values.size(); ++i) {
        worst = std::max(worst, (m * ep.vectors[i] - ep.values[i] * ep.vectors[i]).norm());
    }
    res.residual = worst;
    if (worst > kEigenResidualTol * std::max(1.0, std::abs(ep.values.front()))) {
        throw Error("exact_spectrum: eigenpair residual " + std::to_string(worst));
    }
    res.ground_state.assign(std::size_t{1} << n, cplx{0, 0});
    for (std::size_t i = 0; i < basis.size(); ++i) {
        res.ground_state[basis[i]] = ep.vectors.front()(static_cast<Eigen::Index>(i));
    }
    const double nrm = norm2(res.ground_state);
    for (auto& a : res.ground_state) a /= nrm;
    detail::canonicalize_phase(res.ground_state);
    if (res.eigenvalues.size() >= 2) res.gap = res.eigenvalues[1] - res.eigenvalues[0];
    return res;
}

}  // namespace gsw
