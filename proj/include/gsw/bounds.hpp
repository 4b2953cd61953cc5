// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file bounds.hpp
 * @brief Quantum Fisher information of the generative model, generator
 * covariances and the entrywise upper-bound chain on the QFI, the
 * Cramer-Rao lower bound on the number of data states, and the
 * single-particle adiabatic Grover family with its gap profile.
 */

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "gsw/core.hpp"
#include "gsw/simulator.hpp"
#include "gsw/trainer.hpp"

namespace gsw {

using RMat = Eigen::MatrixXd;

/// 4 Re[<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>].
inline RMat qfi_from_derivatives(const StateVector& psi, const std::vector<StateVector>& d) {
    const auto n = static_cast<Eigen::Index>(d.size());
    std::vector<cplx> proj(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) proj[i] = inner(psi, d[i]);
    RMat F(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            const double v = 4.0 * std::real(inner(d[ui], d[uj]) - std::conj(proj[ui]) * proj[uj]);
            F(i, j) = F(j, i) = v;
        }
    }
    return F;
}

struct QfiMatrix {
    RMat F;
    RVec gamma;
    RVec R;
};

/// Jacobian d nu / d gamma as an N_P x M_P matrix.
inline RMat network_jacobian(const MLP& net, const RVec& R) {
    const auto rows = net.jacobian(R);
    RMat J(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(net.num_params()));
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t k = 0; k < rows[a].size(); ++k) J(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(k)) = rows[a][k];
    }
    return J;
}

/// QFI in the circuit angles theta = nu(R; gamma).
inline RMat qfi_theta(const GenerativeModel& m, const RVec& R) {
    const RVec theta = m.net.forward(R);
    const StateVector init = m.init_state();
    return qfi_from_derivatives(run_circuit(m.circuit, theta, init), state_jacobian(m.circuit, theta, init));
}

/// QFI in gamma at gamma0: d_j psi = sum_k (d nu_k / d gamma_j) d psi / d theta_k.
inline QfiMatrix qfi_matrix(const GenerativeModel& model, const RVec& R, const RVec& gamma0) {
    GenerativeModel m = model;
    m.net.set_params(gamma0);
    m.check();
    const RMat J = network_jacobian(m.net, R);
    RMat F = J.transpose() * qfi_theta(m, R) * J;
    F = 0.5 * (F + F.transpose());
    return {F, gamma0, R};
}

struct CovGenMatrix {
    RMat cov;

    /// ||Cov||_{1,1} / N_P^2
    [[nodiscard]] double average() const {
        if (cov.size() == 0) return 0.0;
        return cov.cwiseAbs().sum() / static_cast<double>(cov.rows() * cov.rows());
    }
};

/// Real-symmetrized covariances of the dressed generators at nu(R; gamma).
inline CovGenMatrix cov_generators(const GenerativeModel& model, const RVec& R, const RVec& gamma) {
    GenerativeModel m = model;
    m.net.set_params(gamma);
    m.check();
    const RVec theta = m.net.forward(R);
    const StateVector psi = run_circuit(m.circuit, theta, m.init_state());
    const std::size_t np = m.circuit.n_params();
    std::vector<StateVector> hv(np);
    RVec mean(np);
    for (std::size_t k = 0; k < np; ++k) {
        hv[k] = apply_dressed_generator(m.circuit, theta, k, psi);
        mean[k] = std::real(inner(psi, hv[k]));
    }
    CovGenMatrix out{RMat(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(np))};
    for (std::size_t k = 0; k < np; ++k) {
        for (std::size_t l = k; l < np; ++l) {
            const double v = std::real(inner(hv[k], hv[l])) - mean[k] * mean[l];
            out.cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = v;
            out.cov(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = v;
        }
    }
    return out;
}

inline double spectral_norm(const RMat& A);

/**
 * Entrywise comparison of F (in gamma) against the covariance chain
 *   F_ij = 4 d_i nu^T Cov d_j nu
 *        <= 4 |d_i nu| |d_j nu| ||Cov||_2
 *        <= 4 N_P^{1/2} |d_i nu| |d_j nu| ||Cov||_{1,1}
 *         = 4 N_P^{5/2} |d_i nu| |d_j nu| avg|Cov|.
 */

struct ChainReport {
    double max_identity_error = 0.0;  ///< max |F_ij - 4 d_i nu^T Cov d_j nu|
    double max_spectral_excess = 0.0; ///< max (F_ij - spectral bound), <= 0 when the bound holds
    double max_entrywise_excess = 0.0;
    bool ordered = true;              ///< spectral bound <= entrywise bound everywhere
    bool holds(double tol = 1e-10) const {
        return ordered && max_spectral_excess <= tol && max_entrywise_excess <= tol;
    }
};

inline ChainReport qfi_chain(const RMat& F, const RMat& J, const CovGenMatrix& c) {
    const double np = static_cast<double>(J.rows());
    const double spec = spectral_norm(c.cov);
    const double avg = c.average();
    const RMat exact = 4.0 * J.transpose() * c.cov * J;
    ChainReport r;
    r.max_spectral_excess = -std::numeric_limits<double>::infinity();
    r.max_entrywise_excess = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < F.rows(); ++i) {
        const double ni = J.col(i).norm();
        for (Eigen::Index j = 0; j < F.cols(); ++j) {
            const double nn = ni * J.col(j).norm();
            const double b1 = 4.0 * nn * spec;
            const double b2 = 4.0 * std::pow(np, 2.5) * nn * avg;
            r.max_identity_error = std::max(r.max_identity_error, std::abs(F(i, j) - exact(i, j)));
            r.max_spectral_excess = std::max(r.max_spectral_excess, F(i, j) - b1);
            r.max_entrywise_excess = std::max(r.max_entrywise_excess, F(i, j) - b2);
            if (b1 > b2 * (1.0 + 1e-12) + 1e-300) r.ordered = false;
        }
    }
    return r;
}

struct CramerRaoInputs {
    double mixed_norm = 1.0;       ///< ||d12 C(gamma*, gamma~)||_2
    double n_params = 1.0;         ///< N_P
    double n_points = 1.0;         ///< N
    double avg_cov = 1.0;
    double epsilon = 0.1;
    double delta = 0.1;
    double avg_jac_sq = 1.0;       ///< mean_j ||D nu(R_j)||_2^2
    double max_hess_inv = 1.0;     ///< max over A of ||C''^{-1}||_2
    double hess_norm = 1.0;        ///< ||C''(gamma*)||_2
};

/// Results above this are reported as +infinity.
inline constexpr double kBoundInfinity = 1e300;

/**
 * Lower bound on the total number of data states M. The default
 * denominator is eps + delta - eps delta; `statement_form` switches to
 * eps + delta - 2 eps delta. `unbiased` drops the mixed-derivative factor.
 */
inline double cramer_rao_M(const CramerRaoInputs& in, bool unbiased, bool statement_form = false) {
    if (!(in.epsilon > 0.0 && in.epsilon < 1.0) || !(in.delta > 0.0 && in.delta < 1.0)) {
        throw Error("cramer_rao_M: epsilon and delta must lie in (0, 1)");
    }
    if (!(in.max_hess_inv > 0.0)) throw Error("cramer_rao_M: curvature input max ||C''^-1|| must be positive");
    if (!unbiased && !(in.hess_norm > 0.0)) throw Error("cramer_rao_M: curvature input ||C''|| must be positive");
    if (!(in.n_params >= 1.0) || !(in.n_points >= 1.0)) throw Error("cramer_rao_M: N_P and N must be at least 1");
    if (in.avg_cov < 0.0 || in.avg_jac_sq < 0.0 || in.mixed_norm < 0.0) {
        throw Error("cramer_rao_M: norms must be non-negative");
    }
    const double ed = in.epsilon + in.delta - (statement_form ? 2.0 : 1.0) * in.epsilon * in.delta;
    double denom = 8.0 * std::pow(in.n_params, 3.5) * in.n_points * in.avg_cov * ed * in.avg_jac_sq * in.max_hess_inv;
    double numer = 1.0;
    if (!unbiased) {
        numer = in.mixed_norm * in.mixed_norm;
        denom *= in.hess_norm * in.hess_norm;
    }
    if (std::isinf(in.max_hess_inv)) return 0.0;
    if (denom == 0.0 || !std::isfinite(numer / denom) || numer / denom > kBoundInfinity) {
        return std::numeric_limits<double>::infinity();
    }
    return numer / denom;
}

inline constexpr double kFdStep = 1e-4;

/// Central finite-difference Hessian of the cost from cost values (small M_P only).
inline RMat cost_hessian_fd(const GenerativeModel& model, const TrainingSet& t, double h = kFdStep) {
    GenerativeModel m = model;
    const RVec g0 = m.net.params();
    const auto n = g0.size();
    const auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
        RVec g = g0;
        g[i] += di;
        g[j] += dj;
        m.net.set_params(g);
        return cost(m, t);
    };
    RMat H(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double v;
            if (i == j) {
                v = (at(i, h, i, 0) - 2.0 * at(i, 0, i, 0) + at(i, -h, i, 0)) / (h * h);
            } else {
                v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) / (4.0 * h * h);
            }
            H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return H;
}

/// Hessian by central differences of the exact gradient.
inline RMat cost_hessian_from_gradient(const GenerativeModel& model, const TrainingSet& t, double h = kFdStep) {
    GenerativeModel m = model;
    const RVec g0 = m.net.params();
    const auto n = static_cast<Eigen::Index>(g0.size());
    RMat H(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        RVec g = g0;
        g[static_cast<std::size_t>(j)] += h;
        m.net.set_params(g);
        const RVec gp = cost_gradient(m, t);
        g[static_cast<std::size_t>(j)] -= 2.0 * h;
        m.net.set_params(g);
        const RVec gm = cost_gradient(m, t);
        for (Eigen::Index i = 0; i < n; ++i) H(i, j) = (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) / (2.0 * h);
    }
    return 0.5 * (H + H.transpose());
}

/// Model states at parameters sigma on the training geometries, as targets.
inline TrainingSet states_as_targets(const GenerativeModel& model, const TrainingSet& t, const RVec& sigma) {
    GenerativeModel m = model;
    m.net.set_params(sigma);
    TrainingSet out = t;
    for (auto& p : out.points) p.target = m.state(p.R);
    return out;
}

/**
 * d^2 C(gamma, sigma) / d gamma_i d sigma_j for 1 - mean |<psi(gamma)|psi(sigma)>|^2,
 * by central differences in sigma of the exact gamma-gradient.
 */
inline RMat mixed_hessian(const GenerativeModel& model, const TrainingSet& t, const RVec& gamma, const RVec& sigma,
                          double h = kFdStep) {
    GenerativeModel m = model;
    m.net.set_params(gamma);
    const auto n = static_cast<Eigen::Index>(gamma.size());
    RMat D(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        RVec s = sigma;
        s[static_cast<std::size_t>(j)] += h;
        const RVec gp = cost_gradient(m, states_as_targets(m, t, s));
        s[static_cast<std::size_t>(j)] -= 2.0 * h;
        const RVec gm = cost_gradient(m, states_as_targets(m, t, s));
        for (Eigen::Index i = 0; i < n; ++i) D(i, j) = (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) / (2.0 * h);
    }
    return D;
}

inline double spectral_norm(const RMat& A) {
    if (A.size() == 0) return 0.0;
    return Eigen::BDCSVD<RMat>(A).singularValues()(0);
}

/// ||A^{-1}||_2 for symmetric A; +inf if A is singular at relative 1e-10.
inline double inverse_norm(const RMat& A) {
    if (A.size() == 0) return std::numeric_limits<double>::infinity();
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<RMat>(A, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs();
    const double smax = ev.maxCoeff(), smin = ev.minCoeff();
    if (!(smin > 1e-10 * smax)) return std::numeric_limits<double>::infinity();
    return 1.0 / smin;
}

/**
 * Measured bound inputs for a trained model, taking gamma~ = gamma* = the
 * model parameters. The curvature maximum over A is evaluated at gamma*.
 * The covariance average is the largest over training geometries.
 */
inline CramerRaoInputs cramer_rao_inputs(const GenerativeModel& model, const TrainingSet& t, double eps,
                                         double delta) {
    const RVec g = model.net.params();
    CramerRaoInputs in;
    in.n_params = static_cast<double>(model.circuit.n_params());
    in.n_points = static_cast<double>(t.size());
    in.epsilon = eps;
    in.delta = delta;
    in.avg_cov = 0.0;
    in.avg_jac_sq = 0.0;
    for (const auto& p : t.points) {
        in.avg_cov = std::max(in.avg_cov, cov_generators(model, p.R, g).average());
        const double s = spectral_norm(network_jacobian(model.net, p.R));
        in.avg_jac_sq += s * s / static_cast<double>(t.size());
    }
    const RMat H = cost_hessian_from_gradient(model, states_as_targets(model, t, g));
    in.hess_norm = spectral_norm(H);
    in.max_hess_inv = inverse_norm(H);
    in.mixed_norm = spectral_norm(mixed_hessian(model, t, g, g));
    return in;
}

struct GroverInstance {
    int n = 2;
    int marked = 0;
    std::vector<double> s_grid;
};

/// (1-s)(I - J/n) + s(I - e_m e_m^T) on the single-particle sector.
inline RMat grover_hamiltonian(const GroverInstance& g, double s) {
    if (g.n < 2) throw Error("grover: need at least two sites");
    if (g.marked < 0 || g.marked >= g.n) throw Error("grover: marked site out of range");
    if (!(s >= 0.0 && s <= 1.0)) throw Error("grover: s must lie in [0, 1]");
    const auto n = static_cast<Eigen::Index>(g.n);
    RMat H = RMat::Identity(n, n) - (1.0 - s) / static_cast<double>(g.n) * RMat::Ones(n, n);
    H(g.marked, g.marked) -= s;
    return H;
}

/// sqrt(1 - 4 (1 - 1/N) s (1 - s))
inline double grover_gap_closed_form(int n, double s) {
    return std::sqrt(1.0 - 4.0 * (1.0 - 1.0 / static_cast<double>(n)) * s * (1.0 - s));
}

struct GapRow {
    double s, e0, e1, gap;
};

struct GapProfile {
    std::vector<GapRow> rows;
    double g_min = 0.0;
    double s_min = 0.0;
};

/// `points` evenly spaced values in [0, 1].
inline std::vector<double> uniform_grid(std::size_t points) {
    if (points < 2) throw Error("grid needs at least two points");
    std::vector<double> s(points);
    for (std::size_t i = 0; i < points; ++i) s[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    return s;
}

inline GapProfile gap_profile(const GroverInstance& g) {
    if (g.s_grid.empty()) throw Error("grover: empty s grid");
    GapProfile p;
    p.rows.resize(g.s_grid.size());
    parallel_for(g.s_grid.size(), [&](std::size_t i) {
        const double s = g.s_grid[i];
        Eigen::SelfAdjointEigenSolver<RMat> es(grover_hamiltonian(g, s), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        p.rows[i] = {s, ev(0), ev(1), ev(1) - ev(0)};
    });
    p.g_min = std::numeric_limits<double>::infinity();
    for (const auto& r : p.rows) {
        if (r.gap < p.g_min) {
            p.g_min = r.gap;
            p.s_min = r.s;
        }
    }
    return p;
}

}  // namespace gsw
