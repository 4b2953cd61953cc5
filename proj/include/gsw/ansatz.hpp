// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ansatz.hpp
 * @brief Excitation pools, energy-gradient screening, and the two-phase
 * adaptive circuit construction (doubles first, then singles at the
 * doubles-optimized angles), merged over anchor geometries.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gsw/core.hpp"
#include "gsw/dataset.hpp"
#include "gsw/io.hpp"
#include "gsw/pauli.hpp"
#include "gsw/simulator.hpp"

namespace gsw {

inline constexpr double kDefaultSelectTol = 1e-5;

struct GatePool {
    std::vector<ExcitationGate> singles;
    std::vector<ExcitationGate> doubles;
};

/// Spin-conserving excitations out of the occupied prefix [0, n_electrons).
inline GatePool generate_pool(int n_so, int n_electrons) {
    GatePool pool;
    if (n_electrons <= 0 || n_electrons >= n_so) return pool;
    const auto alpha = [](int p) { return p % 2 == 0 ? 1 : 0; };
    for (int i = 0; i < n_electrons; ++i) {
        for (int a = n_electrons; a < n_so; ++a) {
            if (alpha(i) == alpha(a)) pool.singles.push_back(ExcitationGate::single(i, a));
        }
    }
    for (int i = 0; i < n_electrons; ++i) {
        for (int j = i + 1; j < n_electrons; ++j) {
            for (int a = n_electrons; a < n_so; ++a) {
                for (int b = a + 1; b < n_so; ++b) {
                    if (alpha(i) + alpha(j) != alpha(a) + alpha(b)) continue;
                    pool.doubles.push_back(ExcitationGate::dbl(i, j, a, b));
                }
            }
        }
    }
    return pool;
}

/// Energy and its gradient 2 Re <H psi | d psi / d theta_a>.
struct EnergyEval {
    double energy = 0.0;
    RVec grad;
};

inline EnergyEval energy_and_gradient(const PauliSum& h, const Circuit& c, const RVec& theta,
                                      const StateVector& init) {
    const StateVector psi = run_circuit(c, theta, init);
    const StateVector hpsi = apply_pauli_sum(h, psi);
    const CVec g = overlap_jacobian(c, theta, init, hpsi);
    EnergyEval out;
    out.energy = std::real(inner(psi, hpsi));
    out.grad.resize(g.size());
    for (std::size_t a = 0; a < g.size(); ++a) out.grad[a] = 2.0 * g[a].real();
    return out;
}

/// d/d theta <H> at theta = 0 for `candidate` appended to circuit(theta).
inline double selection_gradient(const PauliSum& h, const Circuit& circuit, const RVec& theta,
                                  const StateVector& init, const ExcitationGate& candidate) {
    Circuit ext = circuit;
    ext.gates.push_back(candidate);
    RVec th = theta;
    th.push_back(0.0);
    return energy_and_gradient(h, ext, th, init).grad.back();
}

struct VqeOptions {
    double grad_tol = 1e-8;
    int max_iter = 1000;
};

struct VqeResult {
    RVec theta;
    RVec energy_trace;
    double grad_norm = 0.0;
    bool converged = false;
};

/// BFGS with Armijo backtracking. The energy trace is non-increasing.
inline VqeResult vqe_minimize(const PauliSum& h, const Circuit& c, const RVec& theta0,
                              const StateVector& init, const VqeOptions& opt = {}) {
    const std::size_t n = c.n_params();
    VqeResult res;
    res.theta = theta0;
    EnergyEval cur = energy_and_gradient(h, c, res.theta, init);
    res.energy_trace.push_back(cur.energy);
    const auto dot = [](const RVec& a, const RVec& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    std::vector<RVec> Hinv(n, RVec(n, 0.0));
    const auto reset = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            std::fill(Hinv[i].begin(), Hinv[i].end(), 0.0);
            Hinv[i][i] = 1.0;
        }
    };
    reset();
    for (int it = 0; it < opt.max_iter; ++it) {
        res.grad_norm = std::sqrt(dot(cur.grad, cur.grad));
        if (res.grad_norm <= opt.grad_tol) {
            res.converged = true;
            return res;
        }
        RVec p(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) p[i] -= Hinv[i][j] * cur.grad[j];
        }
        double slope = dot(cur.grad, p);
        if (!(slope < 0.0)) {
            reset();
            for (std::size_t i = 0; i < n; ++i) p[i] = -cur.grad[i];
            slope = dot(cur.grad, p);
        }
        double step = 1.0;
        EnergyEval next;
        RVec trial(n);
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = res.theta[i] + step * p[i];
            next = energy_and_gradient(h, c, trial, init);
            if (next.energy <= cur.energy + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no descent at machine precision
        RVec s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = trial[i] - res.theta[i];
            y[i] = next.grad[i] - cur.grad[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-16) {
            RVec Hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) Hy[i] += Hinv[i][j] * y[j];
            }
            const double yHy = dot(y, Hy);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    Hinv[i][j] += (sy + yHy) * s[i] * s[j] / (sy * sy) - (Hy[i] * s[j] + s[i] * Hy[j]) / sy;
                }
            }
        }
        res.theta = trial;
        cur = next;
        res.energy_trace.push_back(cur.energy);
    }
    res.grad_norm = std::sqrt(dot(cur.grad, cur.grad));
    res.converged = res.grad_norm <= opt.grad_tol;
    return res;
}

struct AnchorReport {
    RVec double_gradients;  ///< one per pool double, at theta = 0
    RVec single_gradients;  ///< one per pool single, at the optimized doubles
    std::vector<ExcitationGate> selected_doubles;
    std::vector<ExcitationGate> selected_singles;
    RVec double_angles;
    RVec energy_trace;
    bool vqe_converged = true;
};

struct AdaptReport {
    std::vector<AnchorReport> anchors;
    std::vector<ExcitationGate> merged;
};

/// Per-anchor selection followed by an order-preserving union.
inline AdaptReport adapt_build(const std::vector<PauliSum>& h_list, int n_electrons,
                               double select_tol = kDefaultSelectTol) {
    if (h_list.empty()) throw Error("adapt_build: at least one anchor is required");
    const int n = h_list.front().n_qubits();
    const GatePool pool = generate_pool(n, n_electrons);
    const StateVector init = hartree_fock_state(n, n_electrons);
    AdaptReport rep;
    rep.anchors.resize(h_list.size());
    parallel_for(h_list.size(), [&](std::size_t k) {
        const PauliSum& h = h_list[k];
        if (h.n_qubits() != n) throw Error("adapt_build: anchors differ in qubit count");
        AnchorReport& ar = rep.anchors[k];
        const Circuit empty{n, {}};
        for (const auto& g : pool.doubles) {
            const double G = selection_gradient(h, empty, {}, init, g);
            ar.double_gradients.push_back(G);
            if (std::abs(G) >= select_tol) ar.selected_doubles.push_back(g);
        }
        const Circuit cd{n, ar.selected_doubles};
        const VqeResult v = vqe_minimize(h, cd, RVec(cd.n_params(), 0.0), init);
        ar.double_angles = v.theta;
        ar.energy_trace = v.energy_trace;
        ar.vqe_converged = v.converged;
        for (const auto& g : pool.singles) {
            const double G = selection_gradient(h, cd, v.theta, init, g);
            ar.single_gradients.push_back(G);
            if (std::abs(G) >= select_tol) ar.selected_singles.push_back(g);
        }
    });
    for (const auto& ar : rep.anchors) {
        for (const auto* list : {&ar.selected_doubles, &ar.selected_singles}) {
            for (const auto& g : *list) {
                if (std::find(rep.merged.begin(), rep.merged.end(), g) == rep.merged.end()) rep.merged.push_back(g);
            }
        }
    }
    return rep;
}

/// `count` points spaced evenly between the first and last grid records,
/// each snapped to its nearest record.
inline std::vector<RVec> default_anchors(const MolecularDataset& d, std::size_t count = 3) {
    if (d.records.empty()) throw Error("default_anchors: empty dataset");
    const std::size_t dim = d.records.front().params.size();
    RVec lo(dim, 0.0), hi(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
        lo[k] = hi[k] = d.records.front().params[k];
        for (const auto& r : d.records) {
            lo[k] = std::min(lo[k], r.params[k]);
            hi[k] = std::max(hi[k], r.params[k]);
        }
    }
    std::vector<RVec> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(count - 1);
        RVec R(dim);
        for (std::size_t k = 0; k < dim; ++k) R[k] = lo[k] + t * (hi[k] - lo[k]);
        const RVec snapped = nearest_record(d, R).params;
        if (std::find(out.begin(), out.end(), snapped) == out.end()) out.push_back(snapped);
    }
    return out;
}

inline json gates_to_json(const std::vector<ExcitationGate>& gates) {
    json j = json::array();
    for (const auto& g : gates) {
        j.push_back({{"kind", g.kind == ExcitationGate::Kind::Single ? "single" : "double"}, {"wires", g.wires}});
    }
    return j;
}

/// Accepts a bare list of {kind, wires} or an object holding it under "gates".
inline std::vector<ExcitationGate> gates_from_json(const json& jin) {
    const json& j = jin.is_object() && jin.contains("gates") ? jin.at("gates") : jin;
    if (!j.is_array()) throw Error("ansatz: expected a JSON list of gates");
    std::vector<ExcitationGate> out;
    for (const auto& e : j) {
        ExcitationGate g;
        const auto kind = e.at("kind").get<std::string>();
        if (kind == "single") {
            g.kind = ExcitationGate::Kind::Single;
        } else if (kind == "double") {
            g.kind = ExcitationGate::Kind::Double;
        } else {
            throw Error("ansatz: unknown gate kind '" + kind + "'");
        }
        g.wires = e.at("wires").get<std::vector<int>>();
        out.push_back(std::move(g));
    }
    return out;
}

inline Circuit load_ansatz(const std::string& path, int n_qubits) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw Error(path + ": " + e.what());
    }
    Circuit c{n_qubits, gates_from_json(j)};
    for (const auto& g : c.gates) check_gate(g, n_qubits);
    return c;
}

}  // namespace gsw
