// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file trainer.hpp
 * @brief The generative model R -> U(nu(R; gamma))|HF>, its infidelity
 * cost against exact ground states, exact gradients, Adam training, and
 * potential-energy-surface evaluation.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gsw/ansatz.hpp"
#include "gsw/core.hpp"
#include "gsw/dataset.hpp"
#include "gsw/hamiltonian.hpp"
#include "gsw/io.hpp"
#include "gsw/neuralnet.hpp"
#include "gsw/simulator.hpp"

namespace gsw {

struct TrainingPoint {
    RVec R;
    StateVector target;  ///< phase-canonical exact ground state
    std::size_t record = 0;
};

struct TrainingSet {
    std::vector<TrainingPoint> points;
    [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Exact ground state of a record in its reference electron/spin sector.
inline SpectrumResult record_spectrum(const GeometryRecord& r, std::size_t k = 2) {
    return exact_spectrum(build_hamiltonian(r), k, reference_sector(r.n_electrons));
}

inline TrainingSet build_training_set(const MolecularDataset& d, const std::vector<RVec>& train_params) {
    if (train_params.empty()) throw Error("no training geometries given");
    TrainingSet t;
    for (std::size_t i = 0; i < train_params.size(); ++i) {
        const long idx = find_record(d, train_params[i]);
        if (idx < 0) throw Error("training geometry is not on the dataset grid");
        for (const auto& p : t.points) {
            if (p.record == static_cast<std::size_t>(idx)) throw Error("duplicate training geometry");
        }
        t.points.push_back({d.records[static_cast<std::size_t>(idx)].params, {}, static_cast<std::size_t>(idx)});
    }
    parallel_for(t.size(), [&](std::size_t i) {
        t.points[i].target = record_spectrum(d.records[t.points[i].record]).ground_state;
    });
    return t;
}

struct GenerativeModel {
    MLP net;
    Circuit circuit;
    int n_electrons = 0;
    std::uint64_t seed = 0;
    std::string ansatz_ref;

    [[nodiscard]] StateVector init_state() const { return hartree_fock_state(circuit.n_qubits, n_electrons); }

    [[nodiscard]] StateVector state(const RVec& R) const {
        return run_circuit(circuit, net.forward(R), init_state());
    }

    void check() const {
        if (net.output_dim() != circuit.n_params()) {
            throw Error("model output width " + std::to_string(net.output_dim()) + " does not match ansatz size " +
                        std::to_string(circuit.n_params()));
        }
    }
};

/// Network widths [d_in, hidden..., N_P] around a circuit.
inline GenerativeModel make_model(const Circuit& c, int n_electrons, std::size_t input_dim,
                                  const std::vector<int>& hidden, std::uint64_t seed) {
    std::vector<int> widths{static_cast<int>(input_dim)};
    widths.insert(widths.end(), hidden.begin(), hidden.end());
    widths.push_back(static_cast<int>(c.n_params()));
    GenerativeModel m{MLP(widths, seed), c, n_electrons, seed, {}};
    return m;
}

struct CostEval {
    double cost = 0.0;
    RVec grad;
    RVec fidelities;
};

/// 1 - mean fidelity and, if requested, its gradient in gamma.
inline CostEval cost_and_gradient(const GenerativeModel& m, const TrainingSet& t, bool with_grad = true) {
    m.check();
    const std::size_t N = t.size();
    if (N == 0) throw Error("empty training set");
    const StateVector init = m.init_state();
    std::vector<RVec> grads(N);
    RVec fid(N);
    parallel_for(N, [&](std::size_t i) {
        const auto& p = t.points[i];
        const RVec theta = m.net.forward(p.R);
        if (!with_grad) {
            fid[i] = fidelity(p.target, run_circuit(m.circuit, theta, init));
            return;
        }
        StateVector psi;
        const CVec g = overlap_jacobian(m.circuit, theta, init, p.target, &psi);
        const cplx o = inner(psi, p.target);
        fid[i] = std::norm(o);
        RVec u(g.size());
        for (std::size_t a = 0; a < g.size(); ++a) u[a] = 2.0 * std::real(o * g[a]);
        grads[i] = m.net.backward(p.R, u);
    });
    CostEval out;
    out.fidelities = fid;
    double s = 0.0;
    for (double f : fid) s += f;
    out.cost = 1.0 - s / static_cast<double>(N);
    if (with_grad) {
        out.grad.assign(m.net.num_params(), 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t k = 0; k < out.grad.size(); ++k) out.grad[k] -= grads[i][k] / static_cast<double>(N);
        }
    }
    return out;
}

inline double cost(const GenerativeModel& m, const TrainingSet& t) { return cost_and_gradient(m, t, false).cost; }

inline RVec cost_gradient(const GenerativeModel& m, const TrainingSet& t) { return cost_and_gradient(m, t).grad; }

struct TrainConfig {
    double lr = 1e-3;
    long steps = 20000;
    double tol = 1e-6;
};

struct TrainResult {
    RVec trace;  ///< cost before each step, plus the final cost
    long steps_taken = 0;
    bool converged = false;
};

/// Full-batch Adam on the infidelity. Stops at cost < tol or the step cap.
inline TrainResult train(GenerativeModel& m, const TrainingSet& t, const TrainConfig& cfg,
                         const std::function<void(long, double)>& progress = {}) {
    if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr) || cfg.steps < 0 || !std::isfinite(cfg.tol)) {
        throw Error("train: invalid configuration");
    }
    TrainResult res;
    AdamState adam;
    adam.lr = cfg.lr;
    RVec gamma = m.net.params();
    for (long step = 0;; ++step) {
        const CostEval ce = cost_and_gradient(m, t, step < cfg.steps);
        if (!std::isfinite(ce.cost)) throw Error("train: non-finite loss at step " + std::to_string(step));
        res.trace.push_back(ce.cost);
        if (progress) progress(step, ce.cost);
        if (ce.cost < cfg.tol) {
            res.converged = true;
            break;
        }
        if (step >= cfg.steps) break;
        adam_step(adam, gamma, ce.grad);
        m.net.set_params(gamma);
        res.steps_taken = step + 1;
    }
    return res;
}

struct EvalRow {
    RVec R;
    double e_model = 0.0;
    double e0 = 0.0;
    double e1 = 0.0;
    double fid_exact = 0.0;
    double fid_hf = 0.0;
};

inline std::vector<EvalRow> evaluate_pes(const GenerativeModel& m, const MolecularDataset& d) {
    m.check();
    std::vector<EvalRow> rows(d.records.size());
    const StateVector hf = m.init_state();
    parallel_for(d.records.size(), [&](std::size_t i) {
        const auto& r = d.records[i];
        const PauliSum h = build_hamiltonian(r);
        const SpectrumResult sp = exact_spectrum(h, 2, reference_sector(r.n_electrons));
        const StateVector psi = m.state(r.params);
        EvalRow& row = rows[i];
        row.R = r.params;
        row.e_model = expectation(psi, h);
        row.e0 = sp.eigenvalues[0];
        row.e1 = sp.eigenvalues.size() > 1 ? sp.eigenvalues[1] : std::numeric_limits<double>::quiet_NaN();
        row.fid_exact = std::min(1.0, fidelity(sp.ground_state, psi));
        row.fid_hf = std::min(1.0, fidelity(hf, psi));
    });
    return rows;
}

inline json model_to_json(const GenerativeModel& m) {
    json j;
    j["format"] = "gsw-model";
    j["version"] = kVersion;
    j["widths"] = m.net.widths();
    j["activation"] = "tanh";
    j["params"] = m.net.params();
    j["input_shift"] = m.net.shift();
    j["input_scale"] = m.net.scale();
    j["seed"] = m.seed;
    j["n_qubits"] = m.circuit.n_qubits;
    j["n_electrons"] = m.n_electrons;
    j["ansatz"] = m.ansatz_ref;
    j["gates"] = gates_to_json(m.circuit.gates);
    return j;
}

inline GenerativeModel model_from_json(const json& j) {
    try {
        GenerativeModel m;
        m.seed = j.at("seed").get<std::uint64_t>();
        m.net = MLP(j.at("widths").get<std::vector<int>>(), m.seed);
        m.net.set_params(j.at("params").get<RVec>());
        m.net.set_normalization(j.at("input_shift").get<RVec>(), j.at("input_scale").get<RVec>());
        m.n_electrons = j.at("n_electrons").get<int>();
        m.circuit = Circuit{j.at("n_qubits").get<int>(), gates_from_json(j.at("gates"))};
        for (const auto& g : m.circuit.gates) check_gate(g, m.circuit.n_qubits);
        m.ansatz_ref = j.value("ansatz", std::string{});
        m.check();
        return m;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed model file: ") + e.what());
    }
}

inline void save_model(const GenerativeModel& m, const std::string& path) { write_json_file(path, model_to_json(m)); }

inline GenerativeModel load_model(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw Error(path + ": " + e.what());
    }
    return model_from_json(j);
}

}  // namespace gsw
