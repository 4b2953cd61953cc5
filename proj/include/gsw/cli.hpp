// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief The `gsw` command-line tool: dataset validation, ansatz
 * construction, training, evaluation, and the budget/bound reports.
 */

#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gsw/ansatz.hpp"
#include "gsw/bounds.hpp"
#include "gsw/core.hpp"
#include "gsw/dataset.hpp"
#include "gsw/estimators.hpp"
#include "gsw/hamiltonian.hpp"
#include "gsw/io.hpp"
#include "gsw/trainer.hpp"

namespace gsw::cli {

/// "a,b,c" -> three 1-D points; "a,b;c,d" -> two 2-D points.
inline std::vector<RVec> parse_points(const std::string& text) {
    const auto parse_num = [](std::string tok) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (tok.empty() || used != tok.size() || !std::isfinite(v)) throw Error("cannot parse number '" + tok + "'");
        return v;
    };
    const auto split = [](const std::string& s, char sep) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, sep)) out.push_back(item);
        return out;
    };
    std::vector<RVec> pts;
    if (text.find(';') == std::string::npos) {
        for (const auto& t : split(text, ',')) pts.push_back({parse_num(t)});
    } else {
        for (const auto& tuple : split(text, ';')) {
            if (tuple.find_first_not_of(" \t") == std::string::npos) continue;
            RVec p;
            for (const auto& t : split(tuple, ',')) p.push_back(parse_num(t));
            pts.push_back(p);
        }
    }
    if (pts.empty()) throw Error("empty point list");
    for (const auto& p : pts) {
        if (p.size() != pts.front().size()) throw Error("points have inconsistent dimensions");
    }
    return pts;
}

inline std::vector<int> parse_widths(const std::string& text) {
    std::vector<int> w;
    if (text.empty()) return w;
    for (const auto& p : parse_points(text)) {
        if (p.size() != 1 || p[0] < 1 || p[0] != std::floor(p[0])) throw Error("hidden widths must be positive integers");
        w.push_back(static_cast<int>(p[0]));
    }
    return w;
}

struct Options {
    std::string data, ansatz, model, train_points, hidden = "20,20,20", anchors, out, jac_l1;
    double lr = 1e-3, tol = 1e-6, eps = 0.1, delta = 0.05, select_tol = kDefaultSelectTol;
    long steps = 20000;
    std::optional<std::uint64_t> seed;
    std::size_t gamma_index = 0;
    std::size_t trials = 500;
    int grover_n = 16, marked = 0;
    std::size_t points = 101;
};

/// Exit codes: 0 success, 1 failure or invalid input, 2 I/O or usage errors.
class App {
public:
    explicit App(std::ostream& out = std::cout, std::ostream& err = std::cerr) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv) {
        CLI::App app{"gsw: generative models of molecular ground states"};
        app.set_version_flag("--version", std::string(kVersion));
        app.require_subcommand(1);
        Options& o = opt_;

        const auto data = [&](CLI::App* s) { s->add_option("--data", o.data, "dataset file (.qcd)")->required(); };
        const auto outf = [&](CLI::App* s, const char* what) { s->add_option("--out", o.out, what); };
        const auto seed = [&](CLI::App* s) { s->add_option("--seed", o.seed, "RNG seed"); };
        const auto tp = [&](CLI::App* s) {
            s->add_option("--train-points", o.train_points, "training geometries: a,b,c or a,b;c,d");
        };
        const auto eps = [&](CLI::App* s) {
            s->add_option("--eps", o.eps, "accuracy epsilon")->capture_default_str();
            s->add_option("--delta", o.delta, "failure probability delta")->capture_default_str();
        };

        auto* validate = app.add_subcommand("validate", "check a dataset file");
        data(validate);

        auto* ansatz = app.add_subcommand("ansatz", "adaptive gate selection");
        data(ansatz);
        ansatz->add_option("--anchors", o.anchors, "anchor geometries (default: 3 spread grid points)");
        ansatz->add_option("--select-tol", o.select_tol, "gradient screening threshold")->capture_default_str();
        outf(ansatz, "output directory");

        auto* train = app.add_subcommand("train", "train a generative model");
        data(train);
        train->add_option("--ansatz", o.ansatz, "ansatz JSON")->required();
        tp(train);
        train->get_option("--train-points")->required();
        train->add_option("--hidden", o.hidden, "hidden widths")->capture_default_str();
        train->add_option("--lr", o.lr, "Adam learning rate")->capture_default_str();
        train->add_option("--steps", o.steps, "step cap")->capture_default_str();
        train->add_option("--tol", o.tol, "stop once the cost is below this")->capture_default_str();
        seed(train);
        outf(train, "output directory");

        auto* eval = app.add_subcommand("eval", "evaluate a model over the dataset grid");
        data(eval);
        eval->add_option("--model", o.model, "model JSON")->required();
        eval->add_option("--ansatz", o.ansatz, "ansatz JSON to check against the model");
        outf(eval, "output directory");

        auto* budget = app.add_subcommand("budget", "shot and query budgets for one gradient component");
        budget->add_option("--data", o.data, "dataset file");
        budget->add_option("--model", o.model, "model JSON");
        tp(budget);
        budget->add_option("--gamma-index", o.gamma_index, "network parameter index")->capture_default_str();
        budget->add_option("--jac-l1", o.jac_l1, "per-geometry Jacobian 1-norms instead of a model");
        eps(budget);
        outf(budget, "output JSON file");

        auto* shots = app.add_subcommand("shots", "empirical coverage of the shot estimator");
        data(shots);
        shots->add_option("--model", o.model, "model JSON")->required();
        tp(shots);
        shots->get_option("--train-points")->required();
        shots->add_option("--gamma-index", o.gamma_index, "network parameter index")->capture_default_str();
        shots->add_option("--trials", o.trials, "repetitions per geometry")->capture_default_str();
        eps(shots);
        seed(shots);
        outf(shots, "output JSON file");

        auto* qfi = app.add_subcommand("qfi", "quantum Fisher information and its covariance bound");
        data(qfi);
        qfi->add_option("--model", o.model, "model JSON")->required();
        tp(qfi);
        qfi->get_option("--train-points")->required();
        outf(qfi, "output JSON file");

        auto* cr = app.add_subcommand("cramer-rao", "lower bound on the number of data states");
        data(cr);
        cr->add_option("--model", o.model, "model JSON")->required();
        tp(cr);
        cr->get_option("--train-points")->required();
        eps(cr);
        outf(cr, "output JSON file");

        auto* gg = app.add_subcommand("grover-gap", "gap profile of the adiabatic Grover family");
        gg->add_option("--n", o.grover_n, "number of sites")->capture_default_str();
        gg->add_option("--marked", o.marked, "marked site")->capture_default_str();
        gg->add_option("--points", o.points, "grid points on [0, 1]")->capture_default_str();
        outf(gg, "output CSV file");

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int rc = app.exit(e, out_, err_);
            return rc == 0 ? 0 : 2;
        }
        provenance_ = "gsw " + std::string(kVersion);
        for (int i = 1; i < argc; ++i) provenance_ += std::string(" ") + argv[i];

        try {
            if (*validate) return cmd_validate();
            if (*ansatz) return cmd_ansatz();
            if (*train) return cmd_train();
            if (*eval) return cmd_eval();
            if (*budget) return cmd_budget();
            if (*shots) return cmd_shots();
            if (*qfi) return cmd_qfi();
            if (*cr) return cmd_cramer_rao();
            if (*gg) return cmd_grover_gap();
        } catch (const IoError& e) {
            err_ << "error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            err_ << "error: " << e.what() << "\n";
            return 1;
        }
        return 2;
    }

private:
    std::ostream& out_;
    std::ostream& err_;
    Options opt_;
    std::string provenance_;

    void require_seed(const char* cmd) const {
        if (!opt_.seed) throw Error(std::string(cmd) + " is stochastic and needs --seed");
    }

    std::filesystem::path out_dir() const {
        const std::filesystem::path dir = opt_.out.empty() ? std::filesystem::path(".") : std::filesystem::path(opt_.out);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
        return dir;
    }

    /// JSON report to --out (if set) and stdout.
    void emit(json j) const {
        j["provenance"] = provenance_;
        const std::string text = to_json_string(j);
        if (!opt_.out.empty()) write_text_file(opt_.out, text);
        out_ << text << "\n";
    }

    MolecularDataset dataset() const { return load_dataset(opt_.data); }

    int cmd_validate() {
        MolecularDataset d;
        try {
            d = parse_dataset(read_text_file(opt_.data));
        } catch (const IoError&) {
            throw;
        } catch (const std::exception& e) {
            out_ << opt_.data << ": malformed: " << e.what() << "\n";
            return 1;
        }
        const auto v = validate_dataset(d);
        for (const auto& x : v) out_ << opt_.data << ": " << describe(x) << "\n";
        if (v.empty()) {
            out_ << opt_.data << ": ok (" << d.records.size() << " records, " << d.n_spin_orbitals()
                 << " spin orbitals, " << d.n_electrons() << " electrons)\n";
            return 0;
        }
        return 1;
    }

    int cmd_ansatz() {
        const MolecularDataset d = dataset();
        const std::vector<RVec> anchors = opt_.anchors.empty() ? default_anchors(d, 3) : parse_points(opt_.anchors);
        std::vector<PauliSum> hs;
        json aj = json::array();
        for (const auto& R : anchors) {
            const long idx = find_record(d, R);
            if (idx < 0) throw Error("anchor geometry is not on the dataset grid");
            hs.push_back(build_hamiltonian(d.records[static_cast<std::size_t>(idx)]));
        }
        const AdaptReport rep = adapt_build(hs, d.n_electrons(), opt_.select_tol);
        if (rep.merged.empty()) err_ << "warning: no gate passed the selection threshold; the ansatz is empty\n";
        for (std::size_t k = 0; k < anchors.size(); ++k) {
            const auto& a = rep.anchors[k];
            aj.push_back({{"params", anchors[k]},
                          {"double_gradients", a.double_gradients},
                          {"single_gradients", a.single_gradients},
                          {"selected_doubles", gates_to_json(a.selected_doubles)},
                          {"selected_singles", gates_to_json(a.selected_singles)},
                          {"double_angles", a.double_angles},
                          {"energy_trace", a.energy_trace},
                          {"vqe_converged", a.vqe_converged}});
        }
        const auto dir = out_dir();
        json spec{{"provenance", provenance_}, {"gates", gates_to_json(rep.merged)}};
        json report{{"provenance", provenance_}, {"select_tol", opt_.select_tol}, {"anchors", aj},
                    {"merged", gates_to_json(rep.merged)}};
        write_text_file((dir / "ansatz.json").string(), to_json_string(spec));
        write_text_file((dir / "adapt_report.json").string(), to_json_string(report));
        out_ << "ansatz: " << rep.merged.size() << " gates";
        for (const auto& g : rep.merged) out_ << " " << to_string(g);
        out_ << "\n";
        return 0;
    }

    void write_pes(const GenerativeModel& m, const MolecularDataset& d, const std::filesystem::path& path) const {
        std::vector<std::string> cols;
        for (std::size_t k = 0; k < d.parameter_names.size(); ++k) cols.push_back("param_" + std::to_string(k));
        for (const char* c : {"E_model", "E0_exact", "E1_exact", "fid_exact", "fid_hf"}) cols.emplace_back(c);
        CsvWriter csv(cols);
        csv.add_comment(provenance_);
        double min_fid = 1.0;
        for (const auto& r : evaluate_pes(m, d)) {
            RVec row = r.R;
            row.insert(row.end(), {r.e_model, r.e0, r.e1, r.fid_exact, r.fid_hf});
            csv.add_row(row);
            min_fid = std::min(min_fid, r.fid_exact);
        }
        csv.save(path.string());
        out_ << "pes: " << path.string() << " (min fid_exact " << format_double(min_fid) << ")\n";
    }

    int cmd_train() {
        require_seed("train");
        const MolecularDataset d = dataset();
        const Circuit c = load_ansatz(opt_.ansatz, d.n_spin_orbitals());
        const TrainingSet t = build_training_set(d, parse_points(opt_.train_points));
        GenerativeModel m = make_model(c, d.n_electrons(), d.parameter_names.size(), parse_widths(opt_.hidden), *opt_.seed);
        m.ansatz_ref = opt_.ansatz;
        std::vector<RVec> Rs;
        for (const auto& p : t.points) Rs.push_back(p.R);
        m.net.standardize(Rs);
        const TrainResult res = train(m, t, {opt_.lr, opt_.steps, opt_.tol});
        const auto dir = out_dir();
        json mj = model_to_json(m);
        mj["provenance"] = provenance_;
        write_text_file((dir / "model.json").string(), to_json_string(mj));
        CsvWriter loss({"step", "cost"});
        loss.add_comment(provenance_);
        for (std::size_t s = 0; s < res.trace.size(); ++s) loss.add_row({static_cast<double>(s), res.trace[s]});
        loss.save((dir / "loss.csv").string());
        out_ << "train: " << res.steps_taken << " steps, final cost " << format_double(res.trace.back())
             << (res.converged ? " (converged)" : "") << "\n";
        write_pes(m, d, dir / "pes.csv");
        return 0;
    }

    GenerativeModel model_for(const MolecularDataset& d) const {
        GenerativeModel m = load_model(opt_.model);
        if (m.circuit.n_qubits != d.n_spin_orbitals()) throw Error("model qubit count does not match the dataset");
        if (m.n_electrons != d.n_electrons()) throw Error("model electron count does not match the dataset");
        if (m.net.input_dim() != d.parameter_names.size()) throw Error("model input width does not match the dataset");
        return m;
    }

    int cmd_eval() {
        const MolecularDataset d = dataset();
        const GenerativeModel m = model_for(d);
        if (!opt_.ansatz.empty()) {
            const Circuit c = load_ansatz(opt_.ansatz, d.n_spin_orbitals());
            if (c.n_params() != m.circuit.n_params() || c.gates != m.circuit.gates) {
                throw Error("ansatz has " + std::to_string(c.n_params()) + " gates but the model was trained on " +
                            std::to_string(m.circuit.n_params()));
            }
        }
        write_pes(m, d, out_dir() / "pes.csv");
        return 0;
    }

    std::vector<RVec> points_or_grid(const MolecularDataset& d) const {
        if (!opt_.train_points.empty()) return parse_points(opt_.train_points);
        std::vector<RVec> all;
        for (const auto& r : d.records) all.push_back(r.params);
        return all;
    }

    int cmd_budget() {
        std::vector<RVec> cols;
        json geo = json::array();
        if (!opt_.jac_l1.empty()) {
            for (const auto& p : parse_points(opt_.jac_l1)) {
                if (p.size() != 1 || p[0] < 0) throw Error("--jac-l1 expects non-negative numbers");
                cols.push_back({p[0]});
            }
        } else {
            if (opt_.data.empty() || opt_.model.empty()) throw Error("budget needs --jac-l1 or both --data and --model");
            const MolecularDataset d = dataset();
            const GenerativeModel m = model_for(d);
            for (const auto& R : points_or_grid(d)) {
                cols.push_back(jacobian_column(m, R, opt_.gamma_index));
                geo.push_back(R);
            }
        }
        const ShotBudget inc = budget_incoherent(opt_.eps, opt_.delta, cols);
        const CoherentBudget coh = budget_coherent(opt_.eps, opt_.delta, cols);
        json per = json::array();
        for (std::size_t i = 0; i < cols.size(); ++i) {
            json e{{"jacobian_l1", l1(cols[i])},
                   {"m_i", inc.per_geometry[i]},
                   {"beta", 2.0 * l1(cols[i])},
                   {"coherent_rounds", coh.rounds[i]},
                   {"coherent_queries", coh.queries[i]}};
            if (i < geo.size()) e["params"] = geo[i];
            per.push_back(e);
        }
        emit({{"epsilon", opt_.eps},
              {"delta", opt_.delta},
              {"gamma_index", opt_.gamma_index},
              {"per_geometry", per},
              {"total_M", inc.total},
              {"coherent_repetitions", coh.repetitions},
              {"coherent_total_queries", coh.total},
              {"empirical_failure_rate", nullptr}});
        return 0;
    }

    int cmd_shots() {
        require_seed("shots");
        if (opt_.trials < 1) throw Error("--trials must be at least 1");
        const MolecularDataset d = dataset();
        const GenerativeModel m = model_for(d);
        const TrainingSet t = build_training_set(d, parse_points(opt_.train_points));
        const std::size_t n = t.size();
        std::vector<json> per(n);
        std::vector<std::uint64_t> fails(n, 0), mi(n, 0);
        parallel_for(n, [&](std::size_t i) {
            const auto& p = t.points[i];
            const IncoherentSampler smp(m, p.R, p.target, opt_.gamma_index);
            const double exact = exact_fidelity_gradient(m, p.R, p.target, opt_.gamma_index);
            mi[i] = incoherent_shots(opt_.eps, opt_.delta, l1(jacobian_column(m, p.R, opt_.gamma_index)));
            std::seed_seq ss{static_cast<std::uint64_t>(*opt_.seed), static_cast<std::uint64_t>(i)};
            std::mt19937_64 rng(ss);
            double sum = 0.0;
            for (std::size_t r = 0; r < opt_.trials; ++r) {
                const double est = smp.sample(rng, mi[i]);
                sum += est;
                if (std::abs(est - exact) >= opt_.eps) ++fails[i];
            }
            per[i] = {{"params", p.R},
                      {"m_i", mi[i]},
                      {"exact_gradient", exact},
                      {"mean_estimate", sum / static_cast<double>(opt_.trials)},
                      {"failures", fails[i]},
                      {"trials", opt_.trials},
                      {"failure_rate", static_cast<double>(fails[i]) / static_cast<double>(opt_.trials)}};
        });
        std::uint64_t total = 0, f = 0;
        for (std::size_t i = 0; i < n; ++i) {
            total += mi[i];
            f += fails[i];
        }
        emit({{"epsilon", opt_.eps},
              {"delta", opt_.delta},
              {"gamma_index", opt_.gamma_index},
              {"seed", *opt_.seed},
              {"per_geometry", per},
              {"total_M", total},
              {"empirical_failure_rate", static_cast<double>(f) / static_cast<double>(n * opt_.trials)}});
        return 0;
    }

    static json matrix_json(const RMat& A) {
        json j = json::array();
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            RVec row(static_cast<std::size_t>(A.cols()));
            for (Eigen::Index k = 0; k < A.cols(); ++k) row[static_cast<std::size_t>(k)] = A(i, k);
            j.push_back(row);
        }
        return j;
    }

    int cmd_qfi() {
        const MolecularDataset d = dataset();
        const GenerativeModel m = model_for(d);
        json per = json::array();
        for (const auto& R : parse_points(opt_.train_points)) {
            const QfiMatrix q = qfi_matrix(m, R, m.net.params());
            const CovGenMatrix c = cov_generators(m, R, m.net.params());
            const RMat J = network_jacobian(m.net, R);
            const ChainReport ch = qfi_chain(q.F, J, c);
            const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<RMat>(q.F, Eigen::EigenvaluesOnly).eigenvalues();
            per.push_back({{"params", R},
                           {"qfi_theta", matrix_json(qfi_theta(m, R))},
                           {"qfi_gamma_trace", q.F.trace()},
                           {"qfi_gamma_max_eigenvalue", ev.size() ? ev.maxCoeff() : 0.0},
                           {"qfi_gamma_min_eigenvalue", ev.size() ? ev.minCoeff() : 0.0},
                           {"cov", matrix_json(c.cov)},
                           {"cov_average", c.average()},
                           {"chain_identity_error", ch.max_identity_error},
                           {"chain_spectral_excess", ch.max_spectral_excess},
                           {"chain_entrywise_excess", ch.max_entrywise_excess},
                           {"chain_holds", ch.holds()}});
        }
        emit({{"n_gamma", m.net.num_params()}, {"n_theta", m.circuit.n_params()}, {"per_geometry", per}});
        return 0;
    }

    int cmd_cramer_rao() {
        const MolecularDataset d = dataset();
        const GenerativeModel m = model_for(d);
        const TrainingSet t = build_training_set(d, parse_points(opt_.train_points));
        const CramerRaoInputs in = cramer_rao_inputs(m, t, opt_.eps, opt_.delta);
        const auto num = [](double v) { return json(v); };
        emit({{"inputs",
               {{"mixed_norm", num(in.mixed_norm)},
                {"n_params", in.n_params},
                {"n_points", in.n_points},
                {"avg_cov", in.avg_cov},
                {"epsilon", in.epsilon},
                {"delta", in.delta},
                {"avg_jac_sq", in.avg_jac_sq},
                {"max_hess_inv", num(in.max_hess_inv)},
                {"hess_norm", in.hess_norm}}},
              {"M_unbiased", num(cramer_rao_M(in, true))},
              {"M_biased", num(in.hess_norm > 0.0 ? cramer_rao_M(in, false) : 0.0)},
              {"M_unbiased_statement_form", num(cramer_rao_M(in, true, true))}});
        return 0;
    }

    int cmd_grover_gap() {
        GroverInstance g{opt_.grover_n, opt_.marked, uniform_grid(opt_.points)};
        const GapProfile p = gap_profile(g);
        CsvWriter csv({"s", "E0", "E1", "gap"});
        csv.add_comment(provenance_);
        for (const auto& r : p.rows) csv.add_row({r.s, r.e0, r.e1, r.gap});
        if (!opt_.out.empty()) csv.save(opt_.out);
        json j{{"n", g.n},
               {"marked", g.marked},
               {"g_min", p.g_min},
               {"s_min", p.s_min},
               {"closed_form_g_min", 1.0 / std::sqrt(static_cast<double>(g.n))},
               {"provenance", provenance_}};
        out_ << to_json_string(j) << "\n";
        return 0;
    }
};

inline int run(int argc, const char* const* argv) { return App().run(argc, argv); }

}  // namespace gsw::cli
