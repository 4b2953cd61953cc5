// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dataset.hpp
 * @brief Geometry-grid molecular integral datasets (.qcd files).
 *
 * Spin orbitals are interleaved: even index = alpha, odd index = beta, so the
 * Hartree-Fock determinant is the contiguous occupation prefix. Two-electron
 * integrals use the physicist order of a+_p a+_q a_r a_s:
 *   h2[p][q][r][s] = (ps|qr) in chemist notation.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gsw/core.hpp"
#include "gsw/io.hpp"

namespace gsw {

enum class ScfMethod { RHF, UHF };

inline std::string to_string(ScfMethod m) { return m == ScfMethod::RHF ? "RHF" : "UHF"; }

/// Integrals and metadata for a single nuclear geometry R.
struct GeometryRecord {
    RVec params;
    int n_spin_orbitals = 0;
    int n_electrons = 0;
    double core_energy = 0.0;
    double scf_energy = 0.0;
    RVec h1;  ///< n_so^2, row-major
    RVec h2;  ///< n_so^4, index p n^3 + q n^2 + r n + s

    [[nodiscard]] double one(int p, int q) const {
        return h1[static_cast<std::size_t>(p * n_spin_orbitals + q)];
    }
    [[nodiscard]] double two(int p, int q, int r, int s) const {
        const std::size_t n = static_cast<std::size_t>(n_spin_orbitals);
        return h2[((static_cast<std::size_t>(p) * n + q) * n + r) * n + s];
    }
};

struct MolecularDataset {
    std::string molecule_name;
    std::string basis_name;
    ScfMethod scf_method = ScfMethod::RHF;
    std::vector<std::string> parameter_names;
    std::vector<GeometryRecord> records;

    [[nodiscard]] int n_spin_orbitals() const {
        return records.empty() ? 0 : records.front().n_spin_orbitals;
    }
    [[nodiscard]] int n_electrons() const {
        return records.empty() ? 0 : records.front().n_electrons;
    }
};

/// One broken invariant; record == -1 for dataset-level violations.
struct Violation {
    long record = -1;
    std::string message;
};

inline std::string describe(const Violation& v) {
    if (v.record < 0) return v.message;
    return "record " + std::to_string(v.record) + ": " + v.message;
}

namespace detail {

inline constexpr double kSymTol = 1e-10;

inline void check_record(const GeometryRecord& r, long idx, std::size_t n_params,
                         std::vector<Violation>& out) {
    const auto add = [&](std::string msg) { out.push_back({idx, std::move(msg)}); };
    const int n = r.n_spin_orbitals;
    if (n <= 0) {
        add("n_spin_orbitals must be positive");
        return;
    }
    if (r.n_electrons < 0 || r.n_electrons > n) add("n_electrons out of range");
    if (r.params.size() != n_params) add("params length differs from parameter_names");
    for (double p : r.params) {
        if (!std::isfinite(p)) add("non-finite parameter");
    }
    const std::size_t un = static_cast<std::size_t>(n);
    if (r.h1.size() != un * un) {
        add("h1 has wrong length");
        return;
    }
    if (r.h2.size() != un * un * un * un) {
        add("h2 has wrong length");
        return;
    }
    if (!std::isfinite(r.core_energy) || !std::isfinite(r.scf_energy)) add("non-finite energy");

    bool finite = true;
    for (double v : r.h1) finite = finite && std::isfinite(v);
    for (double v : r.h2) finite = finite && std::isfinite(v);
    if (!finite) {
        add("non-finite integral");
        return;
    }

    // report the first offending entry per invariant
    bool sym1 = true, spin1 = true;
    for (int p = 0; p < n && (sym1 || spin1); ++p) {
        for (int q = 0; q < n; ++q) {
            const double v = r.one(p, q);
            if (sym1 && std::abs(v - r.one(q, p)) > kSymTol) {
                add("h1 not symmetric at (" + std::to_string(p) + "," + std::to_string(q) + ")");
                sym1 = false;
            }
            if (spin1 && (p % 2) != (q % 2) && std::abs(v) > kSymTol) {
                add("h1 spin sparsity violated at (" + std::to_string(p) + "," +
                    std::to_string(q) + ")");
                spin1 = false;
            }
        }
    }

    bool sym_swap = true, sym_rev = true, spin2 = true;
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            for (int s_ = 0; s_ < n; ++s_) {
                for (int t = 0; t < n; ++t) {
                    const double v = r.two(p, q, s_, t);
                    const auto where = [&] {
                        return " at (" + std::to_string(p) + "," + std::to_string(q) + "," +
                               std::to_string(s_) + "," + std::to_string(t) + ")";
                    };
                    if (sym_swap && std::abs(v - r.two(q, p, t, s_)) > kSymTol) {
                        add("h2 violates h_pqrs = h_qpsr" + where());
                        sym_swap = false;
                    }
                    if (sym_rev && std::abs(v - r.two(t, s_, q, p)) > kSymTol) {
                        add("h2 violates h_pqrs = h_srqp" + where());
                        sym_rev = false;
                    }
                    const bool allowed = (p % 2 == t % 2) && (q % 2 == s_ % 2);
                    if (spin2 && !allowed && std::abs(v) > kSymTol) {
                        add("h2 spin sparsity violated" + where());
                        spin2 = false;
                    }
                }
            }
        }
    }
}

}  // namespace detail

/// Returns every violated invariant; empty iff the dataset is valid.
inline std::vector<Violation> validate_dataset(const MolecularDataset& d) {
    std::vector<Violation> out;
    if (d.records.empty()) {
        out.push_back({-1, "no geometries"});
        return out;
    }
    const GeometryRecord& first = d.records.front();
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        const auto& r = d.records[i];
        const long idx = static_cast<long>(i);
        if (r.n_spin_orbitals != first.n_spin_orbitals || r.n_electrons != first.n_electrons) {
            out.push_back({idx, "orbital or electron count differs from record 0"});
        }
        detail::check_record(r, idx, d.parameter_names.size(), out);
        if (i > 0) {
            const auto& prev = d.records[i - 1].params;
            if (prev == r.params) {
                out.push_back({idx, "duplicate parameter vector"});
            } else if (!std::lexicographical_compare(prev.begin(), prev.end(), r.params.begin(),
                                                     r.params.end())) {
                out.push_back({idx, "records not sorted by parameter vector"});
            }
        }
    }
    return out;
}

namespace detail {

inline RVec read_numbers(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw Error(std::string("missing array '") + key + "'");
    }
    RVec v;
    v.reserve(j.at(key).size());
    for (const auto& e : j.at(key)) v.push_back(e.get<double>());
    return v;
}

}  // namespace detail

/// Parses .qcd text without validating invariants.
inline MolecularDataset parse_dataset(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("malformed dataset: ") + e.what());
    }
    MolecularDataset d;
    try {
        d.molecule_name = j.at("molecule").get<std::string>();
        d.basis_name = j.at("basis").get<std::string>();
        const auto m = j.at("scf_method").get<std::string>();
        if (m == "RHF") {
            d.scf_method = ScfMethod::RHF;
        } else if (m == "UHF") {
            d.scf_method = ScfMethod::UHF;
        } else {
            throw Error("unknown scf_method '" + m + "'");
        }
        d.parameter_names = j.at("parameter_names").get<std::vector<std::string>>();
        const int n_so = j.at("n_spin_orbitals").get<int>();
        const int n_e = j.at("n_electrons").get<int>();
        for (const auto& jr : j.at("records")) {
            GeometryRecord r;
            r.params = detail::read_numbers(jr, "params");
            r.n_spin_orbitals = n_so;
            r.n_electrons = n_e;
            r.core_energy = jr.at("core_energy").get<double>();
            r.scf_energy = jr.at("scf_energy").get<double>();
            r.h1 = detail::read_numbers(jr, "h1");
            r.h2 = detail::read_numbers(jr, "h2");
            d.records.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw Error(std::string("malformed dataset: ") + e.what());
    }
    return d;
}

/// Loads and validates; throws Error naming the first violation.
inline MolecularDataset load_dataset(const std::string& path) {
    MolecularDataset d = parse_dataset(read_text_file(path));
    const auto v = validate_dataset(d);
    if (!v.empty()) throw Error(path + ": " + describe(v.front()));
    return d;
}

inline json dataset_to_json(const MolecularDataset& d) {
    json j;
    j["molecule"] = d.molecule_name;
    j["basis"] = d.basis_name;
    j["scf_method"] = to_string(d.scf_method);
    j["parameter_names"] = d.parameter_names;
    j["n_spin_orbitals"] = d.n_spin_orbitals();
    j["n_electrons"] = d.n_electrons();
    json recs = json::array();
    for (const auto& r : d.records) {
        json jr;
        jr["params"] = r.params;
        jr["core_energy"] = r.core_energy;
        jr["scf_energy"] = r.scf_energy;
        jr["h1"] = r.h1;
        jr["h2"] = r.h2;
        recs.push_back(std::move(jr));
    }
    j["records"] = std::move(recs);
    return j;
}

inline std::string serialize_dataset(const MolecularDataset& d) {
    return to_json_string(dataset_to_json(d), -1) + "\n";
}

inline void save_dataset(const MolecularDataset& d, const std::string& path) {
    write_text_file(path, serialize_dataset(d));
}

/// Record closest to R in Euclidean distance; ties go to the lexicographically first.
inline const GeometryRecord& nearest_record(const MolecularDataset& d, const RVec& R) {
    if (d.records.empty()) throw Error("nearest_record: empty dataset");
    const GeometryRecord* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& r : d.records) {
        if (r.params.size() != R.size()) throw Error("nearest_record: dimension mismatch");
        double dist = 0.0;
        for (std::size_t k = 0; k < R.size(); ++k) dist += (r.params[k] - R[k]) * (r.params[k] - R[k]);
        // records are sorted, so strict < keeps the lexicographically first on ties
        if (dist < best_d) {
            best_d = dist;
            best = &r;
        }
    }
    return *best;
}

/// Index of the record whose params equal R within tol, or -1.
inline long find_record(const MolecularDataset& d, const RVec& R, double tol = 1e-9) {
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        const auto& p = d.records[i].params;
        if (p.size() != R.size()) continue;
        bool same = true;
        for (std::size_t k = 0; k < R.size(); ++k) same = same && std::abs(p[k] - R[k]) <= tol;
        if (same) return static_cast<long>(i);
    }
    return -1;
}

}  // namespace gsw
