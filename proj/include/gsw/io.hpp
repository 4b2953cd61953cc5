// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief File helpers: lossless JSON emission, CSV writing, provenance lines.
 *
 * nlohmann::json prints the shortest round-trip form of a double; the file
 * formats here require 17 significant digits, so values are emitted through
 * write_json() instead of json::dump().
 */

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsw/core.hpp"

namespace gsw {

using json = nlohmann::json;

/// %.17g formatting; non-finite values become "nan"/"inf"/"-inf".
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline void write_json_value(std::ostream& os, const json& j, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case json::value_t::object: {
            os << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                os << json(it.key()).dump() << (indent < 0 ? ":" : ": ");
                write_json_value(os, it.value(), indent, depth + 1);
            }
            if (!j.empty()) newline(depth);
            os << '}';
            break;
        }
        case json::value_t::array: {
            os << '[';
            // numeric arrays stay on one line
            bool scalar = true;
            for (const auto& e : j) scalar = scalar && !e.is_structured();
            bool first = true;
            for (const auto& e : j) {
                if (!first) os << ',';
                first = false;
                if (!scalar) newline(depth + 1);
                write_json_value(os, e, indent, depth + 1);
            }
            if (!scalar && !j.empty()) newline(depth);
            os << ']';
            break;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                // JSON has no inf/nan literals
                os << json(format_double(v)).dump();
            } else {
                os << format_double(v);
            }
            break;
        }
        default:
            os << j.dump();
    }
}

}  // namespace detail

/// Serializes with every floating-point value at 17 significant digits.
inline std::string to_json_string(const json& j, int indent = 2) {
    std::ostringstream os;
    detail::write_json_value(os, j, indent, 0);
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, to_json_string(j) + "\n");
}

/// Minimal CSV table: `.` decimal, `,` separator, LF endings, 17 digits.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_comment(const std::string& line) { comments_.push_back(line); }

    void add_row(const std::vector<double>& row) {
        if (row.size() != columns_.size()) throw Error("csv row width mismatch");
        rows_.push_back(row);
    }

    [[nodiscard]] std::string str() const {
        std::string out;
        for (const auto& c : comments_) out += "# " + c + "\n";
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            out += (i ? "," : "") + columns_[i];
        }
        out += "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
            out += "\n";
        }
        return out;
    }

    void save(const std::string& path) const { write_text_file(path, str()); }

private:
    std::vector<std::string> columns_;
    std::vector<std::string> comments_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace gsw
