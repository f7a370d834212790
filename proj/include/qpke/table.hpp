// Copyright 2026 The qpke-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Tabular results and their CSV / JSON encodings.
 *
 * Numbers are written with std::to_chars (12 significant digits, '.'
 * decimal point) so output does not depend on the process locale.
 */

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qpke {

using Cell = std::variant<long long, double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }

    [[nodiscard]] std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) {
                return i;
            }
        }
        throw std::out_of_range("Table: no column named " + std::string(name));
    }
};

/// A failed inequality or consistency check attached to a command result.
struct Violation {
    std::string check;
    std::string detail;
};

struct Report {
    Table table;
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

inline std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

/// Semicolon-joined list, used for spectra inside a single CSV cell.
inline std::string format_list(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out += ';';
        }
        out += format_number(values[i]);
    }
    return out;
}

namespace detail {

/// "what: lhs op rhs", the text of a Violation.
inline std::string describe(const std::string &what, double lhs, const std::string &op, double rhs) {
    return what + ": " + format_number(lhs) + " " + op + " " + format_number(rhs);
}

} // namespace detail

inline std::string format_cell(const Cell &cell) {
    struct Visitor {
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(const std::string &v) const {
            if (v.find_first_of(",\"\n") == std::string::npos) {
                return v;
            }
            std::string q = "\"";
            for (char c : v) {
                if (c == '"') {
                    q += '"';
                }
                q += c;
            }
            return q + "\"";
        }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    };
    return std::visit(Visitor{}, cell);
}

inline void write_csv(std::ostream &os, const Table &t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << t.columns[i];
    }
    os << '\n';
    for (const auto &row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << format_cell(row[i]);
        }
        os << '\n';
    }
}

inline nlohmann::ordered_json to_json(const Table &t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
            std::visit(
                [&](const auto &v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        // JSON has no NaN/inf; those become null.
                        if (std::isfinite(v)) {
                            obj[t.columns[i]] = v;
                        } else {
                            obj[t.columns[i]] = nullptr;
                        }
                    } else {
                        obj[t.columns[i]] = v;
                    }
                },
                row[i]);
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

inline void write_json(std::ostream &os, const Table &t) { os << to_json(t).dump(2) << '\n'; }

inline nlohmann::ordered_json to_json(const std::vector<Violation> &violations) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &v : violations) {
        arr.push_back({{"check", v.check}, {"detail", v.detail}});
    }
    return arr;
}

} // namespace qpke
