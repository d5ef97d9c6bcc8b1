// Copyright 2026 The Adaptive ZNE Authors
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

#ifndef AZNE_CALIBRATION_HPP
#define AZNE_CALIBRATION_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace azne {

using QubitPair = std::pair<std::uint32_t, std::uint32_t>;

inline std::string pair_name(const QubitPair &p) { return std::to_string(p.first) + "_" + std::to_string(p.second); }

struct QubitProperties {
    double readout = 0;
    double sx = 0;
    double x = 0;
    // Ingested for completeness; the channel model does not use them.
    std::optional<double> rz;
    std::optional<double> frequency_ghz;
    std::optional<double> t1_us;
    std::optional<double> t2_us;
};

/// Device calibration snapshot: CX error per ordered pair, single-qubit properties per qubit.
class CalibrationTable {
   public:
    void set_cx(QubitPair pair, double error) {
        check_rate(error, "cx error for " + pair_name(pair));
        if (pair.first == pair.second) {
            throw std::invalid_argument("cx pair " + pair_name(pair) + " has identical qubits");
        }
        QubitPair rev{pair.second, pair.first};
        auto it = cx_.find(rev);
        if (it != cx_.end() && it->second != error) {
            throw std::invalid_argument("cx error for " + pair_name(pair) + " differs from its reverse " +
                                        pair_name(rev));
        }
        cx_[pair] = error;
    }

    void set_qubit(std::uint32_t q, const QubitProperties &props) {
        check_rate(props.readout, "readout error of qubit " + std::to_string(q));
        check_rate(props.sx, "sx error of qubit " + std::to_string(q));
        check_rate(props.x, "x error of qubit " + std::to_string(q));
        qubits_[q] = props;
    }

    bool has_cx(QubitPair pair) const { return cx_.contains(pair); }

    double cx_error(QubitPair pair) const {
        auto it = cx_.find(pair);
        if (it == cx_.end()) {
            throw std::out_of_range("no calibration entry for cx pair " + pair_name(pair));
        }
        return it->second;
    }

    bool has_qubit(std::uint32_t q) const { return qubits_.contains(q); }

    const QubitProperties &qubit(std::uint32_t q) const {
        auto it = qubits_.find(q);
        if (it == qubits_.end()) {
            throw std::out_of_range("no calibration entry for qubit " + std::to_string(q));
        }
        return it->second;
    }

    const std::map<QubitPair, double> &cx_errors() const { return cx_; }
    const std::map<std::uint32_t, QubitProperties> &qubits() const { return qubits_; }

    /// Median over all listed rows (both orientations count when both are listed).
    double median_cx_error() const {
        if (cx_.empty()) {
            throw std::invalid_argument("calibration table has no cx entries");
        }
        std::vector<double> v;
        v.reserve(cx_.size());
        for (const auto &[pair, e] : cx_) v.push_back(e);
        std::sort(v.begin(), v.end());
        std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }

   private:
    static void check_rate(double r, const std::string &what) {
        if (!(r >= 0 && r <= 1)) {
            throw std::invalid_argument(what + " outside [0, 1]");
        }
    }

    std::map<QubitPair, double> cx_;
    std::map<std::uint32_t, QubitProperties> qubits_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::optional<std::uint32_t> parse_index(std::string_view s) {
    if (!s.empty() && (s.front() == 'Q' || s.front() == 'q')) s.remove_prefix(1);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

/// Reads non-blank, non-comment lines. Row numbers are 1-based file line numbers.
inline std::vector<std::pair<std::size_t, std::string>> read_rows(std::istream &in) {
    std::vector<std::pair<std::size_t, std::string>> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        rows.emplace_back(number, std::string(t));
    }
    if (rows.empty()) {
        throw std::invalid_argument("calibration input is empty");
    }
    return rows;
}

[[noreturn]] inline void row_error(std::size_t row, const std::string &msg) {
    throw std::invalid_argument("calibration row " + std::to_string(row) + ": " + msg);
}

}  // namespace detail

/// Parses a `pair,error` table (pairs written as "25_22") into `table`.
inline void load_cx_errors(std::istream &in, CalibrationTable &table) {
    auto rows = detail::read_rows(in);
    std::size_t first = 0;
    if (detail::split_csv(rows[0].second)[0] == "pair") first = 1;
    if (first == rows.size()) {
        throw std::invalid_argument("calibration input has a header but no rows");
    }
    for (std::size_t k = first; k < rows.size(); ++k) {
        const auto &[row, text] = rows[k];
        auto cells = detail::split_csv(text);
        if (cells.size() != 2) detail::row_error(row, "expected 2 columns, found " + std::to_string(cells.size()));
        std::string_view pair = cells[0];
        std::size_t sep = pair.find_first_of("_-");
        if (sep == std::string_view::npos) detail::row_error(row, "pair '" + std::string(pair) + "' is not of the form a_b");
        auto a = detail::parse_index(pair.substr(0, sep));
        auto b = detail::parse_index(pair.substr(sep + 1));
        auto e = detail::parse_double(cells[1]);
        if (!a || !b) detail::row_error(row, "pair '" + std::string(pair) + "' is not of the form a_b");
        if (!e) detail::row_error(row, "error '" + std::string(cells[1]) + "' is not a number");
        try {
            table.set_cx({*a, *b}, *e);
        } catch (const std::invalid_argument &ex) {
            detail::row_error(row, ex.what());
        }
    }
}

/// Parses a qubit property table. Required columns: qubit, readout, sx, x (any order).
/// Optional: rz, frequency_ghz, t1_us, t2_us.
inline void load_qubit_properties(std::istream &in, CalibrationTable &table) {
    auto rows = detail::read_rows(in);
    auto header = detail::split_csv(rows[0].second);
    std::map<std::string, std::size_t, std::less<>> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[std::string(header[i])] = i;
    for (const char *required : {"qubit", "readout", "sx", "x"}) {
        if (!col.contains(required)) {
            detail::row_error(rows[0].first, std::string("missing column '") + required + "'");
        }
    }
    if (rows.size() == 1) {
        throw std::invalid_argument("calibration input has a header but no rows");
    }
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto &[row, text] = rows[k];
        auto cells = detail::split_csv(text);
        if (cells.size() != header.size()) {
            detail::row_error(row, "expected " + std::to_string(header.size()) + " columns, found " +
                                       std::to_string(cells.size()));
        }
        auto number = [&](const char *name) -> std::optional<double> {
            auto it = col.find(name);
            if (it == col.end()) return std::nullopt;
            auto v = detail::parse_double(cells[it->second]);
            if (!v) detail::row_error(row, std::string("column '") + name + "' is not a number");
            return v;
        };
        auto q = detail::parse_index(cells[col["qubit"]]);
        if (!q) detail::row_error(row, "qubit '" + std::string(cells[col["qubit"]]) + "' is not an index");
        QubitProperties p;
        p.readout = *number("readout");
        p.sx = *number("sx");
        p.x = *number("x");
        p.rz = number("rz");
        p.frequency_ghz = number("frequency_ghz");
        p.t1_us = number("t1_us");
        p.t2_us = number("t2_us");
        try {
            table.set_qubit(*q, p);
        } catch (const std::invalid_argument &ex) {
            detail::row_error(row, ex.what());
        }
    }
}

inline CalibrationTable load_calibration(std::istream &cx_errors) {
    CalibrationTable t;
    load_cx_errors(cx_errors, t);
    return t;
}

inline CalibrationTable load_calibration(std::istream &cx_errors, std::istream &qubit_props) {
    CalibrationTable t;
    load_cx_errors(cx_errors, t);
    load_qubit_properties(qubit_props, t);
    return t;
}

inline CalibrationTable load_calibration_files(const std::filesystem::path &cx_path,
                                               const std::filesystem::path &qubit_path) {
    std::ifstream cx(cx_path);
    if (!cx) throw std::runtime_error("cannot open " + cx_path.string());
    CalibrationTable t;
    load_cx_errors(cx, t);
    if (!qubit_path.empty()) {
        std::ifstream qp(qubit_path);
        if (!qp) throw std::runtime_error("cannot open " + qubit_path.string());
        load_qubit_properties(qp, t);
    }
    return t;
}

#ifdef AZNE_DATA_DIR
/// The table shipped in the repository's data directory.
inline const CalibrationTable &default_calibration() {
    static const CalibrationTable table = load_calibration_files(
        std::filesystem::path(AZNE_DATA_DIR) / "cx_errors.csv", std::filesystem::path(AZNE_DATA_DIR) / "qubit_props.csv");
    return table;
}
#endif

}  // namespace azne

#endif
