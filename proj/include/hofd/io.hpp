#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hofd/dictionary.hpp"
#include "hofd/errors.hpp"

namespace hofd {

/// IEEE-754 double printed with 17 significant digits (round-trip exact).
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
}

/// Quotes a CSV cell when it contains a delimiter or quote.
inline std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Splits one CSV line, honoring double-quoted cells.
inline std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    cur += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

/// Minimal CSV emitter; all numeric cells go through format_double.
class CsvWriter {
public:
    void header(const std::vector<std::string>& names) { row_strings(names); }

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) text_ += ',';
            text_ += csv_escape(cells[k]);
        }
        text_ += '\n';
    }

    std::string& text() { return text_; }
    void save(const std::string& path) const { write_text_file(path, text_); }

private:
    std::string text_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with a header line. Rows with non-finite entries are
/// rejected.
inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            table.header = csv_split(line);
            first = false;
            continue;
        }
        std::vector<double> row;
        for (const std::string& cell : csv_split(line)) {
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw Error(path + ": non-numeric cell '" + cell + "'");
            }
            if (!std::isfinite(v))
                throw Error(path + ": non-finite entry '" + cell + "'");
            row.push_back(v);
        }
        if (!table.rows.empty() && row.size() != table.rows.front().size())
            throw Error(path + ": ragged row");
        table.rows.push_back(std::move(row));
    }
    return table;
}

/// Writes the design matrix with atom names as header.
inline void design_matrix_to_csv(const DesignMatrix& dm, const Dictionary& dict,
                                 const std::string& path) {
    CsvWriter csv;
    std::vector<std::string> names;
    names.reserve(dict.size());
    for (const auto& a : dict.atoms()) names.push_back(a.name());
    csv.header(names);
    for (int r = 0; r < dm.rows(); ++r) {
        std::vector<std::string> cells;
        cells.reserve(dm.cols());
        for (int c = 0; c < dm.cols(); ++c) cells.push_back(format_double(dm.values(r, c)));
        csv.row_strings(cells);
    }
    csv.save(path);
}

/// Serializes second-order atoms as a JSON array of
/// {i, j, l_i, l_j, lambda_i, lambda_j, c}, 1-based indices, doubles printed
/// with 17 significant digits.
inline std::string atoms_to_json(const std::vector<SecondOrderAtom>& atoms) {
    std::string out = "[\n";
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const auto& a = atoms[k];
        out += "  {\"i\": " + std::to_string(a.i + 1) + ", \"j\": " + std::to_string(a.j + 1) +
               ", \"l_i\": " + std::to_string(a.li) + ", \"l_j\": " + std::to_string(a.lj) +
               ", \"lambda_i\": [";
        for (int t = 0; t < a.lambda_i.size(); ++t) {
            if (t) out += ", ";
            out += format_double(a.lambda_i[t]);
        }
        out += "], \"lambda_j\": [";
        for (int t = 0; t < a.lambda_j.size(); ++t) {
            if (t) out += ", ";
            out += format_double(a.lambda_j[t]);
        }
        out += "], \"c\": " + format_double(a.c) + "}";
        if (k + 1 < atoms.size()) out += ',';
        out += '\n';
    }
    out += "]\n";
    return out;
}

inline std::vector<SecondOrderAtom> atoms_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    std::vector<SecondOrderAtom> atoms;
    for (const auto& item : doc) {
        SecondOrderAtom a;
        a.i = item.at("i").get<int>() - 1;
        a.j = item.at("j").get<int>() - 1;
        a.li = item.at("l_i").get<int>();
        a.lj = item.at("l_j").get<int>();
        auto li = item.at("lambda_i").get<std::vector<double>>();
        auto lj = item.at("lambda_j").get<std::vector<double>>();
        a.lambda_i = Eigen::Map<Eigen::VectorXd>(li.data(), li.size());
        a.lambda_j = Eigen::Map<Eigen::VectorXd>(lj.data(), lj.size());
        a.c = item.at("c").get<double>();
        atoms.push_back(std::move(a));
    }
    return atoms;
}

/// Linear-interpolation quantile of a sample (q in [0,1]).
inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw Error("quantile of empty sample");
    std::sort(v.begin(), v.end());
    double pos = q * (v.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    double frac = pos - lo;
    return v[lo] + (v[lo + 1] - v[lo]) * frac;
}

inline double median(const std::vector<double>& v) { return quantile(v, 0.5); }

}  // namespace hofd
