#include "core/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "core/errors.hpp"

namespace bsur {

namespace {

std::vector<std::string> split_line(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.push_back("");
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& tok, const std::string& path, arma::uword row) {
    const std::string t = trim(tok);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError("parse failure in " + path + " at data row " +
                          std::to_string(row + 1) + ": '" + t + "'");
    return v;
}

}  // namespace

void Dataset::validate() const {
    if (X.n_rows != n() || (p0() > 0 && X0.n_rows != n()))
        throw ConfigError("dimension mismatch: Y, X, X0 must have the same number of rows");
    if (!Y.is_finite() || !X.is_finite() || !X0.is_finite())
        throw ConfigError("dataset contains NaN or Inf entries; missing values are not supported");
    std::set<std::string> seen;
    for (const auto* names : {&x_names, &x0_names})
        for (const auto& nm : *names)
            if (!seen.insert(nm).second)
                throw ConfigError("duplicate column identifier across X and X0: " + nm);
}

NamedMatrix read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const char sep = line.find('\t') != std::string::npos ? '\t' : ',';

    NamedMatrix out;
    for (auto& nm : split_line(line, sep)) out.names.push_back(trim(nm));
    const arma::uword ncol = out.names.size();

    std::vector<double> buf;
    arma::uword nrow = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto toks = split_line(line, sep);
        if (toks.size() != ncol)
            throw ConfigError("ragged row in " + path + ": row " + std::to_string(nrow + 1) +
                              " has " + std::to_string(toks.size()) + " fields, expected " +
                              std::to_string(ncol));
        for (const auto& t : toks) buf.push_back(parse_double(t, path, nrow));
        ++nrow;
    }
    out.values.set_size(nrow, ncol);
    for (arma::uword i = 0; i < nrow; ++i)
        for (arma::uword j = 0; j < ncol; ++j) out.values(i, j) = buf[i * ncol + j];
    return out;
}

void write_csv_matrix(const std::string& path, const arma::mat& m,
                      const std::vector<std::string>& names) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (arma::uword j = 0; j < m.n_cols; ++j) {
        if (j) out << ',';
        out << (j < names.size() ? names[j] : "c" + std::to_string(j + 1));
    }
    out << '\n';
    char buf[40];
    for (arma::uword i = 0; i < m.n_rows; ++i) {
        for (arma::uword j = 0; j < m.n_cols; ++j) {
            if (j) out << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

std::vector<arma::uword> parse_column_block(const std::string& text) {
    std::vector<arma::uword> out;
    const std::string t = trim(text);
    if (t.empty()) return out;
    for (const auto& part : split_line(t, ',')) {
        const std::string piece = trim(part);
        if (piece.empty()) throw ConfigError("empty entry in column block '" + text + "'");
        const auto colon = piece.find(':');
        auto parse_idx = [&](const std::string& s) -> long long {
            long long v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size() || v < 1)
                throw ConfigError("bad column index '" + s + "' in block '" + text + "'");
            return v;
        };
        if (colon == std::string::npos) {
            out.push_back(static_cast<arma::uword>(parse_idx(piece) - 1));
        } else {
            const long long a = parse_idx(trim(piece.substr(0, colon)));
            const long long b = parse_idx(trim(piece.substr(colon + 1)));
            if (b < a) throw ConfigError("descending range in column block '" + text + "'");
            for (long long v = a; v <= b; ++v) out.push_back(static_cast<arma::uword>(v - 1));
        }
    }
    return out;
}

namespace {

void check_disjoint(const std::vector<arma::uword>& a, const std::vector<arma::uword>& b,
                    const char* what) {
    std::set<arma::uword> sa(a.begin(), a.end());
    for (auto v : b)
        if (sa.count(v))
            throw ConfigError(std::string("overlapping column blocks: ") + what);
}

arma::mat take_cols(const arma::mat& m, const std::vector<arma::uword>& idx,
                    const std::vector<std::string>& names, std::vector<std::string>& out_names) {
    arma::mat out(m.n_rows, idx.size());
    for (arma::uword j = 0; j < idx.size(); ++j) {
        if (idx[j] >= m.n_cols)
            throw ConfigError("column index " + std::to_string(idx[j] + 1) + " out of range");
        out.col(j) = m.col(idx[j]);
        out_names.push_back(idx[j] < names.size() ? names[idx[j]] : "");
    }
    return out;
}

}  // namespace

Dataset load_dataset_combined(const std::string& path,
                              const std::vector<arma::uword>& y_cols,
                              const std::vector<arma::uword>& x_cols,
                              const std::vector<arma::uword>& x0_cols) {
    if (y_cols.empty() || x_cols.empty())
        throw ConfigError("Y and X column blocks must both be non-empty");
    check_disjoint(y_cols, x_cols, "Y vs X");
    check_disjoint(y_cols, x0_cols, "Y vs X0");
    check_disjoint(x_cols, x0_cols, "X vs X0");

    const NamedMatrix nm = read_csv_matrix(path);
    Dataset d;
    d.Y = take_cols(nm.values, y_cols, nm.names, d.y_names);
    d.X = take_cols(nm.values, x_cols, nm.names, d.x_names);
    d.X0 = take_cols(nm.values, x0_cols, nm.names, d.x0_names);
    if (x0_cols.empty()) d.X0.set_size(d.Y.n_rows, 0);
    d.validate();
    return d;
}

Dataset load_dataset_files(const std::string& y_path, const std::string& x_path,
                           const std::string& x0_path) {
    Dataset d;
    NamedMatrix ym = read_csv_matrix(y_path);
    d.Y = std::move(ym.values);
    d.y_names = std::move(ym.names);
    NamedMatrix xm = read_csv_matrix(x_path);
    d.X = std::move(xm.values);
    d.x_names = std::move(xm.names);
    if (!x0_path.empty()) {
        NamedMatrix x0m = read_csv_matrix(x0_path);
        d.X0 = std::move(x0m.values);
        d.x0_names = std::move(x0m.names);
    } else {
        d.X0.set_size(d.Y.n_rows, 0);
    }
    d.validate();
    return d;
}

void write_dataset(const std::string& path, const Dataset& data) {
    arma::mat combined(data.n(), data.s() + data.p() + data.p0());
    std::vector<std::string> names;
    arma::uword c = 0;
    for (arma::uword j = 0; j < data.s(); ++j, ++c) {
        combined.col(c) = data.Y.col(j);
        names.push_back(j < data.y_names.size() ? data.y_names[j] : "y" + std::to_string(j + 1));
    }
    for (arma::uword j = 0; j < data.p(); ++j, ++c) {
        combined.col(c) = data.X.col(j);
        names.push_back(j < data.x_names.size() ? data.x_names[j] : "x" + std::to_string(j + 1));
    }
    for (arma::uword j = 0; j < data.p0(); ++j, ++c) {
        combined.col(c) = data.X0.col(j);
        names.push_back(j < data.x0_names.size() ? data.x0_names[j] : "x0_" + std::to_string(j + 1));
    }
    write_csv_matrix(path, combined, names);
}

std::string dataset_fingerprint(const Dataset& data) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* ptr, std::size_t len) {
        const auto* b = static_cast<const unsigned char*>(ptr);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };
    char buf[40];
    for (const arma::mat* m : {&data.Y, &data.X, &data.X0})
        for (arma::uword i = 0; i < m->n_elem; ++i) {
            const int len = std::snprintf(buf, sizeof(buf), "%.17g", (*m)(i));
            mix(buf, static_cast<std::size_t>(len));
        }
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace bsur
