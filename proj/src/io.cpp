#include "propersplit/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "propersplit/errors.hpp"

namespace propersplit {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& token, const std::string& origin) {
    const char* begin = token.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError(origin + ": not a number: '" + token + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Matrix parse_matrix_market(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(origin + ": empty file");
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") throw ParseError(origin + ": missing MatrixMarket banner");
    if (lower(object) != "matrix" || lower(format) != "array") {
        throw ParseError(origin + ": only 'matrix array' files are supported");
    }
    std::string f = lower(field);
    if (f != "real" && f != "integer") {
        throw ParseError(origin + ": only real or integer fields are supported");
    }
    if (lower(symmetry) != "general") {
        throw ParseError(origin + ": only general symmetry is supported");
    }

    int m = 0, n = 0;
    for (;;) {
        if (!std::getline(in, line)) throw ParseError(origin + ": missing size line");
        std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        std::istringstream size_line(t);
        if (!(size_line >> m >> n)) throw ParseError(origin + ": bad size line '" + t + "'");
        std::string rest;
        if (size_line >> rest) throw ParseError(origin + ": bad size line '" + t + "'");
        break;
    }
    if (m <= 0 || n <= 0) throw ParseError(origin + ": dimensions must be positive");

    std::vector<double> values;
    values.reserve(static_cast<size_t>(m) * static_cast<size_t>(n));
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        std::istringstream row(t);
        std::string token;
        while (row >> token) values.push_back(parse_number(token, origin));
    }
    if (values.size() != static_cast<size_t>(m) * static_cast<size_t>(n)) {
        throw ParseError(origin + ": expected " + std::to_string(m * n) + " values, found " +
                         std::to_string(values.size()));
    }

    Matrix out(m, n);
    size_t idx = 0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < m; ++i) out(i, j) = values[idx++];
    }
    out.check_finite();
    return out;
}

Matrix parse_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<double> row;
        std::string cell;
        std::istringstream cells(t);
        while (std::getline(cells, cell, ',')) {
            row.push_back(parse_number(trim(cell), origin));
        }
        if (row.empty()) throw ParseError(origin + ": empty row");
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(origin + ": ragged row with " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(origin + ": no data rows");

    Matrix out(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < out.rows(); ++i) {
        for (int j = 0; j < out.cols(); ++j) out(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    out.check_finite();
    return out;
}

std::string format_matrix_market(const Matrix& m) {
    std::string out = "%%MatrixMarket matrix array real general\n";
    out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (int j = 0; j < m.cols(); ++j) {
        for (int i = 0; i < m.rows(); ++i) {
            out += format_double(m(i, j));
            out += "\n";
        }
    }
    return out;
}

std::string format_csv(const Matrix& m) {
    std::string out;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ",";
            out += format_double(m(i, j));
        }
        out += "\n";
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed on " + path);
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed on " + path);
}

Matrix read_matrix(const std::string& path) {
    std::string low = lower(path);
    if (ends_with(low, ".mtx")) return parse_matrix_market(read_text_file(path), path);
    if (ends_with(low, ".csv")) return parse_csv(read_text_file(path), path);
    throw ParseError(path + ": unsupported matrix extension (use .mtx or .csv)");
}

void write_matrix(const std::string& path, const Matrix& m) {
    std::string low = lower(path);
    if (ends_with(low, ".mtx")) {
        write_text_file(path, format_matrix_market(m));
        return;
    }
    if (ends_with(low, ".csv")) {
        write_text_file(path, format_csv(m));
        return;
    }
    throw ParseError(path + ": unsupported matrix extension (use .mtx or .csv)");
}

}  // namespace propersplit
