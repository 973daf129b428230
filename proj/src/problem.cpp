#include "propersplit/problem.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "propersplit/errors.hpp"
#include "propersplit/io.hpp"

namespace propersplit {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

double parse_double(const std::string& path, int line, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') fail(path, line, "not a number: '" + value + "'");
    return v;
}

int parse_positive_int(const std::string& path, int line, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || v <= 0 || v > 1000000000L) {
        fail(path, line, "not a positive integer: '" + value + "'");
    }
    return static_cast<int>(v);
}

bool parse_bool(const std::string& path, int line, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    fail(path, line, "not a boolean: '" + value + "'");
}

// Raw, path-level view of the file; matrices are loaded in a second phase
// so section order does not matter.
struct RawSplitting {
    std::string name;
    std::string u_path;
    std::string a_path;
    int line = 0;
};

struct RawMulti {
    std::string name;
    std::vector<std::pair<std::string, std::string>> parts;
    int line = 0;
};

Matrix load_relative(const std::string& spec_path, const std::string& rel) {
    std::filesystem::path p(rel);
    if (p.is_relative()) p = std::filesystem::path(spec_path).parent_path() / p;
    return read_matrix(p.string());
}

}  // namespace

ProblemSpec load_problem(const std::string& path) {
    std::string text = read_text_file(path);

    enum class Section { NONE, PROBLEM, SPLITTING, MULTISPLITTING, TOLERANCE, SOLVER };
    Section section = Section::NONE;

    std::string a_path, b_path;
    std::vector<RawSplitting> raw_splittings;
    std::vector<RawMulti> raw_multis;
    ToleranceConfig tol;
    SolveConfig solver;
    bool seen_problem = false, seen_tolerance = false, seen_solver = false;
    std::set<std::string> seen_keys;  // per-section duplicate-key guard
    std::set<std::string> names;

    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;

        if (t.front() == '[') {
            if (t.back() != ']') fail(path, line_no, "unterminated section header");
            std::string head = trim(t.substr(1, t.size() - 2));
            seen_keys.clear();
            if (head == "problem") {
                if (seen_problem) fail(path, line_no, "duplicate [problem] section");
                seen_problem = true;
                section = Section::PROBLEM;
            } else if (head == "tolerance") {
                if (seen_tolerance) fail(path, line_no, "duplicate [tolerance] section");
                seen_tolerance = true;
                section = Section::TOLERANCE;
            } else if (head == "solver") {
                if (seen_solver) fail(path, line_no, "duplicate [solver] section");
                seen_solver = true;
                section = Section::SOLVER;
            } else if (head.rfind("splitting ", 0) == 0) {
                std::string name = trim(head.substr(10));
                if (!valid_name(name)) fail(path, line_no, "bad splitting name '" + name + "'");
                if (!names.insert(name).second) fail(path, line_no, "duplicate name '" + name + "'");
                raw_splittings.push_back(RawSplitting{name, "", "", line_no});
                section = Section::SPLITTING;
            } else if (head.rfind("multisplitting ", 0) == 0) {
                std::string name = trim(head.substr(15));
                if (!valid_name(name)) {
                    fail(path, line_no, "bad multisplitting name '" + name + "'");
                }
                if (!names.insert(name).second) fail(path, line_no, "duplicate name '" + name + "'");
                raw_multis.push_back(RawMulti{name, {}, line_no});
                section = Section::MULTISPLITTING;
            } else {
                fail(path, line_no, "unknown section [" + head + "]");
            }
            continue;
        }

        size_t eq = t.find('=');
        if (eq == std::string::npos) fail(path, line_no, "expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) fail(path, line_no, "empty key");
        if (value.empty()) fail(path, line_no, "empty value for '" + key + "'");
        if (key != "part" && !seen_keys.insert(key).second) {
            fail(path, line_no, "duplicate key '" + key + "'");
        }

        switch (section) {
            case Section::NONE:
                fail(path, line_no, "'" + key + "' outside any section");
            case Section::PROBLEM:
                if (key == "a") {
                    a_path = value;
                } else if (key == "b") {
                    b_path = value;
                } else {
                    fail(path, line_no, "unknown key '" + key + "' in [problem]");
                }
                break;
            case Section::SPLITTING:
                if (key == "u") {
                    raw_splittings.back().u_path = value;
                } else if (key == "a") {
                    raw_splittings.back().a_path = value;
                } else {
                    fail(path, line_no, "unknown key '" + key + "' in [splitting]");
                }
                break;
            case Section::MULTISPLITTING: {
                if (key != "part") {
                    fail(path, line_no, "unknown key '" + key + "' in [multisplitting]");
                }
                size_t comma = value.find(',');
                if (comma == std::string::npos) {
                    fail(path, line_no, "part needs '<u path>, <e path>'");
                }
                std::string up = trim(value.substr(0, comma));
                std::string ep = trim(value.substr(comma + 1));
                if (up.empty() || ep.empty() || ep.find(',') != std::string::npos) {
                    fail(path, line_no, "part needs '<u path>, <e path>'");
                }
                raw_multis.back().parts.emplace_back(up, ep);
                break;
            }
            case Section::TOLERANCE:
                if (key == "rank_tol_factor") {
                    tol.rank_tol_factor = parse_double(path, line_no, value);
                } else if (key == "sign_tol") {
                    tol.sign_tol = parse_double(path, line_no, value);
                } else if (key == "residual_tol") {
                    tol.residual_tol = parse_double(path, line_no, value);
                } else if (key == "eig_tol") {
                    tol.eig_tol = parse_double(path, line_no, value);
                } else {
                    fail(path, line_no, "unknown key '" + key + "' in [tolerance]");
                }
                break;
            case Section::SOLVER:
                if (key == "max_iters") {
                    solver.max_iters = parse_positive_int(path, line_no, value);
                } else if (key == "step_tol") {
                    solver.step_tol = parse_double(path, line_no, value);
                } else if (key == "track_history") {
                    solver.track_history = parse_bool(path, line_no, value);
                } else {
                    fail(path, line_no, "unknown key '" + key + "' in [solver]");
                }
                break;
        }
    }

    if (!seen_problem) fail(path, line_no, "missing [problem] section");
    if (a_path.empty()) fail(path, line_no, "missing 'a' in [problem]");
    for (const RawSplitting& rs : raw_splittings) {
        if (rs.u_path.empty()) fail(path, rs.line, "splitting '" + rs.name + "' has no 'u'");
    }
    for (const RawMulti& rm : raw_multis) {
        if (rm.parts.empty()) fail(path, rm.line, "multisplitting '" + rm.name + "' has no parts");
    }
    try {
        validate(tol);
        validate(solver);
    } catch (const PreconditionFailed& e) {
        throw ParseError(path + ": " + e.what());
    }

    Matrix a = load_relative(path, a_path);
    std::optional<Matrix> b;
    if (!b_path.empty()) {
        Matrix raw = load_relative(path, b_path);
        if (raw.cols() != 1) {
            if (raw.rows() != 1) {
                throw ParseError(path + ": b must be a row or column vector, got " +
                                 std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()));
            }
            raw = raw.transpose();
        }
        b = std::move(raw);
    }
    std::vector<SplittingSpec> splittings;
    for (const RawSplitting& rs : raw_splittings) {
        Matrix u = load_relative(path, rs.u_path);
        Matrix sa = rs.a_path.empty() ? a : load_relative(path, rs.a_path);
        splittings.push_back(
            SplittingSpec{rs.name, rs.u_path, rs.a_path, std::move(u), std::move(sa)});
    }
    std::vector<MultisplittingSpec> multis;
    for (const RawMulti& rm : raw_multis) {
        MultisplittingSpec ms;
        ms.name = rm.name;
        for (const auto& [up, ep] : rm.parts) {
            Matrix u = load_relative(path, up);
            Matrix e = load_relative(path, ep);
            ms.parts.push_back(MultisplittingPartSpec{up, ep, std::move(u), std::move(e)});
        }
        multis.push_back(std::move(ms));
    }
    return ProblemSpec{a_path,           b_path,           std::move(a),  std::move(b),
                       std::move(splittings), std::move(multis), tol, solver};
}

const SplittingSpec* find_splitting(const ProblemSpec& spec, const std::string& name) {
    for (const SplittingSpec& s : spec.splittings) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

const MultisplittingSpec* find_multisplitting(const ProblemSpec& spec, const std::string& name) {
    for (const MultisplittingSpec& m : spec.multisplittings) {
        if (m.name == name) return &m;
    }
    return nullptr;
}

}  // namespace propersplit
