#pragma once

#include <optional>
#include <string>
#include <vector>

#include "propersplit/matrix.hpp"
#include "propersplit/solver.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

/// A named splitting read from a problem file. a defaults to the problem
/// matrix; a per-splitting `a =` override allows comparisons across two
/// systems sharing one file.
struct SplittingSpec {
    std::string name;
    std::string u_path;
    std::string a_path;  // empty when inherited from [problem]
    Matrix u;
    Matrix a;
};

struct MultisplittingPartSpec {
    std::string u_path;
    std::string e_path;
    Matrix u;
    Matrix e;
};

struct MultisplittingSpec {
    std::string name;
    std::vector<MultisplittingPartSpec> parts;
};

/// Parsed and fully loaded problem file: the matrices are read eagerly so
/// later command code never touches the filesystem. Paths are kept exactly
/// as written (they are resolved relative to the spec file's directory).
struct ProblemSpec {
    std::string a_path;
    std::string b_path;  // empty when absent
    Matrix a;
    std::optional<Matrix> b;
    std::vector<SplittingSpec> splittings;
    std::vector<MultisplittingSpec> multisplittings;
    ToleranceConfig tolerances;
    SolveConfig solver;
};

/// Loads a declarative problem file.
///
/// Grammar (one statement per line, full-line # comments, blank lines
/// ignored):
///
///   [problem]
///   a = <matrix path>            required, .mtx or .csv
///   b = <matrix path>            optional right-hand side (row or column)
///
///   [splitting <name>]           any number of sections
///   u = <matrix path>            required
///   a = <matrix path>            optional override of the problem matrix
///
///   [multisplitting <name>]      any number of sections
///   part = <u path>, <e path>    one line per part, in k order
///
///   [tolerance]                  optional overrides
///   rank_tol_factor = <x> | sign_tol = <x> | residual_tol = <x> | eig_tol = <x>
///
///   [solver]                     optional overrides
///   max_iters = <n> | step_tol = <x> | track_history = <bool>
///
/// Names must be unique across splittings and multisplittings. Unknown
/// sections or keys, duplicate keys and malformed values raise ParseError
/// with the offending line number; unreadable matrix files raise IoError.
ProblemSpec load_problem(const std::string& path);

const SplittingSpec* find_splitting(const ProblemSpec& spec, const std::string& name);
const MultisplittingSpec* find_multisplitting(const ProblemSpec& spec, const std::string& name);

}  // namespace propersplit
