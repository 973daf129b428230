#pragma once

#include <stdexcept>
#include <string>

namespace propersplit {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operand shapes are incompatible.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A matrix failed construction-time validation (empty, NaN, Inf).
class InvalidMatrix : public Error {
public:
    using Error::Error;
};

/// An iterative kernel exhausted its sweep budget.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// A series or induced construction requires rho < 1 and does not have it.
class Diverging : public Error {
public:
    using Error::Error;
};

/// The pair (A, U) violates the range or nullspace condition.
class NotProper : public Error {
public:
    NotProper(const std::string& msg, double range_res, double nullspace_res, int part = -1)
        : Error(msg), range_residual(range_res), nullspace_residual(nullspace_res), part_index(part) {}
    double range_residual;
    double nullspace_residual;
    int part_index;  // -1 for single splittings, k for multisplitting parts
};

/// Weight matrices are not a diagonal nonnegative partition of identity.
class BadWeights : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an analysis routine failed.
class PreconditionFailed : public Error {
public:
    using Error::Error;
};

/// The power method failed to settle within its iteration budget.
class PowerMethodStall : public Error {
public:
    using Error::Error;
};

/// A comparison rule needs a contraction factor and none was supplied.
class MissingAlpha : public Error {
public:
    using Error::Error;
};

/// Two operands were expected to share the same matrix A.
class MatrixMismatch : public Error {
public:
    using Error::Error;
};

/// Two multisplittings were expected to share their weight family.
class WeightMismatch : public Error {
public:
    using Error::Error;
};

/// R(E_k) is not contained in R(A^T) for some weight index k.
class RangeConditionFailed : public Error {
public:
    RangeConditionFailed(const std::string& msg, int k, double res)
        : Error(msg), part_index(k), residual(res) {}
    int part_index;
    double residual;
};

/// pinv(A) has a negative entry where nonnegativity is required.
class NotSemimonotone : public Error {
public:
    using Error::Error;
};

/// An internal cross-check identity failed; indicates an engine defect.
class SoundnessAlarm : public Error {
public:
    using Error::Error;
};

/// A file or problem description could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A file could not be opened or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace propersplit
