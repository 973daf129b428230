#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "propersplit/comparison.hpp"
#include "propersplit/matrix.hpp"
#include "propersplit/multisplitting.hpp"
#include "propersplit/solver.hpp"
#include "propersplit/splitting.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

/// Minimal JSON value for deterministic reports: objects keep keys sorted
/// (std::map) and doubles are printed with %.17g, so identical data always
/// serializes to identical bytes. Non-finite doubles render as null.
class Json {
public:
    using Array = std::vector<Json>;
    using Object = std::map<std::string, Json>;

    Json() : v_(nullptr) {}
    Json(std::nullptr_t) : v_(nullptr) {}
    Json(bool b) : v_(b) {}
    Json(int i) : v_(static_cast<std::int64_t>(i)) {}
    Json(std::int64_t i) : v_(i) {}
    Json(double d) : v_(d) {}
    Json(const char* s) : v_(std::string(s)) {}
    Json(std::string s) : v_(std::move(s)) {}
    Json(Array a) : v_(std::move(a)) {}
    Json(Object o) : v_(std::move(o)) {}

    /// Pretty-prints with two-space indentation and a trailing newline.
    std::string dump() const;

private:
    void write(std::string& out, int depth) const;

    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> v_;
};

Json to_json(const Matrix& m);
Json to_json(const SplittingClassification& c);
Json to_json(const IdentityCheck& c);
Json to_json(const IdentityReport& r);
Json to_json(const HypothesisCheck& h);
Json to_json(const ComparisonVerdict& v);
Json to_json(const IterationReport& r, bool include_history);
Json to_json(const ExtremalBoundsReport& r);
Json to_json(const ToleranceConfig& cfg);
Json to_json(const SolveConfig& cfg);

}  // namespace propersplit
