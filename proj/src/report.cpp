#include "propersplit/report.hpp"

#include <cmath>
#include <cstdio>

#include "propersplit/io.hpp"

namespace propersplit {

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

void indent(std::string& out, int depth) { out.append(static_cast<size_t>(depth) * 2, ' '); }

}  // namespace

void Json::write(std::string& out, int depth) const {
    switch (v_.index()) {
        case 0:
            out += "null";
            break;
        case 1:
            out += std::get<bool>(v_) ? "true" : "false";
            break;
        case 2:
            out += std::to_string(std::get<std::int64_t>(v_));
            break;
        case 3: {
            double d = std::get<double>(v_);
            if (std::isfinite(d)) {
                out += format_double(d);
            } else {
                out += "null";
            }
            break;
        }
        case 4:
            escape_into(out, std::get<std::string>(v_));
            break;
        case 5: {
            const Array& a = std::get<Array>(v_);
            if (a.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (size_t i = 0; i < a.size(); ++i) {
                indent(out, depth + 1);
                a[i].write(out, depth + 1);
                if (i + 1 < a.size()) out += ',';
                out += '\n';
            }
            indent(out, depth);
            out += ']';
            break;
        }
        case 6: {
            const Object& o = std::get<Object>(v_);
            if (o.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            size_t i = 0;
            for (const auto& [key, value] : o) {
                indent(out, depth + 1);
                escape_into(out, key);
                out += ": ";
                value.write(out, depth + 1);
                if (++i < o.size()) out += ',';
                out += '\n';
            }
            indent(out, depth);
            out += '}';
            break;
        }
    }
}

std::string Json::dump() const {
    std::string out;
    write(out, 0);
    out += '\n';
    return out;
}

Json to_json(const Matrix& m) {
    Json::Array rows;
    rows.reserve(static_cast<size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) {
        Json::Array row;
        row.reserve(static_cast<size_t>(m.cols()));
        for (int j = 0; j < m.cols(); ++j) row.emplace_back(m(i, j));
        rows.emplace_back(std::move(row));
    }
    return Json(std::move(rows));
}

Json to_json(const SplittingClassification& c) {
    Json::Object o;
    o["convergent"] = c.convergent;
    o["nonnegative_I"] = c.nonnegative_I;
    o["nonnegative_II"] = c.nonnegative_II;
    o["proper"] = c.proper;
    o["proper_regular"] = c.proper_regular;
    o["rho"] = c.rho;
    o["weak_regular_I"] = c.weak_regular_I;
    o["weak_regular_II"] = c.weak_regular_II;
    return Json(std::move(o));
}

Json to_json(const IdentityCheck& c) {
    Json::Object o;
    o["name"] = c.name;
    o["pass"] = c.pass;
    o["residual"] = c.residual;
    return Json(std::move(o));
}

Json to_json(const IdentityReport& r) {
    Json::Object o;
    o["all_pass"] = r.all_pass;
    Json::Array checks;
    checks.reserve(r.checks.size());
    for (const IdentityCheck& c : r.checks) checks.push_back(to_json(c));
    o["checks"] = Json(std::move(checks));
    return Json(std::move(o));
}

Json to_json(const HypothesisCheck& h) {
    Json::Object o;
    o["name"] = h.name;
    o["residual"] = h.residual;
    o["satisfied"] = h.satisfied;
    return Json(std::move(o));
}

Json to_json(const ComparisonVerdict& v) {
    Json::Object o;
    o["alpha"] = v.alpha ? Json(*v.alpha) : Json(nullptr);
    o["applicable"] = v.applicable;
    o["conclusion_holds"] = v.conclusion_holds;
    Json::Array hs;
    hs.reserve(v.hypotheses_checked.size());
    for (const HypothesisCheck& h : v.hypotheses_checked) hs.push_back(to_json(h));
    o["hypotheses_checked"] = Json(std::move(hs));
    o["rho1"] = v.rho1;
    o["rho2"] = v.rho2;
    o["strict"] = v.strict;
    o["theorem_id"] = v.theorem_id;
    return Json(std::move(o));
}

Json to_json(const IterationReport& r, bool include_history) {
    Json::Object o;
    o["converged"] = r.converged;
    o["error_vs_pinv"] = r.error_vs_pinv;
    o["final_step"] = r.final_step;
    if (include_history) {
        Json::Array h;
        h.reserve(r.history.size());
        for (double s : r.history) h.emplace_back(s);
        o["history"] = Json(std::move(h));
    }
    o["iterations"] = r.iterations;
    o["normal_residual"] = r.normal_residual;
    o["nullspace_component"] = r.nullspace_component;
    o["rho_estimate"] = r.rho_estimate;
    o["solution"] = to_json(r.solution);
    return Json(std::move(o));
}

Json to_json(const ExtremalBoundsReport& r) {
    Json::Object o;
    o["applicable"] = r.applicable;
    o["bounds_hold"] = r.bounds_hold;
    Json::Array hs;
    hs.reserve(r.hypotheses_checked.size());
    for (const HypothesisCheck& h : r.hypotheses_checked) hs.push_back(to_json(h));
    o["hypotheses_checked"] = Json(std::move(hs));
    o["rho_hi"] = r.rho_hi;
    o["rho_lo"] = r.rho_lo;
    o["rho_multi"] = r.rho_multi;
    return Json(std::move(o));
}

Json to_json(const ToleranceConfig& cfg) {
    Json::Object o;
    o["eig_tol"] = cfg.eig_tol;
    o["rank_tol_factor"] = cfg.rank_tol_factor;
    o["residual_tol"] = cfg.residual_tol;
    o["sign_tol"] = cfg.sign_tol;
    return Json(std::move(o));
}

Json to_json(const SolveConfig& cfg) {
    Json::Object o;
    o["max_iters"] = cfg.max_iters;
    o["step_tol"] = cfg.step_tol;
    o["track_history"] = cfg.track_history;
    return Json(std::move(o));
}

}  // namespace propersplit
