#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "propersplit/comparison.hpp"
#include "propersplit/errors.hpp"
#include "propersplit/io.hpp"
#include "propersplit/multisplitting.hpp"
#include "propersplit/problem.hpp"
#include "propersplit/report.hpp"
#include "propersplit/solver.hpp"
#include "propersplit/splitting.hpp"
#include "propersplit/version.hpp"

namespace ps = propersplit;

namespace {

struct Outcome {
    ps::Json report;
    int exit_code = 0;
    // Extra artifacts written under --out, path suffix -> matrix.
    std::vector<std::pair<std::string, ps::Matrix>> files;
};

// Usage problems share exit code 2 with file parsing; the message carries
// the distinction.
[[noreturn]] void usage_error(const std::string& msg) { throw ps::ParseError(msg); }

ps::Json inputs_json(const ps::ProblemSpec& spec) {
    ps::Json::Object o;
    o["a_path"] = spec.a_path;
    o["b_path"] = spec.b_path.empty() ? ps::Json(nullptr) : ps::Json(spec.b_path);
    ps::Json::Object sp;
    for (const ps::SplittingSpec& s : spec.splittings) {
        ps::Json::Object e;
        if (!s.a_path.empty()) e["a_path"] = s.a_path;
        e["u_path"] = s.u_path;
        sp[s.name] = ps::Json(std::move(e));
    }
    o["splittings"] = ps::Json(std::move(sp));
    ps::Json::Object mp;
    for (const ps::MultisplittingSpec& m : spec.multisplittings) {
        ps::Json::Array parts;
        for (const ps::MultisplittingPartSpec& p : m.parts) {
            ps::Json::Object q;
            q["e_path"] = p.e_path;
            q["u_path"] = p.u_path;
            parts.emplace_back(std::move(q));
        }
        ps::Json::Object e;
        e["parts"] = ps::Json(std::move(parts));
        mp[m.name] = ps::Json(std::move(e));
    }
    o["multisplittings"] = ps::Json(std::move(mp));
    o["solver"] = ps::to_json(spec.solver);
    o["tolerance"] = ps::to_json(spec.tolerances);
    return ps::Json(std::move(o));
}

ps::Json make_report(const std::string& command, const ps::ProblemSpec& spec, ps::Json results) {
    ps::Json::Object o;
    o["command"] = command;
    o["inputs"] = inputs_json(spec);
    o["results"] = std::move(results);
    o["version"] = ps::kVersion;
    return ps::Json(std::move(o));
}

ps::ProperSplitting build_splitting(const ps::ProblemSpec& spec, const ps::SplittingSpec& s) {
    return ps::make_splitting(s.a, s.u, spec.tolerances);
}

ps::ProperMultisplitting build_multisplitting(const ps::ProblemSpec& spec,
                                              const ps::MultisplittingSpec& m) {
    std::vector<ps::Matrix> us, es;
    us.reserve(m.parts.size());
    es.reserve(m.parts.size());
    for (const ps::MultisplittingPartSpec& p : m.parts) {
        us.push_back(p.u);
        es.push_back(p.e);
    }
    return ps::make_multisplitting(spec.a, us, es, spec.tolerances);
}

Outcome cmd_classify(const ps::ProblemSpec& spec, const std::vector<std::string>& targets) {
    std::vector<const ps::SplittingSpec*> list;
    if (targets.empty()) {
        for (const ps::SplittingSpec& s : spec.splittings) list.push_back(&s);
        if (list.empty()) usage_error("classify: the problem file defines no splittings");
    } else {
        for (const std::string& name : targets) {
            const ps::SplittingSpec* s = ps::find_splitting(spec, name);
            if (!s) {
                if (ps::find_multisplitting(spec, name)) {
                    usage_error("classify: target '" + name + "' is a multisplitting");
                }
                usage_error("classify: unknown target '" + name + "'");
            }
            list.push_back(s);
        }
    }

    ps::Json::Object results;
    for (const ps::SplittingSpec* s : list) {
        ps::ProperSplitting split = build_splitting(spec, *s);
        ps::Json::Object entry;
        entry["classification"] = ps::to_json(ps::classify(split, spec.tolerances));
        entry["identities"] = ps::to_json(ps::verify_splitting_identities(split, spec.tolerances));
        results[s->name] = ps::Json(std::move(entry));
    }
    return Outcome{make_report("classify", spec, ps::Json(std::move(results))), 0, {}};
}

Outcome cmd_solve(const ps::ProblemSpec& spec, const std::string& target) {
    if (!spec.b) usage_error("solve: the problem file provides no 'b'");

    ps::Json::Object results;
    std::optional<ps::IterationReport> rep;
    if (const ps::SplittingSpec* s = ps::find_splitting(spec, target)) {
        ps::ProperSplitting split = build_splitting(spec, *s);
        rep = ps::solve_single(split, *spec.b, std::nullopt, spec.solver, spec.tolerances);
        results["scheme"] = "single";
    } else if (const ps::MultisplittingSpec* m = ps::find_multisplitting(spec, target)) {
        ps::ProperMultisplitting ms = build_multisplitting(spec, *m);
        rep = ps::solve_multi(ms, *spec.b, std::nullopt, spec.solver, spec.tolerances);
        results["scheme"] = "multi";
    } else {
        usage_error("solve: unknown target '" + target + "'");
    }
    results["iteration"] = ps::to_json(*rep, spec.solver.track_history);
    results["target"] = target;
    return Outcome{make_report("solve", spec, ps::Json(std::move(results))),
                   rep->converged ? 0 : 4,
                   {}};
}

Outcome cmd_compare(const ps::ProblemSpec& spec, const std::vector<std::string>& targets,
                    const std::string& theorem, std::optional<double> alpha) {
    if (targets.size() != 2) usage_error("compare: exactly two --target names are required");
    if (theorem.empty()) usage_error("compare: --theorem is required");
    const std::string& n1 = targets[0];
    const std::string& n2 = targets[1];

    ps::ComparisonVerdict verdict;
    const ps::SplittingSpec* s1 = ps::find_splitting(spec, n1);
    const ps::SplittingSpec* s2 = ps::find_splitting(spec, n2);
    const ps::MultisplittingSpec* m1 = ps::find_multisplitting(spec, n1);
    const ps::MultisplittingSpec* m2 = ps::find_multisplitting(spec, n2);
    if (!s1 && !m1) usage_error("compare: unknown target '" + n1 + "'");
    if (!s2 && !m2) usage_error("compare: unknown target '" + n2 + "'");

    if (s1 && s2) {
        std::optional<ps::TheoremId> id = ps::theorem_from_string(theorem);
        if (!id) usage_error("compare: unknown theorem '" + theorem + "'");
        ps::ProperSplitting a = build_splitting(spec, *s1);
        ps::ProperSplitting b = build_splitting(spec, *s2);
        if (*id == ps::TheoremId::MAIN2 || *id == ps::TheoremId::MAIN5) {
            verdict = ps::compare_two_systems(a, b, *id, spec.tolerances);
        } else {
            verdict = ps::compare_same_A(a, b, *id, alpha, spec.tolerances);
        }
    } else if (m1 && m2) {
        ps::MultiCompareMode mode;
        if (theorem == "MULTI_BY_V") {
            mode = ps::MultiCompareMode::BY_V;
        } else if (theorem == "MULTI_BY_UPINV") {
            mode = ps::MultiCompareMode::BY_UPINV;
        } else {
            usage_error("compare: multisplitting targets need --theorem MULTI_BY_V or "
                        "MULTI_BY_UPINV");
        }
        ps::ProperMultisplitting a = build_multisplitting(spec, *m1);
        ps::ProperMultisplitting b = build_multisplitting(spec, *m2);
        verdict = ps::compare_multisplittings(a, b, mode, false, spec.tolerances);
    } else {
        usage_error("compare: targets must be two splittings or two multisplittings");
    }

    ps::Json::Object results;
    results["s1"] = n1;
    results["s2"] = n2;
    results["verdict"] = ps::to_json(verdict);
    int code = (verdict.applicable && !verdict.conclusion_holds) ? 5 : 0;
    return Outcome{make_report("compare", spec, ps::Json(std::move(results))), code, {}};
}

Outcome cmd_induce(const ps::ProblemSpec& spec, const std::string& target) {
    const ps::MultisplittingSpec* m = ps::find_multisplitting(spec, target);
    if (!m) {
        if (ps::find_splitting(spec, target)) {
            usage_error("induce: target '" + target + "' is a single splitting");
        }
        usage_error("induce: unknown target '" + target + "'");
    }
    ps::ProperMultisplitting ms = build_multisplitting(spec, *m);

    ps::InducedSplitting induced = [&]() {
        try {
            return ps::induced_splitting(ms, spec.tolerances);
        } catch (const ps::RangeConditionFailed&) {
            ps::Matrix proj = ms.a_pinv() * ms.a();
            for (int k = 0; k < ms.size(); ++k) {
                double r = ps::rel_residual(proj * ms.weight(k), ms.weight(k));
                std::cerr << "range condition part " << k << ": residual "
                          << ps::format_double(r) << "\n";
            }
            throw;
        }
    }();

    ps::Json::Object results;
    results["b"] = ps::to_json(induced.b);
    results["c"] = ps::to_json(induced.c);
    results["classification"] = ps::to_json(ps::classify(induced.splitting, spec.tolerances));
    results["range_condition"] = induced.range_condition;
    results["rho_h"] = ms.rho();
    results["target"] = target;

    Outcome out{make_report("induce", spec, ps::Json(std::move(results))), 0, {}};
    out.files.emplace_back("induced_B.mtx", induced.b);
    out.files.emplace_back("induced_C.mtx", induced.c);
    return out;
}

int run(const std::string& command, const std::string& spec_path,
        const std::vector<std::string>& targets, const std::string& theorem,
        std::optional<double> alpha, const std::string& out_dir) {
    ps::ProblemSpec spec = ps::load_problem(spec_path);

    Outcome outcome;
    if (command == "classify") {
        outcome = cmd_classify(spec, targets);
    } else if (command == "solve") {
        if (targets.size() != 1) usage_error("solve: exactly one --target name is required");
        outcome = cmd_solve(spec, targets[0]);
    } else if (command == "compare") {
        outcome = cmd_compare(spec, targets, theorem, alpha);
    } else {
        if (targets.size() != 1) usage_error("induce: exactly one --target name is required");
        outcome = cmd_induce(spec, targets[0]);
    }

    std::string text = outcome.report.dump();
    std::cout << text;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::filesystem::path base(out_dir);
        ps::write_text_file((base / "report.json").string(), text);
        for (const auto& [name, matrix] : outcome.files) {
            ps::write_matrix((base / name).string(), matrix);
        }
    }
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proper splitting analysis and stationary solvers"};
    app.set_version_flag("--version", std::string("propersplit ") + ps::kVersion);
    app.require_subcommand(1);

    std::string spec_path, theorem, out_dir;
    std::vector<std::string> targets;
    std::optional<double> alpha;

    CLI::App* classify = app.add_subcommand("classify", "Classify splittings of the problem");
    CLI::App* solve = app.add_subcommand("solve", "Run the stationary iteration for a target");
    CLI::App* compare = app.add_subcommand("compare", "Check a comparison theorem on two targets");
    CLI::App* induce = app.add_subcommand("induce", "Induced splitting of a multisplitting");
    for (CLI::App* sub : {classify, solve, compare, induce}) {
        sub->add_option("--spec", spec_path, "Problem file")->required();
        sub->add_option("--out", out_dir, "Directory for report.json and emitted matrices");
    }
    classify->add_option("--target", targets, "Splitting names (default: all)");
    solve->add_option("--target", targets, "Splitting or multisplitting name")->required();
    compare->add_option("--target", targets, "The two names to compare (s1, s2)")->required();
    compare->add_option("--theorem", theorem,
                        "Comparison rule: CALCOLO_3, D4_I, D4_II, D4_III, MAIN2, MAIN5, MAIN6, "
                        "MAIN7, MAIN8, MAIN9, NEG_PINV, MULTI_BY_V, MULTI_BY_UPINV")
        ->required();
    compare->add_option("--alpha", alpha, "Contraction factor for MAIN6/MAIN7/MAIN8");
    induce->add_option("--target", targets, "Multisplitting name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), spec_path, targets, theorem, alpha,
                   out_dir);
    } catch (const ps::NotProper& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "  range projector residual: " << ps::format_double(e.range_residual) << "\n"
                  << "  nullspace projector residual: "
                  << ps::format_double(e.nullspace_residual) << "\n";
        return 3;
    } catch (const ps::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ps::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ps::MissingAlpha& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ps::RangeConditionFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    } catch (const ps::SoundnessAlarm& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const ps::NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ps::Diverging& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ps::PowerMethodStall& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ps::Error& e) {
        // DimensionMismatch, InvalidMatrix, BadWeights, NotSemimonotone,
        // PreconditionFailed, MatrixMismatch, WeightMismatch: input fails
        // mathematical validation.
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
