#pragma once

// The `edi` command line. Kept as a header so tests can drive run()
// in-process with captured streams.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edi/belief.hpp"
#include "edi/errors.hpp"
#include "edi/imaging.hpp"
#include "edi/io.hpp"
#include "edi/lab.hpp"
#include "edi/logic.hpp"
#include "edi/metric.hpp"
#include "edi/operators.hpp"
#include "edi/postulates.hpp"
#include "edi/weights.hpp"

namespace edi::cli {

enum Exit : int { kOk = 0, kDomain = 1, kUsage = 2 };

namespace detail {

using io::Json;

struct Common {
    std::string format = "json";
    std::string inner = "rcp";
    std::string eta = "1";
    std::string distance;
};

inline void add_common(CLI::App* c, Common& o) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "human"}));
    c->add_option("--inner", o.inner, "Inner weight for composite operators")->check(CLI::IsMember({"rcp", "dfr"}));
    c->add_option("--eta", o.eta, "Weight parameter eta (rational, e.g. 1/10000)");
    c->add_option("--distance", o.distance, "Custom distance table (JSON)");
}

// Hamming unless a table is given; a table that is not a pseudo-distance
// is refused with the failing checks named.
inline PseudoDistance pick_distance(const Common& o, const Vocabulary& v) {
    if (o.distance.empty()) return hamming(v);
    auto loaded = io::load_distance(o.distance);
    if (loaded.distance.vocabulary().atoms() != v.atoms())
        throw InvalidVocabulary("distance table atoms do not match the belief state's atoms");
    if (!loaded.report.is_pseudo_distance()) {
        std::string failed;
        for (const auto& c : loaded.report.checks)
            if (!c.holds && c.name != "faithfulness") failed += (failed.empty() ? "" : ", ") + c.name;
        throw InvalidDistance("'" + o.distance + "' is not a pseudo-distance (fails " + failed + ")");
    }
    return loaded.distance;
}

inline OperatorOptions options(const Common& o, PseudoDistance d) {
    OperatorOptions opts{std::move(d)};
    opts.inner = o.inner;
    opts.eta = parse_rational(o.eta);
    return opts;
}

inline void print_state_human(std::ostream& out, const BeliefState& b) {
    for (World w : canonical_worlds(b.vocabulary()))
        out << "  " << render(w, b.vocabulary()) << "  " << to_decimal(b[w], 12) << "\n";
}

// ---------------------------------------------------------------------------
// change
// ---------------------------------------------------------------------------

struct ChangeArgs {
    Common common;
    std::string op, state, evidence;
    std::size_t iterations = 1;
    bool verbose = false;
};

inline int cmd_change(const ChangeArgs& a, std::ostream& out) {
    BeliefState b = io::load_belief_state(a.state);
    const Vocabulary& v = b.vocabulary();
    WorldSet evidence = models(parse_formula(a.evidence, v), v);
    ChangeOperator op = make_operator(a.op, options(a.common, pick_distance(a.common, v)));
    if (a.iterations < 1) throw InvalidParameter("iterations must be at least 1");

    std::vector<ChangeResult> steps;
    steps.push_back(op(b, evidence));
    while (steps.size() < a.iterations) steps.push_back(op(steps.back().posterior, evidence));

    if (a.common.format == "human") {
        out << "operator " << op.name << ", evidence " << a.evidence << " (" << render(evidence, v) << ")\n";
        for (std::size_t t = 0; t < steps.size(); ++t) {
            if (steps.size() > 1) out << "t=" << t + 1 << "\n";
            if (a.verbose) out << "  gamma " << to_decimal(steps[t].gamma, 12) << "\n";
            print_state_human(out, steps[t].posterior);
        }
        return kOk;
    }
    auto entry = [&](const ChangeResult& r) {
        return a.verbose ? io::change_result_json(r, true) : io::probabilities_json(r.posterior);
    };
    if (steps.size() == 1) {
        out << entry(steps.front()).dump() << "\n";
    } else {
        Json traj = Json::array();
        for (const auto& s : steps) traj.push_back(entry(s));
        out << Json{{"trajectory", traj}}.dump() << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// check-weights
// ---------------------------------------------------------------------------

struct CheckWeightsArgs {
    Common common;
    std::string weight;
    std::size_t atoms = 2;
    std::string li_x = "0";
    std::string expect;
};

inline const std::vector<std::string>& weight_names() {
    static const std::vector<std::string> names = {"rcp",     "dfr",     "bc",      "li",      "gi",
                                                   "zero",    "dct-rev", "cls-rev", "cls-upd", "dct-upd"};
    return names;
}

inline WeightFunction named_weight(const std::string& name, const OperatorOptions& o, const Rational& li_x) {
    const PseudoDistance& d = o.distance;
    if (name == "rcp") return rcp_weight(d, o.eta);
    if (name == "dfr") return dfr_weight(d, o.eta);
    if (name == "bc") return bc_weight();
    if (name == "li") return li_weight(d, li_x);
    if (name == "gi") return gi_weight(d);
    if (name == "zero") return zero_weight(inner_weight(o));
    if (name == "dct-rev") return dct_rev_weight(inner_weight(o));
    // Same construction as the cls-rev operator.
    if (name == "cls-rev") return cls_rev_weight(dalal_revision(d), zero_weight(inner_weight(o)));
    if (name == "cls-upd") return cls_upd_weight(pma_update(d), inner_weight(o));
    if (name == "dct-upd") return dct_upd_weight(inner_weight(o));
    throw InvalidParameter("unknown weight '" + name + "'");
}

// Priors for prior-dependent weights: the postulate grid where it is
// defined, otherwise the point masses plus the uniform state.
inline std::vector<BeliefState> weight_priors(const WeightFunction& f, const Vocabulary& v) {
    if (!f.uses_prior()) return {};
    if (v.size() <= kMaxSuiteAtoms) return belief_grid(v, default_grid_denominator(v.size()));
    std::vector<BeliefState> out;
    for (World w : canonical_worlds(v)) out.push_back(BeliefState::point_mass(v, w));
    out.push_back(BeliefState::uniform_on(v, WorldSet::full(v.world_count())));
    return out;
}

inline std::string describe_witness(const PropertyWitness& w, const Vocabulary& v) {
    std::ostringstream s;
    s << "evidence " << render(w.evidence, v);
    if (w.prior) s << ", prior " << render(*w.prior);
    s << ", worlds";
    for (World x : w.worlds) s << " " << render(x, v);
    if (!w.values.empty()) {
        s << ", values";
        for (const auto& x : w.values) s << " " << to_string(x);
    }
    return s.str();
}

inline int cmd_check_weights(const CheckWeightsArgs& a, std::ostream& out, std::ostream& err) {
    Vocabulary v = Vocabulary::numbered(a.atoms);
    if (!a.common.distance.empty()) v = io::load_distance(a.common.distance).distance.vocabulary();
    OperatorOptions opts = options(a.common, pick_distance(a.common, v));

    // Parse expectations before the (possibly long) check.
    struct Expect {
        std::string name;
        std::vector<Property> props;
    };
    std::vector<Expect> expected;
    std::stringstream list(a.expect);
    for (std::string item; std::getline(list, item, ',');) {
        if (item.empty()) continue;
        if (item == "inverse-distance")
            expected.push_back({item, {Property::NonNegativity, Property::Identity, Property::Symmetry,
                                       Property::WeakInversity}});
        else if (item == "relaxed")
            expected.push_back({item, {Property::EvidenceRelaxation, Property::NonEvidenceRelaxation}});
        else if (auto p = property_from_name(item))
            expected.push_back({item, {*p}});
        else
            throw InvalidParameter("unknown property '" + item + "' in --expect");
    }

    WeightFunction f = named_weight(a.weight, opts, parse_rational(a.li_x));
    PropertyReport report = check_weight_properties(f, opts.distance, all_evidence_sets(v), weight_priors(f, v));

    if (a.common.format == "human") {
        out << "weight " << report.weight << " over " << report.domain << "\n";
        for (const auto& pv : report.verdicts) {
            out << "  " << property_name(pv.property) << ": " << (pv.holds ? "holds-on-suite" : "violated");
            if (pv.witness) out << " (" << describe_witness(*pv.witness, v) << ")";
            out << "\n";
        }
        out << "  inverse-distance: " << (report.inverse_distance() ? "yes" : "no") << "\n";
        out << "  relaxed: " << (report.relaxed() ? "yes" : "no") << "\n";
    } else {
        out << io::property_report_json(report, v).dump() << "\n";
    }

    int code = kOk;
    for (const auto& e : expected)
        for (Property p : e.props) {
            const auto& pv = report[p];
            if (pv.holds) continue;
            err << "expected " << e.name << " but " << property_name(p) << " is violated: "
                << describe_witness(*pv.witness, v) << "\n";
            code = kDomain;
            break;
        }
    return code;
}

// ---------------------------------------------------------------------------
// postulates
// ---------------------------------------------------------------------------

struct PostulatesArgs {
    Common common;
    std::string suite, op;
    std::size_t atoms = 2;
    std::optional<unsigned> grid;
    bool report_all = false;
};

// Exit 1 when a core postulate is violated, so scripts can gate on it.
inline int cmd_postulates(const PostulatesArgs& a, std::ostream& out, std::ostream& err) {
    Vocabulary v = Vocabulary::numbered(a.atoms);
    if (!a.common.distance.empty()) v = io::load_distance(a.common.distance).distance.vocabulary();
    ChangeOperator op = make_operator(a.op, options(a.common, pick_distance(a.common, v)));
    SuiteConfig cfg{v.size(), a.grid.value_or(default_grid_denominator(v.size()))};
    PostulateReport r = a.suite == "revision" ? check_revision(op, v, cfg) : check_update(op, v, cfg);

    if (a.common.format == "human") {
        out << r.suite_kind << " postulates for " << r.op << ": " << r.suite.states << " states x "
            << r.suite.evidence_sets << " evidence sets (" << r.suite.atoms << " atoms, grid 1/" << r.suite.grid
            << ")\n";
        for (const auto& res : r.results) {
            if (!a.report_all && !is_core(res.postulate)) continue;
            out << "  " << postulate_label(res.postulate) << (is_core(res.postulate) ? " [core]" : "") << ": "
                << verdict_name(res.verdict) << " (" << res.checked << " checked, " << res.vacuous << " vacuous, "
                << res.violations << " violations)\n";
            if (res.witness) out << "    witness: " << res.witness->detail << "\n";
        }
    } else {
        out << io::postulate_report_json(r, a.report_all).dump() << "\n";
    }
    if (!r.cores_hold()) {
        err << "core postulate violated for " << r.op << "\n";
        return kDomain;
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

struct ConvergeArgs {
    std::string format = "human";
    std::string weight = "rcp";
    std::string eta = "1";
    std::size_t atoms = 3, trials = 100, iterations = 10, workers = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> forced_evidence_size;
    std::string out, out_dir;
};

inline int cmd_converge(const ConvergeArgs& a, std::ostream& out) {
    lab::TrialConfig c;
    c.weight = lab::parse_weight_kind(a.weight);
    c.eta = parse_rational(a.eta);
    c.atoms = a.atoms;
    c.trials = a.trials;
    c.iterations = a.iterations;
    c.seed = *a.seed;
    c.workers = a.workers;
    c.forced_evidence_size = a.forced_evidence_size;
    auto table = lab::run_convergence(c);

    std::string path = a.out;
    if (path.empty() && !a.out_dir.empty()) path = (std::filesystem::path(a.out_dir) / lab::csv_filename(c)).string();
    if (path.empty()) {
        out << lab::csv_text(table);
        return kOk;
    }
    lab::emit_csv(table, path);
    if (a.format == "json") {
        Json rows = Json::array();
        for (const auto& m : table.mean_abs_diff) rows.push_back(to_string(m));
        out << Json{{"csv", path}, {"mean_abs_diff", rows}}.dump() << "\n";
    } else {
        out << "wrote " << path << "\n" << lab::emit_summary(table);
    }
    return kOk;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Expected distance imaging: probabilistic belief revision and update"};
    app.name("edi");
    app.require_subcommand(1);

    detail::ChangeArgs ch;
    auto* change = app.add_subcommand("change", "Apply a belief change operator to a state");
    change->add_option("--op", ch.op, "Operator")->required()->check(CLI::IsMember(operator_names()));
    change->add_option("--state", ch.state, "Belief state file (JSON)")->required();
    change->add_option("--evidence", ch.evidence, "Evidence formula")->required();
    change->add_option("--iterations", ch.iterations, "Apply repeatedly and print the trajectory");
    change->add_flag("--verbose", ch.verbose, "Include gamma and the evidence models");
    detail::add_common(change, ch.common);

    detail::CheckWeightsArgs cw;
    auto* check = app.add_subcommand("check-weights", "Check a weight function against the weight properties");
    check->add_option("--weight", cw.weight, "Weight function")->required()->check(
        CLI::IsMember(detail::weight_names()));
    check->add_option("--atoms", cw.atoms, "Number of atoms (numbered vocabulary p1..pn)")->check(CLI::Range(1, 4));
    check->add_option("--li-x", cw.li_x, "Value of the li weight off the evidence");
    check->add_option("--expect", cw.expect, "Comma-separated properties that must hold");
    detail::add_common(check, cw.common);

    detail::PostulatesArgs pa;
    auto* post = app.add_subcommand("postulates", "Check an operator against the rationality postulates");
    post->add_option("--suite", pa.suite, "Postulate family")->required()->check(
        CLI::IsMember({"revision", "update"}));
    post->add_option("--op", pa.op, "Operator")->required()->check(CLI::IsMember(operator_names()));
    post->add_option("--atoms", pa.atoms, "Number of atoms")->check(CLI::Range(1, 3));
    post->add_option("--grid", pa.grid, "Grid denominator for belief states")->check(CLI::Range(1, 64));
    post->add_flag("--report-all", pa.report_all, "Report every postulate, not only the core ones");
    detail::add_common(post, pa.common);

    detail::ConvergeArgs cv;
    auto* conv = app.add_subcommand("converge", "Run the repeated-imaging convergence experiment");
    conv->add_option("--weight", cv.weight, "Weight function")->check(CLI::IsMember({"rcp", "dfr", "bc"}));
    conv->add_option("--eta", cv.eta, "Weight parameter eta (rational)");
    conv->add_option("--atoms", cv.atoms, "Number of atoms")->check(CLI::Range(1, 16));
    conv->add_option("--trials", cv.trials, "Number of trials");
    conv->add_option("--iterations", cv.iterations, "Iterations per trial");
    conv->add_option("--seed", cv.seed, "Random seed (required)")->required();
    conv->add_option("--workers", cv.workers, "Worker threads, 0 = all cores");
    conv->add_option("--forced-evidence-size", cv.forced_evidence_size, "Force evidence with exactly k models");
    conv->add_option("--out", cv.out, "CSV output path (stdout if omitted)");
    conv->add_option("--out-dir", cv.out_dir, "Directory for the CSV, named after the configuration");
    conv->add_option("--format", cv.format, "Summary format")->check(CLI::IsMember({"json", "human"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*change) return detail::cmd_change(ch, out);
        if (*check) return detail::cmd_check_weights(cw, out, err);
        if (*post) return detail::cmd_postulates(pa, out, err);
        if (*conv) return detail::cmd_converge(cv, out);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kDomain;
    } catch (const std::exception& e) {
        err << "Error: " << e.what() << "\n";
        return kDomain;
    }
    return kUsage;
}

} // namespace edi::cli
