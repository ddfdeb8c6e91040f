#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>

#include "pathdep/dsep.hpp"
#include "pathdep/error.hpp"
#include "pathdep/families.hpp"
#include "pathdep/gaussian.hpp"
#include "pathdep/model_io.hpp"
#include "pathdep/ordering.hpp"
#include "pathdep/random.hpp"
#include "pathdep/suite.hpp"
#include "pathdep/sweep.hpp"
#include "pathdep/verify.hpp"

namespace pathdep::cli {

namespace {

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

VertexSet lookup_set(const Dag& dag, const std::vector<std::string>& names) {
    VertexSet out;
    for (const std::string& n : names) {
        if (!n.empty()) out.insert(dag.at(n));
    }
    return out;
}

std::string join_pairs(const Dag& dag, const std::vector<std::pair<Vertex, Vertex>>& pairs) {
    std::string s;
    for (const auto& [f, n] : pairs) {
        if (!s.empty()) s += ' ';
        s += dag.name(f) + ">" + dag.name(n);
    }
    return s.empty() ? "-" : s;
}

// Options shared by several subcommands; bound once per run.
struct Args {
    std::string model;
    std::string a, c;
    std::vector<std::string> given, z, z1, z2;
    std::string x, y;
    bool info = false;

    std::string kind;
    std::size_t chain_length = 0;
    std::optional<std::size_t> b_side;
    std::optional<std::uint64_t> opt_seed;
    bool conformance = false;

    std::string suite;
    std::uint64_t seed = 0;
    std::size_t trials = 0;

    std::size_t max_length = 0;
    double coefficient = 1.0;
    double variance = 1.0;
    std::string out_path;

    SearchConfig search;
};

CLI::Option* add_set(CLI::App* sub, const std::string& flag, std::vector<std::string>& target,
                     const std::string& what) {
    return sub->add_option(flag, target, what)->delimiter(',')->expected(0, -1);
}

int cmd_validate(const Args& args, std::ostream& out) {
    const Model m = load_model(args.model);
    out << "ok: " << m.dag.size() << " vertices, " << m.dag.edges().size() << " edges, "
        << (m.dag.singly_connected() ? "singly connected" : "multiply connected") << "\n";
    return kExitOk;
}

int cmd_sigma(const Args& args, std::ostream& out) {
    const Model m = load_model(args.model);
    const CovMatrix sigma = build_sigma(m.dag, m.params);
    out << "vertex";
    for (const std::string& n : m.dag.names()) out << ',' << n;
    out << "\n";
    for (Vertex u : m.dag.vertices()) {
        out << m.dag.name(u);
        for (Vertex v : m.dag.vertices()) out << ',' << num17(sigma(u, v));
        out << "\n";
    }
    return kExitOk;
}

int cmd_pcorr(const Args& args, std::ostream& out) {
    const Model m = load_model(args.model);
    const Vertex a = m.dag.at(args.a);
    const Vertex c = m.dag.at(args.c);
    const double r2 = pcorr2(build_sigma(m.dag, m.params), a, c, lookup_set(m.dag, args.given));
    out << format_double(r2) << "\n";
    if (args.info) out << "info " << format_double(info_proper(r2)) << "\n";
    return kExitOk;
}

int cmd_dsep(const Args& args, std::ostream& out) {
    const Model m = load_model(args.model);
    auto split = [](const std::string& text) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == ',') {
                parts.push_back(text.substr(start, i - start));
                start = i + 1;
            }
        }
        return parts;
    };
    const SeparationQuery q{lookup_set(m.dag, split(args.x)), lookup_set(m.dag, split(args.y)),
                            lookup_set(m.dag, args.given)};
    out << (d_separated(m.dag, q) ? "separated" : "connected") << "\n";
    return kExitOk;
}

int cmd_partition(const Args& args, std::ostream& out) {
    const Model m = load_model(args.model);
    const PathFrame frame(m.dag, m.dag.at(args.a), m.dag.at(args.c));
    const VertexSet z = lookup_set(m.dag, args.z);
    const ConditioningPartition p = frame.partition(z);
    for (Vertex v : z) {
        out << m.dag.name(v) << ": x* " << m.dag.name(p.meetings.at(v).x_star) << ", class "
            << to_string(frame.classify(v)) << "\n";
    }
    for (ConditioningClass k :
         {ConditioningClass::NonCollider, ConditioningClass::ColliderCollider, ConditioningClass::ColliderNonCollider}) {
        out << "Z(" << to_string(k) << ") " << m.dag.format_set(p.members(k)) << "  N(" << to_string(k) << ") "
            << m.dag.format_set(p.nearest(k)) << "\n";
    }
    return kExitOk;
}

int cmd_precedes(const Args& args, std::ostream& out) {
    const Model m = load_model(args.model);
    const PathFrame frame(m.dag, m.dag.at(args.a), m.dag.at(args.c));
    const OrderWitness w = frame.precedes(lookup_set(m.dag, args.z1), lookup_set(m.dag, args.z2));
    out << (w.holds ? "holds" : "fails") << "\n";
    auto clause = [&](const ClauseResult& r, const char* further_from, const char* nearer_from) {
        out << to_string(r.cls) << ": " << (r.holds ? "holds" : "fails") << ", further " << m.dag.format_set(r.further)
            << " from " << further_from << ", nearer " << m.dag.format_set(r.nearer) << " from " << nearer_from
            << ", pairs " << join_pairs(m.dag, r.pairing) << "\n";
    };
    clause(w.nc, "z2", "z1");
    clause(w.c_c, "z1", "z2");
    clause(w.c_nc, "z1", "z2");
    return w.holds ? kExitOk : kExitViolated;
}

int cmd_check_lemma(const Args& args, std::ostream& out) {
    const FamilyKind kind = parse_family_kind(args.kind);
    const Family base = canonical_family(kind);
    const Family fam = make_family(kind, args.chain_length ? args.chain_length : base.chain_length,
                                   args.b_side.value_or(base.b_side));
    GaussianParams params = GaussianParams::unit(fam.dag);
    if (args.opt_seed) {
        Rng rng(*args.opt_seed);
        params = sample_family_params(fam, rng);
    }
    const LemmaResult r = check_lemma(fam, params);
    out << to_string(kind) << " chain_length " << fam.chain_length << " b_side " << fam.b_side << "\n";
    for (const ChainValue& v : r.chain) out << "rho2 given " << v.label << " = " << num17(v.rho2) << "\n";
    if (r.blocked) out << "rho2 given B and " << fam.dag.name(*fam.blocker) << " = " << num17(*r.blocked) << "\n";
    bool ok = r.holds;
    out << (r.holds ? "holds" : "violated: " + r.detail) << "\n";
    if (args.conformance) {
        const ConformanceReport rep = conformance_report(fam, params);
        std::size_t failed = 0;
        for (const IdentityCheck& id : rep.identities) {
            if (!id.holds) {
                ++failed;
                out << "identity failed: " << id.name << " lhs " << num17(id.lhs) << " rhs " << num17(id.rhs) << "\n";
            }
        }
        out << "identities " << rep.identities.size() - failed << "/" << rep.identities.size() << " hold\n";
        std::size_t points = 0;
        bool sign_ok = true;
        try {
            points = appendix_sign_probe(fam, params).size();
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ConformanceFailure) throw;
            sign_ok = false;
            out << "sign probe failed: " << e.what() << "\n";
        }
        if (sign_ok) out << "sign probe " << points << " points agree\n";
        ok = ok && rep.passes() && sign_ok;
    }
    return ok ? kExitOk : kExitViolated;
}

int cmd_suite(const Args& args, std::ostream& out) {
    const SuiteId id = parse_suite_id(args.suite);
    const TrialReport rep = run_trial_suite(id, args.seed, args.trials);
    out << "suite " << to_string(id) << ": trials " << rep.trials << ", violations " << rep.violations.size()
        << " (allowed " << rep.allowed_violations << "), excluded " << rep.excluded << ", max violation "
        << num17(rep.max_violation_magnitude) << "\n";
    const std::size_t shown = std::min<std::size_t>(rep.violations.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
        const Violation& v = rep.violations[i];
        out << "  seed " << v.seed << " lhs " << num17(v.lhs) << " rhs " << num17(v.rhs) << ": " << v.detail << "\n";
    }
    out << (rep.passes() ? "pass" : "fail") << "\n";
    return rep.passes() ? kExitOk : kExitViolated;
}

// CSV goes to --out when given (summary on stdout), otherwise to stdout
// after '#' summary lines.
template <class WriteCsv>
void emit(const std::string& path, std::ostream& out, const std::vector<std::string>& summary, WriteCsv&& write) {
    if (path.empty()) {
        for (const std::string& s : summary) out << "# " << s << "\n";
        write(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::DomainError, "cannot write '" + path + "'");
    write(f);
    for (const std::string& s : summary) out << s << "\n";
}

int cmd_sweep(const Args& args, std::ostream& out) {
    const FamilyKind kind = parse_family_kind(args.kind);
    const SweepTable t = sweep_chain_length(kind, args.max_length, args.b_side, {args.coefficient, args.variance});
    const std::vector<std::string> summary{
        std::string(to_string(kind)) + " b_side " + std::to_string(t.b_side),
        "reference " + t.reference_label + " = " + num17(t.reference),
        std::string("trend ") + (t.trend == Trend::Increasing ? "increasing" : "decreasing") + ", approach " +
            (t.approach == Approach::WithDistance ? "with distance" : "toward path"),
        std::string("monotone ") + (t.monotone ? "yes" : "no") + ", bounded " + (t.bounded ? "yes" : "no"),
    };
    emit(args.out_path, out, summary, [&](std::ostream& s) { write_sweep_csv(s, t); });
    return t.shape_ok() ? kExitOk : kExitViolated;
}

int cmd_search(const Args& args, std::ostream& out) {
    const SearchResult r = counterexample_search(args.search);
    if (!r.witness) {
        out << "not found: " << r.trials_run << " trials, " << r.instances_swept << " instances swept\n";
        return kExitViolated;
    }
    const Witness& w = *r.witness;
    const Dag& g = w.graph;
    std::string edges;
    for (const Edge& e : g.edges()) {
        if (!edges.empty()) edges += ' ';
        edges += g.name(e.parent) + "->" + g.name(e.child);
    }
    std::string crossings;
    for (double x : w.crossings) crossings += (crossings.empty() ? "" : " ") + num17(x);
    const std::vector<std::string> summary{
        "found at trial " + std::to_string(w.trial) + " of " + std::to_string(r.trials_run),
        "graph " + edges + (g.singly_connected() ? " (singly connected)" : " (multiply connected)"),
        "swept edge " + g.name(w.swept.parent) + "->" + g.name(w.swept.child),
        "a " + g.name(w.a) + ", c " + g.name(w.c) + ", z1 " + g.format_set(w.z1) + ", z2 " + g.format_set(w.z2),
        std::string("order at zero ") + (w.order_at_zero_holds ? "holds" : "fails") + ", reversals below zero " +
            std::to_string(w.flips_below_zero) + ", above zero " + std::to_string(w.flips_above_zero),
        "crossings " + (crossings.empty() ? std::string("-") : crossings),
    };
    emit(args.out_path, out, summary, [&](std::ostream& s) { write_witness_csv(s, w); });
    return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Path-dependence checks for singly connected Gaussian DAGs", "pathdep"};
    app.require_subcommand(1);
    Args args;

    auto model_opt = [&](CLI::App* sub) { sub->add_option("-m,--model", args.model, "model file")->required(); };
    auto pair_pos = [&](CLI::App* sub) {
        sub->add_option("A", args.a, "first endpoint")->required();
        sub->add_option("C", args.c, "second endpoint")->required();
    };

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a model file");
    model_opt(validate);

    CLI::App* sigma = app.add_subcommand("sigma", "implied covariance matrix as CSV");
    model_opt(sigma);

    CLI::App* pcorr = app.add_subcommand("pcorr", "squared partial correlation");
    model_opt(pcorr);
    pair_pos(pcorr);
    add_set(pcorr, "--given", args.given, "conditioning set");
    pcorr->add_flag("--info", args.info, "also print -1/2 log(1 - rho2)");

    CLI::App* dsep = app.add_subcommand("dsep", "d-separation test");
    model_opt(dsep);
    dsep->add_option("X", args.x, "first set (comma separated)")->required();
    dsep->add_option("Y", args.y, "second set (comma separated)")->required();
    add_set(dsep, "--given", args.given, "conditioning set");

    CLI::App* part = app.add_subcommand("partition", "meeting vertices, classes and nearest sets");
    model_opt(part);
    pair_pos(part);
    add_set(part, "--z", args.z, "conditioning set");

    CLI::App* prec = app.add_subcommand("precedes", "test z1 < z2 for the pair A, C");
    model_opt(prec);
    pair_pos(prec);
    add_set(prec, "--z1", args.z1, "first conditioning set");
    add_set(prec, "--z2", args.z2, "second conditioning set");

    CLI::App* lemma = app.add_subcommand("check-lemma", "inequality chain of a canonical family");
    lemma->add_option("--kind", args.kind, "fork | collider | anomalous | double | extended")->required();
    lemma->add_option("--chain-length", args.chain_length, "chain length (default: canonical)");
    lemma->add_option("--b-side", args.b_side, "number of B vertices (default: canonical)");
    lemma->add_option("--seed", args.opt_seed, "sample parameters from this seed (default: unit parameters)");
    lemma->add_flag("--conformance", args.conformance, "also check the closed-form identities and derivative sign");

    CLI::App* suite = app.add_subcommand("suite", "randomized verification suite");
    suite->add_option("--id", args.suite, "lemmas | theorem1 | monotonicity | telescoping | faithfulness | reduction")
        ->required();
    suite->add_option("--seed", args.seed, "base seed")->required();
    suite->add_option("--trials", args.trials, "number of trials")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "rho2 against chain length as CSV");
    sweep->add_option("--kind", args.kind, "family kind")->required();
    sweep->add_option("--max-length", args.max_length, "longest chain")->required();
    sweep->add_option("--b-side", args.b_side, "number of B vertices");
    sweep->add_option("--coefficient", args.coefficient, "every edge coefficient (default 1)");
    sweep->add_option("--variance", args.variance, "every noise variance (default 1)");
    sweep->add_option("--out", args.out_path, "write CSV here instead of stdout");

    CLI::App* search = app.add_subcommand("search-counterexample", "coefficient sweep that reverses the order");
    search->add_option("--seed", args.search.seed, "base seed")->required();
    search->add_option("--max-vertices", args.search.max_vertices, "largest graph (3..10)");
    search->add_option("--trials", args.search.trials, "number of random instances");
    search->add_flag("--polytree-only", args.search.polytree_only, "sweep an existing edge instead of adding one");
    search->add_option("--lo", args.search.lo, "sweep start");
    search->add_option("--hi", args.search.hi, "sweep end");
    search->add_option("--steps", args.search.steps, "grid points");
    search->add_flag("--unit-params", args.search.unit_params, "unit coefficients and variances");
    search->add_option("--out", args.out_path, "write CSV here instead of stdout");

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*validate) return cmd_validate(args, out);
        if (*sigma) return cmd_sigma(args, out);
        if (*pcorr) return cmd_pcorr(args, out);
        if (*dsep) return cmd_dsep(args, out);
        if (*part) return cmd_partition(args, out);
        if (*prec) return cmd_precedes(args, out);
        if (*lemma) return cmd_check_lemma(args, out);
        if (*suite) return cmd_suite(args, out);
        if (*sweep) return cmd_sweep(args, out);
        if (*search) return cmd_search(args, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace pathdep::cli
