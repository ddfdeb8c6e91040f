#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

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

namespace py = pybind11;
using namespace pathdep;

namespace {

// Vertices cross the boundary by name.
VertexSet to_set(const Dag& dag, const std::vector<std::string>& names) {
    VertexSet out;
    for (const std::string& n : names) out.insert(dag.at(n));
    return out;
}

std::vector<std::string> to_names(const Dag& dag, const VertexSet& set) {
    std::vector<std::string> out;
    for (Vertex v : set) out.push_back(dag.name(v));
    return out;
}

py::dict clause_dict(const Dag& dag, const ClauseResult& r) {
    py::list pairs;
    for (const auto& [f, n] : r.pairing) pairs.append(py::make_tuple(dag.name(f), dag.name(n)));
    py::dict d;
    d["holds"] = r.holds;
    d["further"] = to_names(dag, r.further);
    d["nearer"] = to_names(dag, r.nearer);
    d["pairs"] = pairs;
    return d;
}

Family family_for(const std::string& kind, std::optional<std::size_t> length, std::optional<std::size_t> b_side) {
    const FamilyKind k = parse_family_kind(kind);
    const Family base = canonical_family(k);
    return make_family(k, length.value_or(base.chain_length), b_side.value_or(base.b_side));
}

GaussianParams family_params(const Family& fam, std::optional<std::uint64_t> seed) {
    if (!seed) return GaussianParams::unit(fam.dag);
    Rng rng(*seed);
    return sample_family_params(fam, rng);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian DAG path-dependence queries";

    static py::exception<Error> error_type(m, "PathdepError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error_type.ptr())(py::str(e.what()));
            inst.attr("code") = py::str(std::string(to_string(e.code())));
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    py::class_<Model>(m, "Model")
        .def_static("parse", &parse_model, py::arg("text"))
        .def_static("load", &load_model, py::arg("path"))
        .def_property_readonly("vertices", [](const Model& md) { return md.dag.names(); })
        .def_property_readonly("edges",
                               [](const Model& md) {
                                   std::vector<std::tuple<std::string, std::string, double>> out;
                                   for (const Edge& e : md.dag.edges()) {
                                       out.emplace_back(md.dag.name(e.parent), md.dag.name(e.child),
                                                        md.params.coefficient_at(e.parent, e.child));
                                   }
                                   return out;
                               })
        .def_property_readonly("singly_connected", [](const Model& md) { return md.dag.singly_connected(); })
        .def("serialize", [](const Model& md) { return serialize_model(md.dag, md.params); })
        .def("sigma", [](const Model& md) { return Eigen::MatrixXd(build_sigma(md.dag, md.params).matrix()); })
        .def(
            "pcorr2",
            [](const Model& md, const std::string& a, const std::string& c, const std::vector<std::string>& given) {
                return pcorr2(build_sigma(md.dag, md.params), md.dag.at(a), md.dag.at(c), to_set(md.dag, given));
            },
            py::arg("a"), py::arg("c"), py::arg("given") = std::vector<std::string>{})
        .def(
            "d_separated",
            [](const Model& md, const std::vector<std::string>& x, const std::vector<std::string>& y,
               const std::vector<std::string>& given) {
                return d_separated(md.dag, {to_set(md.dag, x), to_set(md.dag, y), to_set(md.dag, given)});
            },
            py::arg("x"), py::arg("y"), py::arg("given") = std::vector<std::string>{})
        .def(
            "partition",
            [](const Model& md, const std::string& a, const std::string& c, const std::vector<std::string>& z) {
                const PathFrame frame(md.dag, md.dag.at(a), md.dag.at(c));
                const ConditioningPartition p = frame.partition(to_set(md.dag, z));
                py::dict classes, nearest, meeting;
                for (ConditioningClass k : {ConditioningClass::NonCollider, ConditioningClass::ColliderCollider,
                                            ConditioningClass::ColliderNonCollider}) {
                    const std::string key(to_string(k));
                    classes[py::str(key)] = to_names(md.dag, p.members(k));
                    nearest[py::str(key)] = to_names(md.dag, p.nearest(k));
                }
                for (const auto& [v, mv] : p.meetings) meeting[py::str(md.dag.name(v))] = md.dag.name(mv.x_star);
                py::dict d;
                d["classes"] = classes;
                d["nearest"] = nearest;
                d["meeting"] = meeting;
                return d;
            },
            py::arg("a"), py::arg("c"), py::arg("z"))
        .def(
            "precedes",
            [](const Model& md, const std::string& a, const std::string& c, const std::vector<std::string>& z1,
               const std::vector<std::string>& z2) {
                const OrderWitness w = precedes(md.dag, md.dag.at(a), md.dag.at(c), to_set(md.dag, z1),
                                                to_set(md.dag, z2));
                py::dict d;
                d["holds"] = w.holds;
                d["nc"] = clause_dict(md.dag, w.nc);
                d["c-c"] = clause_dict(md.dag, w.c_c);
                d["c-nc"] = clause_dict(md.dag, w.c_nc);
                return d;
            },
            py::arg("a"), py::arg("c"), py::arg("z1"), py::arg("z2"));

    m.def("info_proper", &info_proper, py::arg("rho2"));

    m.def(
        "check_lemma",
        [](const std::string& kind, std::optional<std::size_t> chain_length, std::optional<std::size_t> b_side,
           std::optional<std::uint64_t> seed) {
            const Family fam = family_for(kind, chain_length, b_side);
            const LemmaResult r = check_lemma(fam, family_params(fam, seed));
            py::list chain;
            for (const ChainValue& v : r.chain) chain.append(py::make_tuple(v.label, v.rho2));
            py::dict d;
            d["holds"] = r.holds;
            d["chain"] = chain;
            d["blocked"] = r.blocked;
            d["worst_excess"] = r.worst_excess;
            d["detail"] = r.detail;
            return d;
        },
        py::arg("kind"), py::arg("chain_length") = py::none(), py::arg("b_side") = py::none(),
        py::arg("seed") = py::none());

    m.def(
        "conformance",
        [](const std::string& kind, std::optional<std::size_t> chain_length, std::optional<std::size_t> b_side,
           std::optional<std::uint64_t> seed) {
            const Family fam = family_for(kind, chain_length, b_side);
            const ConformanceReport rep = conformance_report(fam, family_params(fam, seed));
            py::list ids;
            for (const IdentityCheck& id : rep.identities) ids.append(py::make_tuple(id.name, id.lhs, id.rhs, id.holds));
            py::dict d;
            d["passes"] = rep.passes();
            d["identities"] = ids;
            return d;
        },
        py::arg("kind"), py::arg("chain_length") = py::none(), py::arg("b_side") = py::none(),
        py::arg("seed") = py::none());

    m.def(
        "run_suite",
        [](const std::string& id, std::uint64_t seed, std::size_t trials) {
            const TrialReport rep = run_trial_suite(parse_suite_id(id), seed, trials);
            py::list violations;
            for (const Violation& v : rep.violations) {
                violations.append(py::make_tuple(v.seed, v.lhs, v.rhs, v.detail));
            }
            py::dict d;
            d["passes"] = rep.passes();
            d["trials"] = rep.trials;
            d["violations"] = violations;
            d["excluded"] = rep.excluded;
            d["max_violation"] = rep.max_violation_magnitude;
            return d;
        },
        py::arg("id"), py::arg("seed"), py::arg("trials"));

    m.def(
        "sweep",
        [](const std::string& kind, std::size_t max_length, std::optional<std::size_t> b_side, double coefficient,
           double variance) {
            const SweepTable t = sweep_chain_length(parse_family_kind(kind), max_length, b_side, {coefficient, variance});
            py::list rows;
            rows.append(py::make_tuple(t.anchor.chain_length, t.anchor.distance, t.anchor.vertex, t.anchor.rho2));
            for (const SweepRow& r : t.rows) rows.append(py::make_tuple(r.chain_length, r.distance, r.vertex, r.rho2));
            py::dict d;
            d["rows"] = rows;
            d["reference"] = t.reference;
            d["monotone"] = t.monotone;
            d["bounded"] = t.bounded;
            d["shape_ok"] = t.shape_ok();
            return d;
        },
        py::arg("kind"), py::arg("max_length"), py::arg("b_side") = py::none(), py::arg("coefficient") = 1.0,
        py::arg("variance") = 1.0);

    m.def(
        "search_counterexample",
        [](std::uint64_t seed, std::size_t max_vertices, std::size_t trials, bool polytree_only, double lo, double hi,
           std::size_t steps, bool unit_params) -> py::object {
            const SearchResult r =
                counterexample_search({seed, max_vertices, trials, polytree_only, lo, hi, steps, unit_params});
            if (!r.witness) return py::none();
            const Witness& w = *r.witness;
            const Dag& g = w.graph;
            py::list sweep;
            for (const SweepPoint& p : w.sweep) sweep.append(py::make_tuple(p.coefficient, p.rho2_z1, p.rho2_z2));
            py::dict d;
            d["trial"] = w.trial;
            d["swept"] = py::make_tuple(g.name(w.swept.parent), g.name(w.swept.child));
            d["a"] = g.name(w.a);
            d["c"] = g.name(w.c);
            d["z1"] = to_names(g, w.z1);
            d["z2"] = to_names(g, w.z2);
            d["singly_connected"] = g.singly_connected();
            d["order_at_zero_holds"] = w.order_at_zero_holds;
            d["crossings"] = w.crossings;
            d["sweep"] = sweep;
            return d;
        },
        py::arg("seed"), py::arg("max_vertices") = 8, py::arg("trials") = 10000, py::arg("polytree_only") = false,
        py::arg("lo") = -4.0, py::arg("hi") = 4.0, py::arg("steps") = 81, py::arg("unit_params") = false);
}
