#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zddsynth/oracle.hpp"
#include "zddsynth/pipeline.hpp"
#include "zddsynth/witness_io.hpp"

namespace py = pybind11;
using namespace zsynth;

namespace {

using DimacsClauses = std::vector<std::vector<int>>;

DimacsClauses to_dimacs(const std::vector<LiteralSet>& cs) {
  DimacsClauses out;
  for (const auto& c : cs) {
    std::vector<int> row;
    for (const Literal& l : c) row.push_back(l.to_dimacs());
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<LiteralSet> from_dimacs(const DimacsClauses& cs) {
  std::vector<LiteralSet> out;
  for (const auto& row : cs) {
    LiteralSet c;
    for (int v : row) c.push_back(Literal::from_dimacs(v));
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> to_vars(const std::vector<Prop>& ps) {
  std::vector<int> out;
  for (Prop p : ps) out.push_back(static_cast<int>(p) + 1);
  return out;
}

RunOptions make_options(const std::string& mode, std::uint64_t seed, long plan_timeout_ms,
                        std::size_t width_target, long exec_timeout_ms,
                        const std::string& heuristic) {
  RunOptions o;
  o.mode = mode_from_string(mode);
  o.plan.seed = seed;
  o.plan.plan_timeout = std::chrono::milliseconds(plan_timeout_ms);
  o.plan.width_target = width_target;
  o.plan.heuristic = heuristic_from_string(heuristic);
  o.exec_timeout = std::chrono::milliseconds(exec_timeout_ms);
  return o;
}

py::dict result_dict(const CnfSpec& spec, const RunResult& r) {
  py::dict d;
  d["outcome"] = r.stats.outcome;
  d["rset"] = to_dimacs(r.rset);
  d["rset_truncated"] = r.rset_truncated;
  d["pjt_width"] = r.stats.pjt_width;
  d["stats"] = py::module_::import("json").attr("loads")(stats_json(r.stats));
  d["tree"] = r.tree ? py::object(py::str(tree_to_json(*r.tree))) : py::object(py::none());
  if (r.witnesses) {
    py::dict ws;
    for (const auto& [y, cnf] : r.witnesses->cnf) ws[py::int_(y + 1)] = to_dimacs(cnf);
    d["witnesses"] = ws;
    d["witness_json"] = emit_witnesses(*r.witnesses, spec);
  }
  return d;
}

RunResult run(const CnfSpec& spec, RunOptions o) {
  py::gil_scoped_release release;
  return run_pipeline(spec, o);
}

WitnessCnfs witness_map(const std::map<int, DimacsClauses>& ws) {
  WitnessCnfs out;
  for (const auto& [y, cs] : ws) out[static_cast<Prop>(y - 1)] = from_dimacs(cs);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decision-diagram Boolean functional synthesis";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<TooLarge>(m, "TooLarge", PyExc_ValueError);
  py::register_exception<FalsityHasNoDnf>(m, "FalsityHasNoDnf", PyExc_ValueError);

  py::class_<CnfSpec>(m, "Spec")
      .def_readonly("name", &CnfSpec::name)
      .def_readonly("num_vars", &CnfSpec::num_props)
      .def_property_readonly("inputs", [](const CnfSpec& s) { return to_vars(s.inputs()); })
      .def_property_readonly("outputs", [](const CnfSpec& s) { return to_vars(s.outputs()); })
      .def_property_readonly("clauses", [](const CnfSpec& s) { return to_dimacs(s.clauses); })
      .def_property_readonly("pure_input_clauses",
                             [](const CnfSpec& s) { return to_dimacs(s.pure_x_clauses); })
      .def_property_readonly("free_vars", [](const CnfSpec& s) { return to_vars(s.free_vars); })
      .def("to_qdimacs", &render_qdimacs)
      .def("__repr__", [](const CnfSpec& s) {
        return "<Spec " + s.name + ": " + std::to_string(s.inputs().size()) + " inputs, " +
               std::to_string(s.outputs().size()) + " outputs, " +
               std::to_string(s.leaf_count()) + " clauses>";
      });

  m.def(
      "parse",
      [](const std::string& text, const std::string& name) {
        return preprocess(parse_qdimacs(text, name));
      },
      py::arg("text"), py::arg("name") = "");
  m.def(
      "make_spec",
      [](const std::vector<int>& inputs, const std::vector<int>& outputs,
         const DimacsClauses& clauses, const std::string& name) {
        CnfSpec s;
        int n = 0;
        for (int v : inputs) n = std::max(n, v);
        for (int v : outputs) n = std::max(n, v);
        for (const auto& c : clauses)
          for (int l : c) n = std::max(n, std::abs(l));
        s.num_props = static_cast<std::size_t>(n);
        s.roles.assign(s.num_props, Role::Output);
        for (int v : inputs) s.roles.at(v - 1) = Role::Input;
        s.clauses = from_dimacs(clauses);
        s.name = name;
        return preprocess(s);
      },
      py::arg("inputs"), py::arg("outputs"), py::arg("clauses"), py::arg("name") = "");

  m.def(
      "realize",
      [](const CnfSpec& spec, const std::string& mode, std::uint64_t seed, long plan_timeout_ms,
         std::size_t width_target, long exec_timeout_ms, const std::string& heuristic) {
        return result_dict(spec, run(spec, make_options(mode, seed, plan_timeout_ms, width_target,
                                                        exec_timeout_ms, heuristic)));
      },
      py::arg("spec"), py::arg("mode") = "dp", py::arg("seed") = 0,
      py::arg("plan_timeout_ms") = 200000, py::arg("width_target") = 200,
      py::arg("exec_timeout_ms") = 7200000, py::arg("heuristic") = "min-fill");

  m.def(
      "synthesize",
      [](const CnfSpec& spec, const std::string& mode, std::uint64_t seed, long plan_timeout_ms,
         std::size_t width_target, long exec_timeout_ms, const std::string& heuristic) {
        RunOptions o =
            make_options(mode, seed, plan_timeout_ms, width_target, exec_timeout_ms, heuristic);
        o.synthesize = true;
        return result_dict(spec, run(spec, o));
      },
      py::arg("spec"), py::arg("mode") = "dp", py::arg("seed") = 0,
      py::arg("plan_timeout_ms") = 200000, py::arg("width_target") = 200,
      py::arg("exec_timeout_ms") = 7200000, py::arg("heuristic") = "min-fill");

  m.def(
      "plan",
      [](const CnfSpec& spec, std::uint64_t seed, long plan_timeout_ms, std::size_t width_target,
         const std::string& heuristic) {
        PlanConfig c;
        c.seed = seed;
        c.plan_timeout = std::chrono::milliseconds(plan_timeout_ms);
        c.width_target = width_target;
        c.heuristic = heuristic_from_string(heuristic);
        PlanResult r;
        {
          py::gil_scoped_release release;
          r = plan(spec, c);
        }
        return py::make_tuple(tree_to_json(r.tree), r.report.best_width, r.report.met_target);
      },
      py::arg("spec"), py::arg("seed") = 0, py::arg("plan_timeout_ms") = 200000,
      py::arg("width_target") = 200, py::arg("heuristic") = "min-fill");

  m.def(
      "verify",
      [](const CnfSpec& spec, const std::map<int, DimacsClauses>& witnesses) {
        const WitnessCheck c = verify_witnesses(spec, witness_map(witnesses));
        py::object cex = py::none();
        if (c.counterexample) {
          py::dict d;
          const auto xs = spec.inputs();
          for (std::size_t i = 0; i < xs.size(); ++i)
            d[py::int_(xs[i] + 1)] = ((*c.counterexample >> i) & 1u) != 0;
          cex = d;
        }
        return py::make_tuple(c.pass, cex);
      },
      py::arg("spec"), py::arg("witnesses"));

  m.def(
      "classify_bruteforce",
      [](const CnfSpec& spec) {
        const OracleVerdict v = classify_bruteforce(spec);
        py::dict d;
        d["outcome"] = to_string(v.kind);
        d["inputs"] = to_vars(v.inputs);
        d["rset"] = v.rset_assignments;
        return d;
      },
      py::arg("spec"));

  m.def(
      "gen_random",
      [](std::size_t num_x, std::size_t num_y, std::size_t num_clauses, std::size_t max_width,
         std::uint64_t seed, bool allow_pure_inputs) {
        RandomSpecParams p;
        p.num_x = num_x;
        p.num_y = num_y;
        p.num_clauses = num_clauses;
        p.max_width = max_width;
        p.seed = seed;
        p.allow_pure_x = allow_pure_inputs;
        return gen_random(p);
      },
      py::arg("num_x"), py::arg("num_y"), py::arg("num_clauses"), py::arg("max_width") = 3,
      py::arg("seed") = 0, py::arg("allow_pure_inputs") = false);
  m.def("gen_family", &gen_family, py::arg("name"), py::arg("n"));

  py::class_<zdd::Family>(m, "Family")
      .def_readonly("id", &zdd::Family::id)
      .def("__eq__", [](zdd::Family a, zdd::Family b) { return a == b; })
      .def("__hash__", [](zdd::Family a) { return a.id; });

  py::class_<zdd::Manager>(m, "Manager")
      .def(py::init([](std::size_t n, const std::vector<int>& order) {
             std::vector<Prop> o;
             for (int v : order) o.push_back(static_cast<Prop>(v - 1));
             return std::make_unique<zdd::Manager>(n, o);
           }),
           py::arg("num_vars"), py::arg("order") = std::vector<int>{})
      .def("empty", &zdd::Manager::empty)
      .def("unit", &zdd::Manager::unit)
      .def("clauses",
           [](zdd::Manager& m, const DimacsClauses& cs) { return m.clauses(from_dimacs(cs)); })
      .def("union_sf", &zdd::Manager::union_sf)
      .def("distribute", &zdd::Manager::distribute)
      .def("project", [](zdd::Manager& m, zdd::Family z,
                         int var) { return m.project(z, static_cast<Prop>(var - 1)); })
      .def("cross", [](zdd::Manager& m, zdd::Family z) { return m.cross(z); })
      .def("substitute",
           [](zdd::Manager& m, zdd::Family z, int var, zdd::Family g) {
             const zdd::Family d = (g == m.empty() || g == m.unit()) ? m.empty() : m.cross(g);
             return m.substitute(z, static_cast<Prop>(var - 1), g, d);
           })
      .def("enumerate", [](const zdd::Manager& m, zdd::Family z) { return to_dimacs(m.enumerate(z)); })
      .def("count", [](const zdd::Manager& m, zdd::Family z) {
        return py::int_(py::str(m.stats(z).clause_count.str()));
      })
      .def("support", [](const zdd::Manager& m, zdd::Family z) { return to_vars(m.support(z)); });
}
