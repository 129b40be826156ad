// Python bindings: thin wrappers over the pipeline, the encoders, the solver
// and the graph routines. Structured results travel as JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smscube/conquer.hpp"
#include "smscube/cubing.hpp"
#include "smscube/graph.hpp"

namespace py = pybind11;
using namespace smscube;

namespace {

PartialGraph graph_of(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<VertexPair> ps;
  for (auto [u, v] : edges) {
    if (u < 1 || v < 1 || u > n || v > n || u == v) throw DomainError("bad edge " + std::to_string(u) + "-" + std::to_string(v));
    ps.push_back(VertexPair{std::min(u, v) - 1, std::max(u, v) - 1});
  }
  return PartialGraph::from_edges(n, ps);
}

py::dict pipeline(const std::string& config_json) {
  PipelineConfig cfg = PipelineConfig::from_json(config_json);
  PipelineRun run;
  {
    py::gil_scoped_release release;
    run = run_pipeline(cfg);
  }
  py::dict out;
  out["report"] = report_json(cfg, run);
  out["models"] = model_lines(cfg.encoding.n, run.report.models);
  out["cubes"] = write_icnf(run.cubes);
  out["formula"] = serialize_enriched(run.enriched);
  out["exit_code"] = run.exit_code;
  return out;
}

py::tuple encode_problem(const std::string& problem, int n, int k, std::optional<int> m, std::optional<bool> static_sb) {
  EncodingSpec s;
  s.problem = parse_problem(problem);
  s.n = n;
  s.k = k;
  s.m = m;
  s.static_sb = static_sb;
  const Encoding enc = encode(s);
  return py::make_tuple(serialize_dimacs(enc.formula), enc.vars.to_json(enc.formula.num_vars()));
}

// Returns (status, model as signed ints or None).
py::tuple solve_dimacs(const std::string& text) {
  const CnfFormula f = parse_dimacs(text);
  const auto r = solve(f, {}, {});
  if (r.status != SolveStatus::Sat) return py::make_tuple(to_string(r.status), py::none());
  std::vector<int> model;
  for (Var v = 1; v <= f.num_vars(); ++v) model.push_back(r.model->is_true(Lit::positive(v)) ? v : -v);
  return py::make_tuple(to_string(r.status), model);
}

std::size_t count_models(const std::string& text) {
  const CnfFormula f = parse_dimacs(text);
  const auto e = enumerate_models(f, {}, {}, first_vars(f.num_vars()));
  if (!e.complete) throw Error("enumeration did not finish");
  return e.models.size();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cube-and-conquer graph search modulo isomorphism";

  // later registrations are tried first, so the base class goes first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("pipeline", &pipeline, py::arg("config_json"));
  m.def("encode", &encode_problem, py::arg("problem"), py::arg("n"), py::arg("k") = 3, py::arg("m") = py::none(),
        py::arg("static_sb") = py::none());
  m.def("solve_dimacs", &solve_dimacs, py::arg("text"));
  m.def("count_models", &count_models, py::arg("text"));
  m.def("score", [](const std::string& name, double a, double b) { return find_score(name)(a, b); }, py::arg("name"),
        py::arg("a"), py::arg("b"));
  m.def("score_names", [] {
    std::vector<std::string> out;
    for (const auto& s : score_presets()) out.push_back(s.name);
    return out;
  });
  m.def("is_canonical", [](int n, const std::vector<std::pair<int, int>>& edges) { return is_canonical(graph_of(n, edges)).canonical; },
        py::arg("n"), py::arg("edges"));
  m.def("graph6", [](int n, const std::vector<std::pair<int, int>>& edges) { return to_graph6(graph_of(n, edges)); }, py::arg("n"),
        py::arg("edges"));
  m.def("edges_of_graph6", [](const std::string& s) {
    std::vector<std::pair<int, int>> out;
    for (auto p : from_graph6(s).edges()) out.emplace_back(p.u + 1, p.v + 1);
    return out;
  });
}
