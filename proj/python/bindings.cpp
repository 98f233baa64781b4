#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aqicert/errors.hpp"
#include "aqicert/generate.hpp"
#include "aqicert/graph.hpp"
#include "aqicert/pipeline.hpp"
#include "aqicert/spectral.hpp"

namespace py = pybind11;
using namespace aqicert;

namespace {

py::tuple run(const std::string& config_json, const std::string& pipeline) {
  RunConfig cfg = RunConfig::from_json(Json::parse(config_json));
  cfg.pipeline = pipeline;
  RunResult r;
  {
    py::gil_scoped_release release;
    r = run_pipeline(cfg);
  }
  py::dict files;
  for (const auto& [name, text] : r.files) files[py::str(name)] = py::str(text);
  return py::make_tuple(r.exit_code, r.bundle.dump(), files);
}

}  // namespace

PYBIND11_MODULE(_aqicert, m) {
  m.doc() = "Certification pipelines for large-girth graph families";

  py::register_exception<Error>(m, "Error");

  m.def("generate_graph",
        [](std::size_t D, std::size_t girth_target, std::size_t size, std::uint64_t seed) {
          return generate_large_girth_graph(D, girth_target, size, seed).edges();
        },
        py::arg("D"), py::arg("girth"), py::arg("size"), py::arg("seed"));
  m.def("girth",
        [](std::size_t n, std::vector<Edge> edges) { return girth(FiniteGraph(n, std::move(edges))); },
        py::arg("n"), py::arg("edges"), "Girth, or None for a forest.");
  m.def("moore_bound", &moore_bound, py::arg("D"), py::arg("girth"));
  m.def("localized_min_rayleigh",
        [](std::size_t n, std::vector<Edge> edges, const std::string& R, const std::string& S) {
          const auto s = FiniteMetricSpace::from_graph(FiniteGraph(n, std::move(edges)));
          return localized_min_rayleigh(build_laplacian(s, parse_rational(R)), parse_rational(S)).value;
        },
        py::arg("n"), py::arg("edges"), py::arg("R") = "1", py::arg("S") = "1");
  m.def("run", &run, py::arg("config_json"), py::arg("pipeline"));
}
