#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hyperclust/dataset.hpp"
#include "hyperclust/delta_search.hpp"
#include "hyperclust/kmeans.hpp"
#include "hyperclust/metrics.hpp"
#include "hyperclust/pipeline.hpp"
#include "hyperclust/svm.hpp"

namespace py = pybind11;
using namespace hyperclust;

namespace {

Dataset make_dataset(const Matrix& points, const std::optional<std::vector<int>>& labels) {
  Dataset ds;
  ds.points = points;
  if (labels) {
    if (labels->size() != ds.size()) throw DataError("labels must have one entry per point");
    ds.truth_labels = labels;
  }
  ds.provenance.source = "python";
  return ds;
}

RunConfig make_config(std::optional<std::size_t> delta, const std::string& h_mode, const std::string& margin_mode,
                      std::size_t repeats, std::uint64_t seed, bool minmax, bool center, std::vector<std::size_t> grid,
                      double svm_c, bool assigned_only) {
  RunConfig cfg;
  cfg.delta = delta;
  auto hm = parse_h_mode(h_mode);
  if (!hm) throw DataError("unknown h_mode '" + h_mode + "'");
  cfg.h_mode = *hm;
  auto mm = parse_margin_mode(margin_mode);
  if (!mm) throw DataError("unknown margin_mode '" + margin_mode + "'");
  cfg.margin_mode = *mm;
  cfg.repeats = repeats;
  cfg.seed = seed;
  cfg.preprocess = {.minmax = minmax, .center = center};
  cfg.grid = std::move(grid);
  cfg.forest.svm.c = svm_c;
  cfg.metric_mode = assigned_only ? MetricMode::assigned_only : MetricMode::full;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Clustering by recursive hyperplane splits";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("points"), py::arg("labels") = std::nullopt)
      .def_readwrite("points", &Dataset::points)
      .def_readwrite("labels", &Dataset::truth_labels)
      .def_readwrite("feature_names", &Dataset::feature_names)
      .def_property_readonly("n", &Dataset::size)
      .def_property_readonly("d", &Dataset::dims)
      .def_property_readonly("source", [](const Dataset& ds) { return ds.provenance.source; })
      .def("__len__", &Dataset::size)
      .def("__repr__", [](const Dataset& ds) {
        return "<Dataset n=" + std::to_string(ds.size()) + " d=" + std::to_string(ds.dims()) + ">";
      });

  m.def(
      "load_csv",
      [](const std::filesystem::path& path, bool header, std::optional<std::size_t> label_col) {
        return load_csv(path, {.has_header = header, .label_column = label_col});
      },
      py::arg("path"), py::arg("header") = false, py::arg("label_col") = std::nullopt);
  m.def("save_csv", &save_csv, py::arg("dataset"), py::arg("path"));
  m.def(
      "preprocess",
      [](const Dataset& ds, bool minmax, bool center) { return preprocess(ds, {.minmax = minmax, .center = center}); },
      py::arg("dataset"), py::arg("minmax") = true, py::arg("center") = true);
  m.def(
      "make_synthetic",
      [](const std::string& shape, std::size_t n, double noise, std::uint64_t seed) {
        auto s = parse_shape(shape);
        if (!s) throw DataError("unknown shape '" + shape + "'");
        return gen_synthetic(*s, n, noise, seed);
      },
      py::arg("shape"), py::arg("n") = 1600, py::arg("noise") = 0.0, py::arg("seed") = 0);

  m.def(
      "kmeans",
      [](const Matrix& points, std::size_t k, std::uint64_t seed) {
        const auto model = kmeans(points, k, seed);
        py::dict out;
        out["centroids"] = model.centroids;
        out["labels"] = model.labels;
        out["inertia"] = model.inertia;
        out["inertia_trace"] = model.inertia_trace;
        return out;
      },
      py::arg("points"), py::arg("k") = 2, py::arg("seed") = 0);

  m.def(
      "train_linear_svm",
      [](const Matrix& points, const std::vector<int>& labels, double c, double tol) {
        SvmDiagnostics diag;
        const auto h = train_linear_svm(points, labels, {.c = c, .tol = tol}, &diag);
        py::dict out;
        out["w"] = h.w;
        out["b"] = h.b;
        out["norm_w"] = h.norm_w;
        out["converged"] = diag.converged;
        out["support_vectors"] = diag.support_vectors;
        return out;
      },
      py::arg("points"), py::arg("labels"), py::arg("c") = 100.0, py::arg("tol") = 1e-4);

  m.def("ari", [](const std::vector<int>& t, const std::vector<int>& p) { return ari(t, p); }, py::arg("truth"),
        py::arg("pred"));
  m.def(
      "nmi",
      [](const std::vector<int>& t, const std::vector<int>& p, bool geometric) {
        return nmi(t, p, geometric ? NmiNormalization::geometric : NmiNormalization::arithmetic);
      },
      py::arg("truth"), py::arg("pred"), py::arg("geometric") = false);

  m.def(
      "select_delta",
      [](const std::vector<std::size_t>& grid, const std::vector<std::size_t>& n_assigned, std::size_t n_total) {
        if (grid.size() != n_assigned.size()) throw DataError("grid and n_assigned differ in length");
        SweepCurve curve;
        curve.grid = grid;
        curve.n_assigned = n_assigned;
        return select_delta(curve, n_total);
      },
      py::arg("grid"), py::arg("n_assigned"), py::arg("n_total"));

  // Full pipeline; returns (assignment, JSON report text).
  m.def(
      "_cluster",
      [](const Dataset& ds, std::optional<std::size_t> delta, const std::string& h_mode, const std::string& margin_mode,
         std::size_t repeats, std::uint64_t seed, bool minmax, bool center, std::vector<std::size_t> grid, double svm_c,
         bool assigned_only) {
        const auto cfg = make_config(delta, h_mode, margin_mode, repeats, seed, minmax, center, std::move(grid), svm_c,
                                     assigned_only);
        PipelineOutput out;
        {
          py::gil_scoped_release release;
          out = run_pipeline(ds, cfg);
        }
        return py::make_tuple(out.result().assignment, report_json(out, cfg).dump());
      },
      py::arg("dataset"), py::arg("delta"), py::arg("h_mode"), py::arg("margin_mode"), py::arg("repeats"), py::arg("seed"),
      py::arg("minmax"), py::arg("center"), py::arg("grid"), py::arg("svm_c"), py::arg("assigned_only"));

  // Sweep only; returns the curve as CSV text and the selected delta.
  m.def(
      "_sweep",
      [](const Dataset& ds, std::vector<std::size_t> grid, const std::string& h_mode, std::size_t repeats,
         std::uint64_t seed) {
        const auto cfg = make_config(std::nullopt, h_mode, "paper", repeats, seed, false, false, {}, 100.0, false);
        if (grid.empty()) grid = default_grid(ds.size());
        SweepCurve curve;
        {
          py::gil_scoped_release release;
          curve = sweep(ds, grid, cfg);
        }
        return py::make_tuple(curve.grid, curve.n_assigned, curve.selected_delta, sweep_csv(curve));
      },
      py::arg("dataset"), py::arg("grid"), py::arg("h_mode"), py::arg("repeats"), py::arg("seed"));
}
