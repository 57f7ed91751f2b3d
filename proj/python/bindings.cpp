#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "dipole/datasets.hpp"
#include "dipole/errors.hpp"
#include "dipole/evaluation.hpp"
#include "dipole/geometry.hpp"
#include "dipole/isomap.hpp"
#include "dipole/optimizer.hpp"
#include "dipole/persistence.hpp"
#include "dipole/wasserstein.hpp"

namespace py = pybind11;
using namespace dipole;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

Array to_array(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

DistanceMatrix to_distance(const Array& a) {
  const Matrix m = to_matrix(a);
  if (m.rows() != m.cols()) throw ValidationError("distance matrix must be square");
  return DistanceMatrix::from_dense(m.rows(), m.data(), 1e-9);
}

Array to_array(const DistanceMatrix& d) { return to_array(Matrix(d.size(), d.size(), d.data())); }

Array diagram_array(const PersistenceDiagram& d) {
  Matrix m(d.size(), 2);
  for (std::size_t i = 0; i < d.size(); ++i) {
    m(i, 0) = d.points[i].birth;
    m(i, 1) = d.points[i].death;
  }
  return to_array(m);
}

PersistenceDiagram to_diagram(const Array& a, int degree) {
  const Matrix m = to_matrix(a);
  if (m.rows() > 0 && m.cols() != 2) throw py::value_error("diagram arrays have two columns");
  PersistenceDiagram d;
  d.degree = degree;
  for (std::size_t i = 0; i < m.rows(); ++i) d.points.push_back({m(i, 0), m(i, 1), degree, std::nullopt, {}});
  return d;
}

py::tuple generated(const GeneratedCloud& g) {
  return py::make_tuple(to_array(g.cloud.coords()), to_array(g.parameters));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Topology-preserving dimensionality reduction core";

  auto base = py::register_exception<Error>(m, "DipoleError", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ConnectivityError>(m, "ConnectivityError", validation.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def("euclidean_distances", [](const Array& x) { return to_array(euclidean_distances(to_matrix(x))); },
        py::arg("points"));

  m.def(
      "geodesic_distances",
      [](const Array& x, std::size_t m1, bool connect) {
        const auto ambient = euclidean_distances(PointCloud(to_matrix(x)));
        auto graph = knn_graph(ambient, m1);
        if (connect) graph = bridge_components(graph, ambient);
        return to_array(geodesic_distances(graph));
      },
      py::arg("points"), py::arg("m1") = 5, py::arg("connect") = false,
      "Shortest-path distances on the m1-nearest-neighbor graph.");

  m.def("isomap", [](const Array& d, std::size_t dim) { return to_array(isomap_embed(to_distance(d), dim).coords()); },
        py::arg("distances"), py::arg("dim"));

  m.def(
      "rips_diagrams",
      [](const Array& d, int max_degree) {
        py::list out;
        for (const auto& diagram : rips_diagrams(to_distance(d), max_degree)) out.append(diagram_array(diagram));
        return out;
      },
      py::arg("distances"), py::arg("max_degree") = 1,
      "Finite Rips persistence diagrams, one (k, 2) array of (birth, death) per degree.");

  m.def(
      "wasserstein",
      [](const Array& a, const Array& b, double p) {
        return wasserstein_distance(to_diagram(a, 0), to_diagram(b, 0), p);
      },
      py::arg("a"), py::arg("b"), py::arg("p") = 2.0, "W_p distance between two diagrams (the root).");

  m.def(
      "optimize",
      [](const Array& initial, const Array& target, double alpha, std::size_t k, std::size_t batch_size,
         double p, int max_degree, double lr, std::size_t steps, double anneal_const, std::size_t m2,
         std::uint64_t seed, const std::string& schedule, std::size_t threads) {
        DipoleConfig cfg;
        cfg.alpha = alpha;
        cfg.k = k;
        cfg.batch_size = batch_size;
        cfg.p = p;
        cfg.max_degree = max_degree;
        cfg.lr = lr;
        cfg.steps = steps;
        cfg.anneal_const = anneal_const;
        cfg.m2 = m2;
        cfg.seed = seed;
        cfg.threads = threads;
        if (schedule == "harmonic") {
          cfg.schedule = StepSchedule::Harmonic;
        } else if (schedule != "annealed") {
          throw py::value_error("schedule must be 'annealed' or 'harmonic'");
        }
        const auto dist = to_distance(target);
        OptimizerState state;
        {
          py::gil_scoped_release release;
          state = run(Embedding(to_matrix(initial)), dist, cfg);
        }
        Matrix trace(state.trace.size(), 3);
        for (std::size_t s = 0; s < state.trace.size(); ++s) {
          trace(s, 0) = state.trace[s].total;
          trace(s, 1) = state.trace[s].topological;
          trace(s, 2) = state.trace[s].metric;
        }
        return py::make_tuple(to_array(state.embedding.coords()), to_array(trace));
      },
      py::arg("initial"), py::arg("target"), py::arg("alpha") = 0.1, py::arg("k") = 64,
      py::arg("batch_size") = 1, py::arg("p") = 2.0, py::arg("max_degree") = 1, py::arg("lr") = 1.0,
      py::arg("steps") = 2500, py::arg("anneal_const") = 1000.0, py::arg("m2") = 3, py::arg("seed") = 0,
      py::arg("schedule") = "annealed", py::arg("threads") = 1,
      "Runs the optimizer; returns (embedding, trace) with trace columns total, topological, metric.");

  m.def(
      "evaluate",
      [](const Array& high, const Array& embedding, std::size_t ijk_samples, std::size_t fps_size,
         std::uint64_t seed) {
        const auto low = euclidean_distances(to_matrix(embedding));
        const auto r = evaluate(to_distance(high), low, {ijk_samples, fps_size, seed});
        py::dict out;
        out["ijk"] = r.ijk;
        out["residual_variance"] = r.residual_variance;
        out["ph0"] = r.ph0;
        out["ph1"] = r.ph1;
        return out;
      },
      py::arg("target"), py::arg("embedding"), py::arg("ijk_samples") = 10000, py::arg("fps_size") = 256,
      py::arg("seed") = 0, "The four quality scores of an embedding against a target metric.");

  m.def(
      "swiss_roll",
      [](std::size_t n, std::uint64_t seed, bool hole, double noise) {
        return generated(swiss_roll(n, seed, {hole, noise}));
      },
      py::arg("n"), py::arg("seed") = 0, py::arg("hole") = true, py::arg("noise") = 0.0,
      "Returns (points, parameters) with parameter columns t and h.");
  m.def(
      "circle",
      [](std::size_t n, double radius, double noise, std::uint64_t seed) {
        return generated(circle_sample(n, radius, noise, seed));
      },
      py::arg("n"), py::arg("radius") = 1.0, py::arg("noise") = 0.0, py::arg("seed") = 0);
  m.def(
      "torus",
      [](std::size_t n, double major_radius, double minor_radius, std::uint64_t seed) {
        return generated(torus_sample(n, major_radius, minor_radius, seed));
      },
      py::arg("n"), py::arg("major_radius") = 3.0, py::arg("minor_radius") = 1.0, py::arg("seed") = 0);
}
