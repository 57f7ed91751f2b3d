#include "dipole/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dipole/errors.hpp"
#include "dipole/parallel.hpp"
#include "dipole/persistence.hpp"
#include "dipole/wasserstein.hpp"

namespace dipole {

void DipoleConfig::validate(std::size_t n) const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  if (topology_active() && (k < 2 || k > n)) {
    throw ParameterError("subset size k=" + std::to_string(k) + " outside [2, " +
                         std::to_string(n) + "]");
  }
  if (batch_size < 1) throw ParameterError("batch size must be at least 1");
  if (!(p >= 1.0)) throw ParameterError("Wasserstein order p must be at least 1");
  if (max_degree < 0 || max_degree > 1) throw ParameterError("max_degree must be 0 or 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ParameterError("learning rate must be positive");
  if (!(anneal_const > 0.0)) throw ParameterError("annealing constant must be positive");
  if (m2 < 1 || m2 + 1 > n) {
    throw ParameterError("m2=" + std::to_string(m2) + " outside [1, " + std::to_string(n - 1) + "]");
  }
}

NeighborGraph lmr_pairs(const DistanceMatrix& dist_source, std::size_t m2) {
  return knn_graph(dist_source, m2);
}

NeighborGraph lmr_pairs_radius(const DistanceMatrix& dist_source, double delta) {
  return radius_graph(dist_source, delta);
}

namespace {

// Adds weight * d||a_u - a_v|| / d(a_u, a_v) to the gradient rows of u and v.
void add_distance_gradient(const Matrix& coords, Matrix& grad, std::size_t u, std::size_t v,
                           double length, double weight) {
  if (length == 0.0 || weight == 0.0) return;
  auto a = coords.row(u);
  auto b = coords.row(v);
  auto gu = grad.row(u);
  auto gv = grad.row(v);
  const double scale = weight / length;
  for (std::size_t c = 0; c < coords.cols(); ++c) {
    const double g = scale * (a[c] - b[c]);
    gu[c] += g;
    gv[c] -= g;
  }
}

double embedded_distance(const Matrix& coords, std::size_t u, std::size_t v) {
  auto a = coords.row(u);
  auto b = coords.row(v);
  double sq = 0.0;
  for (std::size_t c = 0; c < coords.cols(); ++c) sq += (a[c] - b[c]) * (a[c] - b[c]);
  return std::sqrt(sq);
}

struct SubsetResult {
  std::vector<double> per_degree;
  Matrix gradient;  // k x d, local indices
};

SubsetResult subset_loss_grad(const Embedding& embedding, const DistanceMatrix& dist_target,
                              const std::vector<std::size_t>& subset, const DipoleConfig& cfg) {
  const std::size_t k = subset.size();
  const std::size_t d = embedding.dim();
  Matrix local(k, d);
  for (std::size_t a = 0; a < k; ++a) {
    auto src = embedding.coords().row(subset[a]);
    std::copy(src.begin(), src.end(), local.row(a).begin());
  }
  const DistanceMatrix local_dist = euclidean_distances(local);
  const auto target = rips_diagrams(restrict(dist_target, subset), cfg.max_degree);
  const auto current = rips_diagrams(local_dist, cfg.max_degree);

  SubsetResult out;
  out.gradient = Matrix(k, d);
  for (std::size_t deg = 0; deg < target.size(); ++deg) {
    const auto match = wasserstein_pp(target[deg], current[deg], cfg.p);
    out.per_degree.push_back(match.cost);
    const auto point_grad = matching_subgradient(target[deg], current[deg], match);
    for (std::size_t q = 0; q < current[deg].size(); ++q) {
      const auto& point = current[deg].points[q];
      if (point.birth_edge) {
        const auto& e = *point.birth_edge;
        add_distance_gradient(local, out.gradient, e.u, e.v, local_dist(e.u, e.v), point_grad[q][0]);
      }
      const auto& e = point.death_edge;
      add_distance_gradient(local, out.gradient, e.u, e.v, local_dist(e.u, e.v), point_grad[q][1]);
    }
  }
  return out;
}

}  // namespace

ScalarGradient lmr_loss_grad(const Embedding& embedding, const NeighborGraph& pairs) {
  if (pairs.n != embedding.size()) throw ValidationError("pair set and embedding sizes differ");
  ScalarGradient out;
  out.gradient = Matrix(embedding.size(), embedding.dim());
  for (const auto& e : pairs.edges) {
    const double len = embedded_distance(embedding.coords(), e.u, e.v);
    const double residual = e.weight - len;
    out.loss += residual * residual;
    add_distance_gradient(embedding.coords(), out.gradient, e.u, e.v, len, -2.0 * residual);
  }
  return out;
}

TopologicalGradient topo_loss_grad(const Embedding& embedding, const DistanceMatrix& dist_target,
                                   std::span<const std::vector<std::size_t>> subsets,
                                   const DipoleConfig& cfg) {
  if (dist_target.size() != embedding.size()) {
    throw ValidationError("target metric and embedding sizes differ");
  }
  TopologicalGradient out;
  out.gradient = Matrix(embedding.size(), embedding.dim());
  out.per_degree.assign(static_cast<std::size_t>(cfg.max_degree) + 1, 0.0);
  if (subsets.empty()) return out;

  std::vector<SubsetResult> results(subsets.size());
  parallel_for(subsets.size(), cfg.threads, [&](std::size_t s) {
    results[s] = subset_loss_grad(embedding, dist_target, subsets[s], cfg);
  });

  // Accumulate in subset order so results do not depend on the thread count.
  const double weight = 1.0 / static_cast<double>(subsets.size());
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (std::size_t deg = 0; deg < results[s].per_degree.size(); ++deg) {
      out.per_degree[deg] += weight * results[s].per_degree[deg];
    }
    for (std::size_t a = 0; a < subsets[s].size(); ++a) {
      auto src = results[s].gradient.row(a);
      auto dst = out.gradient.row(subsets[s][a]);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += weight * src[c];
    }
  }
  out.loss = std::accumulate(out.per_degree.begin(), out.per_degree.end(), 0.0);
  return out;
}

LossGradient dipole_loss_grad(const Embedding& embedding, const DistanceMatrix& dist_target,
                              const NeighborGraph& pairs,
                              std::span<const std::vector<std::size_t>> subsets,
                              const DipoleConfig& cfg) {
  LossGradient out;
  out.gradient = Matrix(embedding.size(), embedding.dim());
  const double topo_weight = 0.5 * (1.0 - cfg.alpha);

  {
    const auto metric = lmr_loss_grad(embedding, pairs);
    out.loss.metric = metric.loss;
    auto& g = out.gradient.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += cfg.alpha * metric.gradient.data()[i];
  }
  if (cfg.topology_active()) {
    const auto topo = topo_loss_grad(embedding, dist_target, subsets, cfg);
    out.loss.topological = topo.loss;
    out.loss.per_degree = topo.per_degree;
    auto& g = out.gradient.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += topo_weight * topo.gradient.data()[i];
  }
  out.loss.total = topo_weight * out.loss.topological + cfg.alpha * out.loss.metric;
  return out;
}

LossBreakdown dipole_loss(const Embedding& embedding, const DistanceMatrix& dist_target,
                          const NeighborGraph& pairs,
                          std::span<const std::vector<std::size_t>> subsets,
                          const DipoleConfig& cfg) {
  return dipole_loss_grad(embedding, dist_target, pairs, subsets, cfg).loss;
}

std::vector<std::vector<std::size_t>> sample_subsets(std::size_t n, std::size_t k,
                                                     std::size_t count, std::mt19937_64& rng) {
  if (k > n) throw ParameterError("subset size exceeds point count");
  std::vector<std::vector<std::size_t>> subsets(count);
  std::vector<std::size_t> pool(n);
  for (auto& subset : subsets) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    subset.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(subset.begin(), subset.end());
  }
  return subsets;
}

double step_size(const DipoleConfig& cfg, std::size_t step) {
  const double s = static_cast<double>(step);
  switch (cfg.schedule) {
    case StepSchedule::Harmonic:
      return cfg.lr / (s + 1.0);
    case StepSchedule::Annealed:
    default:
      return cfg.lr * cfg.anneal_const / (cfg.anneal_const + s);
  }
}

OptimizerState initial_state(const Embedding& initial, const DipoleConfig& cfg) {
  OptimizerState state;
  state.embedding = initial;
  center_columns(state.embedding.coords());
  state.rng.seed(cfg.seed);
  return state;
}

void sgd_step(OptimizerState& state, const DistanceMatrix& dist_target, const NeighborGraph& pairs,
              const DipoleConfig& cfg) {
  const std::size_t n = state.embedding.size();
  std::vector<std::vector<std::size_t>> subsets;
  if (cfg.topology_active()) subsets = sample_subsets(n, cfg.k, cfg.batch_size, state.rng);
  auto result = dipole_loss_grad(state.embedding, dist_target, pairs, subsets, cfg);

  const double eta = step_size(cfg, state.step);
  auto& x = state.embedding.coords().data();
  const auto& g = result.gradient.data();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= eta * g[i];
  center_columns(state.embedding.coords());
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw NumericalError("embedding diverged at step " + std::to_string(state.step) +
                           "; lower the learning rate");
    }
  }
  ++state.step;
  state.trace.push_back(std::move(result.loss));
}

OptimizerState run(const Embedding& initial, const DistanceMatrix& dist_target,
                   const NeighborGraph& pairs, const DipoleConfig& cfg) {
  if (dist_target.size() != initial.size()) {
    throw ValidationError("target metric has " + std::to_string(dist_target.size()) +
                          " points but the embedding has " + std::to_string(initial.size()));
  }
  cfg.validate(initial.size());
  auto state = initial_state(initial, cfg);
  state.trace.reserve(cfg.steps);
  for (std::size_t s = 0; s < cfg.steps; ++s) sgd_step(state, dist_target, pairs, cfg);
  return state;
}

OptimizerState run(const Embedding& initial, const DistanceMatrix& dist_target,
                   const DipoleConfig& cfg) {
  cfg.validate(initial.size());
  return run(initial, dist_target, lmr_pairs(dist_target, cfg.m2), cfg);
}

}  // namespace dipole
