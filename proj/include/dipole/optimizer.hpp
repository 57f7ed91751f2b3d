#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dipole/geometry.hpp"
#include "dipole/isomap.hpp"
#include "dipole/matrix.hpp"

namespace dipole {

enum class StepSchedule {
  Annealed,  // lr * C / (C + step)
  Harmonic,  // lr / (step + 1)
};

/// Hyperparameters of the loss and of the stochastic subgradient loop.
///
/// The loss is (1 - alpha)/2 * topological + alpha * metric, where `topological`
/// averages, over the sampled subsets, the sum over degrees 0..max_degree of W_p^p
/// between the subset's diagram under the target metric and under the embedding,
/// and `metric` is the local metric regularizer over the m2-nearest-neighbor pairs.
struct DipoleConfig {
  double alpha = 0.1;
  std::size_t k = 64;           // subset size
  std::size_t batch_size = 1;   // subsets per step
  double p = 2.0;               // Wasserstein order
  int max_degree = 1;
  double lr = 1.0;
  std::size_t steps = 2500;
  double anneal_const = 1000.0;
  std::size_t m2 = 3;
  std::uint64_t seed = 0;
  StepSchedule schedule = StepSchedule::Annealed;
  std::size_t threads = 1;      // workers for per-subset diagram computations

  bool topology_active() const noexcept { return alpha < 1.0; }
  /// Throws ParameterError when a field is out of range for `n` points.
  void validate(std::size_t n) const;
};

struct LossBreakdown {
  double total = 0.0;
  double topological = 0.0;
  double metric = 0.0;
  std::vector<double> per_degree;
};

struct LossGradient {
  LossBreakdown loss;
  Matrix gradient;  // same shape as the embedding
};

struct OptimizerState {
  Embedding embedding;
  std::size_t step = 0;
  std::mt19937_64 rng;
  std::vector<LossBreakdown> trace;
};

/// Pair set of the local metric regularizer with target distances attached.
NeighborGraph lmr_pairs(const DistanceMatrix& dist_source, std::size_t m2);
/// Radius variant: all pairs within `delta` under the source metric.
NeighborGraph lmr_pairs_radius(const DistanceMatrix& dist_source, double delta);

struct ScalarGradient {
  double loss = 0.0;
  Matrix gradient;
};

/// Sum over pairs of (target - embedded distance)^2 and its gradient. Coincident
/// embedded points contribute a zero gradient.
ScalarGradient lmr_loss_grad(const Embedding& embedding, const NeighborGraph& pairs);

struct TopologicalGradient {
  double loss = 0.0;                // mean over subsets of the per-degree sum
  std::vector<double> per_degree;   // mean over subsets, per degree
  Matrix gradient;
};

/// Distributed-persistence term over the given subsets, with its subgradient
/// accumulated at each subset's global indices in subset order.
TopologicalGradient topo_loss_grad(const Embedding& embedding, const DistanceMatrix& dist_target,
                                   std::span<const std::vector<std::size_t>> subsets,
                                   const DipoleConfig& cfg);

/// Combined loss and subgradient. When alpha == 1 the topological term is skipped.
LossGradient dipole_loss_grad(const Embedding& embedding, const DistanceMatrix& dist_target,
                              const NeighborGraph& pairs,
                              std::span<const std::vector<std::size_t>> subsets,
                              const DipoleConfig& cfg);

/// Evaluation-only loss over fixed subsets.
LossBreakdown dipole_loss(const Embedding& embedding, const DistanceMatrix& dist_target,
                          const NeighborGraph& pairs,
                          std::span<const std::vector<std::size_t>> subsets,
                          const DipoleConfig& cfg);

/// `count` subsets of size k, each drawn uniformly without replacement from [0, n).
std::vector<std::vector<std::size_t>> sample_subsets(std::size_t n, std::size_t k,
                                                     std::size_t count, std::mt19937_64& rng);

/// Step size at iteration `step` (0-based).
double step_size(const DipoleConfig& cfg, std::size_t step);

OptimizerState initial_state(const Embedding& initial, const DipoleConfig& cfg);

/// One stochastic subgradient step followed by mean-centering.
void sgd_step(OptimizerState& state, const DistanceMatrix& dist_target, const NeighborGraph& pairs,
              const DipoleConfig& cfg);

/// Builds the regularizer pairs from the target metric and runs cfg.steps steps.
OptimizerState run(const Embedding& initial, const DistanceMatrix& dist_target,
                   const DipoleConfig& cfg);

/// Same as above with an explicit pair set.
OptimizerState run(const Embedding& initial, const DistanceMatrix& dist_target,
                   const NeighborGraph& pairs, const DipoleConfig& cfg);

}  // namespace dipole
