#pragma once

#include <cstddef>
#include <cstdint>

#include "dipole/geometry.hpp"

namespace dipole {

/// Fraction of sampled triples (i, j, k) whose distance order d(i,j) vs d(i,k) is
/// not preserved between `high` and `low`. Triples are drawn with replacement;
/// ties count as preserved.
double ijk_test(const DistanceMatrix& high, const DistanceMatrix& low, std::size_t samples,
                std::uint64_t seed);

/// 1 - R^2, with R the Pearson correlation of the strict upper triangles.
/// Throws DegenerateInputError when either triangle has zero variance.
double residual_variance(const DistanceMatrix& high, const DistanceMatrix& low);

struct GlobalPhOptions {
  std::size_t sample_size = 256;
  std::uint64_t seed_high = 0;  // farthest-point sampling start on `high`
  std::uint64_t seed_low = 0;   // farthest-point sampling start on `low`
};

/// W_2 between the degree-`degree` Rips diagrams of independent farthest-point
/// samples of the two metrics.
double global_ph_score(const DistanceMatrix& high, const DistanceMatrix& low, int degree,
                       const GlobalPhOptions& options);

struct EvaluationOptions {
  std::size_t ijk_samples = 10000;
  std::size_t fps_size = 256;
  std::uint64_t seed = 0;
};

struct EvaluationReport {
  double ijk = 0.0;
  double residual_variance = 0.0;
  double ph0 = 0.0;
  double ph1 = 0.0;

  std::size_t ijk_samples = 0;
  std::uint64_t ijk_seed = 0;
  std::size_t fps_size = 0;
  std::uint64_t fps_seed_high = 0;
  std::uint64_t fps_seed_low = 0;
};

/// All four quality scores. Lower is better for every score.
EvaluationReport evaluate(const DistanceMatrix& high, const DistanceMatrix& low,
                          const EvaluationOptions& options);

}  // namespace dipole
