#include "dipole/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dipole/errors.hpp"
#include "dipole/persistence.hpp"
#include "dipole/wasserstein.hpp"

namespace dipole {
namespace {

void require_same_size(const DistanceMatrix& high, const DistanceMatrix& low) {
  if (high.size() != low.size()) {
    throw ValidationError("metrics have different sizes (" + std::to_string(high.size()) + " vs " +
                          std::to_string(low.size()) + ")");
  }
}

struct SampledDiagrams {
  std::vector<PersistenceDiagram> high, low;
};

SampledDiagrams sampled_diagrams(const DistanceMatrix& high, const DistanceMatrix& low,
                                 int max_degree, const GlobalPhOptions& options) {
  require_same_size(high, low);
  if (options.sample_size < 2) throw ParameterError("farthest-point sample size must be at least 2");
  const auto sample_high = farthest_point_sample(high, options.sample_size, options.seed_high);
  const auto sample_low = farthest_point_sample(low, options.sample_size, options.seed_low);
  return {rips_diagrams(restrict(high, sample_high), max_degree),
          rips_diagrams(restrict(low, sample_low), max_degree)};
}

}  // namespace

double ijk_test(const DistanceMatrix& high, const DistanceMatrix& low, std::size_t samples,
                std::uint64_t seed) {
  require_same_size(high, low);
  if (samples < 1) throw ParameterError("ijk test needs at least one sample");
  if (high.size() == 0) throw ValidationError("ijk test needs a nonempty metric");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, high.size() - 1);
  std::size_t preserved = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    const std::size_t k = pick(rng);
    const bool both_le = high(i, j) <= high(i, k) && low(i, j) <= low(i, k);
    const bool both_ge = high(i, j) >= high(i, k) && low(i, j) >= low(i, k);
    if (both_le || both_ge) ++preserved;
  }
  return 1.0 - static_cast<double>(preserved) / static_cast<double>(samples);
}

double residual_variance(const DistanceMatrix& high, const DistanceMatrix& low) {
  require_same_size(high, low);
  const std::size_t n = high.size();
  if (n < 3) throw ValidationError("residual variance needs at least 3 points");
  const double count = static_cast<double>(n * (n - 1) / 2);
  double mean_h = 0.0, mean_l = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      mean_h += high(i, j);
      mean_l += low(i, j);
    }
  }
  mean_h /= count;
  mean_l /= count;
  double cov = 0.0, var_h = 0.0, var_l = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double h = high(i, j) - mean_h;
      const double l = low(i, j) - mean_l;
      cov += h * l;
      var_h += h * h;
      var_l += l * l;
    }
  }
  if (var_h == 0.0 || var_l == 0.0) {
    throw DegenerateInputError("residual variance is undefined for a constant distance vector");
  }
  const double r = cov / std::sqrt(var_h * var_l);
  return std::max(0.0, 1.0 - r * r);
}

double global_ph_score(const DistanceMatrix& high, const DistanceMatrix& low, int degree,
                       const GlobalPhOptions& options) {
  if (degree < 0 || degree > 1) throw ParameterError("degree must be 0 or 1");
  const auto diagrams = sampled_diagrams(high, low, degree, options);
  return wasserstein_distance(diagrams.high[static_cast<std::size_t>(degree)],
                              diagrams.low[static_cast<std::size_t>(degree)], 2.0);
}

EvaluationReport evaluate(const DistanceMatrix& high, const DistanceMatrix& low,
                          const EvaluationOptions& options) {
  EvaluationReport report;
  report.ijk_samples = options.ijk_samples;
  report.ijk_seed = options.seed;
  report.fps_size = options.fps_size;
  report.fps_seed_high = options.seed;
  report.fps_seed_low = options.seed;

  report.ijk = ijk_test(high, low, options.ijk_samples, options.seed);
  report.residual_variance = residual_variance(high, low);
  const GlobalPhOptions ph{options.fps_size, report.fps_seed_high, report.fps_seed_low};
  const auto diagrams = sampled_diagrams(high, low, 1, ph);
  report.ph0 = wasserstein_distance(diagrams.high[0], diagrams.low[0], 2.0);
  report.ph1 = wasserstein_distance(diagrams.high[1], diagrams.low[1], 2.0);
  return report;
}

}  // namespace dipole
