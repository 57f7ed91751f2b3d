#include "dipole/wasserstein.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dipole/errors.hpp"

namespace dipole {

std::vector<std::size_t> solve_assignment(const Matrix& cost) {
  const std::size_t n = cost.rows();
  if (cost.cols() != n) throw ValidationError("assignment needs a square cost matrix");
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();

  // 1-based potentials; column 0 is a virtual start column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = row_of[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      if (j1 == 0) throw NumericalError("assignment solver found no augmenting column");
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[row_of[j] - 1] = j - 1;
  return assignment;
}

double diagonal_gap(const PersistencePoint& point) {
  return (point.death - point.birth) / std::sqrt(2.0);
}

double point_cost(const PersistencePoint& a, const PersistencePoint& b, double p) {
  const double db = a.birth - b.birth;
  const double dd = a.death - b.death;
  const double sq = db * db + dd * dd;
  return p == 2.0 ? sq : std::pow(sq, p / 2.0);
}

double diagonal_cost(const PersistencePoint& point, double p) {
  const double gap = point.death - point.birth;
  return p == 2.0 ? 0.5 * gap * gap : std::pow(std::abs(gap) / std::sqrt(2.0), p);
}

double matching_cost(const PersistenceDiagram& a, const PersistenceDiagram& b,
                     const DiagramMatching& match) {
  std::vector<int> seen_a(a.size(), 0), seen_b(b.size(), 0);
  double total = 0.0;
  for (const auto& pair : match.pairs) {
    if (pair.a == kDiagonal && pair.b == kDiagonal) {
      throw ConsistencyError("matching pairs the diagonal with itself");
    }
    if ((pair.a != kDiagonal && pair.a >= a.size()) || (pair.b != kDiagonal && pair.b >= b.size())) {
      throw ConsistencyError("matching refers to a point outside its diagram");
    }
    if (pair.a != kDiagonal) ++seen_a[pair.a];
    if (pair.b != kDiagonal) ++seen_b[pair.b];
    if (pair.a == kDiagonal) {
      total += diagonal_cost(b.points[pair.b], match.p);
    } else if (pair.b == kDiagonal) {
      total += diagonal_cost(a.points[pair.a], match.p);
    } else {
      total += point_cost(a.points[pair.a], b.points[pair.b], match.p);
    }
  }
  for (int s : seen_a) {
    if (s != 1) throw ConsistencyError("matching does not cover the first diagram exactly once");
  }
  for (int s : seen_b) {
    if (s != 1) throw ConsistencyError("matching does not cover the second diagram exactly once");
  }
  return total;
}

DiagramMatching wasserstein_pp(const PersistenceDiagram& a, const PersistenceDiagram& b, double p) {
  if (a.degree != b.degree) {
    throw ParameterError("cannot match diagrams of degree " + std::to_string(a.degree) + " and " +
                         std::to_string(b.degree));
  }
  if (!(p >= 1.0)) throw ParameterError("Wasserstein order must be at least 1");

  // Rows: points of a, then one diagonal slot per point of b.
  // Columns: points of b, then one diagonal slot per point of a.
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  Matrix cost(n, n, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) cost(i, j) = point_cost(a.points[i], b.points[j], p);
    const double to_diagonal = diagonal_cost(a.points[i], p);
    for (std::size_t j = nb; j < n; ++j) cost(i, j) = to_diagonal;
  }
  for (std::size_t j = 0; j < nb; ++j) {
    const double to_diagonal = diagonal_cost(b.points[j], p);
    for (std::size_t i = na; i < n; ++i) cost(i, j) = to_diagonal;
  }

  const auto assignment = solve_assignment(cost);
  DiagramMatching match;
  match.p = p;
  for (std::size_t i = 0; i < na; ++i) {
    match.pairs.push_back({i, assignment[i] < nb ? assignment[i] : kDiagonal});
  }
  for (std::size_t i = na; i < n; ++i) {
    if (assignment[i] < nb) match.pairs.push_back({kDiagonal, assignment[i]});
  }
  match.cost = matching_cost(a, b, match);
  return match;
}

double wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, double p) {
  return std::pow(wasserstein_pp(a, b, p).cost, 1.0 / p);
}

namespace {

// Gradient of ||x||^p with respect to x = (x0, x1).
std::array<double, 2> power_norm_gradient(double x0, double x1, double p) {
  if (p == 2.0) return {2.0 * x0, 2.0 * x1};
  const double norm = std::hypot(x0, x1);
  if (norm == 0.0) return {0.0, 0.0};
  const double scale = p * std::pow(norm, p - 2.0);
  return {scale * x0, scale * x1};
}

}  // namespace

std::vector<std::array<double, 2>> matching_subgradient(const PersistenceDiagram& target,
                                                        const PersistenceDiagram& variable,
                                                        const DiagramMatching& match) {
  const double recomputed = matching_cost(target, variable, match);
  if (std::abs(recomputed - match.cost) > 1e-9 * std::max(1.0, std::abs(match.cost))) {
    throw ConsistencyError("stale matching: recorded cost " + std::to_string(match.cost) +
                           ", recomputed " + std::to_string(recomputed));
  }
  std::vector<std::array<double, 2>> grad(variable.size(), {0.0, 0.0});
  for (const auto& pair : match.pairs) {
    if (pair.b == kDiagonal) continue;
    const auto& q = variable.points[pair.b];
    double anchor_birth, anchor_death;
    if (pair.a == kDiagonal) {
      anchor_birth = anchor_death = 0.5 * (q.birth + q.death);
    } else {
      anchor_birth = target.points[pair.a].birth;
      anchor_death = target.points[pair.a].death;
    }
    grad[pair.b] = power_norm_gradient(q.birth - anchor_birth, q.death - anchor_death, match.p);
  }
  return grad;
}

}  // namespace dipole
