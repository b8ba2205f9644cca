#pragma once

#include <initializer_list>
#include <random>

#include "tukey/model.hpp"

namespace tukey::testing {

inline InfeasibleSystem make_system(std::initializer_list<std::initializer_list<double>> rows,
                                    std::vector<int> weights = {}) {
  InfeasibleSystem sys;
  sys.dim = static_cast<Index>(rows.begin()->size());
  sys.rows.resize(static_cast<Index>(rows.size()), sys.dim);
  Index j = 0;
  for (const auto& r : rows) {
    Index i = 0;
    for (double v : r) sys.rows(j, i++) = v;
    ++j;
  }
  sys.weights = weights.empty() ? std::vector<int>(rows.size(), 1) : std::move(weights);
  return sys;
}

inline InfeasibleSystem simplex_rows() { return make_system({{1, 0}, {0, 1}, {-1, -1}}); }
inline InfeasibleSystem square_rows() { return make_system({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}); }

/// Gaussian cloud with the query at the origin, rows unit-scaled.
inline InfeasibleSystem gaussian_system(std::mt19937_64& rng, Index n, Index d) {
  std::normal_distribution<double> g;
  PointSet ps;
  ps.dim = d;
  ps.points.resize(n, d);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < d; ++i) ps.points(j, i) = g(rng);
  ps.query = Eigen::VectorXd::Zero(d);
  return build_system(ps);
}

}  // namespace tukey::testing
