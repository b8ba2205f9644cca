#pragma once

// Solver-independent checks for LP solutions: KKT residuals and a brute-force
// vertex enumeration oracle for small bounded problems.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "tukey/simplex.hpp"

namespace tukey::testing {

struct KktReport {
  double primal_violation = 0;
  double dual_sign_violation = 0;
  double complementarity = 0;
  double duality_gap = 0;  // relative
};

/// Dual objective b'y + sum of bound terms from reduced costs, which equals the
/// primal objective at an optimum.
inline KktReport check_kkt(const LpModel& lp, const LpSolution& sol) {
  KktReport r;
  const Index n = lp.num_columns();
  const Index m = lp.num_rows();
  const Eigen::VectorXd act = m > 0 ? Eigen::VectorXd(lp.rows * sol.primal) : Eigen::VectorXd();
  for (Index j = 0; j < n; ++j) {
    r.primal_violation = std::max({r.primal_violation, lp.lower[j] - sol.primal[j], sol.primal[j] - lp.upper[j]});
  }
  double dual_obj = 0;
  for (Index i = 0; i < m; ++i) {
    const double y = sol.duals[i];
    const double slack = act[i] - lp.rhs[i];
    switch (lp.senses[static_cast<std::size_t>(i)]) {
      case RowSense::kGreaterEqual:
        r.primal_violation = std::max(r.primal_violation, -slack);
        r.dual_sign_violation = std::max(r.dual_sign_violation, -y);
        break;
      case RowSense::kLessEqual:
        r.primal_violation = std::max(r.primal_violation, slack);
        r.dual_sign_violation = std::max(r.dual_sign_violation, y);
        break;
      case RowSense::kEqual:
        r.primal_violation = std::max(r.primal_violation, std::abs(slack));
        break;
    }
    if (std::abs(y) > 1e-9) r.complementarity = std::max(r.complementarity, std::abs(slack));
    dual_obj += y * lp.rhs[i];
  }
  // Reduced costs d = c - A'y. Positive d needs x at lower, negative at upper.
  const Eigen::VectorXd d = lp.objective - (m > 0 ? Eigen::VectorXd(lp.rows.transpose() * sol.duals)
                                                  : Eigen::VectorXd::Zero(n));
  for (Index j = 0; j < n; ++j) {
    if (d[j] > 1e-9) {
      if (!std::isfinite(lp.lower[j])) r.dual_sign_violation = std::max(r.dual_sign_violation, d[j]);
      else {
        r.complementarity = std::max(r.complementarity, std::abs(sol.primal[j] - lp.lower[j]));
        dual_obj += d[j] * lp.lower[j];
      }
    } else if (d[j] < -1e-9) {
      if (!std::isfinite(lp.upper[j])) r.dual_sign_violation = std::max(r.dual_sign_violation, -d[j]);
      else {
        r.complementarity = std::max(r.complementarity, std::abs(sol.primal[j] - lp.upper[j]));
        dual_obj += d[j] * lp.upper[j];
      }
    }
  }
  r.duality_gap = std::abs(sol.objective_value - dual_obj) / std::max(1.0, std::abs(sol.objective_value));
  return r;
}

/// Minimum of a bounded LP by enumerating every basic point: all n-subsets of
/// the constraint hyperplanes (rows and finite bounds). Returns nullopt when
/// no feasible vertex exists. Only valid when the feasible region is a
/// polytope, i.e. all variables have finite bounds.
inline std::optional<double> brute_force_min(const LpModel& lp, double tol = 1e-7) {
  const Index n = lp.num_columns();
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> offsets;
  for (Index i = 0; i < lp.num_rows(); ++i) {
    normals.push_back(lp.rows.row(i).transpose());
    offsets.push_back(lp.rhs[i]);
  }
  for (Index j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1;
    normals.push_back(e);
    offsets.push_back(lp.lower[j]);
    normals.push_back(e);
    offsets.push_back(lp.upper[j]);
  }
  const std::size_t k = normals.size();
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::optional<double> best;
  auto feasible = [&](const Eigen::VectorXd& x) {
    for (Index j = 0; j < n; ++j)
      if (x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol) return false;
    for (Index i = 0; i < lp.num_rows(); ++i) {
      const double a = lp.rows.row(i).dot(x);
      switch (lp.senses[static_cast<std::size_t>(i)]) {
        case RowSense::kGreaterEqual: if (a < lp.rhs[i] - tol) return false; break;
        case RowSense::kLessEqual: if (a > lp.rhs[i] + tol) return false; break;
        case RowSense::kEqual: if (std::abs(a - lp.rhs[i]) > tol) return false; break;
      }
    }
    return true;
  };
  std::vector<bool> mask(k, false);
  std::fill(mask.begin(), mask.begin() + n, true);
  do {
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    Index r = 0;
    bool skip = false;
    for (std::size_t t = 0; t < k; ++t) {
      if (!mask[t]) continue;
      if (!std::isfinite(offsets[t])) { skip = true; break; }
      a.row(r) = normals[t].transpose();
      b[r] = offsets[t];
      ++r;
    }
    if (skip) continue;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd x = lu.solve(b);
    if (!feasible(x)) continue;
    const double v = lp.objective.dot(x);
    if (!best || v < *best) best = v;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace tukey::testing
