#pragma once

// Dense bounded-variable revised simplex.
//
// Every row i gets a logical variable r_i = <A_i, x> so the working system is
// [A | -I] (x, r) = 0 with bounds on all n + m variables. A row sense becomes a
// bound on its logical: >= b gives r in [b, inf), <= b gives (-inf, b], = b
// fixes r. The slack basis B = -I is the starting point; phase 1 minimizes the
// sum of bound violations of the basic variables, phase 2 the objective.

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "tukey/model.hpp"

namespace tukey {

enum class RowSense { kGreaterEqual, kLessEqual, kEqual };

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumerics };

enum class VarStatus { kBasic, kAtLower, kAtUpper, kFree, kFixed };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kNumerics: return "numerics";
  }
  return "unknown";
}

/// minimize objective' x  s.t.  rows x (sense) rhs,  lower <= x <= upper.
template <typename Scalar>
struct BasicLpModel {
  Vector<Scalar> objective;
  Matrix<Scalar> rows;
  std::vector<RowSense> senses;
  Vector<Scalar> rhs;
  Vector<Scalar> lower;
  Vector<Scalar> upper;

  BasicLpModel() = default;
  BasicLpModel(Index num_columns, Index num_rows)
      : objective(Vector<Scalar>::Zero(num_columns)),
        rows(Matrix<Scalar>::Zero(num_rows, num_columns)),
        senses(static_cast<std::size_t>(num_rows), RowSense::kGreaterEqual),
        rhs(Vector<Scalar>::Zero(num_rows)),
        lower(Vector<Scalar>::Constant(num_columns, -std::numeric_limits<Scalar>::infinity())),
        upper(Vector<Scalar>::Constant(num_columns, std::numeric_limits<Scalar>::infinity())) {}

  Index num_columns() const { return objective.size(); }
  Index num_rows() const { return rows.rows(); }

  void validate() const {
    const Index n = num_columns();
    if (rows.cols() != n && rows.rows() > 0) throw std::invalid_argument("lp: row length differs from column count");
    if (lower.size() != n || upper.size() != n) throw std::invalid_argument("lp: bound vectors have wrong size");
    if (static_cast<Index>(senses.size()) != rows.rows() || rhs.size() != rows.rows())
      throw std::invalid_argument("lp: row data sizes disagree");
    for (Index j = 0; j < n; ++j)
      if (!(lower[j] <= upper[j])) throw std::invalid_argument("lp: lower bound above upper bound");
  }
};

template <typename Scalar>
struct BasicLpSolution {
  LpStatus status = LpStatus::kNumerics;
  Vector<Scalar> primal;
  Scalar objective_value = 0;
  /// Shadow prices, d(objective)/d(rhs_i). On kInfeasible these are the
  /// phase-1 multipliers, a Farkas certificate for the row system.
  Vector<Scalar> duals;
  Vector<Scalar> reduced_costs;
  Vector<Scalar> row_activity;
  /// Basic variables; index j < n is column j, n + i is the logical of row i.
  std::vector<Index> basis;
  std::vector<VarStatus> column_status;
  std::vector<VarStatus> row_status;
  int iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

using LpModel = BasicLpModel<double>;
using LpSolution = BasicLpSolution<double>;

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_interval = 100;
  int degenerate_budget = 50;
  int max_iterations = 0;  // 0: derived from the problem size
};

namespace detail {

template <typename Scalar>
class DenseSimplex {
 public:
  DenseSimplex(const BasicLpModel<Scalar>& model, const SimplexOptions& opt)
      : model_(model), opt_(opt), n_(model.num_columns()), m_(model.num_rows()), total_(n_ + m_) {}

  BasicLpSolution<Scalar> run() {
    init();
    const int max_iter = opt_.max_iterations > 0 ? opt_.max_iterations
                                                 : static_cast<int>(200 + 50 * (n_ + m_));
    BasicLpSolution<Scalar> sol;
    bool phase_two_done = false;
    int attempts = 0;
    while (!phase_two_done) {
      if (!refactor()) return numerics(sol);
      if (++attempts > 20) return numerics(sol);
      if (infeasibility() > 0) {
        const Outcome p1 = iterate(/*phase_one=*/true, max_iter);
        if (p1 == Outcome::kNumerics) return numerics(sol);
        if (!refactor()) return numerics(sol);
        if (infeasibility() > 0) {
          compute_duals(/*phase_one=*/true);
          fill(sol, LpStatus::kInfeasible);
          return sol;
        }
      }
      const Outcome p2 = iterate(/*phase_one=*/false, max_iter);
      if (p2 == Outcome::kNumerics) return numerics(sol);
      if (p2 == Outcome::kUnbounded) {
        fill(sol, LpStatus::kUnbounded);
        return sol;
      }
      if (!refactor()) return numerics(sol);
      // Drift past the tolerance sends us back through phase 1.
      phase_two_done = infeasibility() == 0;
    }
    compute_duals(/*phase_one=*/false);
    fill(sol, LpStatus::kOptimal);
    return sol;
  }

 private:
  enum class Outcome { kOptimal, kUnbounded, kNumerics };
  static constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

  void init() {
    lb_.resize(total_);
    ub_.resize(total_);
    cost_.setZero(total_);
    for (Index j = 0; j < n_; ++j) {
      lb_[j] = model_.lower[j];
      ub_[j] = model_.upper[j];
      cost_[j] = model_.objective[j];
    }
    for (Index i = 0; i < m_; ++i) {
      const Scalar b = model_.rhs[i];
      switch (model_.senses[static_cast<std::size_t>(i)]) {
        case RowSense::kGreaterEqual: lb_[n_ + i] = b; ub_[n_ + i] = kInf; break;
        case RowSense::kLessEqual: lb_[n_ + i] = -kInf; ub_[n_ + i] = b; break;
        case RowSense::kEqual: lb_[n_ + i] = b; ub_[n_ + i] = b; break;
      }
    }
    x_.setZero(total_);
    status_.assign(static_cast<std::size_t>(total_), VarStatus::kBasic);
    for (Index j = 0; j < n_; ++j) {
      if (lb_[j] == ub_[j]) {
        status_[j] = VarStatus::kFixed;
        x_[j] = lb_[j];
      } else if (std::isfinite(lb_[j])) {
        status_[j] = VarStatus::kAtLower;
        x_[j] = lb_[j];
      } else if (std::isfinite(ub_[j])) {
        status_[j] = VarStatus::kAtUpper;
        x_[j] = ub_[j];
      } else {
        status_[j] = VarStatus::kFree;
        x_[j] = 0;
      }
    }
    head_.resize(static_cast<std::size_t>(m_));
    for (Index i = 0; i < m_; ++i) head_[static_cast<std::size_t>(i)] = n_ + i;
  }

  // Column of [A | -I].
  Vector<Scalar> column(Index j) const {
    if (j < n_) return model_.rows.col(j);
    Vector<Scalar> e = Vector<Scalar>::Zero(m_);
    e[j - n_] = Scalar(-1);
    return e;
  }

  Scalar tol_for(Scalar bound) const { return opt_.feasibility_tol * std::max(Scalar(1), std::abs(bound)); }

  bool refactor() {
    since_refactor_ = 0;
    if (m_ == 0) {
      binv_.resize(0, 0);
      return true;
    }
    Matrix<Scalar> basis(m_, m_);
    for (Index i = 0; i < m_; ++i) basis.col(i) = column(head_[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Matrix<Scalar>> lu(basis);
    if (!lu.isInvertible()) return false;
    binv_ = lu.inverse();
    recompute_basic_values();
    return binv_.allFinite();
  }

  void recompute_basic_values() {
    // B x_B = -N x_N
    Vector<Scalar> rhs = Vector<Scalar>::Zero(m_);
    for (Index j = 0; j < n_; ++j)
      if (status_[j] != VarStatus::kBasic && x_[j] != Scalar(0)) rhs -= model_.rows.col(j) * x_[j];
    for (Index i = 0; i < m_; ++i) {
      const Index k = n_ + i;
      if (status_[k] != VarStatus::kBasic && x_[k] != Scalar(0)) rhs[i] += x_[k];
    }
    const Vector<Scalar> xb = binv_ * rhs;
    for (Index i = 0; i < m_; ++i) x_[head_[static_cast<std::size_t>(i)]] = xb[i];
  }

  // Sum of bound violations of basic variables beyond tolerance; 0 when feasible.
  Scalar infeasibility() const {
    Scalar total = 0;
    for (Index i = 0; i < m_; ++i) {
      const Index k = head_[static_cast<std::size_t>(i)];
      if (x_[k] < lb_[k] - tol_for(lb_[k])) total += lb_[k] - x_[k];
      if (x_[k] > ub_[k] + tol_for(ub_[k])) total += x_[k] - ub_[k];
    }
    return total;
  }

  Vector<Scalar> basic_costs(bool phase_one) const {
    Vector<Scalar> cb(m_);
    for (Index i = 0; i < m_; ++i) {
      const Index k = head_[static_cast<std::size_t>(i)];
      if (phase_one) {
        if (x_[k] < lb_[k] - tol_for(lb_[k])) cb[i] = Scalar(-1);
        else if (x_[k] > ub_[k] + tol_for(ub_[k])) cb[i] = Scalar(1);
        else cb[i] = Scalar(0);
      } else {
        cb[i] = cost_[k];
      }
    }
    return cb;
  }

  Scalar reduced_cost(Index j, const Vector<Scalar>& y, bool phase_one) const {
    const Scalar c = phase_one ? Scalar(0) : cost_[j];
    if (j < n_) return c - y.dot(model_.rows.col(j));
    return c + y[j - n_];
  }

  // +1 to increase, -1 to decrease, 0 if the variable cannot improve.
  int improving_direction(Index j, Scalar d) const {
    const Scalar tol = opt_.optimality_tol;
    switch (status_[j]) {
      case VarStatus::kAtLower: return d < -tol ? 1 : 0;
      case VarStatus::kAtUpper: return d > tol ? -1 : 0;
      case VarStatus::kFree: return d < -tol ? 1 : (d > tol ? -1 : 0);
      default: return 0;
    }
  }

  Outcome iterate(bool phase_one, int max_iter) {
    int degenerate = 0;
    bool bland = false;
    while (true) {
      if (iterations_ >= max_iter) return Outcome::kNumerics;
      if (phase_one && infeasibility() == 0) return Outcome::kOptimal;

      const Vector<Scalar> y = basic_costs(phase_one).transpose() * binv_;

      Index entering = -1;
      int dir = 0;
      Scalar best = 0;
      for (Index j = 0; j < total_; ++j) {
        if (status_[j] == VarStatus::kBasic || status_[j] == VarStatus::kFixed) continue;
        const Scalar d = reduced_cost(j, y, phase_one);
        const int dj = improving_direction(j, d);
        if (dj == 0) continue;
        if (bland) {
          entering = j;
          dir = dj;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          dir = dj;
        }
      }
      if (entering < 0) return Outcome::kOptimal;

      const Vector<Scalar> alpha = binv_ * column(entering);

      // Step length limited by the entering variable's own range and by the
      // basic variables reaching a bound (or, in phase 1, becoming feasible).
      Scalar step = kInf;
      Index leave_pos = -1;
      VarStatus leave_status = VarStatus::kAtLower;
      const Scalar own = dir > 0 ? ub_[entering] - x_[entering] : x_[entering] - lb_[entering];
      if (std::isfinite(own)) step = own;

      Index leave_var = std::numeric_limits<Index>::max();
      for (Index i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) < opt_.pivot_tol) continue;
        const Index k = head_[static_cast<std::size_t>(i)];
        const Scalar rate = -static_cast<Scalar>(dir) * alpha[i];
        const Scalar xk = x_[k];
        Scalar limit = kInf;
        VarStatus at = VarStatus::kAtLower;
        const bool below = xk < lb_[k] - tol_for(lb_[k]);
        const bool above = xk > ub_[k] + tol_for(ub_[k]);
        if (phase_one && below) {
          if (rate > 0) { limit = (lb_[k] - xk) / rate; at = VarStatus::kAtLower; }
        } else if (phase_one && above) {
          if (rate < 0) { limit = (ub_[k] - xk) / rate; at = VarStatus::kAtUpper; }
        } else if (rate > 0) {
          if (std::isfinite(ub_[k])) { limit = (ub_[k] - xk) / rate; at = VarStatus::kAtUpper; }
        } else {
          if (std::isfinite(lb_[k])) { limit = (lb_[k] - xk) / rate; at = VarStatus::kAtLower; }
        }
        if (!std::isfinite(limit)) continue;
        limit = std::max(limit, Scalar(0));
        const bool tie = leave_pos >= 0 && std::abs(limit - step) <= Scalar(1e-12) * std::max(Scalar(1), step);
        if (limit < step && !tie) {
          step = limit;
          leave_pos = i;
          leave_var = k;
          leave_status = at;
        } else if (tie && k < leave_var) {
          leave_pos = i;
          leave_var = k;
          leave_status = at;
        }
      }
      if (!std::isfinite(step)) {
        if (phase_one) return Outcome::kNumerics;
        return Outcome::kUnbounded;
      }

      ++iterations_;
      const Scalar delta = static_cast<Scalar>(dir) * step;
      for (Index i = 0; i < m_; ++i) x_[head_[static_cast<std::size_t>(i)]] -= alpha[i] * delta;
      x_[entering] += delta;

      if (step <= Scalar(1e-12)) {
        if (++degenerate > opt_.degenerate_budget) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }

      if (leave_pos < 0) {
        // Bound flip.
        if (dir > 0) { status_[entering] = VarStatus::kAtUpper; x_[entering] = ub_[entering]; }
        else { status_[entering] = VarStatus::kAtLower; x_[entering] = lb_[entering]; }
        continue;
      }

      const Index k = head_[static_cast<std::size_t>(leave_pos)];
      status_[k] = lb_[k] == ub_[k] ? VarStatus::kFixed : leave_status;
      x_[k] = leave_status == VarStatus::kAtUpper ? ub_[k] : lb_[k];
      status_[entering] = VarStatus::kBasic;
      head_[static_cast<std::size_t>(leave_pos)] = entering;

      // Product-form update of the explicit inverse.
      const Scalar pivot = alpha[leave_pos];
      binv_.row(leave_pos) /= pivot;
      for (Index i = 0; i < m_; ++i) {
        if (i == leave_pos || alpha[i] == Scalar(0)) continue;
        binv_.row(i) -= alpha[i] * binv_.row(leave_pos);
      }
      if (++since_refactor_ >= opt_.refactor_interval) {
        if (!refactor()) return Outcome::kNumerics;
      }
    }
  }

  void compute_duals(bool phase_one) {
    y_ = m_ > 0 ? Vector<Scalar>(basic_costs(phase_one).transpose() * binv_) : Vector<Scalar>();
    duals_phase_one_ = phase_one;
  }

  BasicLpSolution<Scalar>& numerics(BasicLpSolution<Scalar>& sol) {
    sol.status = LpStatus::kNumerics;
    sol.iterations = iterations_;
    return sol;
  }

  void fill(BasicLpSolution<Scalar>& sol, LpStatus status) {
    sol.status = status;
    sol.iterations = iterations_;
    sol.primal = x_.head(n_);
    sol.row_activity = m_ > 0 ? Vector<Scalar>(model_.rows * sol.primal) : Vector<Scalar>();
    sol.objective_value = model_.objective.dot(sol.primal);
    if (status == LpStatus::kUnbounded) compute_duals(false);
    sol.duals = y_;
    sol.reduced_costs.resize(n_);
    for (Index j = 0; j < n_; ++j) sol.reduced_costs[j] = reduced_cost(j, y_, duals_phase_one_);
    sol.basis.assign(head_.begin(), head_.end());
    sol.column_status.assign(status_.begin(), status_.begin() + n_);
    sol.row_status.assign(status_.begin() + n_, status_.end());
  }

  const BasicLpModel<Scalar>& model_;
  SimplexOptions opt_;
  Index n_, m_, total_;
  Vector<Scalar> lb_, ub_, cost_, x_, y_;
  std::vector<VarStatus> status_;
  std::vector<Index> head_;
  Matrix<Scalar> binv_;
  int since_refactor_ = 0;
  int iterations_ = 0;
  bool duals_phase_one_ = false;
};

}  // namespace detail

template <typename Scalar>
BasicLpSolution<Scalar> solve_lp(const BasicLpModel<Scalar>& model, const SimplexOptions& opt = {}) {
  model.validate();
  return detail::DenseSimplex<Scalar>(model, opt).run();
}

/// Solves `model` with each listed variable pinned to its value.
template <typename Scalar>
BasicLpSolution<Scalar> solve_with_fixings(const BasicLpModel<Scalar>& model, const std::map<Index, Scalar>& fixed,
                                           const SimplexOptions& opt = {}) {
  BasicLpModel<Scalar> pinned = model;
  for (const auto& [j, v] : fixed) {
    if (j < 0 || j >= model.num_columns()) throw std::invalid_argument("lp: fixing of unknown variable");
    if (v < model.lower[j] || v > model.upper[j]) throw std::invalid_argument("lp: fixed value outside bounds");
    pinned.lower[j] = v;
    pinned.upper[j] = v;
  }
  return solve_lp(pinned, opt);
}

}  // namespace tukey
