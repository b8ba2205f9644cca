#include "tukey/oracle.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace tukey {

namespace {

int closed_count(const InfeasibleSystem& sys, const Eigen::Vector2d& x) {
  int w = 0;
  for (Index j = 0; j < sys.size(); ++j)
    if (sys.rows.row(j).dot(x) <= 0) w += sys.weights[static_cast<std::size_t>(j)];
  return w;
}

}  // namespace

int oracle_depth_2d(const InfeasibleSystem& sys) {
  if (sys.dim != 2) throw std::invalid_argument("oracle_depth_2d needs d = 2");
  if (sys.empty()) return sys.zero_offset;
  // <x, a_j> changes sign at angle(a_j) +- pi/2.
  std::vector<double> critical;
  for (Index j = 0; j < sys.size(); ++j) {
    const double t = std::atan2(sys.rows(j, 1), sys.rows(j, 0));
    for (double s : {t + std::numbers::pi / 2, t - std::numbers::pi / 2})
      critical.push_back(std::remainder(s, 2 * std::numbers::pi));
  }
  std::sort(critical.begin(), critical.end());
  int best = sys.total_weight();
  const std::size_t k = critical.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double a = critical[i];
    const double b = i + 1 < k ? critical[i + 1] : critical[0] + 2 * std::numbers::pi;
    // Endpoints use the exact perpendicular so the closed test sees the zero.
    for (double t : {a, 0.5 * (a + b)}) best = std::min(best, closed_count(sys, {std::cos(t), std::sin(t)}));
  }
  for (Index j = 0; j < sys.size(); ++j) {
    const Eigen::Vector2d perp(-sys.rows(j, 1), sys.rows(j, 0));
    best = std::min({best, closed_count(sys, perp), closed_count(sys, -perp)});
  }
  return best + sys.zero_offset;
}

int oracle_depth_general(const InfeasibleSystem& sys, double gp_tol) {
  const Index n = sys.size(), d = sys.dim;
  if (n == 0) return sys.zero_offset;

  auto count = [&](const Eigen::VectorXd& x, const std::vector<Index>& subset) {
    int w = 0;
    for (Index j = 0; j < n; ++j) {
      const double ip = sys.rows.row(j).dot(x);
      const bool member = std::find(subset.begin(), subset.end(), j) != subset.end();
      if (!member && std::abs(ip) <= gp_tol) throw std::invalid_argument("not in general position");
      if (!member && ip < 0) w += sys.weights[static_cast<std::size_t>(j)];
    }
    return w;
  };

  if (d == 1) {
    const Eigen::VectorXd plus = Eigen::VectorXd::Ones(1);
    return std::min(count(plus, {}), count(-plus, {})) + sys.zero_offset;
  }
  if (n < d - 1) return sys.zero_offset;  // a common strictly positive functional exists

  int best = sys.total_weight();
  std::vector<Index> subset;
  std::function<void(Index)> recurse = [&](Index from) {
    if (static_cast<Index>(subset.size()) == d - 1) {
      Eigen::MatrixXd t(d, d - 1);
      for (Index i = 0; i < d - 1; ++i) t.col(i) = sys.rows.row(subset[static_cast<std::size_t>(i)]).transpose();
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(t);
      const Eigen::MatrixXd q = qr.householderQ();
      const Eigen::MatrixXd r = qr.matrixQR().topRows(d - 1).triangularView<Eigen::Upper>();
      if (r.diagonal().cwiseAbs().minCoeff() <= gp_tol) throw std::invalid_argument("not in general position");
      const Eigen::VectorXd normal = q.col(d - 1);
      best = std::min({best, count(normal, subset), count(-normal, subset)});
      return;
    }
    for (Index j = from; j < n; ++j) {
      subset.push_back(j);
      recurse(j + 1);
      subset.pop_back();
    }
  };
  recurse(0);
  return best + sys.zero_offset;
}

bool is_depth_zero(const InfeasibleSystem& sys, const SimplexOptions& opt) {
  if (sys.zero_offset > 0) return false;
  if (sys.empty()) return true;
  // Phase-1 feasibility of <a_j, x> >= 1 with x free: the cone is open.
  LpModel lp(sys.dim, sys.size());
  lp.rows = sys.rows;
  lp.rhs.setOnes();
  return solve_lp(lp, opt).status != LpStatus::kInfeasible;
}

}  // namespace tukey
