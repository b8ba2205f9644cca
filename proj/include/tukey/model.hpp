#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace tukey {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Data points (one per row of `points`) and the query point whose depth is
/// wanted.
template <typename Scalar>
struct BasicPointSet {
  Index dim = 0;
  Matrix<Scalar> points;
  Vector<Scalar> query;

  Index size() const { return points.rows(); }

  void validate() const {
    if (dim < 1) throw std::invalid_argument("point set: dimension must be >= 1");
    if (points.cols() != dim) throw std::invalid_argument("point set: point has wrong dimension");
    if (query.size() != dim) throw std::invalid_argument("point set: query has wrong dimension");
  }
};

/// The strict homogeneous system <a_j, x> > 0 with a_j = A_j - A_p. Equal rows
/// are folded into one row carrying a multiplicity, and points equal to the
/// query are counted in `zero_offset` since no direction can exclude them.
template <typename Scalar>
struct BasicInfeasibleSystem {
  Index dim = 0;
  Matrix<Scalar> rows;
  std::vector<int> weights;
  int zero_offset = 0;

  Index size() const { return rows.rows(); }
  bool empty() const { return rows.rows() == 0; }

  int total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0); }

  template <typename Range>
  int weight_of(const Range& indices) const {
    int w = 0;
    for (auto j : indices) w += weights[static_cast<std::size_t>(j)];
    return w;
  }
};

using PointSet = BasicPointSet<double>;
using InfeasibleSystem = BasicInfeasibleSystem<double>;

/// Solver-side parameters of the big-M model. `c` boxes every coordinate of
/// the direction, `bigM` switches a row off, `epsilon` replaces the strict
/// inequality.
struct ParamBounds {
  double c = 1.0;
  double bigM = 1.0;
  double epsilon = 1e-5;
  double m_box = 1.0;
  double theta_sin = 0.0;

  /// Coordinate box of the rhs-1 system: <a, x> >= eps with |x_i| <= c is the
  /// same set as <a, x/eps> >= 1 with |x_i/eps| <= c/eps.
  double normalized_box() const { return c / epsilon; }
};

namespace detail {

template <typename Scalar>
struct LexLess {
  bool operator()(const std::vector<Scalar>& a, const std::vector<Scalar>& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

}  // namespace detail

template <typename Scalar>
BasicInfeasibleSystem<Scalar> fold_rows(const Matrix<Scalar>& raw, const std::vector<int>& raw_weights,
                                        int zero_offset) {
  const Index d = raw.cols();
  BasicInfeasibleSystem<Scalar> sys;
  sys.dim = d;
  sys.zero_offset = zero_offset;

  std::map<std::vector<Scalar>, std::size_t, detail::LexLess<Scalar>> seen;
  std::vector<std::vector<Scalar>> distinct;
  for (Index j = 0; j < raw.rows(); ++j) {
    std::vector<Scalar> key(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) key[static_cast<std::size_t>(i)] = raw(j, i);
    if (std::all_of(key.begin(), key.end(), [](Scalar v) { return v == Scalar(0); })) {
      sys.zero_offset += raw_weights[static_cast<std::size_t>(j)];
      continue;
    }
    auto [it, inserted] = seen.emplace(key, distinct.size());
    if (inserted) {
      distinct.push_back(std::move(key));
      sys.weights.push_back(raw_weights[static_cast<std::size_t>(j)]);
    } else {
      sys.weights[it->second] += raw_weights[static_cast<std::size_t>(j)];
    }
  }

  sys.rows.resize(static_cast<Index>(distinct.size()), d);
  for (std::size_t j = 0; j < distinct.size(); ++j)
    for (Index i = 0; i < d; ++i) sys.rows(static_cast<Index>(j), i) = distinct[j][static_cast<std::size_t>(i)];
  return sys;
}

/// Shifts every point by the query, optionally scales rows to unit length,
/// then folds zero and duplicate rows.
template <typename Scalar>
BasicInfeasibleSystem<Scalar> build_system(const BasicPointSet<Scalar>& ps, bool scale_rows = true) {
  ps.validate();
  Matrix<Scalar> raw = ps.points.rowwise() - ps.query.transpose();
  if (scale_rows) {
    for (Index j = 0; j < raw.rows(); ++j) {
      const Scalar norm = raw.row(j).norm();
      // Rows already of unit length are left untouched so rebuilding is a no-op.
      if (norm > Scalar(0) && std::abs(norm - Scalar(1)) > 4 * std::numeric_limits<Scalar>::epsilon())
        raw.row(j) /= norm;
    }
  }
  return fold_rows<Scalar>(raw, std::vector<int>(static_cast<std::size_t>(raw.rows()), 1), 0);
}

/// M = sqrt(d c^2) * max_j |a_j|, large enough that s_j = 1 relaxes row j for
/// every direction inside the box.
template <typename Scalar>
Scalar compute_bigM(const BasicInfeasibleSystem<Scalar>& sys, Scalar c) {
  if (sys.empty()) throw std::invalid_argument("empty system");
  const Scalar max_norm = sys.rows.rowwise().norm().maxCoeff();
  return std::sqrt(static_cast<Scalar>(sys.dim) * c * c) * max_norm;
}

/// Lower bound on the sine of the cone half-angle for integer data inside
/// [-m, m]^d: h / radius of the box's circumscribed ball, capped at 1.
double lattice_sin_theta(double m_box, Index d);

/// epsilon = sqrt(d c^2) * |q_min| * sin(theta) from the lattice distance
/// bound h = (2 m sqrt(d))^-(d-1).
double lattice_epsilon(double m_box, Index d, double c, double q_min_norm);

/// Default bounds: unit box, bigM from the rows, practical epsilon.
ParamBounds make_bounds(const InfeasibleSystem& sys, double c = 1.0, double epsilon = 1e-5);

}  // namespace tukey
