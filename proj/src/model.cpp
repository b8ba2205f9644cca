#include "tukey/model.hpp"

#include <algorithm>
#include <cmath>

namespace tukey {

double lattice_sin_theta(double m_box, Index d) {
  if (m_box <= 0.0 || d < 1) throw std::invalid_argument("lattice bound: arguments must be positive");
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  const double h = std::pow(2.0 * m_box * sqrt_d, -static_cast<double>(d - 1));
  return std::min(1.0, h / (m_box * sqrt_d));
}

double lattice_epsilon(double m_box, Index d, double c, double q_min_norm) {
  if (c <= 0.0 || q_min_norm <= 0.0) throw std::invalid_argument("lattice bound: arguments must be positive");
  return std::sqrt(static_cast<double>(d) * c * c) * q_min_norm * lattice_sin_theta(m_box, d);
}

ParamBounds make_bounds(const InfeasibleSystem& sys, double c, double epsilon) {
  if (c <= 0.0 || epsilon <= 0.0) throw std::invalid_argument("bounds: c and epsilon must be positive");
  ParamBounds b;
  b.c = c;
  b.epsilon = epsilon;
  b.bigM = sys.empty() ? std::sqrt(static_cast<double>(sys.dim)) * c : compute_bigM(sys, c);
  return b;
}

}  // namespace tukey
