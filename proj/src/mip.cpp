#include "tukey/mip.hpp"

#include <stdexcept>

namespace tukey {

MipModel MipModel::depth(InfeasibleSystem sys, const ParamBounds& bounds) {
  MipModel m;
  m.sys = std::move(sys);
  m.bounds = bounds;
  m.form = MipForm::kDepth;
  return m;
}

MipModel MipModel::guess_form(InfeasibleSystem sys, const ParamBounds& bounds, int guess) {
  if (guess < 1) throw std::invalid_argument("guess form needs guess >= 1");
  MipModel m;
  m.sys = std::move(sys);
  m.bounds = bounds;
  m.form = MipForm::kGuess;
  m.guess = guess;
  return m;
}

LpModel MipModel::relaxation(std::span<const Cut> cuts) const {
  const Index d = dim(), n = num_binaries();
  const Index base = num_base_rows();
  LpModel lp(num_columns(), base + static_cast<Index>(cuts.size()));
  lp.lower.head(d).setConstant(-bounds.c);
  lp.upper.head(d).setConstant(bounds.c);
  lp.lower.segment(d, n).setZero();
  lp.upper.segment(d, n).setOnes();

  for (Index j = 0; j < n; ++j) {
    lp.rows.row(j).head(d) = sys.rows.row(j);
    lp.rows(j, s_col(j)) = bounds.bigM;
  }
  if (form == MipForm::kDepth) {
    for (Index j = 0; j < n; ++j) lp.objective[s_col(j)] = sys.weights[static_cast<std::size_t>(j)];
    lp.rhs.head(n).setConstant(bounds.epsilon);
  } else {
    const Index e = eps_col();
    lp.lower[e] = 0;
    lp.upper[e] = bounds.bigM;
    lp.objective[e] = -1;
    for (Index j = 0; j < n; ++j) lp.rows(j, e) = -1;
    lp.rhs.head(n).setZero();
    for (Index j = 0; j < n; ++j) lp.rows(n, s_col(j)) = sys.weights[static_cast<std::size_t>(j)];
    lp.senses[static_cast<std::size_t>(n)] = RowSense::kLessEqual;
    lp.rhs[n] = guess;
  }
  for (std::size_t t = 0; t < cuts.size(); ++t) {
    const Index r = base + static_cast<Index>(t);
    for (Index j : cuts[t].members) lp.rows(r, s_col(j)) = 1;
    lp.rhs[r] = 1;
  }
  return lp;
}

void EngineConfig::validate() const {
  if (strong_k < 1) throw std::invalid_argument("strong_k must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (heuristic_k < 1) throw std::invalid_argument("heuristic k must be >= 1");
  if (!(c > 0) || !(epsilon > 0)) throw std::invalid_argument("c and epsilon must be positive");
  if (int_tol < 0 || cert_tol < 0 || eps_pos < 0 || cut_improve < 0) throw std::invalid_argument("negative tolerance");
  if (time_limit < 0 || node_limit < 0) throw std::invalid_argument("negative limit");
}

const char* to_string(BranchRule r) { return r == BranchRule::kGreedy ? "greedy" : "strong"; }
const char* to_string(NodeSelection s) { return s == NodeSelection::kDepthFirst ? "depth-first" : "best-first"; }
const char* to_string(KnapsackMode k) {
  switch (k) {
    case KnapsackMode::kAuto: return "auto";
    case KnapsackMode::kOn: return "on";
    case KnapsackMode::kOff: return "off";
  }
  return "auto";
}
const char* to_string(MipForm f) { return f == MipForm::kDepth ? "depth" : "guess"; }

}  // namespace tukey
