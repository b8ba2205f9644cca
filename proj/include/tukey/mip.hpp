#pragma once

#include <Eigen/Core>

#include <span>
#include <string>

#include "tukey/cuts.hpp"
#include "tukey/elastic.hpp"
#include "tukey/model.hpp"
#include "tukey/simplex.hpp"

namespace tukey {

enum class MipForm { kDepth, kGuess };

/// Big-M model over columns x_1..x_d, s_1..s_n and, in guess form, eps last.
///   depth:  min sum w_j s_j   s.t.  <a_j, x> + M s_j >= epsilon
///   guess:  min -eps          s.t.  <a_j, x> + M s_j - eps >= 0,  sum w_j s_j <= guess,  0 <= eps <= M
/// with |x_i| <= c, s_j in {0, 1}, plus any hitting-set cuts.
struct MipModel {
  InfeasibleSystem sys;
  ParamBounds bounds;
  MipForm form = MipForm::kDepth;
  int guess = 0;

  static MipModel depth(InfeasibleSystem sys, const ParamBounds& bounds);
  static MipModel guess_form(InfeasibleSystem sys, const ParamBounds& bounds, int guess);

  Index dim() const { return sys.dim; }
  Index num_binaries() const { return sys.size(); }
  Index x_col(Index i) const { return i; }
  Index s_col(Index j) const { return sys.dim + j; }
  Index eps_col() const { return sys.dim + sys.size(); }
  Index num_columns() const { return eps_col() + (form == MipForm::kGuess ? 1 : 0); }
  /// Model rows before cuts: n big-M rows, plus the cardinality row.
  Index num_base_rows() const { return sys.size() + (form == MipForm::kGuess ? 1 : 0); }

  /// LP relaxation with 0 <= s_j <= 1 and one >= 1 row per cut.
  LpModel relaxation(std::span<const Cut> cuts = {}) const;
};

enum class BranchRule { kGreedy, kStrong };
enum class NodeSelection { kDepthFirst, kBestFirst };
enum class KnapsackMode { kAuto, kOn, kOff };

struct EngineConfig {
  BranchRule rule = BranchRule::kGreedy;
  NodeSelection selection = NodeSelection::kDepthFirst;
  /// Auto means on for greedy branching and off for strong branching.
  KnapsackMode knapsack = KnapsackMode::kAuto;
  int strong_k = 4;
  double cut_improve = 1e-3;
  int max_cut_rounds = 50;

  double c = 1.0;
  double epsilon = 1e-5;
  double int_tol = 1e-9;
  double cert_tol = 1e-9;
  double eps_pos = 1e-7;
  double viol_tol = 1e-7;
  double tight_tol = 1e-7;

  CoverVariant heuristic = CoverVariant::kFast;
  int heuristic_k = 1;
  bool rounding = true;

  double time_limit = 0;  // seconds, 0 = none
  long node_limit = 0;    // 0 = none
  int workers = 1;
  unsigned long seed = 1;  // instance generation only

  SimplexOptions lp;

  bool use_knapsack() const {
    if (knapsack == KnapsackMode::kAuto) return rule == BranchRule::kGreedy;
    return knapsack == KnapsackMode::kOn;
  }
  void validate() const;
};

const char* to_string(BranchRule r);
const char* to_string(NodeSelection s);
const char* to_string(KnapsackMode k);
const char* to_string(MipForm f);

}  // namespace tukey
