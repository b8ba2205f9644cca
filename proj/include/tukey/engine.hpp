#pragma once

#include <Eigen/Core>

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tukey/cuts.hpp"
#include "tukey/mip.hpp"

namespace tukey {

struct Node {
  std::vector<Index> fixed1;  // sorted
  std::vector<Index> fixed0;  // sorted
  std::vector<CutPool::Id> cuts;
  double lower_bound = 0;
  int tree_depth = 0;
  long id = 0;
};

enum class NodeStatus { kInfeasible, kPrunedByBound, kFathomed, kFractional };

const char* to_string(NodeStatus s);

struct NodeOutcome {
  NodeStatus status = NodeStatus::kFractional;
  /// Last LP objective and the prune bound derived from it (rounded up in
  /// depth form).
  double objective = 0;
  double bound = 0;
  LpSolution lp;
  std::vector<CutPool::Id> cuts;  // cuts active at the final LP
  int lp_solves = 0;
  int cuts_generated = 0;
  int rounds = 0;
};

using Clock = std::chrono::steady_clock;

/// LP solve, then separate pool cuts and generate a BIS cut, until the bound
/// improves by less than cut_improve, the LP point is integral, or no cut is
/// found. Nodes with bound >= cutoff are pruned. In depth form the cutoff is
/// the incumbent weight, in guess form it is -eps_pos.
NodeOutcome bound_and_cut(const Node& node, const MipModel& mip, CutPool& pool, double cutoff,
                          const EngineConfig& cfg, std::optional<Clock::time_point> deadline = std::nullopt);

/// Unfixed binaries with a value strictly between 0 and 1 (int_tol).
std::vector<Index> fractional_binaries(const Node& node, const MipModel& mip, const LpSolution& lp,
                                       double int_tol);

/// Throws "integral node" when nothing is fractional.
Index select_branch_variable(const Node& node, const MipModel& mip, std::span<const Cut> cuts,
                             const LpSolution& lp, const EngineConfig& cfg, int* lp_solves = nullptr);

/// (child with s_b = 1, child with s_b = 0). Children inherit the parent's cuts.
std::pair<Node, Node> expand(const Node& node, Index branch_var, long first_id = 0);

struct Incumbent {
  std::vector<Index> cover;
  int weight = 0;
  Eigen::VectorXd direction;
  double eps = 0;  // guess form only
};

/// Round s_j >= 0.5 to 1. Accept when the rows left at 0 are jointly
/// satisfiable and the weight beats `incumbent_weight` (depth form) or stays
/// within the guess.
std::optional<Incumbent> rounding_heuristic(const LpSolution& lp, const Node& node, const MipModel& mip,
                                            int incumbent_weight, const EngineConfig& cfg);

struct SearchStats {
  long nodes = 0;
  long lp_solves = 0;
  long cuts = 0;
  int mips = 0;
  int heuristic_lp_solves = 0;
  double wall_seconds = 0;

  SearchStats& operator+=(const SearchStats& o);
};

enum class MipStatus { kOptimal, kFound, kInfeasible, kLimit };

const char* to_string(MipStatus s);

struct MipResult {
  MipStatus status = MipStatus::kInfeasible;
  std::optional<Incumbent> best;
  /// Depth form: best proven lower bound on the weight (integer valued).
  double lower_bound = 0;
  SearchStats stats;
};

/// Branch-and-cut over `mip`. An incoming incumbent sets the initial cutoff
/// in depth form. With `early_exit` (guess form) the search stops at the first
/// integral point with eps > eps_pos. The root starts with every pool cut.
MipResult solve_mip(const MipModel& mip, CutPool& pool, const EngineConfig& cfg,
                    std::optional<Incumbent> incumbent = std::nullopt, bool early_exit = false);

enum class ResultStatus { kOptimal, kBoundOnly };
enum class CertificateStatus { kVerified, kUnverified };

const char* to_string(ResultStatus s);
const char* to_string(CertificateStatus s);

struct DepthResult {
  int depth = 0;  // includes zero_offset
  std::vector<Index> cover;
  Eigen::VectorXd direction;  // scaled to max-norm c
  ResultStatus status = ResultStatus::kOptimal;
  CertificateStatus certificate = CertificateStatus::kVerified;
  double epsilon = 0;
  double margin = 0;  // min <a_j, direction> over rows outside the cover
  int lower_bound = 0;
  int upper_bound = 0;
  int heuristic_weight = 0;
  std::string solver;
  SearchStats stats;
};

/// Scales `x` to max-norm c and returns the smallest <a_j, x> over rows
/// outside `cover` (+inf if there are none).
double certificate_margin(const InfeasibleSystem& sys, std::span<const Index> cover, Eigen::VectorXd& x, double c);

/// Fills direction, margin and certificate of `r` from an incumbent.
void attach_certificate(DepthResult& r, const InfeasibleSystem& sys, const Incumbent& inc, const EngineConfig& cfg);

/// Exact depth by big-M branch-and-cut from the heuristic incumbent.
DepthResult solve_depth(const InfeasibleSystem& sys, const EngineConfig& cfg = {});

/// The incumbent the searches start from.
Incumbent heuristic_incumbent(const InfeasibleSystem& sys, const ParamBounds& bounds, const EngineConfig& cfg,
                              int* lp_solves = nullptr);

}  // namespace tukey
