#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "tukey/model.hpp"
#include "tukey/simplex.hpp"

namespace tukey {

/// Hitting-set inequality sum_{j in members} s_j >= 1. `members` is sorted
/// and holds the rows of an infeasible subsystem.
struct Cut {
  std::vector<Index> members;

  bool operator==(const Cut&) const = default;

  double activity(const Eigen::Ref<const Eigen::VectorXd>& s) const {
    double sum = 0;
    for (Index j : members) sum += s[j];
    return sum;
  }
};

Cut make_cut(std::vector<Index> members);

/// Deduplicated store of globally valid cuts. Ids are stable insertion
/// positions; readers and writers may run on different threads.
class CutPool {
 public:
  using Id = std::size_t;

  /// Returns the id of the cut and whether it was new.
  std::pair<Id, bool> insert(const Cut& cut);

  Cut get(Id id) const;
  std::vector<Cut> get(std::span<const Id> ids) const;
  std::size_t size() const;
  std::vector<Id> ids() const;

 private:
  mutable std::shared_mutex mutex_;
  std::vector<Cut> cuts_;
  std::map<std::vector<Index>, Id> index_;
};

/// Indices of the maximal ascending prefix of `values` whose sum stays
/// below 1. Ties in value go to the lower index. This maximizes the number of
/// chosen entries among all subsets with sum < 1.
std::vector<Index> pseudo_knapsack_select(std::span<const double> values);

struct CutOptions {
  double feasibility_tol = 1e-9;
  double tight_tol = 1e-7;
  SimplexOptions lp;
};

/// Basic infeasible subsystem of the `active` rows from the phase-1 program
///   min x0  s.t.  <a_j, x> + x0 >= 1 (j in active),  x0 >= 0,  |x_i| <= c/eps.
/// Returns nullopt when the optimum is x0 = 0. Members are the rows that are
/// tight with a nonbasic logical and a positive multiplier, at most d + 1.
std::optional<Cut> bis_cut(const InfeasibleSystem& sys, std::span<const Index> active, const ParamBounds& bounds,
                           const CutOptions& opt = {});

/// One cut for a node LP with binary values `lp_binaries` (one per row).
/// With `use_knapsack` the BIS is searched among the rows the pseudo-knapsack
/// selector picks (so the cut is violated), falling back to every row not
/// fixed to 1.
std::vector<Cut> generate_cuts(const InfeasibleSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& lp_binaries,
                               std::span<const Index> fixed1, std::span<const Index> fixed0,
                               const ParamBounds& bounds, bool use_knapsack, const CutOptions& opt = {});

}  // namespace tukey
