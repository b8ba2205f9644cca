#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

#include "tukey/model.hpp"
#include "tukey/simplex.hpp"

namespace tukey {

/// Optimum of the elastic program
///   min sum_j w_j e_j  s.t.  <a_j, x> + e_j >= 1,  e_j >= 0,  |x_i| <= c/eps
/// over the rows that are not removed.
struct ElasticSolution {
  double sinf = 0;
  int ninf = 0;
  Eigen::VectorXd violations;     // e_j, 0 for removed rows
  Eigen::VectorXd sensitivities;  // shadow price of row j, 0 for removed rows
  Eigen::VectorXd x;
  int lp_solves = 0;

  std::vector<Index> violated() const;
};

struct ElasticOptions {
  double violation_tol = 1e-7;
  SimplexOptions lp;
};

/// `removed` is a mask over the rows of `sys` (empty mask: nothing removed).
ElasticSolution solve_elastic(const InfeasibleSystem& sys, const std::vector<bool>& removed,
                              const ParamBounds& bounds, const ElasticOptions& opt = {});

ElasticSolution solve_elastic(const InfeasibleSystem& sys, std::span<const Index> removed,
                              const ParamBounds& bounds, const ElasticOptions& opt = {});

/// A direction with <a_j, x> >= 1 for every row in `rows` inside the
/// normalized box, or nullopt when that subsystem is infeasible.
std::optional<Eigen::VectorXd> find_direction(const InfeasibleSystem& sys, std::span<const Index> rows,
                                              const ParamBounds& bounds, const SimplexOptions& lp = {});

enum class CoverVariant { kFull, kFast };

struct HeuristicCover {
  std::vector<Index> cover;  // sorted
  int weight = 0;
  /// Satisfies <a_j, x> > 0 for every row outside the cover.
  Eigen::VectorXd direction;
  int lp_solves = 0;
};

/// Chinneck's MIN IIS COVER heuristic. Each outer step deletes, for good, the
/// candidate whose temporary removal gives the smallest SINF. The full variant
/// tries every violated row; the fast variant only the top `k` violated rows
/// by violation * |sensitivity| and the top `k` satisfied rows by
/// |sensitivity|. Stops once NINF is 0, or is 1 (that row completes the cover).
HeuristicCover chinneck_cover(const InfeasibleSystem& sys, CoverVariant variant, int k, const ParamBounds& bounds,
                              const ElasticOptions& opt = {});

}  // namespace tukey
