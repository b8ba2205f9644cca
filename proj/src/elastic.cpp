#include "tukey/elastic.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tukey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<bool> to_mask(Index n, std::span<const Index> rows) {
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  for (Index j : rows) {
    if (j < 0 || j >= n) throw std::invalid_argument("row index out of range");
    mask[static_cast<std::size_t>(j)] = true;
  }
  return mask;
}

}  // namespace

std::vector<Index> ElasticSolution::violated() const {
  std::vector<Index> out;
  for (Index j = 0; j < violations.size(); ++j)
    if (violations[j] > 0) out.push_back(j);
  return out;
}

ElasticSolution solve_elastic(const InfeasibleSystem& sys, const std::vector<bool>& removed,
                              const ParamBounds& bounds, const ElasticOptions& opt) {
  const Index n = sys.size();
  const Index d = sys.dim;
  std::vector<Index> active;
  for (Index j = 0; j < n; ++j)
    if (removed.empty() || !removed[static_cast<std::size_t>(j)]) active.push_back(j);
  const Index k = static_cast<Index>(active.size());

  ElasticSolution out;
  out.violations = Eigen::VectorXd::Zero(n);
  out.sensitivities = Eigen::VectorXd::Zero(n);
  out.x = Eigen::VectorXd::Zero(d);
  if (k == 0) return out;

  const double box = bounds.normalized_box();
  LpModel lp(d + k, k);
  lp.lower.head(d).setConstant(-box);
  lp.upper.head(d).setConstant(box);
  lp.lower.tail(k).setZero();
  for (Index r = 0; r < k; ++r) {
    const Index j = active[static_cast<std::size_t>(r)];
    lp.rows.row(r).head(d) = sys.rows.row(j);
    lp.rows(r, d + r) = 1.0;
    lp.rhs[r] = 1.0;
    lp.objective[d + r] = sys.weights[static_cast<std::size_t>(j)];
  }
  const LpSolution sol = solve_lp(lp, opt.lp);
  out.lp_solves = 1;
  if (!sol.optimal()) throw std::runtime_error("numerics: elastic program not solved to optimality");

  out.x = sol.primal.head(d);
  for (Index r = 0; r < k; ++r) {
    const Index j = active[static_cast<std::size_t>(r)];
    const double e = sol.primal[d + r];
    out.violations[j] = e > opt.violation_tol ? e : 0.0;
    out.sensitivities[j] = sol.duals[r];
    if (e > opt.violation_tol) {
      out.sinf += sys.weights[static_cast<std::size_t>(j)] * e;
      ++out.ninf;
    }
  }
  return out;
}

ElasticSolution solve_elastic(const InfeasibleSystem& sys, std::span<const Index> removed,
                              const ParamBounds& bounds, const ElasticOptions& opt) {
  return solve_elastic(sys, to_mask(sys.size(), removed), bounds, opt);
}

std::optional<Eigen::VectorXd> find_direction(const InfeasibleSystem& sys, std::span<const Index> rows,
                                              const ParamBounds& bounds, const SimplexOptions& opt) {
  const Index d = sys.dim;
  const Index k = static_cast<Index>(rows.size());
  const double box = bounds.normalized_box();
  LpModel lp(d, k);
  lp.lower.setConstant(-box);
  lp.upper.setConstant(box);
  for (Index r = 0; r < k; ++r) {
    lp.rows.row(r) = sys.rows.row(rows[static_cast<std::size_t>(r)]);
    lp.rhs[r] = 1.0;
  }
  const LpSolution sol = solve_lp(lp, opt);
  if (sol.status == LpStatus::kInfeasible) return std::nullopt;
  if (!sol.optimal()) throw std::runtime_error("numerics: feasibility program not solved");
  return Eigen::VectorXd(sol.primal);
}

namespace {

// Indices of the `k` largest scores among `pool`, ties to the lower index.
std::vector<Index> top_k(std::vector<std::pair<double, Index>> pool, int k) {
  std::stable_sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<Index> out;
  for (std::size_t t = 0; t < pool.size() && static_cast<int>(t) < k; ++t) out.push_back(pool[t].second);
  return out;
}

}  // namespace

HeuristicCover chinneck_cover(const InfeasibleSystem& sys, CoverVariant variant, int k, const ParamBounds& bounds,
                              const ElasticOptions& opt) {
  if (k < 1) throw std::invalid_argument("heuristic: k must be positive");
  const Index n = sys.size();
  HeuristicCover result;
  std::vector<bool> removed(static_cast<std::size_t>(n), false);

  auto finish = [&](const ElasticSolution& e) {
    for (Index j = 0; j < n; ++j)
      if (removed[static_cast<std::size_t>(j)]) result.cover.push_back(j);
    result.weight = sys.weight_of(result.cover);
    result.direction = e.x;
    return result;
  };

  ElasticSolution current = solve_elastic(sys, removed, bounds, opt);
  result.lp_solves += current.lp_solves;
  while (true) {
    if (current.ninf == 0) return finish(current);
    if (current.ninf == 1) {
      removed[static_cast<std::size_t>(current.violated().front())] = true;
      return finish(current);
    }

    std::vector<Index> candidates;
    if (variant == CoverVariant::kFull) {
      candidates = current.violated();
    } else {
      std::vector<std::pair<double, Index>> violated, satisfied;
      for (Index j = 0; j < n; ++j) {
        if (removed[static_cast<std::size_t>(j)]) continue;
        const double sens = std::abs(current.sensitivities[j]);
        if (current.violations[j] > 0) violated.emplace_back(current.violations[j] * sens, j);
        else if (sens > opt.violation_tol) satisfied.emplace_back(sens, j);
      }
      candidates = top_k(std::move(violated), k);
      for (Index j : top_k(std::move(satisfied), k)) candidates.push_back(j);
      std::sort(candidates.begin(), candidates.end());
    }

    Index best = -1;
    ElasticSolution best_solution;
    for (Index j : candidates) {
      removed[static_cast<std::size_t>(j)] = true;
      ElasticSolution trial = solve_elastic(sys, removed, bounds, opt);
      removed[static_cast<std::size_t>(j)] = false;
      result.lp_solves += trial.lp_solves;
      if (best < 0 || trial.sinf < best_solution.sinf) {
        best = j;
        best_solution = std::move(trial);
      }
    }
    removed[static_cast<std::size_t>(best)] = true;
    current = std::move(best_solution);
  }
}

}  // namespace tukey
