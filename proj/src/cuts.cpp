#include "tukey/cuts.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tukey {

Cut make_cut(std::vector<Index> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) throw std::invalid_argument("cut: empty member set");
  return Cut{std::move(members)};
}

std::pair<CutPool::Id, bool> CutPool::insert(const Cut& cut) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = index_.find(cut.members); it != index_.end()) return {it->second, false};
  }
  std::unique_lock lock(mutex_);
  auto [it, inserted] = index_.emplace(cut.members, cuts_.size());
  if (inserted) cuts_.push_back(cut);
  return {it->second, inserted};
}

Cut CutPool::get(Id id) const {
  std::shared_lock lock(mutex_);
  return cuts_.at(id);
}

std::vector<Cut> CutPool::get(std::span<const Id> ids) const {
  std::shared_lock lock(mutex_);
  std::vector<Cut> out;
  out.reserve(ids.size());
  for (Id id : ids) out.push_back(cuts_.at(id));
  return out;
}

std::size_t CutPool::size() const {
  std::shared_lock lock(mutex_);
  return cuts_.size();
}

std::vector<CutPool::Id> CutPool::ids() const {
  std::vector<Id> out(size());
  std::iota(out.begin(), out.end(), Id{0});
  return out;
}

std::vector<Index> pseudo_knapsack_select(std::span<const double> values) {
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
  });
  std::vector<Index> chosen;
  double sum = 0;
  for (Index j : order) {
    const double v = values[static_cast<std::size_t>(j)];
    if (!(sum + v < 1.0)) break;
    sum += v;
    chosen.push_back(j);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::optional<Cut> bis_cut(const InfeasibleSystem& sys, std::span<const Index> active, const ParamBounds& bounds,
                           const CutOptions& opt) {
  if (active.empty()) throw std::invalid_argument("bis: empty active set");
  const Index d = sys.dim;
  const Index k = static_cast<Index>(active.size());
  const double box = bounds.normalized_box();

  LpModel lp(d + 1, k);
  lp.lower.head(d).setConstant(-box);
  lp.upper.head(d).setConstant(box);
  lp.lower[d] = 0;
  lp.objective[d] = 1;
  for (Index r = 0; r < k; ++r) {
    lp.rows.row(r).head(d) = sys.rows.row(active[static_cast<std::size_t>(r)]);
    lp.rows(r, d) = 1;
    lp.rhs[r] = 1;
  }
  const LpSolution sol = solve_lp(lp, opt.lp);
  if (!sol.optimal()) throw std::runtime_error("numerics: phase-1 program not solved");
  if (sol.objective_value <= opt.feasibility_tol) return std::nullopt;

  std::vector<Index> tight, supported;
  for (Index r = 0; r < k; ++r) {
    if (sol.row_status[static_cast<std::size_t>(r)] == VarStatus::kBasic) continue;
    if (std::abs(sol.row_activity[r] - 1.0) > opt.tight_tol) continue;
    tight.push_back(active[static_cast<std::size_t>(r)]);
    if (sol.duals[r] > opt.feasibility_tol) supported.push_back(active[static_cast<std::size_t>(r)]);
  }
  // The multiplier support alone already certifies infeasibility.
  std::vector<Index>& members = supported.empty() ? tight : supported;
  if (members.empty()) return std::nullopt;
  return make_cut(std::move(members));
}

std::vector<Cut> generate_cuts(const InfeasibleSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& lp_binaries,
                               std::span<const Index> fixed1, std::span<const Index> fixed0,
                               const ParamBounds& bounds, bool use_knapsack, const CutOptions& opt) {
  const Index n = sys.size();
  std::vector<bool> is_fixed1(static_cast<std::size_t>(n), false), is_fixed0(static_cast<std::size_t>(n), false);
  for (Index j : fixed1) is_fixed1[static_cast<std::size_t>(j)] = true;
  for (Index j : fixed0) is_fixed0[static_cast<std::size_t>(j)] = true;

  std::vector<Index> open;
  for (Index j = 0; j < n; ++j)
    if (!is_fixed1[static_cast<std::size_t>(j)]) open.push_back(j);
  if (open.empty()) return {};

  if (use_knapsack) {
    std::vector<double> values;
    values.reserve(open.size());
    for (Index j : open)
      values.push_back(is_fixed0[static_cast<std::size_t>(j)] ? 0.0 : std::clamp(lp_binaries[j], 0.0, 1.0));
    std::vector<Index> active;
    for (Index t : pseudo_knapsack_select(values)) active.push_back(open[static_cast<std::size_t>(t)]);
    if (!active.empty()) {
      if (auto cut = bis_cut(sys, active, bounds, opt)) return {std::move(*cut)};
    }
  }
  if (auto cut = bis_cut(sys, open, bounds, opt)) return {std::move(*cut)};
  return {};
}

}  // namespace tukey
