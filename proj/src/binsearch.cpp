#include "tukey/binsearch.hpp"

#include <spdlog/spdlog.h>

namespace tukey {

DepthResult solve_depth_binary(const InfeasibleSystem& sys, const EngineConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  DepthResult r;
  r.solver = "binary-search";
  const ParamBounds bounds = make_bounds(sys, cfg.c, cfg.epsilon);

  int heuristic_lps = 0;
  Incumbent best = heuristic_incumbent(sys, bounds, cfg, &heuristic_lps);
  r.heuristic_weight = best.weight;
  r.stats.heuristic_lp_solves = heuristic_lps;
  r.stats.lp_solves = heuristic_lps;

  int lower = 1, upper = best.weight;
  bool partial = false;
  if (upper <= 1) lower = upper;
  CutPool pool;
  while (lower < upper) {
    const int guess = (upper + lower) / 2;
    const MipModel mip = MipModel::guess_form(sys, bounds, guess);
    MipResult m = solve_mip(mip, pool, cfg, std::nullopt, true);
    r.stats += m.stats;
    spdlog::debug("guess {} in [{}, {}]: {}", guess, lower, upper, to_string(m.status));
    if (m.status == MipStatus::kFound) {
      upper = guess;
      best = *m.best;
    } else if (m.status == MipStatus::kInfeasible) {
      lower = guess + 1;
    } else {
      partial = true;
      break;
    }
  }

  r.status = partial ? ResultStatus::kBoundOnly : ResultStatus::kOptimal;
  r.depth = best.weight + sys.zero_offset;
  r.upper_bound = upper + sys.zero_offset;
  r.lower_bound = (partial ? lower : best.weight) + sys.zero_offset;
  attach_certificate(r, sys, best, cfg);
  r.epsilon = r.margin;
  r.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

}  // namespace tukey
