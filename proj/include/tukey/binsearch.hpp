#pragma once

#include "tukey/engine.hpp"

namespace tukey {

/// Exact depth by bisection on guess-form MIPs. lower starts at 1 and upper at
/// the heuristic weight; every solve stops at its first integral point with
/// eps > eps_pos and all cuts go to one shared pool. The reported epsilon is the
/// margin of the returned direction.
DepthResult solve_depth_binary(const InfeasibleSystem& sys, const EngineConfig& cfg = {});

}  // namespace tukey
