#pragma once

#include "tukey/model.hpp"
#include "tukey/simplex.hpp"

namespace tukey {

/// Exact depth in the plane by sweeping the circle of directions: the count of
/// rows with <x, a_j> <= 0 is evaluated on every arc and arc endpoint.
int oracle_depth_2d(const InfeasibleSystem& sys);

/// Exact depth for rows in general position. Candidates are the two unit
/// normals of every (d-1)-subset of rows; rows of the subset are excluded by an
/// infinitesimal tilt, so only strictly negative inner products count.
/// Throws "not in general position" on detected degeneracy.
int oracle_depth_general(const InfeasibleSystem& sys, double gp_tol = 1e-9);

/// True when some x has <a_j, x> > 0 for every row and zero_offset is 0.
bool is_depth_zero(const InfeasibleSystem& sys, const SimplexOptions& lp = {});

}  // namespace tukey
