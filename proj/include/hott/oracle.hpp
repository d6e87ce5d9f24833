#pragma once

#include "hott/transport.hpp"

namespace hott {

/// Exhaustive reference for small transport instances, independent of the
/// simplex solver. Uniform equal-size marginals are solved by enumerating
/// all assignments (n <= 6); anything else by enumerating the basic feasible
/// solutions (spanning trees) of instances with n*m <= 12 variables. Throws
/// "oracle scale exceeded" beyond those limits.
double brute_force_reference(const Histogram& p, const Histogram& q, const CostMatrix& cost);

}  // namespace hott
