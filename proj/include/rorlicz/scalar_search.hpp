#pragma once

#include <cmath>
#include <functional>

namespace rorlicz {

struct ScalarOptimum {
    double x;
    double value;
    int iterations;
};

/// Golden-section search for the maximiser of a unimodal (e.g. concave)
/// function on [lo, hi]. Stops once hi - lo <= rel_tol * max(1, |hi|).
/// The endpoints are compared against the interior result, so maxima
/// sitting on the boundary are returned exactly.
ScalarOptimum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double rel_tol = 1e-10, int max_iter = 500);

/// Minimising counterpart; the objective must be quasi-convex on [lo, hi].
ScalarOptimum golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                 double rel_tol = 1e-10, int max_iter = 500);

} // namespace rorlicz
