#include "rorlicz/scalar_search.hpp"

#include <algorithm>

namespace rorlicz {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

// Maximises f; callers flip the sign for minimisation. NaN is treated as -inf.
ScalarOptimum golden_core(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol, int max_iter) {
    auto g = [&](double x) {
        const double v = f(x);
        return std::isnan(v) ? -INFINITY : v;
    };
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = g(c), fd = g(d);
    int it = 0;
    while (it < max_iter && (b - a) > rel_tol * std::max(1.0, std::abs(b))) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = g(d);
        }
        ++it;
    }
    ScalarOptimum best{fc >= fd ? c : d, std::max(fc, fd), it};
    for (double x : {lo, hi, 0.5 * (a + b)}) {
        const double v = g(x);
        if (v > best.value) best = {x, v, it};
    }
    return best;
}

} // namespace

ScalarOptimum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double rel_tol, int max_iter) {
    return golden_core(f, lo, hi, rel_tol, max_iter);
}

ScalarOptimum golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                 double rel_tol, int max_iter) {
    auto r = golden_core([&](double x) { return -f(x); }, lo, hi, rel_tol, max_iter);
    r.value = -r.value;
    return r;
}

} // namespace rorlicz
