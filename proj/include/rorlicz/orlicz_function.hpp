#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rorlicz/extended_real.hpp"

namespace rorlicz {

enum class OrliczKind { Power, Exponential, EssSupIndicator, PiecewiseLinear, Scaled, Max };

std::string to_string(OrliczKind kind);

/// a * x + b <= phi(x) for all x >= 0, with a > 0 and b <= 0.
struct AffineMinorant {
    double slope;
    double intercept;

    /// Bound (1 - b) / a on the operator norm of a prior.
    double operator_norm_bound() const { return (1.0 - intercept) / slope; }
};

/// phi(x) = coefficient * x^exponent; lets the norm engine work with moments.
struct PowerForm {
    double exponent;
    double coefficient;
};

/**
 * A lower semicontinuous, nondecreasing, convex function phi: [0, inf) -> [0, inf]
 * with phi(0) = 0 that is finite at some x0 > 0 and positive at some x1 > 0.
 *
 * Values are immutable and cheap to copy (shared representation). Every factory
 * validates the axioms and throws ValidationError on violating input.
 *
 * Kinds:
 *  - power(p), p >= 1:                    x^p
 *  - exponential(beta), beta > 0:         e^{beta x} - 1
 *  - ess_sup_indicator():                 0 on [0, 1], inf beyond
 *  - piecewise_linear(b, s, bound):       zero on [0, b_0], slope s_i on [b_i, b_{i+1}],
 *                                         last slope extends to the domain bound; inf beyond
 *  - scaled(inner, theta, divisor):       inner(theta x) / divisor
 *  - maximum(parts):                      pointwise maximum
 */
class OrliczFunction {
public:
    static OrliczFunction power(double p);
    static OrliczFunction exponential(double beta);
    static OrliczFunction ess_sup_indicator();
    static OrliczFunction piecewise_linear(std::vector<double> breakpoints, std::vector<double> slopes,
                                           double domain_bound = kInf);
    static OrliczFunction scaled(const OrliczFunction& inner, double theta, double divisor);
    static OrliczFunction maximum(std::vector<OrliczFunction> parts);

    OrliczKind kind() const;

    /// phi(x) for x in [0, inf]; throws DomainError for negative or NaN x.
    double operator()(double x) const;

    /// sup{x : phi(x) < inf}; phi is finite at the bound itself.
    double domain_bound() const;

    double right_derivative(double x) const;
    double left_derivative(double x) const;

    /// Convex conjugate sup_{x >= 0} (x y - phi(x)). Closed forms where
    /// available, numeric search otherwise.
    double conjugate(double y) const;

    /// Points where phi may fail to be differentiable (scaled breakpoints,
    /// the indicator jump, the domain bound when finite).
    std::vector<double> kinks() const;

    std::optional<PowerForm> power_form() const;

    // Parameter accessors; each throws std::logic_error on the wrong kind.
    double exponent() const;
    double beta() const;
    const std::vector<double>& breakpoints() const;
    const std::vector<double>& slopes() const;
    const OrliczFunction& inner() const;
    double theta() const;
    double divisor() const;
    const std::vector<OrliczFunction>& parts() const;

    std::string describe() const;

    /// True when both handles share one representation.
    bool same_rep(const OrliczFunction& other) const { return rep_ == other.rep_; }

    struct Rep;

private:
    explicit OrliczFunction(std::shared_ptr<const Rep> rep);
    std::shared_ptr<const Rep> rep_;
};

inline double evaluate(const OrliczFunction& phi, double x) { return phi(x); }

/// Conjugate by golden-section search over [0, domain bound] after bracket
/// expansion in powers of two, refined at the kinks. Independent of the
/// closed forms used by OrliczFunction::conjugate.
double numeric_conjugate(const OrliczFunction& phi, double y, double rel_tol = 1e-10);

/// Minorant built from a subgradient at the first point of the ladder
/// 1, 2, 4, ... (or the domain bound) where phi is positive.
AffineMinorant affine_minorant(const OrliczFunction& phi);

/// Checks a x + b <= phi(x) + 1e-12 on a grid of `grid_points` points
/// spanning the domain plus every kink.
bool minorant_holds(const OrliczFunction& phi, const AffineMinorant& m, int grid_points = 10000);

/// Largest x of the form 2^k (|k| <= 1074) with phi(x) <= level; 0 if none.
double level_point(const OrliczFunction& phi, double level);

} // namespace rorlicz
