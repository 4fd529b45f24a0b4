#include "rorlicz/orlicz_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "rorlicz/errors.hpp"
#include "rorlicz/scalar_search.hpp"

namespace rorlicz {

namespace {

struct PowerRep {
    double p;
};
struct ExponentialRep {
    double beta;
};
struct EssSupRep {};
struct PiecewiseRep {
    std::vector<double> breakpoints;
    std::vector<double> slopes;
    std::vector<double> values; // phi at each breakpoint
    double bound;
};
struct ScaledRep {
    OrliczFunction inner;
    double theta;
    double divisor;
};
struct MaxRep {
    std::vector<OrliczFunction> parts;
};

} // namespace

struct OrliczFunction::Rep {
    std::variant<PowerRep, ExponentialRep, EssSupRep, PiecewiseRep, ScaledRep, MaxRep> v;
    double bound = kInf;
};

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

double piecewise_eval(const PiecewiseRep& r, double x) {
    if (x > r.bound) return kInf;
    const auto it = std::upper_bound(r.breakpoints.begin(), r.breakpoints.end(), x);
    if (it == r.breakpoints.begin()) return 0.0;
    const auto i = static_cast<std::size_t>(it - r.breakpoints.begin()) - 1;
    return r.values[i] + r.slopes[i] * (x - r.breakpoints[i]);
}

// Ties between parts of a maximum are decided with a relative slack so that
// parts agreeing up to rounding count as active.
bool active(double part_value, double max_value) {
    if (max_value == kInf) return part_value == kInf;
    return part_value >= max_value - 1e-12 * std::max(1.0, std::abs(max_value));
}

} // namespace

OrliczFunction::OrliczFunction(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

std::string to_string(OrliczKind kind) {
    switch (kind) {
    case OrliczKind::Power: return "power";
    case OrliczKind::Exponential: return "exponential";
    case OrliczKind::EssSupIndicator: return "ess_sup";
    case OrliczKind::PiecewiseLinear: return "piecewise_linear";
    case OrliczKind::Scaled: return "scaled";
    case OrliczKind::Max: return "max";
    }
    return "unknown";
}

OrliczFunction OrliczFunction::power(double p) {
    if (!std::isfinite(p) || p < 1.0)
        throw ValidationError("power Orlicz function needs a finite exponent p >= 1, got " + std::to_string(p));
    auto rep = std::make_shared<Rep>();
    rep->v = PowerRep{p};
    return OrliczFunction(rep);
}

OrliczFunction OrliczFunction::exponential(double beta) {
    if (!finite_positive(beta))
        throw ValidationError("exponential Orlicz function needs beta > 0, got " + std::to_string(beta));
    auto rep = std::make_shared<Rep>();
    rep->v = ExponentialRep{beta};
    return OrliczFunction(rep);
}

OrliczFunction OrliczFunction::ess_sup_indicator() {
    auto rep = std::make_shared<Rep>();
    rep->v = EssSupRep{};
    rep->bound = 1.0;
    return OrliczFunction(rep);
}

OrliczFunction OrliczFunction::piecewise_linear(std::vector<double> breakpoints, std::vector<double> slopes,
                                                double domain_bound) {
    if (breakpoints.empty() || breakpoints.size() != slopes.size())
        throw ValidationError("piecewise_linear needs matching, nonempty breakpoints and slopes");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!std::isfinite(breakpoints[i]) || breakpoints[i] < 0.0)
            throw ValidationError("piecewise_linear breakpoints must be finite and >= 0");
        if (i > 0 && breakpoints[i] <= breakpoints[i - 1])
            throw ValidationError("piecewise_linear breakpoints must be strictly ascending");
        if (!std::isfinite(slopes[i]) || slopes[i] < 0.0)
            throw ValidationError("piecewise_linear slopes must be finite and >= 0");
        if (i > 0 && slopes[i] < slopes[i - 1])
            throw ValidationError("convexity violated: piecewise_linear slopes must be nondecreasing (slope " +
                                  std::to_string(i) + " decreases)");
    }
    if (std::isnan(domain_bound) || domain_bound <= 0.0)
        throw ValidationError("non-triviality violated: domain bound must be > 0");
    if (domain_bound == kInf && slopes.back() == 0.0)
        throw ValidationError("non-triviality violated: piecewise_linear function vanishes identically");

    PiecewiseRep r{std::move(breakpoints), std::move(slopes), {}, domain_bound};
    r.values.resize(r.breakpoints.size());
    r.values[0] = 0.0;
    for (std::size_t i = 1; i < r.breakpoints.size(); ++i)
        r.values[i] = r.values[i - 1] + r.slopes[i - 1] * (r.breakpoints[i] - r.breakpoints[i - 1]);
    auto rep = std::make_shared<Rep>();
    rep->bound = domain_bound;
    rep->v = std::move(r);
    return OrliczFunction(rep);
}

OrliczFunction OrliczFunction::scaled(const OrliczFunction& inner, double theta, double divisor) {
    if (!finite_positive(theta))
        throw ValidationError("scaled Orlicz function needs a finite multiplicative factor theta > 0");
    if (!finite_positive(divisor))
        throw ValidationError("scaled Orlicz function needs a finite divisor > 0");
    if (inner.kind() == OrliczKind::Scaled)
        return scaled(inner.inner(), theta * inner.theta(), divisor * inner.divisor());
    auto rep = std::make_shared<Rep>();
    rep->bound = inner.domain_bound() / theta;
    if (!(rep->bound > 0.0)) throw ValidationError("non-triviality violated: scaled domain collapses to {0}");
    rep->v = ScaledRep{inner, theta, divisor};
    return OrliczFunction(rep);
}

OrliczFunction OrliczFunction::maximum(std::vector<OrliczFunction> parts) {
    if (parts.empty()) throw ValidationError("maximum of an empty set of Orlicz functions");
    if (parts.size() == 1) return parts.front();
    auto rep = std::make_shared<Rep>();
    rep->bound = kInf;
    for (const auto& p : parts) rep->bound = std::min(rep->bound, p.domain_bound());
    rep->v = MaxRep{std::move(parts)};
    return OrliczFunction(rep);
}

OrliczKind OrliczFunction::kind() const { return static_cast<OrliczKind>(rep_->v.index()); }

double OrliczFunction::domain_bound() const { return rep_->bound; }

double OrliczFunction::operator()(double x) const {
    if (std::isnan(x) || x < 0.0) throw DomainError("Orlicz function evaluated at negative or NaN argument");
    return std::visit(overloaded{
                          [&](const PowerRep& r) { return r.p == 1.0 ? x : std::pow(x, r.p); },
                          [&](const ExponentialRep& r) { return std::expm1(r.beta * x); },
                          [&](const EssSupRep&) { return x <= 1.0 ? 0.0 : kInf; },
                          [&](const PiecewiseRep& r) { return piecewise_eval(r, x); },
                          [&](const ScaledRep& r) { return r.inner(r.theta * x) / r.divisor; },
                          [&](const MaxRep& r) {
                              double m = 0.0;
                              for (const auto& p : r.parts) {
                                  m = std::max(m, p(x));
                                  if (m == kInf) break;
                              }
                              return m;
                          },
                      },
                      rep_->v);
}

double OrliczFunction::right_derivative(double x) const {
    if (std::isnan(x) || x < 0.0) throw DomainError("derivative at negative argument");
    if (x >= rep_->bound) return kInf;
    return std::visit(overloaded{
                          [&](const PowerRep& r) {
                              if (r.p == 1.0) return 1.0;
                              return r.p * std::pow(x, r.p - 1.0);
                          },
                          [&](const ExponentialRep& r) { return r.beta * std::exp(r.beta * x); },
                          [&](const EssSupRep&) { return 0.0; },
                          [&](const PiecewiseRep& r) {
                              const auto it = std::upper_bound(r.breakpoints.begin(), r.breakpoints.end(), x);
                              if (it == r.breakpoints.begin()) return 0.0;
                              return r.slopes[static_cast<std::size_t>(it - r.breakpoints.begin()) - 1];
                          },
                          [&](const ScaledRep& r) {
                              return r.theta * r.inner.right_derivative(r.theta * x) / r.divisor;
                          },
                          [&](const MaxRep& r) {
                              const double m = (*this)(x);
                              double d = 0.0;
                              for (const auto& p : r.parts)
                                  if (active(p(x), m)) d = std::max(d, p.right_derivative(x));
                              return d;
                          },
                      },
                      rep_->v);
}

double OrliczFunction::left_derivative(double x) const {
    if (std::isnan(x) || x < 0.0) throw DomainError("derivative at negative argument");
    if (x == 0.0) return 0.0;
    if (x > rep_->bound) return kInf;
    return std::visit(overloaded{
                          [&](const PowerRep& r) {
                              if (r.p == 1.0) return 1.0;
                              return r.p * std::pow(x, r.p - 1.0);
                          },
                          [&](const ExponentialRep& r) { return r.beta * std::exp(r.beta * x); },
                          [&](const EssSupRep&) { return 0.0; },
                          [&](const PiecewiseRep& r) {
                              const auto it = std::lower_bound(r.breakpoints.begin(), r.breakpoints.end(), x);
                              if (it == r.breakpoints.begin()) return 0.0;
                              return r.slopes[static_cast<std::size_t>(it - r.breakpoints.begin()) - 1];
                          },
                          [&](const ScaledRep& r) {
                              return r.theta * r.inner.left_derivative(r.theta * x) / r.divisor;
                          },
                          [&](const MaxRep& r) {
                              const double m = (*this)(x);
                              double d = kInf;
                              for (const auto& p : r.parts)
                                  if (active(p(x), m)) d = std::min(d, p.left_derivative(x));
                              return d;
                          },
                      },
                      rep_->v);
}

std::vector<double> OrliczFunction::kinks() const {
    std::vector<double> out;
    std::visit(overloaded{
                   [&](const PowerRep&) {},
                   [&](const ExponentialRep&) {},
                   [&](const EssSupRep&) { out.push_back(1.0); },
                   [&](const PiecewiseRep& r) {
                       for (double b : r.breakpoints)
                           if (b <= r.bound) out.push_back(b);
                   },
                   [&](const ScaledRep& r) {
                       for (double k : r.inner.kinks()) out.push_back(k / r.theta);
                   },
                   [&](const MaxRep& r) {
                       for (const auto& p : r.parts) {
                           auto k = p.kinks();
                           out.insert(out.end(), k.begin(), k.end());
                       }
                   },
               },
               rep_->v);
    if (std::isfinite(rep_->bound)) out.push_back(rep_->bound);
    std::erase_if(out, [&](double k) { return k > rep_->bound; });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<PowerForm> OrliczFunction::power_form() const {
    if (const auto* p = std::get_if<PowerRep>(&rep_->v)) return PowerForm{p->p, 1.0};
    if (const auto* s = std::get_if<ScaledRep>(&rep_->v)) {
        if (auto in = s->inner.power_form())
            return PowerForm{in->exponent, in->coefficient * std::pow(s->theta, in->exponent) / s->divisor};
    }
    return std::nullopt;
}

double OrliczFunction::conjugate(double y) const {
    if (std::isnan(y) || y < 0.0) throw DomainError("conjugate evaluated at negative argument");
    return std::visit(overloaded{
                          [&](const PowerRep& r) {
                              if (r.p == 1.0) return y <= 1.0 ? 0.0 : kInf;
                              const double q = r.p / (r.p - 1.0);
                              return (r.p - 1.0) * std::pow(r.p, -q) * std::pow(y, q);
                          },
                          [&](const ExponentialRep& r) {
                              if (y <= r.beta) return 0.0;
                              const double t = y / r.beta;
                              return t * std::log(t) - t + 1.0;
                          },
                          [&](const EssSupRep&) { return y; },
                          [&](const PiecewiseRep&) { return numeric_conjugate(*this, y); },
                          [&](const ScaledRep& r) {
                              return r.inner.conjugate(r.divisor * y / r.theta) / r.divisor;
                          },
                          [&](const MaxRep&) { return numeric_conjugate(*this, y); },
                      },
                      rep_->v);
}

double OrliczFunction::exponent() const {
    if (const auto* p = std::get_if<PowerRep>(&rep_->v)) return p->p;
    throw std::logic_error("exponent() on non-power Orlicz function");
}
double OrliczFunction::beta() const {
    if (const auto* p = std::get_if<ExponentialRep>(&rep_->v)) return p->beta;
    throw std::logic_error("beta() on non-exponential Orlicz function");
}
const std::vector<double>& OrliczFunction::breakpoints() const {
    if (const auto* p = std::get_if<PiecewiseRep>(&rep_->v)) return p->breakpoints;
    throw std::logic_error("breakpoints() on non-piecewise Orlicz function");
}
const std::vector<double>& OrliczFunction::slopes() const {
    if (const auto* p = std::get_if<PiecewiseRep>(&rep_->v)) return p->slopes;
    throw std::logic_error("slopes() on non-piecewise Orlicz function");
}
const OrliczFunction& OrliczFunction::inner() const {
    if (const auto* p = std::get_if<ScaledRep>(&rep_->v)) return p->inner;
    throw std::logic_error("inner() on non-scaled Orlicz function");
}
double OrliczFunction::theta() const {
    if (const auto* p = std::get_if<ScaledRep>(&rep_->v)) return p->theta;
    throw std::logic_error("theta() on non-scaled Orlicz function");
}
double OrliczFunction::divisor() const {
    if (const auto* p = std::get_if<ScaledRep>(&rep_->v)) return p->divisor;
    throw std::logic_error("divisor() on non-scaled Orlicz function");
}
const std::vector<OrliczFunction>& OrliczFunction::parts() const {
    if (const auto* p = std::get_if<MaxRep>(&rep_->v)) return p->parts;
    throw std::logic_error("parts() on non-max Orlicz function");
}

std::string OrliczFunction::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const PowerRep& r) { os << "Power(" << r.p << ")"; },
                   [&](const ExponentialRep& r) { os << "Exponential(" << r.beta << ")"; },
                   [&](const EssSupRep&) { os << "EssSupIndicator"; },
                   [&](const PiecewiseRep& r) {
                       os << "PiecewiseLinear(" << r.breakpoints.size() << " pieces, bound " << r.bound << ")";
                   },
                   [&](const ScaledRep& r) {
                       os << "Scaled(" << r.inner.describe() << ", theta=" << r.theta << ", divisor=" << r.divisor
                          << ")";
                   },
                   [&](const MaxRep& r) { os << "Max(" << r.parts.size() << " parts)"; },
               },
               rep_->v);
    return os.str();
}

double numeric_conjugate(const OrliczFunction& phi, double y, double rel_tol) {
    if (std::isnan(y) || y < 0.0) throw DomainError("conjugate evaluated at negative argument");
    auto g = [&](double x) {
        const double v = phi(x);
        return v == kInf ? -kInf : x * y - v;
    };
    const double bound = phi.domain_bound();
    double hi;
    if (std::isfinite(bound)) {
        hi = bound;
    } else {
        // g is concave: once it stops increasing along the doubling ladder the
        // maximiser is bracketed by [0, 2 hi].
        hi = 1.0;
        for (const double k : phi.kinks()) hi = std::max(hi, k);
        while (g(2.0 * hi) > g(hi)) {
            hi *= 2.0;
            if (hi > 1e300) return kInf;
        }
        hi *= 2.0;
    }
    auto best = golden_section_max(g, 0.0, hi, rel_tol, 1000);
    double value = best.value;
    for (const double k : phi.kinks())
        if (k <= hi) value = std::max(value, g(k));
    return std::max(value, 0.0);
}

AffineMinorant affine_minorant(const OrliczFunction& phi) {
    const double bound = phi.domain_bound();
    double x = 1.0;
    if (x > bound) x = bound;
    while (phi(x) == 0.0 && x < bound) {
        const double next = 2.0 * x;
        x = next >= bound ? bound : next;
    }
    const double fx = phi(x);
    double a = phi.right_derivative(x);
    if (!std::isfinite(a)) a = phi.left_derivative(x);
    if (fx == 0.0) {
        // phi vanishes on [0, bound] and jumps to inf: any line through
        // (bound, 0) with positive slope works; take the one reaching -1 at 0.
        a = std::max(a, 1.0 / x);
        return {a, -a * x};
    }
    // Convexity with phi(0) = 0 gives a >= phi(x) / x > 0, hence b <= 0.
    a = std::max(a, fx / x);
    return {a, std::min(0.0, fx - a * x)};
}

bool minorant_holds(const OrliczFunction& phi, const AffineMinorant& m, int grid_points) {
    const double bound = phi.domain_bound();
    double span = std::isfinite(bound) ? bound : 10.0;
    if (!std::isfinite(bound))
        for (double k : phi.kinks()) span = std::max(span, 4.0 * k);
    std::vector<double> xs = phi.kinks();
    xs.reserve(xs.size() + static_cast<std::size_t>(grid_points) + 1);
    for (int i = 0; i <= grid_points; ++i) xs.push_back(span * static_cast<double>(i) / grid_points);
    for (double x : xs) {
        const double lhs = m.slope * x + m.intercept;
        const double rhs = phi(x);
        if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(lhs))) return false;
    }
    return true;
}

double level_point(const OrliczFunction& phi, double level) {
    for (int k = 1023; k >= -1074; --k) {
        const double x = std::ldexp(1.0, k);
        if (x <= phi.domain_bound() && phi(x) <= level) return x;
    }
    return 0.0;
}

} // namespace rorlicz
