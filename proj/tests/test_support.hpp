#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "rorlicz/family.hpp"
#include "rorlicz/orlicz_function.hpp"
#include "rorlicz/preference_aggregation.hpp"
#include "rorlicz/scenario_model.hpp"

namespace testsupport {

using namespace rorlicz;

inline OrliczFunction random_phi(std::mt19937_64& rng, int depth = 0) {
    std::uniform_int_distribution<int> kind(0, depth > 0 ? 3 : 5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (kind(rng)) {
    case 0: return OrliczFunction::power(1.0 + 3.0 * u(rng));
    case 1: return OrliczFunction::exponential(0.2 + 1.8 * u(rng));
    case 2: return OrliczFunction::ess_sup_indicator();
    case 3: {
        const int m = 1 + static_cast<int>(3 * u(rng));
        std::vector<double> b{0.5 * u(rng)}, s{0.5 * u(rng)};
        for (int i = 1; i < m; ++i) {
            b.push_back(b.back() + 0.1 + u(rng));
            s.push_back(s.back() + 0.1 + 2.0 * u(rng));
        }
        if (s.back() == 0.0) s.back() = 1.0;
        const double bound = u(rng) < 0.3 ? b.back() + 0.5 + u(rng) : INFINITY;
        return OrliczFunction::piecewise_linear(b, s, bound);
    }
    case 4: return OrliczFunction::scaled(random_phi(rng, depth + 1), 0.5 + 1.5 * u(rng), 0.5 + 1.5 * u(rng));
    default:
        return OrliczFunction::maximum({random_phi(rng, depth + 1), random_phi(rng, depth + 1)});
    }
}

/// 2-8 atoms, 1-5 priors; masses with random zeros so polar atoms occur.
inline ScenarioModel random_model(std::mt19937_64& rng, int min_atoms = 2, int max_atoms = 8, int max_priors = 5) {
    std::uniform_int_distribution<int> na(min_atoms, max_atoms), np(1, max_priors);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = na(rng), m = np(rng);
    std::vector<std::string> atoms;
    for (int i = 0; i < n; ++i) atoms.push_back("a" + std::to_string(i + 1));
    std::vector<MeasureVector> priors;
    for (int k = 0; k < m; ++k) {
        std::vector<double> w(n);
        double s = 0.0;
        for (double& x : w) {
            x = u(rng) < 0.3 ? 0.0 : 0.05 + u(rng);
            s += x;
        }
        if (s == 0.0) {
            w[std::uniform_int_distribution<int>(0, n - 1)(rng)] = 1.0;
            s = 1.0;
        }
        for (double& x : w) x /= s;
        priors.push_back(MeasureVector{w});
    }
    return ScenarioModel(atoms, priors);
}

inline OrliczFamily random_family(std::mt19937_64& rng, const ScenarioModel& m) {
    std::vector<OrliczFunction> fs;
    for (std::size_t k = 0; k < m.num_priors(); ++k) fs.push_back(random_phi(rng));
    return OrliczFamily(fs);
}

inline RandomVariable random_x(std::mt19937_64& rng, std::size_t n, double scale = 5.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    RandomVariable x{std::vector<double>(n)};
    for (double& v : x.values) v = u(rng);
    return x;
}

/// Plain long-double bisection for one prior, no bracketing tricks. Used as an
/// oracle for the norm engine.
inline long double ref_prior_norm(const MeasureVector& p, const RandomVariable& x, const OrliczFunction& phi) {
    auto mod = [&](long double lam) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (p[i] == 0.0) continue;
            const double v = phi(static_cast<double>(std::fabs(static_cast<long double>(x[i])) / lam));
            if (std::isinf(v)) return static_cast<long double>(INFINITY);
            s += static_cast<long double>(p[i]) * v;
        }
        return s;
    };
    bool any = false;
    for (std::size_t i = 0; i < x.size(); ++i) any = any || (p[i] > 0.0 && x[i] != 0.0);
    if (!any) return 0.0L;
    long double lo = 1e-12L, hi = 1.0L;
    while (mod(hi) > 1.0L) hi *= 2.0L;
    while (mod(lo) <= 1.0L) lo /= 2.0L;
    for (int i = 0; i < 400; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (mod(mid) <= 1.0L)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

inline double ref_norm(const ScenarioModel& m, const RandomVariable& x, const OrliczFamily& f) {
    long double best = 0.0L;
    for (std::size_t k = 0; k < m.num_priors(); ++k) best = std::max(best, ref_prior_norm(m.prior(k), x, f[k]));
    return static_cast<double>(best);
}

inline double rel_diff(double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

/// E|U|^n for a standard normal via (n-1)!!, times sqrt(2/pi) for odd n.
inline double normal_abs_moment(int n) {
    double df = 1.0;
    for (int k = n - 1; k > 1; k -= 2) df *= k;
    return n % 2 == 0 ? df : df * std::sqrt(2.0 / 3.14159265358979323846);
}

/// Linear, normalised CARA, or piecewise-linear with slope 1 on [-1, 0].
inline Utility random_utility(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (rng() % 3) {
    case 0: return Utility::linear(1.0);
    case 1: return Utility::normalised_cara(0.1 + 3.0 * u(rng));
    default: {
        const double k = -1.0 - u(rng);
        return Utility::piecewise_linear({k, -1.0, 0.0}, {1.5 + 2.0 * u(rng), 1.0 + 0.5 * u(rng), 1.0,
                                                          0.5 * u(rng)});
    }
    }
}

/// 1-3 agents; the first covers every prior so the aggregate is defined.
inline std::vector<Agent> random_agents(std::mt19937_64& rng, const ScenarioModel& m) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Agent> out;
    const std::size_t na = 1 + rng() % 3;
    for (std::size_t i = 0; i < na; ++i) {
        Agent a{random_utility(rng), {}, {}};
        for (std::size_t k = 0; k < m.num_priors(); ++k)
            if (i == 0 || u(rng) < 0.5) a.priors.push_back(m.prior_label(k));
        if (a.priors.empty()) a.priors.push_back(m.prior_label(0));
        for (std::size_t j = 1; j < a.priors.size(); ++j) a.penalty[a.priors[j]] = 3.0 * u(rng);
        out.push_back(std::move(a));
    }
    return out;
}
} // namespace testsupport
