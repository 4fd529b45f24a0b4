#include "rorlicz/duality.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rorlicz/errors.hpp"
#include "rorlicz/extended_real.hpp"
#include "rorlicz/scalar_search.hpp"

namespace rorlicz {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_pair(const MeasureVector& mu, const MeasureVector& p) {
    if (mu.size() != p.size()) throw DomainError("measure and prior differ in length");
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (!(mu[i] >= 0.0) || !std::isfinite(mu[i])) throw DomainError("dual norm needs a finite measure mu >= 0");
        if (p[i] == 0.0 && mu[i] > 0.0)
            throw DomainError("measure is not absolutely continuous with respect to the prior (atom " +
                              std::to_string(i + 1) + ")");
    }
}

} // namespace

double kothe_dual_norm_conjugate(const MeasureVector& mu, const MeasureVector& p, const OrliczFunction& phi,
                                 double tol) {
    check_pair(mu, p);
    std::vector<double> z, w;
    double zmax = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) {
            z.push_back(mu[i] / p[i]);
            w.push_back(p[i]);
            zmax = std::max(zmax, z.back());
        }
    if (zmax == 0.0) return 0.0;
    // Amemiya form of the Orlicz norm of Z under the conjugate function.
    auto f = [&](double t) {
        const double k = std::exp(t);
        CompensatedSum s;
        s.add(1.0);
        for (std::size_t i = 0; i < z.size(); ++i) {
            s.add(ext_mul(w[i], phi.conjugate(k * z[i])));
            if (s.value() == kInf) return kInf;
        }
        return s.value() / k;
    };
    const double t0 = -std::log(zmax);
    int best_j = 0;
    double best = kInf;
    for (int j = -80; j <= 80; ++j) {
        const double v = f(t0 + j * kLn2);
        if (v < best) {
            best = v;
            best_j = j;
        }
    }
    if (best == kInf) throw NumericalError("conjugate route found no finite value");
    const auto r = golden_section_min(f, t0 + (best_j - 1) * kLn2, t0 + (best_j + 1) * kLn2,
                                      std::min(tol, 1e-12), 1000);
    return std::min(best, r.value);
}

double maximise_ratio(const std::vector<double>& c, const std::function<double(const std::vector<double>&)>& norm,
                      int restarts, std::uint64_t seed) {
    const std::size_t d = c.size();
    if (std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; })) return 0.0;
    auto ratio = [&](const std::vector<double>& v) {
        const double n = norm(v);
        if (!(n > 0.0)) return -kInf;
        if (n == kInf) return 0.0;
        CompensatedSum s;
        for (std::size_t i = 0; i < d; ++i) s.add(c[i] * v[i]);
        return s.value() / n;
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::vector<double>> starts;
    starts.emplace_back(d, 1.0);
    for (std::size_t i = 0; i < d && static_cast<int>(starts.size()) < restarts; ++i) {
        std::vector<double> e(d, 0.0);
        e[i] = 1.0;
        starts.push_back(std::move(e));
    }
    while (static_cast<int>(starts.size()) < restarts) {
        std::vector<double> v(d);
        for (double& x : v) x = unif(rng);
        starts.push_back(std::move(v));
    }

    double overall = -kInf;
    std::vector<double> dir(d), trial(d);
    for (auto v : starts) {
        double best = ratio(v);
        double step = 0.5;
        while (step > 1e-12) {
            bool improved = false;
            const std::size_t ndirs = 4 * d;
            for (std::size_t k = 0; k < ndirs; ++k) {
                if (k < 2 * d) {
                    std::fill(dir.begin(), dir.end(), 0.0);
                    dir[k / 2] = (k % 2 == 0) ? 1.0 : -1.0;
                } else {
                    double nrm = 0.0;
                    for (double& x : dir) {
                        x = gauss(rng);
                        nrm += x * x;
                    }
                    nrm = std::sqrt(nrm);
                    for (double& x : dir) x /= nrm;
                }
                // Walk along an improving direction while it keeps improving.
                double s = step;
                for (;;) {
                    for (std::size_t i = 0; i < d; ++i) trial[i] = std::max(0.0, v[i] + s * dir[i]);
                    const double r = ratio(trial);
                    if (!(r > best)) break;
                    best = r;
                    v = trial;
                    improved = true;
                    s *= 2.0;
                }
            }
            // The ratio is scale invariant; keep the iterate at unit max.
            double m = 0.0;
            for (double x : v) m = std::max(m, x);
            if (m > 0.0)
                for (double& x : v) x /= m;
            if (!improved) step *= 0.5;
        }
        overall = std::max(overall, best);
    }
    return overall;
}

namespace {

// sup{x >= 0 : phi(x) <= y}; concave and nondecreasing in y for convex phi.
double phi_inverse(const OrliczFunction& phi, double y) {
    if (const auto pf = phi.power_form()) return std::pow(y / pf->coefficient, 1.0 / pf->exponent);
    const double bound = phi.domain_bound();
    if (bound < kInf && phi(bound) <= y) return bound;
    double lo = 0.0, hi = bound < kInf ? bound : 1.0;
    if (bound == kInf)
        while (phi(hi) <= y) {
            lo = hi;
            hi *= 2.0;
        }
    for (int it = 0; it < 2200; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        (phi(mid) <= y ? lo : hi) = mid;
    }
    return lo;
}

} // namespace

double kothe_dual_norm_brute_force(const MeasureVector& mu, const MeasureVector& p, const OrliczFunction& phi,
                                   int restarts, std::uint64_t seed) {
    check_pair(mu, p);
    std::vector<double> c, w;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) {
            c.push_back(mu[i]);
            w.push_back(p[i]);
        }
    const std::size_t d = c.size();
    if (std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; })) return 0.0;

    // The unit ball is {v : sum w_i phi(v_i) <= 1}. Writing b_i = w_i phi(v_i)
    // turns sup mu.v into a separable concave maximisation over the simplex,
    // where pairwise exchanges that no longer improve certify the optimum.
    auto term = [&](std::size_t i, double b) { return c[i] == 0.0 ? 0.0 : c[i] * phi_inverse(phi, b / w[i]); };
    auto total = [&](const std::vector<double>& b) {
        CompensatedSum s;
        for (std::size_t i = 0; i < d; ++i) s.add(term(i, b[i]));
        return s.value();
    };
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    double overall = -kInf;
    for (int r = 0; r < std::max(1, restarts); ++r) {
        std::vector<double> b(d, 1.0 / static_cast<double>(d));
        if (r > 0) {
            double s = 0.0;
            for (double& x : b) s += (x = expo(rng));
            for (double& x : b) x /= s;
        }
        double value = total(b);
        for (int sweep = 0; sweep < 1000 && d > 1; ++sweep) {
            const double before = value;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j) {
                    const double bi = b[i], bj = b[j];
                    auto pair = [&](double t) { return term(i, bi + t) + term(j, bj - t); };
                    const double here = pair(0.0);
                    const auto opt = golden_section_max(pair, -bi, bj, 1e-15, 300);
                    if (opt.value > here) {
                        b[i] = bi + opt.x;
                        b[j] = bj - opt.x;
                        // keep exact simplex arithmetic at the ends
                        if (opt.x == -bi) b[i] = 0.0;
                        if (opt.x == bj) b[j] = 0.0;
                    }
                }
            value = total(b);
            if (!(value > before * (1.0 + 1e-15))) break;
        }
        overall = std::max(overall, value);
    }
    return overall;
}

KotheResult kothe_dual_norm(const MeasureVector& mu, const MeasureVector& p, const OrliczFunction& phi,
                            const KotheOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("tolerance must be > 0");
    KotheResult r;
    r.conjugate_route = kothe_dual_norm_conjugate(mu, p, phi, opts.tol);
    r.value = r.conjugate_route;
    std::size_t support = 0;
    for (double m : p.masses) support += m > 0.0 ? 1 : 0;
    if (opts.brute_force && support <= opts.brute_force_max_atoms) {
        const double bf = kothe_dual_norm_brute_force(mu, p, phi, opts.restarts, opts.seed);
        r.brute_force = bf;
        const double scale = std::max(std::abs(r.conjugate_route), std::abs(bf));
        r.rel_discrepancy = scale > 0.0 ? std::abs(r.conjugate_route - bf) / scale : 0.0;
        if (r.rel_discrepancy > opts.agreement)
            throw NumericalError("Kothe dual norm routes disagree: conjugate " + std::to_string(r.conjugate_route) +
                                 " vs brute force " + std::to_string(bf));
    }
    return r;
}

RandomVariable canonical_projection(const RandomVariable& x, const MeasureVector& p) {
    if (x.size() != p.size()) throw DomainError("random variable and prior differ in length");
    RandomVariable out{x.values, x.canonical};
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(p[i] > 0.0)) out.values[i] = 0.0;
    return out;
}

double witness_weight(const ScenarioModel& model, const OrliczFamily& family, const MeasureVector& q, double tol) {
    double best = kInf;
    for (std::size_t k = 0; k < model.num_priors(); ++k) {
        const auto& p = model.prior(k);
        bool ac = true;
        for (std::size_t i = 0; i < q.size() && ac; ++i) ac = !(p[i] == 0.0 && q[i] > 0.0);
        if (!ac) continue;
        best = std::min(best, kothe_dual_norm_conjugate(q, p, family[k], tol));
    }
    return best == kInf || best == 0.0 ? 0.0 : 1.0 / best;
}

DualWitness dual_witness(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family,
                         const NormOptions& opts) {
    const RandomVariable cx = canonicalize(model, x);
    const NormResult nr = luxemburg_norm(model, cx, family, opts);
    if (nr.value == 0.0) throw DomainError("dual witness needs X != 0");
    if (nr.value == kInf) throw DomainError("dual witness needs a finite norm");
    const std::size_t k = nr.argmax_prior;
    const auto& p = model.prior(k);
    const auto& phi = family[k];
    const std::size_t n = model.num_atoms();

    // Subgradients of phi at |X| / lambda from both ends of the final bracket.
    std::vector<double> gr(n, 0.0), gl(n, 0.0);
    bool r_inf = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p[i] > 0.0)) continue;
        const double a = std::abs(cx[i]);
        gr[i] = phi.right_derivative(a / nr.lambda_lo);
        gl[i] = phi.left_derivative(a / nr.lambda_hi);
        r_inf = r_inf || gr[i] == kInf;
    }
    if (r_inf)
        for (double& g : gr) g = g == kInf ? 1.0 : 0.0;
    bool l_inf = false;
    for (double g : gl) l_inf = l_inf || g == kInf;
    if (l_inf)
        for (double& g : gl) g = g == kInf ? 1.0 : 0.0;

    auto measure_of = [&](const std::vector<double>& g) {
        MeasureVector mu{std::vector<double>(n, 0.0)};
        for (std::size_t i = 0; i < n; ++i) mu.masses[i] = p[i] * g[i];
        return mu;
    };
    auto score = [&](const std::vector<double>& g) {
        const MeasureVector mu = measure_of(g);
        const double dn = kothe_dual_norm_conjugate(mu, p, phi, opts.tol);
        if (!(dn > 0.0) || !std::isfinite(dn)) return -kInf;
        return expectation(mu, abs(cx).values) / dn;
    };
    // Indicator of the atoms where |X| peaks: the witness when the bound of
    // phi binds, which rounding can hide from the derivative candidates.
    std::vector<double> gi(n, 0.0);
    {
        double top = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] > 0.0) top = std::max(top, std::abs(cx[i]));
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] > 0.0 && std::abs(cx[i]) == top) gi[i] = 1.0;
    }
    std::vector<double> best_g = gr;
    double best = score(gr);
    for (const auto* g : {&gl, &gi})
        if (const double s = score(*g); s > best) {
            best = s;
            best_g = *g;
        }
    std::vector<double> gt(n);
    auto refine = [&](const std::vector<double>& a, const std::vector<double>& b) {
        if (a == b) return;
        auto mix = [&](double t) {
            for (std::size_t i = 0; i < n; ++i) gt[i] = (1.0 - t) * a[i] + t * b[i];
            return score(gt);
        };
        const auto opt = golden_section_max(mix, 0.0, 1.0, 1e-12, 200);
        if (opt.value > best) {
            best = opt.value;
            mix(opt.x);
            best_g = gt;
        }
    };
    // Refinement only runs while no candidate attains the norm yet.
    auto attained = [&] { return best >= nr.value * (1.0 - 0.1 * opts.tol); };
    if (!r_inf && !l_inf && !attained()) refine(gl, gr);
    if (!attained()) refine(gl, gi);
    if (best == -kInf) throw NumericalError("no nonzero subgradient witness found");

    DualWitness w;
    w.norm = nr.value;
    w.prior = k;
    w.measure = measure_of(best_g);
    const double dn = kothe_dual_norm_conjugate(w.measure, p, phi, opts.tol);
    for (double& m : w.measure.masses) m /= dn;
    w.dual_norm = 1.0;
    w.pairing = expectation(w.measure, abs(cx).values);
    w.gap = w.norm * w.dual_norm - w.pairing;
    const double mass = w.measure.total_mass();
    w.probability = w.measure;
    for (double& m : w.probability.masses) m /= mass;
    w.theta = witness_weight(model, family, w.probability, opts.tol);
    return w;
}

L1Report verify_l1_reduction(const ScenarioModel& model, const OrliczFamily& family, int sample_size,
                             std::uint64_t seed, const NormOptions& opts) {
    family.check_model(model);
    L1Report rep;
    const OrliczFunction phimax = family.phi_max();
    rep.alpha = level_point(phimax, 1.0);
    if (!(rep.alpha > 0.0)) {
        rep.applicable = false;
        rep.reason = "phi_Max is infinite on (0, inf); the space is not a weighted robust L1-space";
        return rep;
    }
    const std::size_t n = model.num_atoms();
    const RandomVariable ones{std::vector<double>(n, 1.0)};
    rep.kappa = luxemburg_norm(model, ones, family, opts).value;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<RandomVariable> xs;
    std::vector<double> norms;
    for (int s = 0; s < sample_size; ++s) {
        RandomVariable x{std::vector<double>(n)};
        for (double& v : x.values) v = unif(rng);
        x = canonicalize(model, x);
        const double qs = qs_ess_sup(model, x);
        if (qs == 0.0) continue;
        const DualWitness w = dual_witness(model, x, family, opts);
        rep.max_witness_mass = std::max(rep.max_witness_mass, w.measure.total_mass());
        rep.pool.push_back(w.probability);
        rep.pool_theta.push_back(w.theta);
        if (w.norm > rep.kappa * qs * (1.0 + 10.0 * opts.tol)) ++rep.kappa_violations;
        xs.push_back(std::move(x));
        norms.push_back(w.norm);
    }
    rep.samples = static_cast<int>(xs.size());
    rep.pool_size = rep.pool.size();
    rep.mass_bound_holds = rep.max_witness_mass <= (1.0 / rep.alpha) * (1.0 + 1e-9);
    for (std::size_t s = 0; s < xs.size(); ++s) {
        const auto ax = abs(xs[s]);
        double sup = 0.0;
        for (std::size_t j = 0; j < rep.pool.size(); ++j) {
            const double v = rep.pool_theta[j] * expectation(rep.pool[j], ax.values);
            if (v > norms[s] + 10.0 * opts.tol * std::max(1.0, norms[s])) ++rep.holder_violations;
            sup = std::max(sup, v);
        }
        rep.max_rel_gap = std::max(rep.max_rel_gap, std::abs(norms[s] - sup) / norms[s]);
    }
    return rep;
}

double exact_operator_norm(const ScenarioModel& model, const OrliczFamily& family, std::size_t prior, int restarts,
                           std::uint64_t seed) {
    family.check_model(model);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < model.num_atoms(); ++i)
        if (!model.is_polar(i)) idx.push_back(i);
    std::vector<double> c;
    for (std::size_t i : idx) c.push_back(model.prior(prior)[i]);
    NormOptions opts;
    opts.tol = 1e-12;
    opts.cross_check = false;
    RandomVariable x{std::vector<double>(model.num_atoms(), 0.0)};
    auto norm = [&](const std::vector<double>& v) {
        for (std::size_t j = 0; j < idx.size(); ++j) x.values[idx[j]] = v[j];
        return luxemburg_norm(model, x, family, opts).value;
    };
    return maximise_ratio(c, norm, restarts, seed);
}

} // namespace rorlicz
