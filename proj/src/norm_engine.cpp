#include "rorlicz/norm_engine.hpp"

#include <algorithm>
#include <cmath>

#include "rorlicz/errors.hpp"
#include "rorlicz/extended_real.hpp"

namespace rorlicz {

namespace {

constexpr int kMaxDoublings = 1023;
constexpr double kTinyLambda = 1e-300;

void check_tol(const NormOptions& opts) {
    if (!(opts.tol > 0.0) || !std::isfinite(opts.tol)) throw DomainError("tolerance must be finite and > 0");
    if (opts.max_iter < 1) throw DomainError("max_iter must be >= 1");
}

void add_with_neighbours(std::vector<double>& out, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) return;
    out.push_back(std::nextafter(c, 0.0));
    out.push_back(c);
    out.push_back(std::nextafter(c, kInf));
}

// Candidate points |x| / kink where a jump-type modular can switch across 1.
void add_candidates(std::vector<double>& out, std::span<const double> absx, const OrliczFunction& phi, double lo,
                    double hi) {
    const auto ks = phi.kinks();
    if (ks.empty()) return;
    for (double x : absx) {
        if (!(x > 0.0) || !std::isfinite(x)) continue;
        for (double k : ks) {
            if (!(k > 0.0)) continue;
            const double c = x / k;
            if (c >= lo * (1.0 - 1e-15) && c <= hi * (1.0 + 1e-15)) add_with_neighbours(out, c);
        }
    }
}

// Replaces the bracket by [c, c] for the smallest candidate c inside it whose
// modular is <= 1. Any such c lies within the bracket width of the infimum;
// candidates come from closed forms and kinks, so exact values are recovered.
void pin_to_candidates(NormResult& r, std::vector<double> cands, const std::function<double(double)>& modular) {
    if (cands.empty() || !std::isfinite(r.lambda_hi) || r.lambda_hi <= 0.0) return;
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (double c : cands) {
        if (c < r.lambda_lo || c > r.lambda_hi || !(c > 0.0)) continue;
        const double mc = modular(c);
        if (mc > 1.0) continue;
        r.lambda_lo = r.lambda_hi = r.value = c;
        r.modular_at_value = mc;
        return;
    }
}

std::vector<double> support_abs(const MeasureVector& p, const RandomVariable& x) {
    std::vector<double> out;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (p[i] > 0.0) out.push_back(std::abs(x[i]));
    return out;
}

void check_sizes(const ScenarioModel& model, const RandomVariable& x) {
    if (x.size() != model.num_atoms())
        throw DomainError("random variable has " + std::to_string(x.size()) + " entries for " +
                          std::to_string(model.num_atoms()) + " atoms");
    for (double v : x.values)
        if (std::isnan(v)) throw DomainError("random variable contains NaN");
}

double rel_gap(double a, double b) {
    if (a == b) return 0.0;
    if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace

ModularEvaluator::ModularEvaluator(const ScenarioModel& model, const OrliczFamily& family,
                                   const RandomVariable& x, Exec exec)
    : exec_(exec) {
    family.check_model(model);
    check_sizes(model, x);
    std::vector<std::size_t> rep_prior; // model prior that defines each support group
    for (std::size_t k = 0; k < model.num_priors(); ++k) {
        const auto& p = model.prior(k);
        std::size_t g = supports_.size();
        for (std::size_t j = 0; j < rep_prior.size(); ++j)
            if (model.prior(rep_prior[j]).masses == p.masses) {
                g = j;
                break;
            }
        if (g == supports_.size()) {
            Support s;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (!(p[i] > 0.0)) continue;
                const double v = std::abs(x[i]);
                if (v == kInf) s.has_inf = true;
                s.w.push_back(p[i]);
                s.x.push_back(v);
                s.logw.push_back(std::log(p[i]));
                s.logx.push_back(std::log(v));
            }
            supports_.push_back(std::move(s));
            rep_prior.push_back(k);
        }
        PriorEntry e{g, family[k], family[k].power_form(), 0.0};
        if (e.power && !supports_[g].has_inf) {
            auto& cache = supports_[g].log_moments;
            const double pexp = e.power->exponent;
            const auto it = std::find_if(cache.begin(), cache.end(), [&](const auto& c) { return c.first == pexp; });
            if (it != cache.end()) {
                e.log_moment = it->second;
            } else {
                e.log_moment = log_power_moment(supports_[g].logw, supports_[g].logx, pexp, exec_);
                cache.emplace_back(pexp, e.log_moment);
            }
        }
        priors_.push_back(std::move(e));
    }
}

double ModularEvaluator::prior_modular(std::size_t k, double lambda) const {
    if (!(lambda > 0.0)) throw DomainError("modular needs lambda > 0");
    const auto& e = priors_[k];
    const auto& s = supports_[e.support];
    if (s.has_inf) return kInf;
    if (e.power) {
        if (e.log_moment == -kInf) return 0.0;
        return e.power->coefficient * std::exp(e.log_moment - e.power->exponent * std::log(lambda));
    }
    return phi_expectation(e.phi, s.w, s.x, lambda, exec_);
}

double ModularEvaluator::prior_modular_direct(std::size_t k, double lambda) const {
    if (!(lambda > 0.0)) throw DomainError("modular needs lambda > 0");
    const auto& e = priors_[k];
    const auto& s = supports_[e.support];
    if (s.has_inf) return kInf;
    return phi_expectation(e.phi, s.w, s.x, lambda, exec_);
}

double ModularEvaluator::modular_direct(double lambda) const {
    double m = 0.0;
    for (std::size_t k = 0; k < priors_.size(); ++k) m = std::max(m, prior_modular_direct(k, lambda));
    return m;
}

std::optional<double> ModularEvaluator::closed_form_norm(std::size_t k) const {
    const auto& e = priors_[k];
    if (!e.power || supports_[e.support].has_inf) return std::nullopt;
    if (e.log_moment == -kInf) return 0.0;
    return std::exp((std::log(e.power->coefficient) + e.log_moment) / e.power->exponent);
}

double ModularEvaluator::modular(double lambda, bool early_exit) const {
    if (!(lambda > 0.0)) throw DomainError("modular needs lambda > 0");
    double m = 0.0;
    for (std::size_t k = 0; k < priors_.size(); ++k) {
        m = std::max(m, prior_modular(k, lambda));
        if (early_exit && m > 1.0) break;
    }
    return m;
}

NormResult solve_luxemburg(const std::function<double(double)>& modular, const NormOptions& opts) {
    check_tol(opts);
    NormResult r;
    double hi = 1.0;
    double lo;
    if (modular(hi) > 1.0) {
        int e = 0;
        do {
            lo = hi;
            hi *= 2.0;
            ++e;
        } while (e < kMaxDoublings && modular(hi) > 1.0);
        if (modular(hi) > 1.0) {
            r.value = kInf;
            r.lambda_lo = hi;
            r.lambda_hi = kInf;
            r.modular_at_value = kInf;
            return r;
        }
    } else {
        lo = 0.5;
        while (modular(lo) <= 1.0) {
            hi = lo;
            lo *= 0.5;
            if (lo < kTinyLambda) {
                r.value = 0.0;
                r.lambda_lo = 0.0;
                r.lambda_hi = hi;
                r.modular_at_value = modular(hi);
                return r;
            }
        }
    }
    int it = 0;
    while (hi - lo > opts.tol * hi) {
        if (it >= opts.max_iter)
            throw NumericalError("bisection did not reach tolerance within " + std::to_string(opts.max_iter) +
                                 " iterations");
        const double mid = std::sqrt(lo) * std::sqrt(hi);
        if (modular(mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
        ++it;
    }
    r.lambda_lo = lo;
    r.lambda_hi = hi;
    r.value = 0.5 * (lo + hi);
    r.modular_at_value = modular(hi);
    r.iterations = it;
    return r;
}

double modular(const ScenarioModel& model, const RandomVariable& x, double lambda, const OrliczFamily& family) {
    if (!(lambda > 0.0)) throw DomainError("modular needs lambda > 0");
    ModularEvaluator ev(model, family, canonicalize(model, x));
    return ev.modular_direct(lambda);
}

NormResult single_prior_norm(const MeasureVector& p, const RandomVariable& x, const OrliczFunction& phi,
                             const NormOptions& opts) {
    if (p.size() != x.size()) throw DomainError("prior and random variable differ in length");
    ScenarioModel m(std::vector<std::string>(p.size()), {p});
    return luxemburg_norm(m, x, OrliczFamily::uniform(phi, 1), opts);
}

NormResult luxemburg_norm(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family,
                          const NormOptions& opts) {
    check_tol(opts);
    const RandomVariable cx = canonicalize(model, x);
    ModularEvaluator ev(model, family, cx, opts.exec);

    std::vector<double> per_prior(model.num_priors());
    std::vector<double> robust_cands;
    for (std::size_t k = 0; k < model.num_priors(); ++k) {
        auto mod = [&](double l) { return ev.prior_modular(k, l); };
        NormResult pk = solve_luxemburg(mod, opts);
        std::vector<double> c;
        add_candidates(c, support_abs(model.prior(k), cx), family[k], pk.lambda_lo, pk.lambda_hi);
        if (auto cf = ev.closed_form_norm(k)) add_with_neighbours(c, *cf);
        pin_to_candidates(pk, std::move(c), [&](double l) { return ev.prior_modular_direct(k, l); });
        per_prior[k] = pk.value;
        add_with_neighbours(robust_cands, pk.value);
    }

    // The robust infimum is the largest per-prior infimum, so the per-prior
    // values are the natural pinning candidates for the joint bisection.
    NormResult r = solve_luxemburg([&](double l) { return ev.modular(l, true); }, opts);
    pin_to_candidates(r, std::move(robust_cands), [&](double l) { return ev.modular_direct(l); });
    r.per_prior_norms = std::move(per_prior);

    const double best = *std::max_element(r.per_prior_norms.begin(), r.per_prior_norms.end());
    for (std::size_t k = 0; k < model.num_priors(); ++k)
        if (r.per_prior_norms[k] >= best * (1.0 - opts.tol)) {
            r.argmax_prior = k;
            break;
        }
    if (opts.cross_check && rel_gap(best, r.value) > 2.0 * opts.tol)
        throw NumericalError("robust norm " + std::to_string(r.value) + " disagrees with sup of per-prior norms " +
                             std::to_string(best));
    return r;
}

NormResult penalised_norm(const ScenarioModel& model, const RandomVariable& x, const OrliczFunction& phi,
                          const std::vector<double>& gamma, const NormOptions& opts) {
    check_tol(opts);
    if (gamma.size() != model.num_priors()) throw ValidationError("gamma needs one value per prior");
    for (double g : gamma)
        if (!std::isfinite(g) || g < 0.0) throw ValidationError("gamma must be finite and >= 0");
    const RandomVariable cx = canonicalize(model, x);
    ModularEvaluator ev(model, OrliczFamily::uniform(phi, model.num_priors()), cx, opts.exec);
    auto mod = [&](double l) {
        double m = -kInf;
        for (std::size_t k = 0; k < model.num_priors(); ++k) m = std::max(m, ev.prior_modular(k, l) - gamma[k]);
        return m;
    };
    NormResult r = solve_luxemburg(mod, opts);
    std::vector<double> c;
    for (std::size_t k = 0; k < model.num_priors(); ++k)
        add_candidates(c, support_abs(model.prior(k), cx), phi, r.lambda_lo, r.lambda_hi);
    const std::vector<double> ones(model.num_priors(), 1.0);
    const NormResult scaled = luxemburg_norm(model, cx, OrliczFamily::parametric(phi, ones, gamma), opts);
    for (double v : scaled.per_prior_norms) add_with_neighbours(c, v);
    pin_to_candidates(r, std::move(c), mod);
    r.per_prior_norms = scaled.per_prior_norms;
    r.argmax_prior = scaled.argmax_prior;
    if (opts.cross_check && rel_gap(scaled.value, r.value) > 2.0 * opts.tol)
        throw NumericalError("penalised norm " + std::to_string(r.value) + " disagrees with the scaled family " +
                             std::to_string(scaled.value));
    return r;
}

double weighted_lp_norm(const ScenarioModel& model, const RandomVariable& x, double p,
                        const std::vector<double>& theta) {
    check_sizes(model, x);
    if (std::isnan(p) || p < 1.0) throw DomainError("weighted_lp_norm needs p >= 1");
    if (theta.size() != model.num_priors()) throw ValidationError("theta needs one value per prior");
    double best = 0.0;
    for (std::size_t k = 0; k < model.num_priors(); ++k) {
        if (!std::isfinite(theta[k]) || theta[k] <= 0.0) throw ValidationError("theta must be finite and > 0");
        const auto& pk = model.prior(k);
        double v;
        if (p == kInf) {
            v = ess_sup(pk, x);
        } else {
            std::vector<double> lw, lx;
            bool inf = false;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (pk[i] > 0.0) {
                    const double a = std::abs(x[i]);
                    inf = inf || a == kInf;
                    lw.push_back(std::log(pk[i]));
                    lx.push_back(std::log(a));
                }
            v = inf ? kInf : std::exp(log_power_moment(lw, lx, p, default_exec()) / p);
        }
        best = std::max(best, theta[k] * v);
    }
    return best;
}

double risk_measure(const ScenarioModel& model, const RandomVariable& x, const std::vector<double>& gamma) {
    check_sizes(model, x);
    if (gamma.size() != model.num_priors()) throw ValidationError("gamma needs one value per prior");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!model.is_polar(i) && x[i] < 0.0) throw DomainError("risk_measure needs X >= 0 quasi-surely");
    double best = -kInf;
    for (std::size_t k = 0; k < model.num_priors(); ++k)
        best = std::max(best, expectation(model.prior(k), x.values) - gamma[k]);
    return best;
}

NormResult norm_via_risk_measure(const ScenarioModel& model, const RandomVariable& x, const OrliczFunction& phi,
                                 const std::vector<double>& gamma, const NormOptions& opts) {
    const RandomVariable cx = canonicalize(model, x);
    RandomVariable y{std::vector<double>(cx.size(), 0.0), true};
    auto mod = [&](double l) {
        for (std::size_t i = 0; i < cx.size(); ++i) y.values[i] = phi(std::abs(cx[i]) / l);
        return risk_measure(model, y, gamma);
    };
    NormResult r = solve_luxemburg(mod, opts);
    std::vector<double> c;
    for (std::size_t k = 0; k < model.num_priors(); ++k)
        add_candidates(c, support_abs(model.prior(k), cx), phi, r.lambda_lo, r.lambda_hi);
    pin_to_candidates(r, std::move(c), mod);
    return r;
}

} // namespace rorlicz
