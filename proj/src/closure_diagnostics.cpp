#include "rorlicz/closure_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rorlicz/errors.hpp"
#include "rorlicz/extended_real.hpp"

namespace rorlicz {

namespace {

struct Level {
    ScenarioModel model;
    OrliczFamily family;
    RandomVariable x;
};

std::vector<Level> build_levels(const CountableModel& ladder, const std::vector<double>& x_full,
                                const FamilySpec& spec) {
    if (x_full.size() < ladder.atoms_at(ladder.num_levels() - 1))
        throw ValidationError("random variable shorter than the finest truncation");
    std::vector<Level> out;
    for (std::size_t l = 0; l < ladder.num_levels(); ++l) {
        ScenarioModel m = ladder.level(l);
        OrliczFamily f = spec.resolve(m, false);
        out.push_back(Level{std::move(m), std::move(f), ladder.restrict(x_full, l)});
    }
    return out;
}

RandomVariable tail_part(const RandomVariable& x, double n) {
    RandomVariable t{x.values};
    for (double& v : t.values)
        if (!(std::abs(v) > n)) v = 0.0;
    return t;
}

double rel_change(double a, double b) {
    if (a == b) return 0.0;
    if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

TailProfile tail_over_levels(const std::vector<const Level*>& levels, const std::vector<double>& ns,
                             const TailOptions& opts) {
    for (std::size_t j = 1; j < ns.size(); ++j)
        if (!(ns[j] > ns[j - 1])) throw DomainError("tail levels must be strictly ascending");
    TailProfile tp;
    tp.levels = ns;
    tp.finest_atoms = levels.back()->model.num_atoms();
    for (double n : ns) {
        std::vector<double> vals;
        for (const Level* lv : levels)
            vals.push_back(luxemburg_norm(lv->model, tail_part(lv->x, n), lv->family, opts.norm).value);
        tp.tail_norms.push_back(vals.back());
        const std::size_t t = vals.size();
        tp.unstable.push_back(t >= 2 && rel_change(vals[t - 2], vals[t - 1]) > opts.stability);
        std::size_t from = t - 1;
        while (from > 0 && rel_change(vals[from - 1], vals.back()) <= opts.stability) --from;
        const bool stable = t == 1 || from < t - 1;
        tp.stabilised_atoms.push_back(stable ? levels[from]->model.num_atoms() : 0);
    }
    tp.verdict = classify_tail(tp.levels, tp.tail_norms, tp.slope, tp.slope_defined, opts);
    return tp;
}

double q_modular(const MeasureVector& q, const RandomVariable& x, const OrliczFunction& phi) {
    CompensatedSum s;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] > 0.0) s.add(ext_mul(q[i], phi(std::abs(x[i]))));
    return s.value();
}

std::vector<std::size_t> select_qualifiers(const ScenarioModel& model, const RandomVariable& x,
                                           const OrliczFamily& family) {
    const ModularEvaluator ev(model, family, canonicalize(model, x));
    std::vector<std::size_t> out;
    int j = 1;
    for (std::size_t k = 0; k < model.num_priors() && j <= 1000; ++k) {
        const double target = std::ldexp(1.0, j);
        if (ev.prior_modular(k, target) > target) {
            out.push_back(k);
            ++j;
        }
    }
    return out;
}

std::vector<double> gammas_of(const OrliczFamily& family) {
    if (const auto& pf = family.parametric_form()) return pf->gamma;
    return std::vector<double>(family.size(), 0.0);
}

// Q = sum_j 2^-j (g_j/(1+g_j) P* + 1/(1+g_j) P_j), renormalised. Qualifiers
// keep their position j even when earlier ones are absent from the model.
MeasureVector build_q(const ScenarioModel& model, const std::vector<std::size_t>& qual,
                      const std::vector<double>& gamma) {
    const std::size_t n = model.num_atoms();
    const auto& pstar = model.prior(0);
    std::vector<CompensatedSum> acc(n);
    CompensatedSum total;
    for (std::size_t j = 0; j < qual.size(); ++j) {
        const std::size_t k = qual[j];
        if (k >= model.num_priors()) continue;
        const double wj = std::ldexp(1.0, -static_cast<int>(j) - 1);
        const double g = gamma.at(k);
        for (std::size_t i = 0; i < n; ++i)
            acc[i].add(wj * (g / (1.0 + g) * pstar[i] + 1.0 / (1.0 + g) * model.prior(k)[i]));
        total.add(wj);
    }
    MeasureVector q{std::vector<double>(n, 0.0)};
    if (!(total.value() > 0.0)) return q;
    for (std::size_t i = 0; i < n; ++i) q.masses[i] = acc[i].value() / total.value();
    return q;
}

void set_test_function(MixtureWitness& w, const OrliczFamily& family, OrliczFunction& test) {
    if (const auto& pf = family.parametric_form()) {
        w.theta_q = family.theta_sup();
        test = OrliczFunction::scaled(pf->phi, w.theta_q, 1.0);
        w.test_function = "phi(theta_Q x) with theta_Q = sup theta, phi = " + pf->phi.describe();
    } else {
        w.theta_q = 1.0;
        test = family.phi_max();
        w.test_function = "phi_Max";
    }
}

} // namespace

CountableModel default_gaussian_ladder(ModelOptions options) {
    return CountableModel::gaussian(1e-3, {5.0, 10.0, 15.0, 20.0}, {25, 50, 100, 200}, options);
}

std::string to_string(TailVerdict v) {
    switch (v) {
    case TailVerdict::Convergent: return "convergent";
    case TailVerdict::Divergent: return "divergent";
    case TailVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<double> default_tail_levels() {
    std::vector<double> out;
    for (int n = 1; n <= 10; ++n) out.push_back(n);
    return out;
}

TailVerdict classify_tail(const std::vector<double>& levels, const std::vector<double>& norms, double& slope,
                          bool& slope_defined, const TailOptions& opts) {
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < norms.size(); ++j)
        if (norms[j] > 0.0 && std::isfinite(norms[j])) {
            xs.push_back(levels[j]);
            ys.push_back(std::log(norms[j]));
        }
    slope_defined = xs.size() >= 2;
    slope = 0.0;
    if (slope_defined) {
        double mx = 0.0, my = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            mx += xs[j];
            my += ys[j];
        }
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            sxy += (xs[j] - mx) * (ys[j] - my);
            sxx += (xs[j] - mx) * (xs[j] - mx);
        }
        slope = sxy / sxx;
    }
    if (norms.empty()) return TailVerdict::Inconclusive;
    const double last = norms.back();
    if (last == 0.0) return TailVerdict::Convergent;
    if (last < opts.eps_tail && slope_defined && slope < opts.slope_threshold) return TailVerdict::Convergent;
    const std::size_t m = norms.size();
    if (m >= 3) {
        bool div = true;
        for (std::size_t j = m - 3; j < m; ++j) {
            if (!(norms[j] > opts.divergence_floor)) div = false;
            if (j > m - 3 && !(norms[j] >= 0.95 * norms[j - 1])) div = false;
        }
        if (div) return TailVerdict::Divergent;
    }
    return TailVerdict::Inconclusive;
}

TailProfile tail_membership(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family,
                            const std::vector<double>& levels, const TailOptions& opts) {
    const Level lv{model, family, canonicalize(model, x)};
    return tail_over_levels({&lv}, levels, opts);
}

TailProfile tail_membership(const CountableModel& ladder, const std::vector<double>& x_full,
                            const FamilySpec& spec, const std::vector<double>& levels, const TailOptions& opts) {
    const auto data = build_levels(ladder, x_full, spec);
    std::vector<const Level*> ptrs;
    for (const auto& d : data) ptrs.push_back(&d);
    return tail_over_levels(ptrs, levels, opts);
}

double gaussian_abs_moment(int n) {
    return std::pow(2.0, 0.5 * n) * std::tgamma(0.5 * (n + 1)) / std::sqrt(std::numbers::pi);
}

MomentReport moment_growth(double bound, double step, int n_max, Exec exec) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    const CountableModel g = CountableModel::gaussian(step, {bound}, {1});
    const ScenarioModel m = g.level(0);
    const auto& w = m.prior(0).masses;
    std::vector<double> ax(w.size());
    for (std::size_t i = 0; i < ax.size(); ++i) ax[i] = std::abs(g.values()[i]);
    MomentReport r;
    r.bound = bound;
    r.step = step;
    r.moment = power_moments(w, ax, n_max, exec);
    for (int n = 1; n <= n_max; ++n) {
        const double mo = r.moment[n - 1];
        const double orc = gaussian_abs_moment(n);
        r.n.push_back(n);
        r.root.push_back(std::pow(mo, 1.0 / n));
        r.oracle_moment.push_back(orc);
        r.oracle_root.push_back(std::pow(orc, 1.0 / n));
        r.rel_dev.push_back(std::abs(mo - orc) / orc);
        r.truncation_bites.push_back(r.rel_dev.back() > 0.01);
        if (r.rel_dev.back() > 0.10) r.hard_flag = true;
        if (n > 1 && r.root[n - 1] < r.root[n - 2]) r.nondecreasing = false;
    }
    return r;
}

std::string to_string(Membership m) {
    switch (m) {
    case Membership::InLPhi: return "in_LPhi";
    case Membership::InFrakLOnly: return "in_frakL_only";
    case Membership::OutsideFrakL: return "outside_frakL";
    case Membership::Inconclusive: return "inconclusive";
    }
    return "?";
}

MembershipReport membership_classify(const ScenarioModel& model, const RandomVariable& x,
                                     const OrliczFamily& family, const NormOptions& opts) {
    const RandomVariable cx = canonicalize(model, x);
    MembershipReport r;
    const double norm = luxemburg_norm(model, cx, family, opts).value;
    r.level_norms.push_back(norm);
    const ModularEvaluator ev(model, family, cx, opts.exec);
    r.frak_l = true;
    for (std::size_t k = 0; k < model.num_priors(); ++k) {
        std::optional<int> found;
        for (int a = 0; a <= 1023 && !found; ++a)
            if (std::isfinite(ev.prior_modular(k, std::ldexp(1.0, a)))) found = a;
        r.alpha_exponent.push_back(found);
        r.frak_l = r.frak_l && found.has_value();
    }
    if (std::isfinite(norm)) {
        r.verdict = Membership::InLPhi;
        r.evidence = "robust norm is finite";
    } else if (r.frak_l) {
        r.verdict = Membership::InFrakLOnly;
        r.evidence = "robust norm is infinite; every prior admits a finite modular at some scale";
    } else {
        r.verdict = Membership::OutsideFrakL;
        r.evidence = "some prior has an infinite modular at every scale 2^-k";
    }
    return r;
}

MembershipReport membership_classify(const CountableModel& ladder, const std::vector<double>& x_full,
                                     const FamilySpec& spec, const NormOptions& opts) {
    const auto data = build_levels(ladder, x_full, spec);
    MembershipReport r;
    for (const auto& d : data) r.level_norms.push_back(luxemburg_norm(d.model, d.x, d.family, opts).value);
    std::vector<ModularEvaluator> evs;
    for (const auto& d : data) evs.emplace_back(d.model, d.family, d.x, opts.exec);

    const std::size_t priors = ladder.priors_at(ladder.num_levels() - 1);
    r.frak_l = true;
    std::size_t checked = 0;
    for (std::size_t k = 0; k < priors; ++k) {
        std::vector<std::size_t> holding;
        for (std::size_t l = 0; l < data.size(); ++l)
            if (k < ladder.priors_at(l)) holding.push_back(l);
        if (holding.size() < 2) {
            r.alpha_exponent.push_back(std::nullopt);
            continue;
        }
        ++checked;
        const std::size_t l1 = holding[holding.size() - 2], l2 = holding.back();
        std::optional<int> found;
        for (int a = 0; a <= 60 && !found; ++a) {
            const double lam = std::ldexp(1.0, a);
            const double m1 = evs[l1].prior_modular(k, lam), m2 = evs[l2].prior_modular(k, lam);
            if (std::isfinite(m2) && rel_change(m1, m2) < 1e-6) found = a;
        }
        r.alpha_exponent.push_back(found);
        r.frak_l = r.frak_l && found.has_value();
    }

    const auto& ns = r.level_norms;
    const std::size_t m = ns.size();
    bool grows = false, stable = false;
    if (m >= 3) {
        grows = ns[m - 2] > ns[m - 3] * (1.0 + 1e-2) && ns[m - 1] > ns[m - 2] * (1.0 + 1e-2);
        stable = std::isfinite(ns[m - 1]) && rel_change(ns[m - 2], ns[m - 1]) < 1e-6;
    }
    if (stable) {
        r.verdict = Membership::InLPhi;
        r.evidence = "robust norm stable across the last two truncations";
    } else if (grows && checked > 0) {
        r.verdict = r.frak_l ? Membership::InFrakLOnly : Membership::OutsideFrakL;
        r.evidence = r.frak_l ? "robust norm grows across the last three truncations; every checked prior "
                                "has a stable modular at some scale 2^-k"
                              : "robust norm grows and some prior has no stable modular at any scale";
    } else {
        r.verdict = Membership::Inconclusive;
        r.evidence = "no clear trend across truncations";
    }
    return r;
}

std::string to_string(WitnessStatus s) {
    switch (s) {
    case WitnessStatus::Constructed: return "constructed";
    case WitnessStatus::NotConstructible: return "not_constructible";
    case WitnessStatus::Degenerate: return "degenerate";
    case WitnessStatus::NotDeclared: return "not_declared";
    }
    return "?";
}

MixtureWitness mixture_witness(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family) {
    family.check_model(model);
    MixtureWitness w;
    if (!model.options().mixture_closed) {
        w.status = WitnessStatus::NotDeclared;
        w.note = "model does not declare closure under countable mixtures";
        return w;
    }
    const RandomVariable cx = canonicalize(model, x);
    OrliczFunction test = family[0];
    set_test_function(w, family, test);
    if (model.num_priors() == 1) {
        w.status = WitnessStatus::Degenerate;
        w.qualifiers = {0};
        w.labels = {model.prior_label(0)};
        w.q = model.prior(0);
        w.note = "single prior: the mixture is that prior";
    } else {
        w.qualifiers = select_qualifiers(model, cx, family);
        for (std::size_t k : w.qualifiers) w.labels.push_back(model.prior_label(k));
        if (w.qualifiers.size() < 3) {
            w.status = WitnessStatus::NotConstructible;
            w.note = "fewer than 3 qualifying priors";
            return w;
        }
        w.status = WitnessStatus::Constructed;
        w.q = build_q(model, w.qualifiers, gammas_of(family));
    }
    w.finest_modular = q_modular(w.q, cx, OrliczFunction::scaled(test, w.alpha, 1.0));
    w.level_modular.push_back(w.finest_modular);
    return w;
}

MixtureWitness mixture_witness(const CountableModel& ladder, const std::vector<double>& x_full,
                               const FamilySpec& spec) {
    const auto data = build_levels(ladder, x_full, spec);
    const Level& fine = data.back();
    MixtureWitness w = mixture_witness(fine.model, fine.x, fine.family);
    if (w.status != WitnessStatus::Constructed) return w;
    OrliczFunction test = fine.family[0];
    set_test_function(w, fine.family, test);
    const auto scaled = OrliczFunction::scaled(test, w.alpha, 1.0);
    w.level_modular.clear();
    for (std::size_t l = 0; l < data.size(); ++l) {
        bool any = false;
        for (std::size_t k : w.qualifiers) any = any || k < data[l].model.num_priors();
        if (!any) {
            w.level_modular.push_back(std::nullopt);
            continue;
        }
        const MeasureVector q = build_q(data[l].model, w.qualifiers, gammas_of(data[l].family));
        w.level_modular.push_back(q_modular(q, data[l].x, scaled));
    }
    return w;
}

} // namespace rorlicz
