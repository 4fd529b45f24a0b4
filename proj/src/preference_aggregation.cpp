#include "rorlicz/preference_aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rorlicz/errors.hpp"
#include "rorlicz/extended_real.hpp"

namespace rorlicz {

namespace {

constexpr double kNormalisationTol = 1e-9;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

Utility Utility::linear(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("linear utility needs a finite slope a > 0");
    Utility u;
    u.kind_ = Kind::Linear;
    u.a_ = a;
    u.check_normalisation();
    return u;
}

Utility Utility::cara(double beta, double scale) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("CARA utility needs beta > 0");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("CARA utility needs scale > 0");
    Utility u;
    u.kind_ = Kind::Cara;
    u.beta_ = beta;
    u.scale_ = scale;
    u.check_normalisation();
    return u;
}

Utility Utility::normalised_cara(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("CARA utility needs beta > 0");
    return cara(beta, 1.0 / std::expm1(beta));
}

Utility Utility::piecewise_linear(std::vector<double> knots, std::vector<double> slopes) {
    if (slopes.size() != knots.size() + 1)
        throw ValidationError("piecewise-linear utility needs one more slope than knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i])) throw ValidationError("utility knots must be finite");
        if (i > 0 && !(knots[i] > knots[i - 1])) throw ValidationError("utility knots must be strictly ascending");
    }
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        if (!std::isfinite(slopes[i]) || slopes[i] < 0.0)
            throw ValidationError("utility slopes must be finite and >= 0 (nondecreasing utility)");
        if (i > 0 && slopes[i] > slopes[i - 1])
            throw ValidationError("concavity violated: utility slopes must be nonincreasing");
    }
    Utility u;
    u.kind_ = Kind::PiecewiseLinear;
    u.knots_ = std::move(knots);
    u.slopes_ = std::move(slopes);
    u.check_normalisation();
    return u;
}

void Utility::check_normalisation() const {
    const double v = (*this)(-1.0);
    if (!(std::abs(v + 1.0) <= kNormalisationTol))
        throw ValidationError("utility is not normalised: u(-1) = " + num(v) + ", expected -1");
}

double Utility::operator()(double x) const {
    if (std::isnan(x)) throw DomainError("utility evaluated at NaN");
    switch (kind_) {
    case Kind::Linear: return a_ * x;
    case Kind::Cara: return -scale_ * std::expm1(-beta_ * x);
    case Kind::PiecewiseLinear: {
        // Integrate the slope from 0 to x across the knots.
        const double lo = std::min(0.0, x), hi = std::max(0.0, x);
        CompensatedSum s;
        for (std::size_t j = 0; j < slopes_.size(); ++j) {
            const double a = j == 0 ? -kInf : knots_[j - 1];
            const double b = j == knots_.size() ? kInf : knots_[j];
            const double l = std::max(a, lo), h = std::min(b, hi);
            if (h > l) s.add(slopes_[j] * (h - l));
        }
        return x >= 0.0 ? s.value() : -s.value();
    }
    }
    return 0.0;
}

OrliczFunction Utility::loss() const {
    switch (kind_) {
    case Kind::Linear: return OrliczFunction::scaled(OrliczFunction::power(1.0), a_, 1.0);
    case Kind::Cara: return OrliczFunction::scaled(OrliczFunction::exponential(beta_), 1.0, 1.0 / scale_);
    case Kind::PiecewiseLinear: {
        // Slope of -u(-x) at x is u'(-x): walk the knots left of 0 outwards.
        std::vector<double> bps{0.0}, sl;
        std::size_t j = static_cast<std::size_t>(std::lower_bound(knots_.begin(), knots_.end(), 0.0) - knots_.begin());
        sl.push_back(slopes_[j]);
        while (j > 0) {
            --j;
            bps.push_back(-knots_[j]);
            sl.push_back(slopes_[j]);
        }
        if (bps.size() > 1 && bps[1] == 0.0) {
            bps.erase(bps.begin());
            sl.erase(sl.begin());
        }
        return OrliczFunction::piecewise_linear(bps, sl);
    }
    }
    throw std::logic_error("unknown utility kind");
}

std::string Utility::describe() const {
    switch (kind_) {
    case Kind::Linear: return "linear(a=" + num(a_) + ")";
    case Kind::Cara: return "cara(beta=" + num(beta_) + ", scale=" + num(scale_) + ")";
    case Kind::PiecewiseLinear: {
        std::string s = "piecewise_linear(knots=[";
        for (std::size_t i = 0; i < knots_.size(); ++i) s += (i ? "," : "") + num(knots_[i]);
        s += "], slopes=[";
        for (std::size_t i = 0; i < slopes_.size(); ++i) s += (i ? "," : "") + num(slopes_[i]);
        return s + "])";
    }
    }
    return "?";
}

double agent_penalty(const Agent& agent, const std::string& label) {
    const auto it = agent.penalty.find(label);
    return it == agent.penalty.end() ? 0.0 : it->second;
}

void check_agent(const ScenarioModel& model, const Agent& agent) {
    if (agent.priors.empty()) throw ValidationError("agent has an empty prior set");
    for (const auto& l : agent.priors)
        if (!model.prior_index(l)) throw ValidationError("agent prior '" + l + "' is not a model prior");
    double mn = kInf;
    for (const auto& [label, c] : agent.penalty) {
        if (std::find(agent.priors.begin(), agent.priors.end(), label) == agent.priors.end())
            throw ValidationError("penalty given for prior '" + label + "' outside the agent's prior set");
        if (!(c >= 0.0) || !std::isfinite(c))
            throw ValidationError("penalty for prior '" + label + "' must be finite and >= 0");
    }
    for (const auto& l : agent.priors) mn = std::min(mn, agent_penalty(agent, l));
    if (mn != 0.0) throw ValidationError("agent penalty must vanish on some prior (min penalty " + num(mn) + ")");
}

double evaluate_utility(const ScenarioModel& model, const Agent& agent, const RandomVariable& x) {
    check_agent(model, agent);
    if (x.size() != model.num_atoms()) throw DomainError("random variable and model differ in length");
    std::vector<double> ux(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ux[i] = agent.utility(x[i]);
    double best = kInf;
    for (const auto& l : agent.priors) {
        const auto& p = model.prior(*model.prior_index(l));
        CompensatedSum s;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (p[i] > 0.0) s.add(p[i] * ux[i]);
        best = std::min(best, s.value() + agent_penalty(agent, l));
    }
    return best;
}

Aggregate aggregate_family(const ScenarioModel& model, const std::vector<Agent>& agents) {
    for (const auto& a : agents) check_agent(model, a);
    std::vector<OrliczFunction> losses;
    for (const auto& a : agents) losses.push_back(a.utility.loss());
    std::vector<OrliczFunction> per_prior;
    std::vector<std::vector<std::size_t>> contributors(model.num_priors());
    std::vector<double> at_one;
    for (std::size_t k = 0; k < model.num_priors(); ++k) {
        const auto& label = model.prior_label(k);
        std::vector<OrliczFunction> parts;
        for (std::size_t i = 0; i < agents.size(); ++i) {
            const auto& ps = agents[i].priors;
            if (std::find(ps.begin(), ps.end(), label) == ps.end()) continue;
            contributors[k].push_back(i);
            parts.push_back(OrliczFunction::scaled(losses[i], 1.0, 1.0 + agent_penalty(agents[i], label)));
        }
        if (parts.empty()) throw ValidationError("prior '" + label + "' is covered by no agent");
        OrliczFunction phi = parts.size() == 1 ? parts[0] : OrliczFunction::maximum(std::move(parts));
        const double v = phi(1.0);
        if (!(v <= 1.0 + kNormalisationTol))
            throw NumericalError("aggregated phi for prior '" + label + "' has phi(1) = " + num(v) + " > 1");
        at_one.push_back(v);
        per_prior.push_back(std::move(phi));
    }
    return Aggregate{OrliczFamily(std::move(per_prior)), std::move(contributors), std::move(at_one)};
}

ExtensionReport check_extension_bound(const ScenarioModel& model, const std::vector<Agent>& agents,
                                      const OrliczFamily& family, const RandomVariable& x, double tol) {
    ExtensionReport rep;
    rep.samples = 1;
    rep.max_slack = -kInf;
    const RandomVariable ax = abs(canonicalize(model, x));
    NormOptions no;
    no.tol = tol;
    const double norm = luxemburg_norm(model, ax, family, no).value;
    const double lambda = norm * (1.0 + 10.0 * tol);
    for (const auto& a : agents) {
        const OrliczFunction loss = a.utility.loss();
        for (const auto& l : a.priors) {
            const auto& p = model.prior(*model.prior_index(l));
            CompensatedSum s;
            if (lambda > 0.0)
                for (std::size_t i = 0; i < ax.size(); ++i)
                    if (p[i] > 0.0) s.add(ext_mul(p[i], loss(ax[i] / lambda)));
            const double bound = 1.0 + agent_penalty(a, l);
            const double slack = (s.value() - bound) / bound;
            rep.max_slack = std::max(rep.max_slack, slack);
            ++rep.checks;
            if (slack > tol) ++rep.violations;
        }
    }
    return rep;
}

ExtensionReport verify_extension_bound(const ScenarioModel& model, const std::vector<Agent>& agents,
                                       const OrliczFamily& family, int sample_size, std::uint64_t seed,
                                       double tol) {
    ExtensionReport rep;
    rep.max_slack = -kInf;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> logscale(-3.0, 3.0);
    for (int s = 0; s < sample_size; ++s) {
        RandomVariable x{std::vector<double>(model.num_atoms())};
        const double sc = std::exp(logscale(rng));
        for (double& v : x.values) v = sc * unif(rng);
        const auto r = check_extension_bound(model, agents, family, x, tol);
        rep.samples += 1;
        rep.checks += r.checks;
        rep.violations += r.violations;
        rep.max_slack = std::max(rep.max_slack, r.max_slack);
    }
    return rep;
}

} // namespace rorlicz
