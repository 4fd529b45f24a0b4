#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rorlicz/family.hpp"
#include "rorlicz/kernels.hpp"
#include "rorlicz/scenario_model.hpp"

namespace rorlicz {

struct NormOptions {
    double tol = 1e-10;
    int max_iter = 200;
    /// Compare the joint bisection with the sup of per-prior norms.
    bool cross_check = true;
    Exec exec = default_exec();
};

struct NormResult {
    double value = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double modular_at_value = 0.0; // modular at lambda_hi
    int iterations = 0;
    std::vector<double> per_prior_norms;
    std::size_t argmax_prior = 0;
};

/**
 * E_P[phi_P(|X| / lambda)] for every prior of a model, with the support of each
 * prior compressed once. Priors with identical mass vectors share storage, and
 * power-type functions are evaluated through cached log-moments.
 */
class ModularEvaluator {
public:
    ModularEvaluator(const ScenarioModel& model, const OrliczFamily& family, const RandomVariable& x,
                     Exec exec = default_exec());

    std::size_t num_priors() const { return priors_.size(); }

    double prior_modular(std::size_t k, double lambda) const;

    /// Atom-by-atom evaluation, bypassing the log-moment shortcut. Used where
    /// the comparison with 1 has to be exact to the last bit.
    double prior_modular_direct(std::size_t k, double lambda) const;
    double modular_direct(double lambda) const;

    /// (c E_P|X|^p)^{1/p} when phi_P = c x^p; the exact per-prior norm.
    std::optional<double> closed_form_norm(std::size_t k) const;

    /// sup over priors; with early_exit the scan stops once a value exceeds 1.
    double modular(double lambda, bool early_exit = false) const;

private:
    struct Support {
        std::vector<double> w, x, logw, logx;
        bool has_inf = false;
        std::vector<std::pair<double, double>> log_moments; // (exponent, log moment)
    };
    struct PriorEntry {
        std::size_t support;
        OrliczFunction phi;
        std::optional<PowerForm> power;
        double log_moment = 0.0;
    };
    std::vector<Support> supports_;
    std::vector<PriorEntry> priors_;
    Exec exec_;
};

/// inf{lambda > 0 : modular(lambda) <= 1} by doubling/halving bracket search
/// followed by bisection on log lambda. modular must be nonincreasing.
NormResult solve_luxemburg(const std::function<double(double)>& modular, const NormOptions& opts);

/// sup_P E_P[phi_P(|X| / lambda)].
double modular(const ScenarioModel& model, const RandomVariable& x, double lambda, const OrliczFamily& family);

NormResult luxemburg_norm(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family,
                          const NormOptions& opts = {});

/// Norm of X under a single prior with function phi.
NormResult single_prior_norm(const MeasureVector& p, const RandomVariable& x, const OrliczFunction& phi,
                             const NormOptions& opts = {});

/// inf{lambda : sup_P (E_P[phi(|X|/lambda)] - gamma(P)) <= 1}, cross-checked
/// against luxemburg_norm with phi / (1 + gamma(P)).
NormResult penalised_norm(const ScenarioModel& model, const RandomVariable& x, const OrliczFunction& phi,
                          const std::vector<double>& gamma, const NormOptions& opts = {});

/// sup_P theta(P) ||X||_{L^p(P)}; p = inf gives theta-weighted essential sups.
double weighted_lp_norm(const ScenarioModel& model, const RandomVariable& x, double p,
                        const std::vector<double>& theta);

/// sup_P (E_P[X] - gamma(P)) for X >= 0 q.s.
double risk_measure(const ScenarioModel& model, const RandomVariable& x, const std::vector<double>& gamma);

/// inf{lambda : rho(phi(|X|/lambda)) <= 1} with rho the risk measure above.
NormResult norm_via_risk_measure(const ScenarioModel& model, const RandomVariable& x, const OrliczFunction& phi,
                                 const std::vector<double>& gamma, const NormOptions& opts = {});

} // namespace rorlicz
