#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rorlicz/family.hpp"
#include "rorlicz/norm_engine.hpp"
#include "rorlicz/orlicz_function.hpp"
#include "rorlicz/scenario_model.hpp"

namespace rorlicz {

/**
 * Concave, nondecreasing utility with u(0) = 0, normalised so that
 * u(-1) = -1 within 1e-9 (checked by every factory).
 *
 *  - linear(a):                 u(x) = a x
 *  - cara(beta, scale):         u(x) = scale (1 - e^{-beta x})
 *  - piecewise_linear(k, s):    slope s_0 below k_0, s_j on [k_{j-1}, k_j], s_m above k_{m-1}
 */
class Utility {
public:
    enum class Kind { Linear, Cara, PiecewiseLinear };

    static Utility linear(double a);
    static Utility cara(double beta, double scale);
    /// scale = 1 / (e^beta - 1), the unique normalised CARA utility.
    static Utility normalised_cara(double beta);
    static Utility piecewise_linear(std::vector<double> knots, std::vector<double> slopes);

    Kind kind() const { return kind_; }
    double operator()(double x) const;

    /// x -> -u(-x) on [0, inf) as an Orlicz function.
    OrliczFunction loss() const;

    std::string describe() const;

    double a() const { return a_; }
    double beta() const { return beta_; }
    double scale() const { return scale_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& slopes() const { return slopes_; }

private:
    Utility() = default;
    void check_normalisation() const;

    Kind kind_ = Kind::Linear;
    double a_ = 1.0, beta_ = 0.0, scale_ = 0.0;
    std::vector<double> knots_, slopes_;
};

struct Agent {
    Utility utility;
    std::vector<std::string> priors;       // subset of the model's prior labels
    std::map<std::string, double> penalty; // missing labels carry penalty 0
};

/// Throws ValidationError on unknown labels, negative penalties, or min penalty != 0.
void check_agent(const ScenarioModel& model, const Agent& agent);

double agent_penalty(const Agent& agent, const std::string& label);

/// min over the agent's priors of E_P[u(X)] + c(P).
double evaluate_utility(const ScenarioModel& model, const Agent& agent, const RandomVariable& x);

struct Aggregate {
    OrliczFamily family;
    std::vector<std::vector<std::size_t>> contributors; // agent indices per prior
    std::vector<double> phi_at_one;
};

/// phi_P(x) = sup over agents i with P in their prior set of -u_i(-x) / (1 + c_i(P)).
Aggregate aggregate_family(const ScenarioModel& model, const std::vector<Agent>& agents);

struct ExtensionReport {
    int samples = 0;
    int checks = 0;
    int violations = 0;
    double max_slack = 0.0; // max of E_P[-u(-|X|/lambda)] - (1 + c(P)), normalised by 1 + c(P)
};

/// Checks E_P[-u_i(-|X| / lambda)] <= 1 + c_i(P) at lambda = ||X|| (1 + 10 tol)
/// for random X and every agent/prior pair.
ExtensionReport verify_extension_bound(const ScenarioModel& model, const std::vector<Agent>& agents,
                                       const OrliczFamily& family, int sample_size, std::uint64_t seed,
                                       double tol = 1e-10);

/// Same check for one given X.
ExtensionReport check_extension_bound(const ScenarioModel& model, const std::vector<Agent>& agents,
                                      const OrliczFamily& family, const RandomVariable& x, double tol = 1e-10);

} // namespace rorlicz
