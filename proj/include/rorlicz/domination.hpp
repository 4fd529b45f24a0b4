#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rorlicz/family.hpp"
#include "rorlicz/scenario_model.hpp"

namespace rorlicz {

struct DominationOptions {
    /// Replace the affine-minorant bound by exact operator norms (slow).
    bool exact_operator_norms = false;
    int order_pairs = 1000;
    std::uint64_t seed = 20240611;
};

struct DominationReport {
    MeasureVector pstar;
    /// Mixture weights of the priors in declaration order (sum to 1).
    std::vector<double> weights;
    std::vector<double> operator_norms;
    std::vector<std::string> prior_order;
    bool strict_positivity = false;
    bool order_collapse = false;
    int order_pairs = 0;
    int order_mismatches = 0;
    /// Set when the model declares mixture closure: P* is then a member of the prior set.
    bool member_mixture = false;
    std::string note;
};

/// P* = mu* / mu*(Omega) with mu* = sum_n 2^-n min{1, 1/||P_n||} P_n.
DominationReport dominating_measure(const ScenarioModel& model, const OrliczFamily& family,
                                    const DominationOptions& opts = {});

struct UiProfile {
    bool absolutely_continuous = true;
    std::string failure;                       // set when some prior charges a P*-null atom
    std::vector<std::vector<double>> densities; // dP/dP* per prior, 0 off the support of P*
    double max_density = 0.0;
    std::vector<std::pair<double, double>> profile; // (c, sup_P E_P*[Z_P 1{Z_P > c}])
    bool monotone = true;
};

/// Uniform-integrability profile. An empty c_grid means {0} plus every
/// distinct density value.
UiProfile uniform_integrability_report(const ScenarioModel& model, const MeasureVector& pstar,
                                       std::vector<double> c_grid = {});

} // namespace rorlicz
