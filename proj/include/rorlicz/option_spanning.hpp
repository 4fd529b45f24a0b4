#pragma once

#include <cstdint>
#include <vector>

#include "rorlicz/family.hpp"
#include "rorlicz/norm_engine.hpp"
#include "rorlicz/scenario_model.hpp"

namespace rorlicz {

/// Basis {1_Omega} u {(X - k)^+ : k in strikes} of the option span of X >= 0.
/// The canonical strikes are the distinct support values of X except the
/// largest; extra strikes may be appended and are redundant by construction.
struct OptionBasis {
    RandomVariable claim;
    std::vector<double> strikes;
    std::vector<RandomVariable> vectors; // canonical; vectors[0] = 1_Omega
    std::vector<double> levels;          // distinct support values of X, ascending
    std::size_t dimension = 0;           // = levels.size()
};

OptionBasis option_basis(const ScenarioModel& model, const RandomVariable& x,
                         const std::vector<double>& extra_strikes = {});

struct ProjectOptions {
    double tol = 1e-10;
    int restarts = 8;
    int max_sweeps = 500;
    std::uint64_t seed = 20240611;
    NormOptions norm{1e-12, 200, false};
};

struct Projection {
    std::vector<double> coefficients;   // one per basis vector
    std::vector<double> level_values;   // approximant on each level set of X
    RandomVariable approximant;
    double residual_norm = 0.0;
    bool stationary = false;            // every coordinate line search improves by < tol
    double max_coordinate_improvement = 0.0;
    std::vector<double> restart_residuals;
    double restart_spread = 0.0;
};

/// min over the span of ||Y - sum a_i B_i||. Works in level-set coordinates
/// (value of the approximant on each {X = v}), which parameterise the same span.
Projection project_onto_span(const ScenarioModel& model, const RandomVariable& y, const OptionBasis& basis,
                             const OrliczFamily& family, const ProjectOptions& opts = {});

/// Coefficients of the basis for the function taking value m_k on {X = levels[k]}.
std::vector<double> level_values_to_coefficients(const OptionBasis& basis, const std::vector<double>& m);

/// sum_i a_i B_i.
RandomVariable span_element(const OptionBasis& basis, const std::vector<double>& coefficients);

struct SpanningReport {
    std::size_t span_dimension = 0;
    std::size_t canonical_dimension = 0; // non-polar atoms
    bool generates_field = false;        // F = sigma(X) on the support
    int samples = 0;
    double max_residual = 0.0;
    bool lattice_closed = true;          // min/max of span elements stay in the span
    bool ideal_proxy = true;             // |Y| <= span element implies Y in span
    std::vector<double> pstar_on_levels; // P*({X = v}) per level
    std::string note;
};

SpanningReport spanning_report(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family,
                               int sample_size = 20, std::uint64_t seed = 20240611,
                               const ProjectOptions& opts = {});

} // namespace rorlicz
