#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rorlicz/scenario_model.hpp"

namespace rorlicz {

/**
 * A countable sample space seen through a ladder of finite truncations.
 *
 * Atoms are listed in generator order; level l keeps the first
 * truncations[l] atoms (weights renormalised to a probability) and the first
 * prior_counts[l] priors. All priors of a level coincide with the renormalised
 * atom weights and are labelled P1, P2, ...; they differ only through the
 * Orlicz function the family assigns to them.
 */
class CountableModel {
public:
    static CountableModel custom(std::vector<double> values, std::vector<double> weights,
                                 std::vector<std::size_t> truncations, std::vector<std::size_t> prior_counts,
                                 ModelOptions options = {});

    /// Midpoint discretisation of N(0, 1) with step h; level l covers [-bounds[l], bounds[l]].
    /// Atoms alternate +(j + 1/2) h, -(j + 1/2) h.
    static CountableModel gaussian(double h, const std::vector<double>& bounds,
                                   std::vector<std::size_t> prior_counts, ModelOptions options = {});

    std::size_t num_levels() const { return truncations_.size(); }
    std::size_t atoms_at(std::size_t level) const { return truncations_.at(level); }
    std::size_t priors_at(std::size_t level) const { return prior_counts_.at(level); }
    const std::vector<double>& values() const { return values_; }
    const std::string& family() const { return family_; }
    double step() const { return step_; }
    const std::vector<double>& bounds() const { return bounds_; }
    const ModelOptions& options() const { return options_; }

    ScenarioModel level(std::size_t l) const;

    /// The coordinate variable U(w) = value(w) at level l.
    RandomVariable identity(std::size_t l) const;

    /// First atoms_at(l) entries of a variable given on all generated atoms.
    RandomVariable restrict(const std::vector<double>& full, std::size_t l) const;

private:
    std::string family_;
    std::vector<double> values_;
    std::vector<double> weights_;
    std::vector<std::size_t> truncations_;
    std::vector<std::size_t> prior_counts_;
    std::vector<double> bounds_;
    double step_ = 0.0;
    ModelOptions options_;
};

/// Single-prior discretised standard normal on [-T, T] with step h.
ScenarioModel gaussian_model(double T, double h);

} // namespace rorlicz
