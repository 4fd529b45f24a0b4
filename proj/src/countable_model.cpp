#include "rorlicz/countable_model.hpp"

#include <cmath>
#include <numbers>

#include "rorlicz/errors.hpp"
#include "rorlicz/extended_real.hpp"

namespace rorlicz {

CountableModel CountableModel::custom(std::vector<double> values, std::vector<double> weights,
                                      std::vector<std::size_t> truncations, std::vector<std::size_t> prior_counts,
                                      ModelOptions options) {
    if (values.size() != weights.size()) throw ValidationError("generator values and weights differ in length");
    if (truncations.empty()) throw ValidationError("generator needs at least one truncation level");
    if (prior_counts.empty()) prior_counts.assign(truncations.size(), 1);
    if (prior_counts.size() != truncations.size())
        throw ValidationError("prior_counts must have one entry per truncation level");
    for (std::size_t l = 0; l < truncations.size(); ++l) {
        if (truncations[l] == 0 || truncations[l] > values.size())
            throw ValidationError("truncation " + std::to_string(truncations[l]) + " outside 1.." +
                                  std::to_string(values.size()));
        if (l > 0 && truncations[l] <= truncations[l - 1])
            throw ValidationError("truncations must be strictly ascending");
        if (prior_counts[l] == 0) throw ValidationError("every level needs at least one prior");
        if (l > 0 && prior_counts[l] < prior_counts[l - 1])
            throw ValidationError("prior_counts must be nondecreasing");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw ValidationError("generator values must be finite");
        if (!std::isfinite(weights[i]) || weights[i] < 0.0)
            throw ValidationError("generator weights must be finite and >= 0");
    }
    CountableModel m;
    m.family_ = "custom";
    m.values_ = std::move(values);
    m.weights_ = std::move(weights);
    m.truncations_ = std::move(truncations);
    m.prior_counts_ = std::move(prior_counts);
    m.options_ = options;
    for (std::size_t l = 0; l < m.truncations_.size(); ++l) {
        CompensatedSum s;
        for (std::size_t i = 0; i < m.truncations_[l]; ++i) s.add(m.weights_[i]);
        if (!(s.value() > 0.0)) throw ValidationError("truncation level carries no mass");
    }
    return m;
}

CountableModel CountableModel::gaussian(double h, const std::vector<double>& bounds,
                                        std::vector<std::size_t> prior_counts, ModelOptions options) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("gaussian generator needs a step h > 0");
    if (bounds.empty()) throw ValidationError("gaussian generator needs at least one bound");
    std::vector<std::size_t> counts;
    for (double T : bounds) {
        if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("gaussian bounds must be finite and > 0");
        const auto half = static_cast<std::size_t>(std::llround(T / h));
        if (half == 0) throw ValidationError("gaussian bound smaller than the step");
        counts.push_back(2 * half);
    }
    const std::size_t n = counts.back();
    std::vector<double> values(n), weights(n);
    const double c = h / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double u = (static_cast<double>(j) + 0.5) * h;
        const double w = c * std::exp(-0.5 * u * u);
        values[2 * j] = u;
        values[2 * j + 1] = -u;
        weights[2 * j] = w;
        weights[2 * j + 1] = w;
    }
    CountableModel m = custom(std::move(values), std::move(weights), std::move(counts), std::move(prior_counts),
                              options);
    m.family_ = "gaussian";
    m.step_ = h;
    m.bounds_ = bounds;
    return m;
}

ScenarioModel CountableModel::level(std::size_t l) const {
    const std::size_t n = truncations_.at(l);
    std::vector<std::string> atoms(n);
    for (std::size_t i = 0; i < n; ++i) atoms[i] = "w" + std::to_string(i + 1);
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(weights_[i]);
    const double total = s.value();
    MeasureVector p{std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) p.masses[i] = weights_[i] / total;
    std::vector<MeasureVector> priors(prior_counts_[l], p);
    ScenarioModel model(std::move(atoms), std::move(priors), {}, options_);
    model.set_atom_values(std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)));
    return model;
}

RandomVariable CountableModel::identity(std::size_t l) const {
    const std::size_t n = truncations_.at(l);
    return RandomVariable{std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n))};
}

RandomVariable CountableModel::restrict(const std::vector<double>& full, std::size_t l) const {
    const std::size_t n = truncations_.at(l);
    if (full.size() < n) throw ValidationError("random variable shorter than truncation level");
    return RandomVariable{std::vector<double>(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n))};
}

ScenarioModel gaussian_model(double T, double h) {
    return CountableModel::gaussian(h, {T}, {1}).level(0);
}

} // namespace rorlicz
