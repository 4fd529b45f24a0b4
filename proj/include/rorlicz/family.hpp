#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rorlicz/orlicz_function.hpp"
#include "rorlicz/scenario_model.hpp"

namespace rorlicz {

/// Joint function with multiplicative penalty theta and additive penalty gamma:
/// phi_P(x) = phi(theta(P) x) / (1 + gamma(P)).
struct ParametricForm {
    OrliczFunction phi;
    std::vector<double> theta;
    std::vector<double> gamma;
};

/// One Orlicz function per prior, in the model's prior order.
class OrliczFamily {
public:
    explicit OrliczFamily(std::vector<OrliczFunction> per_prior);

    static OrliczFamily uniform(const OrliczFunction& phi, std::size_t num_priors);
    static OrliczFamily parametric(const OrliczFunction& phi, std::vector<double> theta,
                                   std::vector<double> gamma);

    std::size_t size() const { return functions_.size(); }
    const OrliczFunction& operator[](std::size_t k) const { return functions_[k]; }
    const std::vector<OrliczFunction>& functions() const { return functions_; }
    const std::optional<ParametricForm>& parametric_form() const { return parametric_; }

    /// Pointwise supremum over the priors.
    OrliczFunction phi_max() const;

    /// sup theta for parametric families, 1 otherwise.
    double theta_sup() const;

    /// Throws ValidationError unless the family has one entry per model prior.
    void check_model(const ScenarioModel& model) const;

private:
    std::vector<OrliczFunction> functions_;
    std::optional<ParametricForm> parametric_;
};

/// Label-keyed family description, resolved against a concrete model. This is
/// what the JSON family files describe; on truncation ladders the same spec is
/// resolved once per level.
struct FamilySpec {
    enum class Kind { Uniform, ByLabel, Parametric, PowerLadder };

    Kind kind = Kind::Uniform;
    std::optional<OrliczFunction> phi;               // uniform, joint, or ByLabel fallback
    std::map<std::string, OrliczFunction> by_label;  // ByLabel
    std::map<std::string, double> theta;             // Parametric
    std::map<std::string, double> gamma;             // Parametric
    double theta_default = 1.0;
    double gamma_default = 0.0;
    double ladder_start = 1.0;                       // PowerLadder: prior k gets Power(start + k * step)
    double ladder_step = 1.0;

    static FamilySpec uniform(const OrliczFunction& phi);
    static FamilySpec power_ladder(double start = 1.0, double step = 1.0);

    /// With strict = true, labels that name no model prior are an error.
    OrliczFamily resolve(const ScenarioModel& model, bool strict = true) const;
};

} // namespace rorlicz
