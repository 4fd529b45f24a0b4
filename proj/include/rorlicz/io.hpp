#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rorlicz/countable_model.hpp"
#include "rorlicz/family.hpp"
#include "rorlicz/orlicz_function.hpp"
#include "rorlicz/preference_aggregation.hpp"
#include "rorlicz/scenario_model.hpp"

namespace rorlicz {

using Json = nlohmann::ordered_json;

/// A model file holds either a finite model or a truncation ladder.
struct LoadedModel {
    std::optional<ScenarioModel> finite;
    std::optional<CountableModel> countable;

    bool is_countable() const { return countable.has_value(); }
    /// The finite model itself, or the finest truncation of a ladder.
    ScenarioModel finest() const;
};

/// Parses a file; syntax errors become ValidationError "path:line:col: ...".
Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text, const std::string& source);

/*
 * Model schema:
 *   {"atoms": [...], "priors": [{"label": "P1", "masses": [...]}, ...], "mixture_closed": false}
 * Countable models replace atoms/priors by a generator:
 *   {"generator": {"family": "gaussian", "step": 0.001, "truncations": [5, 10], "prior_counts": [1, 2]}}
 *   {"generator": {"family": "custom", "values": [...], "weights": [...], "truncations": [2, 4]}}
 * Gaussian truncations are bounds T; custom truncations are atom counts.
 */
LoadedModel parse_model(const Json& j);
LoadedModel load_model(const std::string& path);
Json model_to_json(const ScenarioModel& model);

/*
 * Orlicz function schema, discriminated by "kind":
 *   power {p}, exponential {beta}, ess_sup {}, piecewise_linear {breakpoints, slopes, bound?},
 *   scaled {inner, theta, divisor}, max {parts}
 */
OrliczFunction parse_phi(const Json& j, const std::string& where = "phi");
Json phi_to_json(const OrliczFunction& phi);

/*
 * Family schema, discriminated by "kind":
 *   uniform {phi}
 *   by_label {functions: {label: phi}, default?: phi}
 *   parametric {phi, theta?: {label: v}, gamma?: {label: v}, theta_default?, gamma_default?}
 *   power_ladder {start?, step?}
 */
FamilySpec parse_family(const Json& j);
FamilySpec load_family(const std::string& path);
Json family_to_json(const OrliczFamily& family, const ScenarioModel& model);

/*
 * Agents schema:
 *   {"agents": [{"utility": U, "priors": [labels], "penalty": {label: value}}]}
 *   U = {"kind": "linear", "a"} | {"kind": "cara", "beta", "scale"?} |
 *       {"kind": "piecewise_linear", "knots", "slopes"}
 * A CARA utility without scale gets the normalising scale 1 / (e^beta - 1).
 */
std::vector<Agent> parse_agents(const Json& j);
std::vector<Agent> load_agents(const std::string& path);

/// "1,3,inf" or "@path" (file with comma/whitespace separated numbers or a JSON array).
std::vector<double> parse_vector(const std::string& text);

} // namespace rorlicz
