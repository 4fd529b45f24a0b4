#include "rorlicz/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rorlicz/errors.hpp"
#include "rorlicz/extended_real.hpp"

namespace rorlicz {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const Json& field(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ValidationError(where + "." + key + ": missing field");
    return *it;
}

double as_number(const Json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ValidationError(where + ": expected a number");
}

double number(const Json& j, const std::string& key, const std::string& where) {
    return as_number(field(j, key, where), where + "." + key);
}

double number_or(const Json& j, const std::string& key, double dflt, const std::string& where) {
    if (!j.contains(key)) return dflt;
    return as_number(j.at(key), where + "." + key);
}

std::vector<double> numbers(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::size_t> counts(const Json& j, const std::string& where) {
    std::vector<std::size_t> out;
    for (double v : numbers(j, where)) {
        if (!(v >= 0.0) || v != std::floor(v) || !std::isfinite(v))
            throw ValidationError(where + ": expected nonnegative integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::string text(const Json& j, const std::string& where) {
    if (!j.is_string()) throw ValidationError(where + ": expected a string");
    return j.get<std::string>();
}

std::map<std::string, double> number_map(const Json& j, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object of label -> number");
    std::map<std::string, double> out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = as_number(it.value(), where + "." + it.key());
    return out;
}

Json number_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::vector<double> parse_number_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    std::string tok;
    auto flush = [&] {
        if (tok.empty()) return;
        if (tok == "inf" || tok == "+inf") {
            out.push_back(kInf);
        } else if (tok == "-inf") {
            out.push_back(-kInf);
        } else {
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tok.size() || std::isnan(v))
                throw ValidationError(where + ": cannot parse '" + tok + "' as a number");
            out.push_back(v);
        }
        tok.clear();
    };
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            tok += c;
    }
    flush();
    return out;
}

} // namespace

ScenarioModel LoadedModel::finest() const {
    if (finite) return *finite;
    return countable->level(countable->num_levels() - 1);
}

Json parse_json_text(const std::string& content, const std::string& source) {
    try {
        return Json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < content.size(); ++i) {
            if (content[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                              ": JSON syntax error");
    }
}

Json read_json_file(const std::string& path) { return parse_json_text(read_file(path), path); }

LoadedModel parse_model(const Json& j) {
    if (!j.is_object()) throw ValidationError("model: expected an object");
    ModelOptions opts;
    if (j.contains("mixture_closed")) {
        if (!j.at("mixture_closed").is_boolean()) throw ValidationError("model.mixture_closed: expected a boolean");
        opts.mixture_closed = j.at("mixture_closed").get<bool>();
    }
    LoadedModel out;
    if (j.contains("generator")) {
        const Json& g = j.at("generator");
        const std::string w = "model.generator";
        const std::string fam = text(field(g, "family", w), w + ".family");
        std::vector<std::size_t> pc;
        if (g.contains("prior_counts")) pc = counts(g.at("prior_counts"), w + ".prior_counts");
        if (fam == "gaussian") {
            out.countable = CountableModel::gaussian(number_or(g, "step", 1e-3, w),
                                                     numbers(field(g, "truncations", w), w + ".truncations"),
                                                     std::move(pc), opts);
        } else if (fam == "custom") {
            out.countable = CountableModel::custom(numbers(field(g, "values", w), w + ".values"),
                                                   numbers(field(g, "weights", w), w + ".weights"),
                                                   counts(field(g, "truncations", w), w + ".truncations"),
                                                   std::move(pc), opts);
        } else {
            throw ValidationError(w + ".family: unknown generator '" + fam + "' (gaussian, custom)");
        }
        return out;
    }
    const Json& atoms = field(j, "atoms", "model");
    if (!atoms.is_array()) throw ValidationError("model.atoms: expected an array");
    std::vector<std::string> names;
    for (const auto& a : atoms) names.push_back(a.is_string() ? a.get<std::string>() : a.dump());
    const Json& priors = field(j, "priors", "model");
    if (!priors.is_array()) throw ValidationError("model.priors: expected an array");
    std::vector<MeasureVector> ps;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < priors.size(); ++k) {
        const std::string w = "model.priors[" + std::to_string(k) + "]";
        ps.push_back(MeasureVector{numbers(field(priors[k], "masses", w), w + ".masses")});
        labels.push_back(priors[k].contains("label") ? text(priors[k].at("label"), w + ".label")
                                                     : "P" + std::to_string(k + 1));
    }
    out.finite = ScenarioModel(std::move(names), std::move(ps), std::move(labels), opts);
    return out;
}

LoadedModel load_model(const std::string& path) { return parse_model(read_json_file(path)); }

Json model_to_json(const ScenarioModel& model) {
    Json j;
    j["atoms"] = model.atoms();
    Json ps = Json::array();
    for (std::size_t k = 0; k < model.num_priors(); ++k) {
        Json p;
        p["label"] = model.prior_label(k);
        Json m = Json::array();
        for (double v : model.prior(k).masses) m.push_back(v);
        p["masses"] = m;
        ps.push_back(p);
    }
    j["priors"] = ps;
    j["mixture_closed"] = model.options().mixture_closed;
    return j;
}

OrliczFunction parse_phi(const Json& j, const std::string& where) {
    const std::string kind = text(field(j, "kind", where), where + ".kind");
    if (kind == "power") return OrliczFunction::power(number(j, "p", where));
    if (kind == "exponential") return OrliczFunction::exponential(number(j, "beta", where));
    if (kind == "ess_sup") return OrliczFunction::ess_sup_indicator();
    if (kind == "piecewise_linear")
        return OrliczFunction::piecewise_linear(numbers(field(j, "breakpoints", where), where + ".breakpoints"),
                                                numbers(field(j, "slopes", where), where + ".slopes"),
                                                number_or(j, "bound", kInf, where));
    if (kind == "scaled")
        return OrliczFunction::scaled(parse_phi(field(j, "inner", where), where + ".inner"),
                                      number_or(j, "theta", 1.0, where), number_or(j, "divisor", 1.0, where));
    if (kind == "max") {
        const Json& parts = field(j, "parts", where);
        if (!parts.is_array()) throw ValidationError(where + ".parts: expected an array");
        std::vector<OrliczFunction> ps;
        for (std::size_t i = 0; i < parts.size(); ++i)
            ps.push_back(parse_phi(parts[i], where + ".parts[" + std::to_string(i) + "]"));
        return OrliczFunction::maximum(std::move(ps));
    }
    throw ValidationError(where + ".kind: unknown Orlicz kind '" + kind +
                          "' (power, exponential, ess_sup, piecewise_linear, scaled, max)");
}

Json phi_to_json(const OrliczFunction& phi) {
    Json j;
    switch (phi.kind()) {
    case OrliczKind::Power:
        j["kind"] = "power";
        j["p"] = phi.exponent();
        break;
    case OrliczKind::Exponential:
        j["kind"] = "exponential";
        j["beta"] = phi.beta();
        break;
    case OrliczKind::EssSupIndicator: j["kind"] = "ess_sup"; break;
    case OrliczKind::PiecewiseLinear:
        j["kind"] = "piecewise_linear";
        j["breakpoints"] = phi.breakpoints();
        j["slopes"] = phi.slopes();
        j["bound"] = number_json(phi.domain_bound());
        break;
    case OrliczKind::Scaled:
        j["kind"] = "scaled";
        j["inner"] = phi_to_json(phi.inner());
        j["theta"] = phi.theta();
        j["divisor"] = phi.divisor();
        break;
    case OrliczKind::Max: {
        j["kind"] = "max";
        Json parts = Json::array();
        for (const auto& p : phi.parts()) parts.push_back(phi_to_json(p));
        j["parts"] = parts;
        break;
    }
    }
    return j;
}

FamilySpec parse_family(const Json& j) {
    const std::string kind = text(field(j, "kind", "family"), "family.kind");
    FamilySpec s;
    if (kind == "uniform") {
        s = FamilySpec::uniform(parse_phi(field(j, "phi", "family"), "family.phi"));
    } else if (kind == "by_label") {
        s.kind = FamilySpec::Kind::ByLabel;
        const Json& fs = field(j, "functions", "family");
        if (!fs.is_object()) throw ValidationError("family.functions: expected an object of label -> phi");
        for (auto it = fs.begin(); it != fs.end(); ++it)
            s.by_label.emplace(it.key(), parse_phi(it.value(), "family.functions." + it.key()));
        if (j.contains("default")) s.phi = parse_phi(j.at("default"), "family.default");
    } else if (kind == "parametric") {
        s.kind = FamilySpec::Kind::Parametric;
        s.phi = parse_phi(field(j, "phi", "family"), "family.phi");
        if (j.contains("theta")) s.theta = number_map(j.at("theta"), "family.theta");
        if (j.contains("gamma")) s.gamma = number_map(j.at("gamma"), "family.gamma");
        s.theta_default = number_or(j, "theta_default", 1.0, "family");
        s.gamma_default = number_or(j, "gamma_default", 0.0, "family");
    } else if (kind == "power_ladder") {
        s = FamilySpec::power_ladder(number_or(j, "start", 1.0, "family"), number_or(j, "step", 1.0, "family"));
    } else {
        throw ValidationError("family.kind: unknown family kind '" + kind +
                              "' (uniform, by_label, parametric, power_ladder)");
    }
    return s;
}

FamilySpec load_family(const std::string& path) { return parse_family(read_json_file(path)); }

Json family_to_json(const OrliczFamily& family, const ScenarioModel& model) {
    Json j;
    j["kind"] = "by_label";
    Json fs = Json::object();
    for (std::size_t k = 0; k < family.size(); ++k) fs[model.prior_label(k)] = phi_to_json(family[k]);
    j["functions"] = fs;
    return j;
}

std::vector<Agent> parse_agents(const Json& j) {
    const Json& as = field(j, "agents", "agents_file");
    if (!as.is_array()) throw ValidationError("agents_file.agents: expected an array");
    std::vector<Agent> out;
    for (std::size_t i = 0; i < as.size(); ++i) {
        const std::string w = "agents[" + std::to_string(i) + "]";
        const Json& u = field(as[i], "utility", w);
        const std::string uw = w + ".utility";
        const std::string kind = text(field(u, "kind", uw), uw + ".kind");
        std::optional<Utility> util;
        if (kind == "linear")
            util = Utility::linear(number_or(u, "a", 1.0, uw));
        else if (kind == "cara")
            util = u.contains("scale") ? Utility::cara(number(u, "beta", uw), number(u, "scale", uw))
                                       : Utility::normalised_cara(number(u, "beta", uw));
        else if (kind == "piecewise_linear")
            util = Utility::piecewise_linear(numbers(field(u, "knots", uw), uw + ".knots"),
                                             numbers(field(u, "slopes", uw), uw + ".slopes"));
        else
            throw ValidationError(uw + ".kind: unknown utility kind '" + kind + "' (linear, cara, piecewise_linear)");
        Agent a{*util, {}, {}};
        const Json& ps = field(as[i], "priors", w);
        if (!ps.is_array()) throw ValidationError(w + ".priors: expected an array of labels");
        for (std::size_t k = 0; k < ps.size(); ++k)
            a.priors.push_back(text(ps[k], w + ".priors[" + std::to_string(k) + "]"));
        if (as[i].contains("penalty")) a.penalty = number_map(as[i].at("penalty"), w + ".penalty");
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<Agent> load_agents(const std::string& path) { return parse_agents(read_json_file(path)); }

std::vector<double> parse_vector(const std::string& t) {
    if (!t.empty() && t[0] == '@') {
        const std::string path = t.substr(1);
        const std::string content = read_file(path);
        const auto first = content.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && content[first] == '[')
            return numbers(parse_json_text(content, path), path);
        return parse_number_list(content, path);
    }
    return parse_number_list(t, "vector");
}

} // namespace rorlicz
