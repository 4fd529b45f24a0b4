#include "rorlicz/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rorlicz {

namespace {

void write_json(std::ostringstream& os, const Json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string end_pad(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{" << nl;
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << "," << nl;
            first = false;
            os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
            write_json(os, it.value(), indent, depth + 1);
        }
        os << nl << end_pad << "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        bool scalars = true;
        for (const auto& e : j) scalars = scalars && !e.is_structured();
        if (scalars) {
            os << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ", ";
                write_json(os, j[i], indent, depth + 1);
            }
            os << "]";
            return;
        }
        os << "[" << nl;
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) os << "," << nl;
            os << pad;
            write_json(os, j[i], indent, depth + 1);
        }
        os << nl << end_pad << "]";
        return;
    }
    case Json::value_t::number_float: {
        const double v = j.get<double>();
        if (std::isfinite(v))
            os << format_number(v);
        else
            os << Json(format_number(v)).dump();
        return;
    }
    default: os << j.dump(); return;
    }
}

std::string scalar_text(const Json& j) {
    if (j.is_number_float()) return format_number(j.get<double>());
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

void write_text(std::ostringstream& os, const Json& j, const std::string& path) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            write_text(os, it.value(), path.empty() ? it.key() : path + "." + it.key());
        return;
    }
    if (j.is_array()) {
        bool scalars = true;
        for (const auto& e : j) scalars = scalars && !e.is_structured();
        if (scalars) {
            os << path << ":";
            for (std::size_t i = 0; i < j.size(); ++i) os << (i ? ", " : " ") << scalar_text(j[i]);
            os << "\n";
            return;
        }
        for (std::size_t i = 0; i < j.size(); ++i) write_text(os, j[i], path + "[" + std::to_string(i) + "]");
        return;
    }
    os << path << ": " << scalar_text(j) << "\n";
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string bool_text(bool b) { return b ? "true" : "false"; }

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string dump_json(const Json& j, int indent) {
    std::ostringstream os;
    write_json(os, j, indent, 0);
    os << "\n";
    return os.str();
}

std::string dump_text(const Json& j) {
    std::ostringstream os;
    write_text(os, j, "");
    return os.str();
}

std::string dump_csv(const CsvTable& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
    return os.str();
}

Json vector_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

Json labelled_measure_json(const MeasureVector& m, const std::vector<std::string>& atoms) {
    Json j = Json::object();
    for (std::size_t i = 0; i < m.size(); ++i) j[atoms[i]] = m[i];
    return j;
}

Json to_json(const NormResult& r, const ScenarioModel& model) {
    Json j;
    j["norm"] = r.value;
    j["lambda_lo"] = r.lambda_lo;
    j["lambda_hi"] = r.lambda_hi;
    j["modular_at_value"] = r.modular_at_value;
    j["iterations"] = r.iterations;
    Json per = Json::object();
    for (std::size_t k = 0; k < r.per_prior_norms.size(); ++k) per[model.prior_label(k)] = r.per_prior_norms[k];
    j["per_prior_norms"] = per;
    j["argmax_prior"] = model.prior_label(r.argmax_prior);
    return j;
}

Json to_json(const KotheResult& r) {
    Json j;
    j["dual_norm"] = r.value;
    j["conjugate_route"] = r.conjugate_route;
    j["brute_force"] = opt_json(r.brute_force);
    j["rel_discrepancy"] = r.rel_discrepancy;
    return j;
}

Json to_json(const DualWitness& w, const ScenarioModel& model) {
    Json j;
    j["norm"] = w.norm;
    j["prior"] = model.prior_label(w.prior);
    j["measure"] = labelled_measure_json(w.measure, model.atoms());
    j["dual_norm"] = w.dual_norm;
    j["pairing"] = w.pairing;
    j["gap"] = w.gap;
    j["probability"] = labelled_measure_json(w.probability, model.atoms());
    j["theta"] = w.theta;
    return j;
}

Json to_json(const L1Report& r) {
    Json j;
    j["applicable"] = r.applicable;
    if (!r.applicable) {
        j["reason"] = r.reason;
        return j;
    }
    j["samples"] = r.samples;
    j["pool_size"] = r.pool_size;
    j["max_rel_gap"] = r.max_rel_gap;
    j["kappa"] = r.kappa;
    j["kappa_violations"] = r.kappa_violations;
    j["holder_violations"] = r.holder_violations;
    j["alpha"] = r.alpha;
    j["max_witness_mass"] = r.max_witness_mass;
    j["mass_bound_holds"] = r.mass_bound_holds;
    return j;
}

Json to_json(const DominationReport& r, const ScenarioModel& model) {
    Json j;
    j["pstar"] = labelled_measure_json(r.pstar, model.atoms());
    Json w = Json::object(), on = Json::object();
    for (std::size_t k = 0; k < r.weights.size(); ++k) {
        w[r.prior_order[k]] = r.weights[k];
        on[r.prior_order[k]] = r.operator_norms[k];
    }
    j["weights"] = w;
    j["operator_norm_bounds"] = on;
    j["prior_order"] = r.prior_order;
    j["strict_positivity"] = r.strict_positivity;
    j["order_collapse"] = r.order_collapse;
    j["order_pairs"] = r.order_pairs;
    j["order_mismatches"] = r.order_mismatches;
    j["member_mixture"] = r.member_mixture;
    j["note"] = r.note;
    return j;
}

Json to_json(const UiProfile& r, const ScenarioModel& model) {
    Json j;
    j["absolutely_continuous"] = r.absolutely_continuous;
    if (!r.absolutely_continuous) {
        j["failure"] = r.failure;
        return j;
    }
    Json d = Json::object();
    for (std::size_t k = 0; k < r.densities.size(); ++k) d[model.prior_label(k)] = vector_json(r.densities[k]);
    j["densities"] = d;
    j["max_density"] = r.max_density;
    Json p = Json::array();
    for (const auto& [c, v] : r.profile) p.push_back(Json{{"c", c}, {"value", v}});
    j["profile"] = p;
    j["monotone"] = r.monotone;
    return j;
}

Json to_json(const TailProfile& r) {
    Json j;
    j["verdict"] = to_string(r.verdict);
    j["levels"] = vector_json(r.levels);
    j["tail_norms"] = vector_json(r.tail_norms);
    Json u = Json::array();
    for (bool b : r.unstable) u.push_back(b);
    j["unstable"] = u;
    j["stabilised_atoms"] = r.stabilised_atoms;
    j["finest_atoms"] = r.finest_atoms;
    j["slope"] = r.slope_defined ? Json(r.slope) : Json(nullptr);
    return j;
}

Json to_json(const MomentReport& r) {
    Json j;
    j["bound"] = r.bound;
    j["step"] = r.step;
    j["n"] = r.n;
    j["moment"] = vector_json(r.moment);
    j["root"] = vector_json(r.root);
    j["oracle_moment"] = vector_json(r.oracle_moment);
    j["oracle_root"] = vector_json(r.oracle_root);
    j["rel_dev"] = vector_json(r.rel_dev);
    Json b = Json::array();
    for (bool x : r.truncation_bites) b.push_back(x);
    j["truncation_bites"] = b;
    j["nondecreasing"] = r.nondecreasing;
    j["hard_flag"] = r.hard_flag;
    return j;
}

Json to_json(const MembershipReport& r) {
    Json j;
    j["verdict"] = to_string(r.verdict);
    j["level_norms"] = vector_json(r.level_norms);
    Json a = Json::array();
    for (const auto& e : r.alpha_exponent) a.push_back(e ? Json(*e) : Json(nullptr));
    j["alpha_exponent"] = a;
    j["frak_l"] = r.frak_l;
    j["evidence"] = r.evidence;
    return j;
}

Json to_json(const MixtureWitness& r) {
    Json j;
    j["status"] = to_string(r.status);
    j["qualifiers"] = r.labels;
    j["test_function"] = r.test_function;
    j["theta_q"] = r.theta_q;
    j["alpha"] = r.alpha;
    Json lm = Json::array();
    for (const auto& v : r.level_modular) lm.push_back(opt_json(v));
    j["level_modular"] = lm;
    j["finest_modular"] = r.finest_modular;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json to_json(const OptionBasis& b) {
    Json j;
    j["strikes"] = vector_json(b.strikes);
    j["levels"] = vector_json(b.levels);
    j["dimension"] = b.dimension;
    return j;
}

Json to_json(const Projection& p) {
    Json j;
    j["coefficients"] = vector_json(p.coefficients);
    j["level_values"] = vector_json(p.level_values);
    j["residual_norm"] = p.residual_norm;
    j["stationary"] = p.stationary;
    j["max_coordinate_improvement"] = p.max_coordinate_improvement;
    j["restart_residuals"] = vector_json(p.restart_residuals);
    j["restart_spread"] = p.restart_spread;
    return j;
}

Json to_json(const SpanningReport& r) {
    Json j;
    j["span_dimension"] = r.span_dimension;
    j["canonical_dimension"] = r.canonical_dimension;
    j["generates_field"] = r.generates_field;
    j["samples"] = r.samples;
    j["max_residual"] = r.max_residual;
    j["lattice_closed"] = r.lattice_closed;
    j["ideal_proxy"] = r.ideal_proxy;
    j["pstar_on_levels"] = vector_json(r.pstar_on_levels);
    j["note"] = r.note;
    return j;
}

Json to_json(const ExtensionReport& r) {
    Json j;
    j["samples"] = r.samples;
    j["checks"] = r.checks;
    j["violations"] = r.violations;
    j["max_slack"] = r.max_slack;
    return j;
}

CsvTable tail_csv(const TailProfile& r) {
    CsvTable t{{"level", "tail_norm", "unstable", "stabilised_atoms"}, {}};
    for (std::size_t i = 0; i < r.levels.size(); ++i)
        t.rows.push_back({format_number(r.levels[i]), format_number(r.tail_norms[i]), bool_text(r.unstable[i]),
                          std::to_string(r.stabilised_atoms[i])});
    return t;
}

CsvTable moment_csv(const MomentReport& r) {
    CsvTable t{{"n", "moment", "root", "oracle_moment", "oracle_root", "rel_dev", "truncation_bites"}, {}};
    for (std::size_t i = 0; i < r.n.size(); ++i)
        t.rows.push_back({std::to_string(r.n[i]), format_number(r.moment[i]), format_number(r.root[i]),
                          format_number(r.oracle_moment[i]), format_number(r.oracle_root[i]),
                          format_number(r.rel_dev[i]), bool_text(r.truncation_bites[i])});
    return t;
}

CsvTable ui_csv(const UiProfile& r) {
    CsvTable t{{"c", "value"}, {}};
    for (const auto& [c, v] : r.profile) t.rows.push_back({format_number(c), format_number(v)});
    return t;
}

CsvTable membership_csv(const MembershipReport& r) {
    CsvTable t{{"truncation", "robust_norm"}, {}};
    for (std::size_t i = 0; i < r.level_norms.size(); ++i)
        t.rows.push_back({std::to_string(i), format_number(r.level_norms[i])});
    return t;
}

} // namespace rorlicz
