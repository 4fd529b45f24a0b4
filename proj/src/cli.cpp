#include "rorlicz/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <optional>

#include "rorlicz/closure_diagnostics.hpp"
#include "rorlicz/domination.hpp"
#include "rorlicz/duality.hpp"
#include "rorlicz/errors.hpp"
#include "rorlicz/io.hpp"
#include "rorlicz/norm_engine.hpp"
#include "rorlicz/option_spanning.hpp"
#include "rorlicz/preference_aggregation.hpp"
#include "rorlicz/report.hpp"

namespace rorlicz::cli {

namespace {

struct Config {
    std::string model, family, agents, x, y, mu, prior, gamma, c_grid, levels, strikes;
    double lambda = 1.0;
    double tol = 1e-10;
    int max_iter = 200;
    std::uint64_t seed = 20240611;
    std::string format = "text";
    std::string out;
    int samples = -1;
    int n_max = 20;
    double bound = 10.0;
    double step = 1e-3;
    bool exact = false;
};

struct Output {
    Json json;
    std::optional<CsvTable> csv;
    std::string text; // overrides the flattened JSON in text mode when set
    int exit = kExitOk;
};

NormOptions norm_options(const Config& c) {
    NormOptions o;
    o.tol = c.tol;
    o.max_iter = c.max_iter;
    return o;
}

LoadedModel need_model(const Config& c) {
    if (c.model.empty()) throw ValidationError("--model is required");
    return load_model(c.model);
}

ScenarioModel finite_model(const Config& c) { return need_model(c).finest(); }

OrliczFamily need_family(const Config& c, const ScenarioModel& m) {
    if (c.family.empty()) throw ValidationError("--family is required");
    return load_family(c.family).resolve(m);
}

OrliczFamily family_or_default(const Config& c, const ScenarioModel& m) {
    if (c.family.empty()) return OrliczFamily::uniform(OrliczFunction::power(1.0), m.num_priors());
    return load_family(c.family).resolve(m);
}

RandomVariable vector_for(const std::string& spec, const std::string& flag, const ScenarioModel& m) {
    if (spec.empty()) throw ValidationError(flag + " is required");
    auto v = parse_vector(spec);
    if (v.size() != m.num_atoms())
        throw ValidationError(flag + " has " + std::to_string(v.size()) + " entries; the model has " +
                              std::to_string(m.num_atoms()) + " atoms");
    return RandomVariable{std::move(v)};
}

// On ladders X defaults to the coordinate variable and is given on the finest level.
std::vector<double> ladder_vector(const Config& c, const CountableModel& ladder) {
    const std::size_t n = ladder.atoms_at(ladder.num_levels() - 1);
    if (c.x.empty()) return std::vector<double>(ladder.values().begin(), ladder.values().begin() + n);
    auto v = parse_vector(c.x);
    if (v.size() != n)
        throw ValidationError("--x has " + std::to_string(v.size()) + " entries; the finest truncation has " +
                              std::to_string(n) + " atoms");
    return v;
}

std::size_t prior_of(const ScenarioModel& m, const std::string& label) {
    if (label.empty()) return 0;
    const auto k = m.prior_index(label);
    if (!k) throw ValidationError("--prior '" + label + "' names no model prior");
    return *k;
}

Json ladder_json(const CountableModel& l) {
    Json j;
    j["generator"] = l.family();
    Json a = Json::array(), p = Json::array();
    for (std::size_t i = 0; i < l.num_levels(); ++i) {
        a.push_back(l.atoms_at(i));
        p.push_back(l.priors_at(i));
    }
    j["truncation_atoms"] = a;
    j["prior_counts"] = p;
    return j;
}

Output cmd_validate(const Config& c) {
    Json checks = Json::array();
    bool ok = true;
    auto check = [&](const std::string& name, const std::function<void()>& f) {
        Json e;
        e["check"] = name;
        try {
            f();
            e["status"] = "pass";
        } catch (const Error& ex) {
            e["status"] = "fail";
            e["detail"] = ex.what();
            ok = false;
        }
        checks.push_back(e);
        return e["status"] == "pass";
    };
    std::optional<Json> mj, fj;
    std::optional<LoadedModel> model;
    std::optional<FamilySpec> spec;
    if (c.model.empty()) throw ValidationError("--model is required");
    if (check("model.syntax", [&] { mj = read_json_file(c.model); }))
        check("model.invariants", [&] { model = parse_model(*mj); });
    if (!c.family.empty()) {
        if (check("family.syntax", [&] { fj = read_json_file(c.family); }))
            check("family.orlicz_axioms", [&] { spec = parse_family(*fj); });
        if (model && spec) check("family.labels", [&] { spec->resolve(model->finest()); });
    }
    Output o;
    o.json["valid"] = ok;
    o.json["checks"] = checks;
    std::string t;
    for (const auto& e : checks) {
        t += (e["status"] == "pass" ? "PASS " : "FAIL ") + e["check"].get<std::string>();
        if (e.contains("detail")) t += ": " + e["detail"].get<std::string>();
        t += "\n";
    }
    o.text = t;
    if (!ok) o.exit = kExitValidation;
    return o;
}

Output cmd_norm(const Config& c) {
    const auto m = finite_model(c);
    const auto f = need_family(c, m);
    return {to_json(luxemburg_norm(m, vector_for(c.x, "--x", m), f, norm_options(c)), m), {}, {}};
}

Output cmd_modular(const Config& c) {
    const auto m = finite_model(c);
    const auto f = need_family(c, m);
    if (!(c.lambda > 0.0)) throw ValidationError("--lambda must be > 0");
    const RandomVariable x = canonicalize(m, vector_for(c.x, "--x", m));
    const ModularEvaluator ev(m, f, x);
    Output o;
    o.json["lambda"] = c.lambda;
    o.json["modular"] = ev.modular_direct(c.lambda);
    Json per = Json::object();
    for (std::size_t k = 0; k < m.num_priors(); ++k) per[m.prior_label(k)] = ev.prior_modular_direct(k, c.lambda);
    o.json["per_prior"] = per;
    return o;
}

Output cmd_risk(const Config& c) {
    const auto m = finite_model(c);
    std::vector<double> gamma(m.num_priors(), 0.0);
    if (!c.gamma.empty()) {
        gamma = parse_vector(c.gamma);
        if (gamma.size() != m.num_priors()) throw ValidationError("--gamma needs one entry per prior");
    }
    const auto x = vector_for(c.x, "--x", m);
    Output o;
    o.json["risk"] = risk_measure(m, x, gamma);
    if (!c.family.empty()) {
        const auto spec = load_family(c.family);
        if (!spec.phi) throw ValidationError("norm via the risk measure needs a family with a joint phi");
        o.json["norm_via_risk"] = norm_via_risk_measure(m, abs(x), *spec.phi, gamma, norm_options(c)).value;
    }
    return o;
}

Output cmd_dual_norm(const Config& c) {
    const auto m = finite_model(c);
    const auto f = need_family(c, m);
    const std::size_t k = prior_of(m, c.prior);
    const auto mu = vector_for(c.mu, "--mu", m);
    KotheOptions ko;
    ko.tol = c.tol;
    ko.seed = c.seed;
    Output o;
    o.json["prior"] = m.prior_label(k);
    o.json.update(to_json(kothe_dual_norm(MeasureVector{mu.values}, m.prior(k), f[k], ko)));
    return o;
}

Output cmd_dual_witness(const Config& c) {
    const auto m = finite_model(c);
    const auto f = need_family(c, m);
    return {to_json(dual_witness(m, vector_for(c.x, "--x", m), f, norm_options(c)), m), {}, {}};
}

Output cmd_verify_l1(const Config& c) {
    const auto m = finite_model(c);
    const auto f = need_family(c, m);
    return {to_json(verify_l1_reduction(m, f, c.samples < 0 ? 100 : c.samples, c.seed, norm_options(c))), {}, {}};
}

Output cmd_dominate(const Config& c) {
    const auto m = finite_model(c);
    const auto f = family_or_default(c, m);
    DominationOptions d;
    d.exact_operator_norms = c.exact;
    d.seed = c.seed;
    return {to_json(dominating_measure(m, f, d), m), {}, {}};
}

Output cmd_ui_profile(const Config& c) {
    const auto m = finite_model(c);
    const auto f = family_or_default(c, m);
    DominationOptions d;
    d.seed = c.seed;
    d.order_pairs = 0;
    const auto dom = dominating_measure(m, f, d);
    std::vector<double> grid;
    if (!c.c_grid.empty()) grid = parse_vector(c.c_grid);
    const auto ui = uniform_integrability_report(m, dom.pstar, grid);
    Output o;
    o.json["pstar"] = labelled_measure_json(dom.pstar, m.atoms());
    o.json.update(to_json(ui, m));
    if (ui.absolutely_continuous) o.csv = ui_csv(ui);
    return o;
}

Output cmd_membership(const Config& c) {
    const auto lm = need_model(c);
    Output o;
    if (lm.is_countable()) {
        const auto spec = load_family(c.family.empty() ? throw ValidationError("--family is required") : c.family);
        const auto r = membership_classify(*lm.countable, ladder_vector(c, *lm.countable), spec, norm_options(c));
        o.json = to_json(r);
        o.json["ladder"] = ladder_json(*lm.countable);
        o.csv = membership_csv(r);
    } else {
        const auto& m = *lm.finite;
        const auto r = membership_classify(m, vector_for(c.x, "--x", m), need_family(c, m), norm_options(c));
        o.json = to_json(r);
        o.csv = membership_csv(r);
    }
    return o;
}

Output cmd_tails(const Config& c) {
    const auto lm = need_model(c);
    const auto levels = c.levels.empty() ? default_tail_levels() : parse_vector(c.levels);
    TailOptions to;
    to.norm = norm_options(c);
    to.norm.cross_check = false;
    Output o;
    TailProfile tp;
    if (lm.is_countable()) {
        if (c.family.empty()) throw ValidationError("--family is required");
        tp = tail_membership(*lm.countable, ladder_vector(c, *lm.countable), load_family(c.family), levels, to);
    } else {
        const auto& m = *lm.finite;
        tp = tail_membership(m, vector_for(c.x, "--x", m), need_family(c, m), levels, to);
    }
    o.json = to_json(tp);
    o.csv = tail_csv(tp);
    return o;
}

Output cmd_moments(const Config& c) {
    const auto r = moment_growth(c.bound, c.step, c.n_max);
    return {to_json(r), moment_csv(r), {}};
}

Output cmd_mixture_witness(const Config& c) {
    const auto lm = need_model(c);
    if (lm.is_countable()) {
        if (c.family.empty()) throw ValidationError("--family is required");
        auto j = to_json(mixture_witness(*lm.countable, ladder_vector(c, *lm.countable), load_family(c.family)));
        j["ladder"] = ladder_json(*lm.countable);
        return {j, {}, {}};
    }
    const auto& m = *lm.finite;
    return {to_json(mixture_witness(m, vector_for(c.x, "--x", m), need_family(c, m))), {}, {}};
}

ProjectOptions project_options(const Config& c) {
    ProjectOptions po;
    po.tol = c.tol;
    po.seed = c.seed;
    po.norm.max_iter = c.max_iter;
    return po;
}

Output cmd_span(const Config& c) {
    const auto m = finite_model(c);
    const auto f = family_or_default(c, m);
    const auto x = vector_for(c.x, "--x", m);
    Output o;
    o.json["basis"] = to_json(option_basis(m, x));
    o.json["report"] = to_json(spanning_report(m, x, f, c.samples < 0 ? 20 : c.samples, c.seed, project_options(c)));
    return o;
}

Output cmd_project(const Config& c) {
    const auto m = finite_model(c);
    const auto f = family_or_default(c, m);
    std::vector<double> extra;
    if (!c.strikes.empty()) extra = parse_vector(c.strikes);
    const auto b = option_basis(m, vector_for(c.x, "--x", m), extra);
    Output o;
    o.json["basis"] = to_json(b);
    o.json["projection"] = to_json(project_onto_span(m, vector_for(c.y, "--y", m), b, f, project_options(c)));
    return o;
}

Output cmd_aggregate(const Config& c) {
    const auto m = finite_model(c);
    if (c.agents.empty()) throw ValidationError("--agents is required");
    const auto agents = load_agents(c.agents);
    const auto agg = aggregate_family(m, agents);
    Output o;
    o.json["family"] = family_to_json(agg.family, m);
    Json at = Json::object();
    for (std::size_t k = 0; k < m.num_priors(); ++k) at[m.prior_label(k)] = agg.phi_at_one[k];
    o.json["phi_at_one"] = at;
    o.json["extension"] =
        to_json(verify_extension_bound(m, agents, agg.family, c.samples < 0 ? 1000 : c.samples, c.seed, c.tol));
    return o;
}

void emit(const Output& o, const Config& c, std::ostream& out) {
    std::string body;
    if (c.format == "json") {
        body = dump_json(o.json);
    } else if (c.format == "csv") {
        if (!o.csv) throw ValidationError("csv output is only available for profile commands");
        body = dump_csv(*o.csv);
    } else {
        body = o.text.empty() ? dump_text(o.json) : o.text;
    }
    if (c.out.empty()) {
        out << body;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + c.out + "'");
    f << body;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust Orlicz space toolkit"};
    app.require_subcommand(1);
    Config cfg;

    struct Spec {
        const char* name;
        const char* help;
        std::function<Output(const Config&)> fn;
        std::vector<std::string> flags;
    };
    const std::vector<Spec> specs = {
        {"validate", "check model and family files", cmd_validate, {"model", "family"}},
        {"norm", "robust Luxemburg norm", cmd_norm, {"model", "family", "x", "tol", "max-iter"}},
        {"modular", "robust modular at --lambda", cmd_modular, {"model", "family", "x", "lambda"}},
        {"risk", "worst-case expectation with penalties", cmd_risk,
         {"model", "family", "x", "gamma", "tol", "max-iter"}},
        {"dual-norm", "Kothe dual norm of a measure under one prior", cmd_dual_norm,
         {"model", "family", "prior", "mu", "tol", "seed"}},
        {"dual-witness", "norming measure for X", cmd_dual_witness, {"model", "family", "x", "tol", "max-iter"}},
        {"verify-l1", "weighted L1 representation check", cmd_verify_l1,
         {"model", "family", "samples", "seed", "tol", "max-iter"}},
        {"dominate", "dominating probability P*", cmd_dominate, {"model", "family", "exact", "seed"}},
        {"ui-profile", "uniform integrability profile of the densities", cmd_ui_profile,
         {"model", "family", "c", "seed"}},
        {"membership", "L^Phi / frak-L classification", cmd_membership, {"model", "family", "x", "tol", "max-iter"}},
        {"tails", "tail norms ||X 1{|X| > n}||", cmd_tails, {"model", "family", "x", "levels", "tol", "max-iter"}},
        {"moments", "absolute moments of a discretised normal", cmd_moments, {"bound", "step", "n-max"}},
        {"mixture-witness", "countable-mixture witness", cmd_mixture_witness, {"model", "family", "x"}},
        {"span", "option span of a claim", cmd_span, {"model", "family", "x", "samples", "seed", "tol", "max-iter"}},
        {"project", "best approximation of Y in the option span of X", cmd_project,
         {"model", "family", "x", "y", "strikes", "seed", "tol", "max-iter"}},
        {"aggregate", "aggregate variational preferences", cmd_aggregate,
         {"model", "agents", "samples", "seed", "tol"}},
    };

    std::function<Output(const Config&)> chosen;
    for (const auto& s : specs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        for (const auto& f : s.flags) {
            if (f == "model") sub->add_option("--model", cfg.model, "model JSON file");
            if (f == "family") sub->add_option("--family", cfg.family, "family JSON file");
            if (f == "agents") sub->add_option("--agents", cfg.agents, "agents JSON file");
            if (f == "x") sub->add_option("--x", cfg.x, "vector: comma-separated or @file");
            if (f == "y") sub->add_option("--y", cfg.y, "vector: comma-separated or @file");
            if (f == "mu") sub->add_option("--mu", cfg.mu, "measure: comma-separated or @file");
            if (f == "prior") sub->add_option("--prior", cfg.prior, "prior label");
            if (f == "lambda") sub->add_option("--lambda", cfg.lambda, "scale lambda > 0");
            if (f == "gamma") sub->add_option("--gamma", cfg.gamma, "additive penalties, one per prior");
            if (f == "c") sub->add_option("--c", cfg.c_grid, "ascending thresholds");
            if (f == "levels") sub->add_option("--levels", cfg.levels, "ascending tail levels");
            if (f == "strikes") sub->add_option("--strikes", cfg.strikes, "extra strikes");
            if (f == "tol") sub->add_option("--tol", cfg.tol, "relative tolerance")->check(CLI::PositiveNumber);
            if (f == "max-iter")
                sub->add_option("--max-iter", cfg.max_iter, "bisection iteration cap")->check(CLI::PositiveNumber);
            if (f == "seed") sub->add_option("--seed", cfg.seed, "random seed");
            if (f == "samples") sub->add_option("--samples", cfg.samples, "sample count")->check(CLI::NonNegativeNumber);
            if (f == "exact") sub->add_flag("--exact", cfg.exact, "exact operator norms in the weights");
            if (f == "bound") sub->add_option("--bound", cfg.bound, "truncation bound T");
            if (f == "step") sub->add_option("--step", cfg.step, "grid step h");
            if (f == "n-max") sub->add_option("--n-max", cfg.n_max, "largest moment order");
        }
        sub->add_option("--format", cfg.format, "json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--out", cfg.out, "write the report to this file");
        sub->callback([&chosen, fn = s.fn] { chosen = fn; });
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        const Output o = chosen(cfg);
        emit(o, cfg, out);
        return o.exit;
    } catch (const NumericalError& e) {
        err << "numerical inconsistency: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

} // namespace rorlicz::cli
