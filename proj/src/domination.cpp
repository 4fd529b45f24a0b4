#include "rorlicz/domination.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rorlicz/duality.hpp"
#include "rorlicz/errors.hpp"
#include "rorlicz/extended_real.hpp"

namespace rorlicz {

namespace {

bool pointwise_le(const MeasureVector& w, const RandomVariable& x, const RandomVariable& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (w[i] > 0.0 && !(x[i] <= y[i])) return false;
    return true;
}

} // namespace

DominationReport dominating_measure(const ScenarioModel& model, const OrliczFamily& family,
                                    const DominationOptions& opts) {
    family.check_model(model);
    const std::size_t m = model.num_priors();
    const std::size_t n = model.num_atoms();
    DominationReport rep;
    rep.prior_order = model.prior_labels();
    std::vector<double> raw(m);
    double scale = 0.5;
    for (std::size_t k = 0; k < m; ++k) {
        const double bound = opts.exact_operator_norms
                                 ? exact_operator_norm(model, family, k, 16, opts.seed)
                                 : affine_minorant(family[k]).operator_norm_bound();
        rep.operator_norms.push_back(bound);
        raw[k] = scale * std::min(1.0, 1.0 / bound);
        scale *= 0.5;
    }
    CompensatedSum total;
    for (double r : raw) total.add(r);
    const double s = total.value();
    if (!(s > 0.0)) throw NumericalError("dominating mixture has zero mass");
    rep.weights.resize(m);
    for (std::size_t k = 0; k < m; ++k) rep.weights[k] = raw[k] / s;

    rep.pstar.masses.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        CompensatedSum acc;
        for (std::size_t k = 0; k < m; ++k) acc.add(raw[k] * model.prior(k)[i]);
        rep.pstar.masses[i] = acc.value() / s;
    }

    rep.strict_positivity = true;
    for (std::size_t i = 0; i < n; ++i) {
        const bool charged = rep.pstar[i] > 0.0;
        if (charged == model.is_polar(i)) rep.strict_positivity = false;
    }

    // Random pairs; half of them are built to be ordered on the support so
    // both directions of the equivalence get exercised.
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    RandomVariable x{std::vector<double>(n)}, y{std::vector<double>(n)};
    for (int t = 0; t < opts.order_pairs; ++t) {
        const bool ordered = coin(rng);
        for (std::size_t i = 0; i < n; ++i) {
            x.values[i] = unif(rng);
            y.values[i] = ordered && !model.is_polar(i) ? x.values[i] + 0.5 * (1.0 + unif(rng)) : unif(rng);
        }
        const QsOrder o = qs_order(model, x, y);
        const bool qs_le = o == QsOrder::Less || o == QsOrder::Equal;
        if (qs_le != pointwise_le(rep.pstar, x, y)) ++rep.order_mismatches;
        ++rep.order_pairs;
    }
    rep.order_collapse = rep.order_mismatches == 0;
    rep.member_mixture = model.options().mixture_closed;
    rep.note = "separability holds trivially on a finite sample space";
    return rep;
}

UiProfile uniform_integrability_report(const ScenarioModel& model, const MeasureVector& pstar,
                                       std::vector<double> c_grid) {
    if (pstar.size() != model.num_atoms()) throw DomainError("P* and model differ in length");
    UiProfile ui;
    for (std::size_t k = 0; k < model.num_priors(); ++k) {
        const auto& p = model.prior(k);
        std::vector<double> z(p.size(), 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] == 0.0) continue;
            if (!(pstar[i] > 0.0)) {
                ui.absolutely_continuous = false;
                ui.failure = "prior '" + model.prior_label(k) + "' charges atom '" + model.atoms()[i] +
                             "', which is P*-null";
                ui.densities.clear();
                return ui;
            }
            z[i] = p[i] / pstar[i];
            ui.max_density = std::max(ui.max_density, z[i]);
        }
        ui.densities.push_back(std::move(z));
    }
    if (c_grid.empty()) {
        c_grid.push_back(0.0);
        for (const auto& z : ui.densities)
            for (double v : z)
                if (v > 0.0) c_grid.push_back(v);
        std::sort(c_grid.begin(), c_grid.end());
        c_grid.erase(std::unique(c_grid.begin(), c_grid.end()), c_grid.end());
    }
    for (std::size_t j = 1; j < c_grid.size(); ++j)
        if (!(c_grid[j] > c_grid[j - 1])) throw DomainError("c grid must be strictly ascending");
    for (double c : c_grid) {
        // E_P*[Z 1{Z > c}] is P({Z > c}); summing prior masses keeps it exact.
        double sup = 0.0;
        for (std::size_t k = 0; k < ui.densities.size(); ++k) {
            CompensatedSum s;
            for (std::size_t i = 0; i < ui.densities[k].size(); ++i)
                if (ui.densities[k][i] > c) s.add(model.prior(k)[i]);
            sup = std::max(sup, s.value());
        }
        if (!ui.profile.empty() && sup > ui.profile.back().second) ui.monotone = false;
        ui.profile.emplace_back(c, sup);
    }
    return ui;
}

} // namespace rorlicz
