#include "rorlicz/option_spanning.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rorlicz/domination.hpp"
#include "rorlicz/errors.hpp"
#include "rorlicz/extended_real.hpp"
#include "rorlicz/scalar_search.hpp"

namespace rorlicz {

namespace {

// Level index of each atom; npos on the polar set.
std::vector<std::size_t> level_index(const ScenarioModel& model, const OptionBasis& b) {
    std::vector<std::size_t> idx(model.num_atoms(), static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (model.is_polar(i)) continue;
        const auto it = std::lower_bound(b.levels.begin(), b.levels.end(), b.claim[i]);
        idx[i] = static_cast<std::size_t>(it - b.levels.begin());
    }
    return idx;
}

} // namespace

OptionBasis option_basis(const ScenarioModel& model, const RandomVariable& x,
                         const std::vector<double>& extra_strikes) {
    if (x.size() != model.num_atoms()) throw DomainError("claim and model differ in length");
    OptionBasis b;
    b.claim = canonicalize(model, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (model.is_polar(i)) continue;
        if (!(b.claim[i] >= 0.0) || !std::isfinite(b.claim[i]))
            throw DomainError("option basis needs a finite claim X >= 0 on the support");
        b.levels.push_back(b.claim[i]);
    }
    std::sort(b.levels.begin(), b.levels.end());
    b.levels.erase(std::unique(b.levels.begin(), b.levels.end()), b.levels.end());
    b.dimension = b.levels.size();
    b.strikes.assign(b.levels.begin(), b.levels.end() - 1);
    for (double k : extra_strikes) {
        if (!std::isfinite(k)) throw DomainError("strikes must be finite");
        b.strikes.push_back(k);
    }
    RandomVariable one{std::vector<double>(x.size(), 0.0)};
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!model.is_polar(i)) one.values[i] = 1.0;
    b.vectors.push_back(one);
    for (double k : b.strikes) {
        RandomVariable c{std::vector<double>(x.size(), 0.0)};
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!model.is_polar(i)) c.values[i] = std::max(b.claim[i] - k, 0.0);
        b.vectors.push_back(std::move(c));
    }
    return b;
}

std::vector<double> level_values_to_coefficients(const OptionBasis& basis, const std::vector<double>& m) {
    const std::size_t d = basis.dimension;
    if (m.size() != d) throw DomainError("level values and basis dimension differ");
    std::vector<double> a(basis.vectors.size(), 0.0);
    if (d == 0) return a;
    a[0] = m[0];
    // Call on strike v_j carries the change of slope at v_j.
    double prev_slope = 0.0;
    for (std::size_t j = 0; j + 1 < d; ++j) {
        const double s = (m[j + 1] - m[j]) / (basis.levels[j + 1] - basis.levels[j]);
        a[1 + j] = s - prev_slope;
        prev_slope = s;
    }
    return a;
}

RandomVariable span_element(const OptionBasis& basis, const std::vector<double>& coefficients) {
    if (coefficients.size() != basis.vectors.size()) throw DomainError("coefficient count and basis differ");
    RandomVariable out{std::vector<double>(basis.claim.size(), 0.0)};
    for (std::size_t i = 0; i < out.size(); ++i) {
        CompensatedSum s;
        for (std::size_t j = 0; j < coefficients.size(); ++j) s.add(coefficients[j] * basis.vectors[j][i]);
        out.values[i] = s.value();
    }
    return out;
}

Projection project_onto_span(const ScenarioModel& model, const RandomVariable& y, const OptionBasis& basis,
                             const OrliczFamily& family, const ProjectOptions& opts) {
    if (y.size() != model.num_atoms()) throw DomainError("Y and model differ in length");
    const RandomVariable cy = canonicalize(model, y);
    const double ynorm = luxemburg_norm(model, cy, family, opts.norm).value;
    if (!std::isfinite(ynorm)) throw DomainError("projection needs a finite norm of Y");
    const std::size_t d = basis.dimension;
    const auto idx = level_index(model, basis);

    std::vector<double> lo(d, kInf), hi(d, -kInf), mean(d, 0.0), wsum(d, 0.0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] == static_cast<std::size_t>(-1)) continue;
        const std::size_t k = idx[i];
        lo[k] = std::min(lo[k], cy[i]);
        hi[k] = std::max(hi[k], cy[i]);
        double w = 0.0;
        for (const auto& p : model.priors()) w += p[i];
        mean[k] += w * cy[i];
        wsum[k] += w;
    }
    for (std::size_t k = 0; k < d; ++k) mean[k] /= wsum[k];

    RandomVariable r{std::vector<double>(cy.size(), 0.0)};
    auto objective = [&](const std::vector<double>& m) {
        for (std::size_t i = 0; i < r.size(); ++i)
            r.values[i] = idx[i] == static_cast<std::size_t>(-1) ? 0.0 : cy[i] - m[idx[i]];
        return luxemburg_norm(model, r, family, opts.norm).value;
    };

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Projection best;
    best.residual_norm = kInf;
    for (int rs = 0; rs < std::max(1, opts.restarts); ++rs) {
        // Clamping each level value into [min Y, max Y] on its level set never
        // increases |Y - m| pointwise, so the box holds a minimiser.
        std::vector<double> m = mean;
        if (rs > 0)
            for (std::size_t k = 0; k < d; ++k) m[k] = lo[k] + unif(rng) * (hi[k] - lo[k]);
        double f = objective(m);
        double last_gain = 0.0;
        bool stationary = false;
        for (int sweep = 0; sweep < opts.max_sweeps && f > 0.0; ++sweep) {
            double sweep_gain = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                if (!(hi[k] > lo[k])) continue;
                std::vector<double> t = m;
                const auto opt = golden_section_min(
                    [&](double v) {
                        t[k] = v;
                        return objective(t);
                    },
                    lo[k], hi[k], 1e-14, 500);
                if (opt.value < f) {
                    sweep_gain = std::max(sweep_gain, f - opt.value);
                    f = opt.value;
                    m[k] = opt.x;
                }
            }
            last_gain = sweep_gain;
            if (sweep_gain < opts.tol) {
                // Coordinates are stuck; random directions get past kinks of the norm.
                double dir_gain = 0.0;
                for (std::size_t t = 0; t < 2 * d; ++t) {
                    std::vector<double> u(d);
                    for (double& x : u) x = gauss(rng);
                    double span = 0.0;
                    for (std::size_t k = 0; k < d; ++k) span = std::max(span, hi[k] - lo[k]);
                    std::vector<double> tm(d);
                    const auto opt = golden_section_min(
                        [&](double s) {
                            for (std::size_t k = 0; k < d; ++k) tm[k] = std::clamp(m[k] + s * u[k], lo[k], hi[k]);
                            return objective(tm);
                        },
                        -span, span, 1e-14, 500);
                    if (opt.value < f) {
                        dir_gain = std::max(dir_gain, f - opt.value);
                        f = opt.value;
                        for (std::size_t k = 0; k < d; ++k) m[k] = std::clamp(m[k] + opt.x * u[k], lo[k], hi[k]);
                    }
                }
                if (dir_gain < opts.tol) {
                    stationary = true;
                    break;
                }
            }
        }
        if (f == 0.0) stationary = true;
        best.restart_residuals.push_back(f);
        if (f < best.residual_norm) {
            best.residual_norm = f;
            best.level_values = m;
            best.stationary = stationary;
            best.max_coordinate_improvement = last_gain;
        }
    }
    const auto [mn, mx] = std::minmax_element(best.restart_residuals.begin(), best.restart_residuals.end());
    best.restart_spread = *mx - *mn;
    best.coefficients = level_values_to_coefficients(basis, best.level_values);
    best.approximant = RandomVariable{std::vector<double>(cy.size(), 0.0)};
    for (std::size_t i = 0; i < cy.size(); ++i)
        if (idx[i] != static_cast<std::size_t>(-1)) best.approximant.values[i] = best.level_values[idx[i]];
    return best;
}

SpanningReport spanning_report(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family,
                               int sample_size, std::uint64_t seed, const ProjectOptions& opts) {
    const OptionBasis b = option_basis(model, x);
    SpanningReport rep;
    rep.span_dimension = b.dimension;
    for (std::size_t i = 0; i < model.num_atoms(); ++i) rep.canonical_dimension += model.is_polar(i) ? 0 : 1;
    rep.generates_field = rep.span_dimension == rep.canonical_dimension;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const std::size_t n = model.num_atoms();
    auto random_y = [&] {
        RandomVariable y{std::vector<double>(n)};
        for (double& v : y.values) v = unif(rng);
        return canonicalize(model, y);
    };
    auto random_span = [&] {
        std::vector<double> a(b.vectors.size());
        for (double& v : a) v = unif(rng);
        return span_element(b, a);
    };
    ProjectOptions po = opts;
    po.restarts = 1;
    const double in_span_tol = 10.0 * opts.tol;
    for (int s = 0; s < sample_size; ++s) {
        const auto pr = project_onto_span(model, random_y(), b, family, po);
        rep.max_residual = std::max(rep.max_residual, pr.residual_norm);
        ++rep.samples;

        const RandomVariable f = random_span(), g = random_span();
        const double rmin = project_onto_span(model, lattice_min(f, g), b, family, po).residual_norm;
        const double rmax = project_onto_span(model, lattice_max(f, g), b, family, po).residual_norm;
        if (rmin > in_span_tol || rmax > in_span_tol) rep.lattice_closed = false;

        // |Y| <= |f| q.s. for a random Y squeezed under a span element.
        RandomVariable yq = random_y();
        for (std::size_t i = 0; i < n; ++i) yq.values[i] *= std::abs(f[i]);
        const double rq = project_onto_span(model, yq, b, family, po).residual_norm;
        if (rq > in_span_tol) rep.ideal_proxy = false;
    }

    const auto dom = dominating_measure(model, family);
    rep.pstar_on_levels.assign(b.dimension, 0.0);
    const auto idx = level_index(model, b);
    for (std::size_t i = 0; i < n; ++i)
        if (idx[i] != static_cast<std::size_t>(-1)) rep.pstar_on_levels[idx[i]] += dom.pstar[i];
    rep.note = "on a finite model the span is closed; closure phenomena are out of reach";
    return rep;
}

} // namespace rorlicz
