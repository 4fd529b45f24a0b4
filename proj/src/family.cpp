#include "rorlicz/family.hpp"

#include <algorithm>
#include <cmath>

#include "rorlicz/errors.hpp"

namespace rorlicz {

OrliczFamily::OrliczFamily(std::vector<OrliczFunction> per_prior) : functions_(std::move(per_prior)) {
    if (functions_.empty()) throw ValidationError("Orlicz family needs at least one function");
}

OrliczFamily OrliczFamily::uniform(const OrliczFunction& phi, std::size_t num_priors) {
    return OrliczFamily(std::vector<OrliczFunction>(num_priors, phi));
}

OrliczFamily OrliczFamily::parametric(const OrliczFunction& phi, std::vector<double> theta,
                                      std::vector<double> gamma) {
    if (theta.size() != gamma.size() || theta.empty())
        throw ValidationError("parametric family needs theta and gamma for every prior");
    std::vector<OrliczFunction> fs;
    fs.reserve(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (!std::isfinite(theta[k]) || theta[k] <= 0.0)
            throw ValidationError("theta must be finite and > 0 for every prior");
        if (!std::isfinite(gamma[k]) || gamma[k] < 0.0)
            throw ValidationError("gamma must be finite and >= 0 for every prior");
        fs.push_back(OrliczFunction::scaled(phi, theta[k], 1.0 + gamma[k]));
    }
    OrliczFamily fam(std::move(fs));
    fam.parametric_ = ParametricForm{phi, std::move(theta), std::move(gamma)};
    return fam;
}

OrliczFunction OrliczFamily::phi_max() const {
    std::vector<OrliczFunction> distinct;
    for (const auto& f : functions_)
        if (std::none_of(distinct.begin(), distinct.end(), [&](const OrliczFunction& g) { return g.same_rep(f); }))
            distinct.push_back(f);
    return OrliczFunction::maximum(std::move(distinct));
}

double OrliczFamily::theta_sup() const {
    if (!parametric_) return 1.0;
    return *std::max_element(parametric_->theta.begin(), parametric_->theta.end());
}

void OrliczFamily::check_model(const ScenarioModel& model) const {
    if (functions_.size() != model.num_priors())
        throw ValidationError("family has " + std::to_string(functions_.size()) + " functions for " +
                              std::to_string(model.num_priors()) + " priors");
}

FamilySpec FamilySpec::uniform(const OrliczFunction& phi) {
    FamilySpec s;
    s.kind = Kind::Uniform;
    s.phi = phi;
    return s;
}

FamilySpec FamilySpec::power_ladder(double start, double step) {
    FamilySpec s;
    s.kind = Kind::PowerLadder;
    s.ladder_start = start;
    s.ladder_step = step;
    return s;
}

namespace {
template <class V>
void check_labels(const ScenarioModel& model, const std::map<std::string, V>& m, const char* what) {
    for (const auto& [label, _] : m)
        if (!model.prior_index(label))
            throw ValidationError(std::string(what) + " names unknown prior '" + label + "'");
}
} // namespace

OrliczFamily FamilySpec::resolve(const ScenarioModel& model, bool strict) const {
    const std::size_t n = model.num_priors();
    switch (kind) {
    case Kind::Uniform:
        if (!phi) throw ValidationError("uniform family without a function");
        return OrliczFamily::uniform(*phi, n);
    case Kind::ByLabel: {
        if (strict) check_labels(model, by_label, "family");
        std::vector<OrliczFunction> fs;
        for (std::size_t k = 0; k < n; ++k) {
            const auto it = by_label.find(model.prior_label(k));
            if (it != by_label.end())
                fs.push_back(it->second);
            else if (phi)
                fs.push_back(*phi);
            else
                throw ValidationError("family has no function for prior '" + model.prior_label(k) + "'");
        }
        return OrliczFamily(std::move(fs));
    }
    case Kind::Parametric: {
        if (!phi) throw ValidationError("parametric family without a joint function");
        if (strict) {
            check_labels(model, theta, "theta");
            check_labels(model, gamma, "gamma");
        }
        std::vector<double> th(n, theta_default), ga(n, gamma_default);
        for (std::size_t k = 0; k < n; ++k) {
            if (auto it = theta.find(model.prior_label(k)); it != theta.end()) th[k] = it->second;
            if (auto it = gamma.find(model.prior_label(k)); it != gamma.end()) ga[k] = it->second;
        }
        return OrliczFamily::parametric(*phi, std::move(th), std::move(ga));
    }
    case Kind::PowerLadder: {
        std::vector<OrliczFunction> fs;
        for (std::size_t k = 0; k < n; ++k)
            fs.push_back(OrliczFunction::power(ladder_start + ladder_step * static_cast<double>(k)));
        return OrliczFamily(std::move(fs));
    }
    }
    throw ValidationError("unknown family kind");
}

} // namespace rorlicz
