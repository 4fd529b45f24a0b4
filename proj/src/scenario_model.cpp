#include "rorlicz/scenario_model.hpp"

#include <algorithm>
#include <cmath>

#include "rorlicz/errors.hpp"
#include "rorlicz/extended_real.hpp"

namespace rorlicz {

double MeasureVector::total_mass() const { return compensated_total(masses); }

double MeasureVector::total_variation() const {
    CompensatedSum s;
    for (double m : masses) s.add(std::abs(m));
    return s.value();
}

bool MeasureVector::nonnegative() const {
    return std::all_of(masses.begin(), masses.end(), [](double m) { return m >= 0.0; });
}

MeasureVector MeasureVector::abs() const {
    MeasureVector out{masses};
    for (double& m : out.masses) m = std::abs(m);
    return out;
}

std::string to_string(QsOrder o) {
    switch (o) {
    case QsOrder::Less: return "less";
    case QsOrder::Greater: return "greater";
    case QsOrder::Equal: return "equal";
    case QsOrder::Incomparable: return "incomparable";
    }
    return "unknown";
}

ScenarioModel::ScenarioModel(std::vector<std::string> atoms, std::vector<MeasureVector> priors,
                             std::vector<std::string> prior_labels, ModelOptions options)
    : atoms_(std::move(atoms)), priors_(std::move(priors)), labels_(std::move(prior_labels)),
      options_(options) {
    if (atoms_.empty()) throw ValidationError("model needs at least one atom");
    if (priors_.empty()) throw ValidationError("model needs a nonempty set of priors");
    if (labels_.empty())
        for (std::size_t k = 0; k < priors_.size(); ++k) labels_.push_back("P" + std::to_string(k + 1));
    if (labels_.size() != priors_.size()) throw ValidationError("prior_labels and priors differ in length");

    for (std::size_t k = 0; k < priors_.size(); ++k) {
        auto& p = priors_[k];
        const std::string& name = labels_[k];
        if (p.size() != atoms_.size())
            throw ValidationError("prior '" + name + "' has " + std::to_string(p.size()) + " masses for " +
                                  std::to_string(atoms_.size()) + " atoms");
        for (double m : p.masses)
            if (!std::isfinite(m) || m < 0.0)
                throw ValidationError("prior '" + name + "' has a negative or non-finite mass");
        const double total = p.total_mass();
        const double drift = std::abs(total - 1.0);
        if (drift > 1e-9)
            throw ValidationError("probability-sum check failed for prior '" + name + "': total mass " +
                                  std::to_string(total));
        if (drift > 1e-12)
            for (double& m : p.masses) m /= total;
    }
    for (std::size_t i = 0; i < labels_.size(); ++i)
        for (std::size_t j = i + 1; j < labels_.size(); ++j)
            if (labels_[i] == labels_[j]) throw ValidationError("duplicate prior label '" + labels_[i] + "'");

    support_.assign(atoms_.size(), false);
    for (const auto& p : priors_)
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (p[i] > 0.0) support_[i] = true;
}

std::optional<std::size_t> ScenarioModel::prior_index(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

void ScenarioModel::set_atom_values(std::vector<double> values) {
    if (values.size() != atoms_.size()) throw ValidationError("atom value vector has the wrong length");
    atom_values_ = std::move(values);
}

std::vector<std::size_t> ScenarioModel::polar_set() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < support_.size(); ++i)
        if (!support_[i]) out.push_back(i);
    return out;
}

namespace {
void check_dims(const ScenarioModel& model, const RandomVariable& x) {
    if (x.size() != model.num_atoms())
        throw DomainError("random variable has " + std::to_string(x.size()) + " entries for " +
                          std::to_string(model.num_atoms()) + " atoms");
}
} // namespace

RandomVariable canonicalize(const ScenarioModel& model, const RandomVariable& x) {
    check_dims(model, x);
    RandomVariable out{x.values, true};
    for (std::size_t i = 0; i < out.size(); ++i)
        if (model.is_polar(i)) out.values[i] = 0.0;
    return out;
}

RandomVariable abs(const RandomVariable& x) {
    RandomVariable out = x;
    for (double& v : out.values) v = std::abs(v);
    return out;
}

bool qs_equal(const ScenarioModel& model, const RandomVariable& x, const RandomVariable& y) {
    return qs_order(model, x, y) == QsOrder::Equal;
}

QsOrder qs_order(const ScenarioModel& model, const RandomVariable& x, const RandomVariable& y) {
    check_dims(model, x);
    check_dims(model, y);
    bool le = true, ge = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (model.is_polar(i)) continue;
        if (x[i] < y[i]) ge = false;
        if (x[i] > y[i]) le = false;
    }
    if (le && ge) return QsOrder::Equal;
    if (le) return QsOrder::Less;
    if (ge) return QsOrder::Greater;
    return QsOrder::Incomparable;
}

RandomVariable lattice_min(const RandomVariable& x, const RandomVariable& y) {
    if (x.size() != y.size()) throw DomainError("lattice_min on variables of different length");
    RandomVariable out{x.values, x.canonical && y.canonical};
    for (std::size_t i = 0; i < x.size(); ++i) out.values[i] = std::min(x[i], y[i]);
    return out;
}

RandomVariable lattice_max(const RandomVariable& x, const RandomVariable& y) {
    if (x.size() != y.size()) throw DomainError("lattice_max on variables of different length");
    RandomVariable out{x.values, x.canonical && y.canonical};
    for (std::size_t i = 0; i < x.size(); ++i) out.values[i] = std::max(x[i], y[i]);
    return out;
}

double expectation(const MeasureVector& p, std::span<const double> g) {
    if (p.size() != g.size()) throw DomainError("expectation: measure and integrand differ in length");
    CompensatedSum s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (p[i] < 0.0) throw DomainError("expectation needs a nonnegative measure");
        s.add(ext_mul(p[i], g[i]));
    }
    return s.value();
}

double qs_ess_sup(const ScenarioModel& model, const RandomVariable& x) {
    check_dims(model, x);
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!model.is_polar(i)) m = std::max(m, std::abs(x[i]));
    return m;
}

double ess_sup(const MeasureVector& p, const RandomVariable& x) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (p[i] > 0.0) m = std::max(m, std::abs(x[i]));
    return m;
}

} // namespace rorlicz
