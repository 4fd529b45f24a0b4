#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rorlicz {

/// Signed mass vector over the atoms of a model.
struct MeasureVector {
    std::vector<double> masses;

    std::size_t size() const { return masses.size(); }
    double operator[](std::size_t i) const { return masses[i]; }
    double total_mass() const;
    double total_variation() const;
    bool nonnegative() const;
    MeasureVector abs() const;
};

/// Real (possibly +-inf) values indexed by the atoms of a model.
struct RandomVariable {
    std::vector<double> values;
    bool canonical = false;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

enum class QsOrder { Less, Greater, Equal, Incomparable };

std::string to_string(QsOrder o);

struct ModelOptions {
    /// User declaration that the prior set is closed under countable mixtures.
    bool mixture_closed = false;
};

/**
 * A finite sample space with a finite, nonempty list of probability priors.
 *
 * Priors are checked at construction: entries must be nonnegative and sum to
 * one within 1e-12. A drift below 1e-9 is renormalised away; anything larger
 * is a ValidationError naming the prior.
 */
class ScenarioModel {
public:
    ScenarioModel(std::vector<std::string> atoms, std::vector<MeasureVector> priors,
                  std::vector<std::string> prior_labels = {}, ModelOptions options = {});

    std::size_t num_atoms() const { return atoms_.size(); }
    std::size_t num_priors() const { return priors_.size(); }
    const std::vector<std::string>& atoms() const { return atoms_; }
    const MeasureVector& prior(std::size_t k) const { return priors_[k]; }
    const std::vector<MeasureVector>& priors() const { return priors_; }
    const std::string& prior_label(std::size_t k) const { return labels_[k]; }
    const std::vector<std::string>& prior_labels() const { return labels_; }
    std::optional<std::size_t> prior_index(const std::string& label) const;
    const ModelOptions& options() const { return options_; }

    /// Numeric coordinate of each atom (set for generated models).
    const std::optional<std::vector<double>>& atom_values() const { return atom_values_; }
    void set_atom_values(std::vector<double> values);

    /// Atoms with zero mass under every prior.
    std::vector<std::size_t> polar_set() const;
    bool is_polar(std::size_t atom) const { return !support_[atom]; }
    const std::vector<bool>& support() const { return support_; }

private:
    std::vector<std::string> atoms_;
    std::vector<MeasureVector> priors_;
    std::vector<std::string> labels_;
    ModelOptions options_;
    std::vector<bool> support_;
    std::optional<std::vector<double>> atom_values_;
};

/// Zeroes the variable on the polar set.
RandomVariable canonicalize(const ScenarioModel& model, const RandomVariable& x);

RandomVariable abs(const RandomVariable& x);

bool qs_equal(const ScenarioModel& model, const RandomVariable& x, const RandomVariable& y);

/// Entrywise comparison on the quasi-sure support.
QsOrder qs_order(const ScenarioModel& model, const RandomVariable& x, const RandomVariable& y);

RandomVariable lattice_min(const RandomVariable& x, const RandomVariable& y);
RandomVariable lattice_max(const RandomVariable& x, const RandomVariable& y);

/// Sum of P({w}) g(w) with 0 * inf = 0. P must be nonnegative.
double expectation(const MeasureVector& p, std::span<const double> g);

/// max over the q.s. support of |X|.
double qs_ess_sup(const ScenarioModel& model, const RandomVariable& x);

/// max over the support of P of |X|.
double ess_sup(const MeasureVector& p, const RandomVariable& x);

} // namespace rorlicz
