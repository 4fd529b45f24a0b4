#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rorlicz/countable_model.hpp"
#include "rorlicz/family.hpp"
#include "rorlicz/kernels.hpp"
#include "rorlicz/norm_engine.hpp"
#include "rorlicz/scenario_model.hpp"

namespace rorlicz {

/// Gaussian ladder used by the countable diagnostics: step 1e-3, bounds
/// 5, 10, 15, 20 and 25, 50, 100, 200 priors.
CountableModel default_gaussian_ladder(ModelOptions options = {});

// ---------------------------------------------------------------- tails

enum class TailVerdict { Convergent, Divergent, Inconclusive };
std::string to_string(TailVerdict v);

struct TailOptions {
    double eps_tail = 1e-6;
    double slope_threshold = -0.1;
    double divergence_floor = 1e-2;
    double stability = 1e-6;
    NormOptions norm;
};

struct TailProfile {
    std::vector<double> levels;
    std::vector<double> tail_norms;            // ||X 1{|X| > n}|| at the finest truncation
    std::vector<bool> unstable;                // last two truncations differ by more than `stability`
    std::vector<std::size_t> stabilised_atoms; // coarsest truncation from which values agree; 0 if none
    std::size_t finest_atoms = 0;
    double slope = 0.0;                        // least-squares slope of log tail norm vs level
    bool slope_defined = false;
    TailVerdict verdict = TailVerdict::Inconclusive;
};

std::vector<double> default_tail_levels();

TailVerdict classify_tail(const std::vector<double>& levels, const std::vector<double>& norms, double& slope,
                          bool& slope_defined, const TailOptions& opts);

TailProfile tail_membership(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family,
                            const std::vector<double>& levels, const TailOptions& opts = {});

/// x_full is given on every generated atom; the family spec is resolved per truncation.
TailProfile tail_membership(const CountableModel& ladder, const std::vector<double>& x_full,
                            const FamilySpec& spec, const std::vector<double>& levels,
                            const TailOptions& opts = {});

// -------------------------------------------------------------- moments

struct MomentReport {
    double bound = 0.0;
    double step = 0.0;
    std::vector<int> n;
    std::vector<double> moment;        // E|U|^n on the discretised model
    std::vector<double> root;          // moment^(1/n)
    std::vector<double> oracle_moment; // 2^(n/2) Gamma((n+1)/2) / sqrt(pi)
    std::vector<double> oracle_root;
    std::vector<double> rel_dev;
    std::vector<bool> truncation_bites; // rel_dev > 1%
    bool nondecreasing = true;
    bool hard_flag = false;             // some rel_dev > 10%
};

double gaussian_abs_moment(int n);

MomentReport moment_growth(double bound, double step, int n_max, Exec exec = default_exec());

// ----------------------------------------------------------- membership

enum class Membership { InLPhi, InFrakLOnly, OutsideFrakL, Inconclusive };
std::string to_string(Membership m);

struct MembershipReport {
    Membership verdict = Membership::Inconclusive;
    std::vector<double> level_norms; // robust norm per truncation (one entry on finite models)
    /// Per prior: smallest k with E_P[phi_P(2^-k |X|)] finite (finite models) or
    /// stable across the last two truncations holding the prior (ladders).
    std::vector<std::optional<int>> alpha_exponent;
    bool frak_l = false;
    std::string evidence;
};

MembershipReport membership_classify(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family,
                                     const NormOptions& opts = {});

MembershipReport membership_classify(const CountableModel& ladder, const std::vector<double>& x_full,
                                     const FamilySpec& spec, const NormOptions& opts = {});

// ------------------------------------------------------ mixture witness

enum class WitnessStatus { Constructed, NotConstructible, Degenerate, NotDeclared };
std::string to_string(WitnessStatus s);

struct MixtureWitness {
    WitnessStatus status = WitnessStatus::NotConstructible;
    std::vector<std::size_t> qualifiers; // prior indices P_1, P_2, ... in ladder order
    std::vector<std::string> labels;
    MeasureVector q;                     // on the finest model
    std::string test_function;
    double theta_q = 1.0;
    double alpha = 1.0;
    std::vector<std::optional<double>> level_modular; // E_Q[phi(theta alpha |X|)] per truncation
    double finest_modular = 0.0;
    std::string note;
};

MixtureWitness mixture_witness(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family);

MixtureWitness mixture_witness(const CountableModel& ladder, const std::vector<double>& x_full,
                               const FamilySpec& spec);

} // namespace rorlicz
