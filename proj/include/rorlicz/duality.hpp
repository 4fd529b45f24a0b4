#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rorlicz/family.hpp"
#include "rorlicz/norm_engine.hpp"
#include "rorlicz/scenario_model.hpp"

namespace rorlicz {

struct KotheOptions {
    double tol = 1e-10;
    /// Run the brute-force maximisation when the support has at most
    /// brute_force_max_atoms atoms.
    bool brute_force = true;
    std::size_t brute_force_max_atoms = 6;
    int restarts = 4;
    std::uint64_t seed = 20240611;
    double agreement = 1e-6;
};

struct KotheResult {
    double value = 0.0;
    double conjugate_route = 0.0;
    std::optional<double> brute_force;
    double rel_discrepancy = 0.0;
};

/// sup{mu|X| : ||X||_{L^phi(P)} <= 1} for mu >= 0 with mu << P. Both routes run
/// when the support is small enough; disagreement beyond opts.agreement is a
/// NumericalError.
KotheResult kothe_dual_norm(const MeasureVector& mu, const MeasureVector& p, const OrliczFunction& phi,
                            const KotheOptions& opts = {});

/// inf_k (1 + E_P[phi*(k dmu/dP)]) / k by golden-section search on log k.
double kothe_dual_norm_conjugate(const MeasureVector& mu, const MeasureVector& p, const OrliczFunction& phi,
                                 double tol = 1e-10);

/// Direct maximisation of mu.v over the modular unit ball {v : E_P[phi(v)] <= 1}
/// on the support of P. The budget shares b_i = P_i phi(v_i) make this a
/// separable concave problem on the simplex, solved by pairwise exchanges with
/// golden-section steps from a uniform and `restarts - 1` random allocations.
/// Uses phi and its generalised inverse only, never the conjugate.
double kothe_dual_norm_brute_force(const MeasureVector& mu, const MeasureVector& p, const OrliczFunction& phi,
                                   int restarts = 4, std::uint64_t seed = 20240611);

/// Maximises sum_i c_i v_i / norm(v) over v >= 0 in R^d by compass search
/// with random directions. Used for the operator norms of priors.
double maximise_ratio(const std::vector<double>& c, const std::function<double(const std::vector<double>&)>& norm,
                      int restarts, std::uint64_t seed);

struct DualWitness {
    MeasureVector measure;      // dual norm 1 under the maximising prior
    double pairing = 0.0;       // measure |X|
    double dual_norm = 1.0;
    double gap = 0.0;           // ||X|| * dual_norm - pairing
    double norm = 0.0;          // ||X||
    std::size_t prior = 0;      // maximising prior (lowest index on ties)
    MeasureVector probability;  // measure / measure(Omega)
    double theta = 0.0;         // weight of `probability` in the L1 form
};

DualWitness dual_witness(const ScenarioModel& model, const RandomVariable& x, const OrliczFamily& family,
                         const NormOptions& opts = {});

/// theta(Q) = 1 / min{||Q||'_P : P prior, Q << P}.
double witness_weight(const ScenarioModel& model, const OrliczFamily& family, const MeasureVector& q,
                      double tol = 1e-10);

struct L1Report {
    bool applicable = true;
    std::string reason;
    int samples = 0;
    std::size_t pool_size = 0;
    double max_rel_gap = 0.0;
    double kappa = 0.0;
    int kappa_violations = 0;
    int holder_violations = 0;
    double alpha = 0.0;           // phi_Max(alpha) <= 1
    double max_witness_mass = 0.0;
    bool mass_bound_holds = true; // every witness mass <= 1 / alpha
    std::vector<MeasureVector> pool;
    std::vector<double> pool_theta;
};

L1Report verify_l1_reduction(const ScenarioModel& model, const OrliczFamily& family, int sample_size,
                             std::uint64_t seed, const NormOptions& opts = {});

/// X on the support of P, zero elsewhere.
RandomVariable canonical_projection(const RandomVariable& x, const MeasureVector& p);

/// sup{E_P|X| : ||X||_{L^Phi} <= 1} by direct maximisation.
double exact_operator_norm(const ScenarioModel& model, const OrliczFamily& family, std::size_t prior,
                           int restarts = 16, std::uint64_t seed = 20240611);

} // namespace rorlicz
