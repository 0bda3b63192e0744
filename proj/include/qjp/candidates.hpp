#pragma once

/**
 * @file candidates.hpp
 * Candidate joint probabilities p(rho, P, Q) for two projectors and the
 * structural checks applied to them: marginality over complete projector
 * families, non-negativity, and agreement with tr(rho P Q) whenever one of
 * the three commutation hypotheses holds.
 */

#include "qjp/linalg.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qjp {

/// Value of a candidate. Exact candidates report std_error = 0.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Symmetrized quasi-probability tr(rho (PQ + QP)) / 2. May be negative.
double tmh(const DensityMatrix &rho, const Projector &p, const Projector &q);

/// tr(P sqrt(rho) Q sqrt(rho)) >= 0; not linear in rho.
double nonlinear(const DensityMatrix &rho, const Projector &p, const Projector &q);

struct HiddenVariableSample {
    BlochVector m;           ///< unit vector
    std::uint64_t count = 1; ///< multiplicity
};

/// Monte Carlo estimate of the hidden-variable joint probability
/// integral dm/4pi theta[b_P.(b_rho+m)] theta[b_Q.(b_rho+m)] in d = 2.
/// P and Q must be rank 1; the identity is accepted as the constant
/// indicator 1. Any other rank throws RankError.
Estimate bell_hv(const DensityMatrix &rho, const Projector &p, const Projector &q,
                 std::uint64_t n_samples, std::uint64_t seed);

/// Serial reference of bell_hv, bit-identical to it.
Estimate bell_hv_serial(const DensityMatrix &rho, const Projector &p, const Projector &q,
                        std::uint64_t n_samples, std::uint64_t seed);

/// Weighted average of the same integrand over explicit hidden variables.
double bell_hv_average(const DensityMatrix &rho, const Projector &p, const Projector &q,
                       std::span<const HiddenVariableSample> samples);

enum class Order { p_first, q_first };

/// tr(rho PQP) or tr(rho QPQ), clamped to [0, 1].
double sequential(const DensityMatrix &rho, const Projector &p, const Projector &q, Order order);

struct CandidateOptions {
    std::uint64_t mc_samples = 100'000; ///< bell_hv only
};

using CandidateFn = std::function<Estimate(const DensityMatrix &, const Projector &,
                                           const Projector &, std::uint64_t seed)>;

struct Candidate {
    std::string id;
    bool stochastic = false;
    std::uint64_t mc_samples = 0;
    CandidateFn eval;
};

/// Ids: "tmh", "nonlinear", "bell_hv", "sequential_P", "sequential_Q".
const std::vector<std::string> &candidate_ids();
/// Throws UnknownCandidate.
Candidate make_candidate(std::string_view id, CandidateOptions opts = {});

using ProjectorFamily = std::vector<Projector>;

/// Throws IncompleteFamily unless the members are mutually orthogonal and
/// sum to the identity within `tol`.
void validate_family(const ProjectorFamily &family, double tol = 1e-10);
/// {P, I - P}.
ProjectorFamily two_outcome_family(const Projector &p);

struct JointTable {
    std::string candidate;
    std::vector<std::string> rows; ///< outcome labels of the P family
    std::vector<std::string> cols; ///< outcome labels of the Q family
    std::vector<std::vector<double>> values;
    std::vector<std::vector<double>> std_errors;
    std::uint64_t samples = 0; ///< Monte Carlo evaluations per cell, 0 if exact
    bool all_nonneg = true;
    double marginal_error = 0.0; ///< filled by check_marginals
};

/// Every cell is evaluated with the same seed, so a stochastic candidate
/// sees one shared set of hidden variables across the table.
JointTable build_table(const Candidate &candidate, const DensityMatrix &rho,
                       const ProjectorFamily &p_family, const ProjectorFamily &q_family,
                       std::uint64_t seed = 0);

struct MarginalReport {
    double row_error = 0.0; ///< max_a |sum_b p_ab - tr(rho P_a)|
    double col_error = 0.0; ///< max_b |sum_a p_ab - tr(rho Q_b)|
    double max_z = 0.0;     ///< largest error in standard errors (stochastic only)
    bool pass = false;
};

/// Exact tables pass when both errors are within tol; stochastic tables when
/// every marginal is within max(tol, z_limit * sigma).
MarginalReport check_marginals(JointTable &table, const DensityMatrix &rho,
                               const ProjectorFamily &p_family,
                               const ProjectorFamily &q_family, double tol = 1e-12,
                               double z_limit = 3.0);

enum class Hypothesis { p_commutes_rho, rho_commutes_q, p_commutes_q };
std::string_view to_string(Hypothesis h);

struct ConditionWitness {
    Matrix rho, p, q;
    double value = 0.0;
    double reference = 0.0; ///< tr(rho P Q)
    double std_error = 0.0;
};

enum class ConditionStatus { holds, violated, inconclusive };
std::string_view to_string(ConditionStatus s);

struct ConditionResult {
    Hypothesis hypothesis = Hypothesis::p_commutes_rho;
    ConditionStatus status = ConditionStatus::inconclusive;
    double max_gap = 0.0;
    std::size_t samples = 0;
    std::optional<ConditionWitness> witness; ///< largest-gap instance
};

struct ConditionAuditOptions {
    double exact_tol = 1e-10;   ///< equality threshold
    double witness_gap = 1e-3;  ///< minimum gap for a violation witness
    double z_threshold = 5.0;   ///< stochastic candidates: gap must exceed this many sigma
};

/// For each hypothesis, draws inputs that satisfy it by construction and
/// compares the candidate with tr(rho P Q). In d = 2 all projectors are rank 1.
std::array<ConditionResult, 3> condition_audit(const Candidate &candidate, std::size_t dim,
                                               std::size_t samples, std::uint64_t seed,
                                               ConditionAuditOptions opts = {});

struct NegativityScan {
    double min_value = 0.0;
    std::size_t samples = 0;
    std::optional<ConditionWitness> witness; ///< most negative instance, if any
};

/// Minimum candidate value over random (rho, P, Q); pure and mixed states
/// alternate. `value` < -tol counts as negative.
NegativityScan negativity_scan(const Candidate &candidate, std::size_t dim,
                               std::size_t samples, std::uint64_t seed, double tol = 1e-12);

} // namespace qjp
