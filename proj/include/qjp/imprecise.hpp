#pragma once

/**
 * @file imprecise.hpp
 * Lower and upper probability operators for a pair of projectors,
 *
 *     lower(P, Q) = P ^ Q,     upper(P, Q) = P v Q - (P - Q)^2,
 *
 * the Born intervals they induce, interval consistency, and an audit of the
 * operator properties they are required to satisfy.
 */

#include "qjp/lattice.hpp"
#include "qjp/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qjp {

class ProbInterval {
  public:
    /// Throws InvalidInterval unless -tol <= lower <= upper <= 1 + tol.
    ProbInterval(double lower, double upper, double tol = 1e-10);

    [[nodiscard]] double lower() const noexcept { return lower_; }
    [[nodiscard]] double upper() const noexcept { return upper_; }
    [[nodiscard]] double width() const noexcept { return upper_ - lower_; }
    [[nodiscard]] bool contains(double p, double tol = 0.0) const {
        return p >= lower_ - tol && p <= upper_ + tol;
    }

  private:
    double lower_;
    double upper_;
};

struct OmegaPair {
    Projector lower_op;
    HermitianMatrix upper_op;
};

OmegaPair omega_pair(const Projector &p, const Projector &q,
                     MeetMethod method = MeetMethod::spectral);

/// Unclamped [tr(rho lower), tr(rho upper)].
struct RawInterval {
    double lower = 0.0;
    double upper = 0.0;
    /// Distance by which the raw values leave [0, 1].
    [[nodiscard]] double clamp_defect() const;
};

RawInterval raw_interval(const DensityMatrix &rho, const OmegaPair &omega);
ProbInterval interval(const DensityMatrix &rho, const OmegaPair &omega);
ProbInterval interval(const DensityMatrix &rho, const Projector &p, const Projector &q);

/// True iff `wide` encloses `narrow` (wide.lower <= narrow.lower and
/// wide.upper >= narrow.upper).
bool consistent(const ProbInterval &narrow, const ProbInterval &wide);
/// True iff the two intervals intersect.
bool overlap(const ProbInterval &a, const ProbInterval &b);

struct AuditWitness {
    std::optional<Matrix> rho;
    Matrix p, q;
    std::string note;
};

struct AxiomResult {
    std::string axiom;
    bool pass = true;
    double max_defect = 0.0;
    std::optional<AuditWitness> witness;
    std::string detail;
};

struct AuditReport {
    std::vector<AxiomResult> entries;

    [[nodiscard]] bool all_pass() const;
    [[nodiscard]] const AxiomResult *find(std::string_view axiom) const;
};

/// Axiom names reported by axiom_audit, in order.
const std::vector<std::string> &axiom_names();

/// Checks the operator pair of (P, Q) and the interval behaviour over the
/// supplied states:
///   bounds_ordering   0 <= lower <= upper <= I, both symmetric in (P, Q)
///   commutes_with_arguments  both operators commute with P and with Q
///   commuting_collapse       lower = upper = PQ when [P, Q] = 0
///   hypothesis_sandwich      tr(rho lower) <= tr(rho P Q) <= tr(rho upper)
///                            for the states where a commutation hypothesis holds
///   bounds_commute           [upper, lower] = 0
///   sequential_sandwich      lower <= PQP, QPQ <= upper
///   additivity_bounds        sum_a upper(P_a, Q) >= Q >= sum_a lower(P_a, Q)
///                            for {P, I-P}, and the mirror in Q
///   conditional_bounds       two-time probabilities inside the conditional
///                            interval (states with tr(rho P) > 1e-9)
///   interval_clamp           raw interval leaves [0, 1] by at most 1e-8
/// Failures are entries, never exceptions.
AuditReport axiom_audit(const Projector &p, const Projector &q,
                        const std::vector<DensityMatrix> &rho_samples, double tol = 1e-10);

/// States for which some commutation hypothesis holds: half commute with P,
/// half with Q.
std::vector<DensityMatrix> hypothesis_states(const Projector &p, const Projector &q,
                                             std::size_t count, std::uint64_t seed);

struct ConditionalSide {
    double lower = 0.0;  ///< tr(rho lower) / tr(rho X)
    double middle = 0.0; ///< two-time probability
    double upper = 0.0;  ///< tr(rho upper) / tr(rho X)
    bool holds = false;
    double defect = 0.0;
};

struct ConditionalReport {
    ConditionalSide given_p;                ///< middle = tr(rho PQP) / tr(rho P)
    std::optional<ConditionalSide> given_q; ///< middle = tr(rho QPQ) / tr(rho Q)
};

/// Throws ZeroConditioningProbability if tr(rho P) <= min_prob. The Q side is
/// omitted when tr(rho Q) <= min_prob.
ConditionalReport conditional_bounds(const DensityMatrix &rho, const Projector &p,
                                     const Projector &q, double tol = 1e-10,
                                     double min_prob = 1e-9);

} // namespace qjp
