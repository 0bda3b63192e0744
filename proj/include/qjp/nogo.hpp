#pragma once

/**
 * @file nogo.hpp
 * Qubit exclusion of precise joint probabilities. For rank-1 qubit
 * projectors P1, Q1 a precise table p_ab with Born marginals that stays
 * inside the imprecise bounds needs
 *
 *     L(rho) = tr(P1 Q1) + tr(rho P1) + tr(rho Q1) - 1 >= 0,
 *
 * and every non-commuting pair admits a pure state that makes L negative.
 */

#include "qjp/candidates.hpp"
#include "qjp/linalg.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qjp {

struct FeasibleSlice {
    double t_min = 0.0;
    double t_max = 0.0;
    bool empty = false;
    std::vector<std::string> binding; ///< constraints attaining t_min / t_max
};

struct ViolationWitness {
    double alpha = 0.0; ///< angle between the Bloch vectors of P1 and Q1
    DensityMatrix rho = DensityMatrix::maximally_mixed(2);
    double L_value = 0.0;
    bool feasible = true;
    FeasibleSlice slice;
};

struct ViolationValue {
    double trace_form = 0.0; ///< tr(P1Q1) + tr(rho P1) + tr(rho Q1) - 1
    double bloch_form = 0.0; ///< (b_P.b_Q + b_rho.(b_P + b_Q) + 1) / 2
};

/// Throws DimensionMismatch unless d = 2, RankError unless P1, Q1 are rank 1.
ViolationValue violation_functional(const DensityMatrix &rho, const Projector &p1,
                                    const Projector &q1);

/// arccos of the clamped Bloch dot product.
double bloch_angle(const Projector &p1, const Projector &q1);

/// Pure state with Bloch vector -(b_P + b_Q)/|b_P + b_Q|. Throws
/// CommutingPair when ||[P1, Q1]|| <= 1e-9.
ViolationWitness construct_violator(const Projector &p1, const Projector &q1);

enum class MinimizeMethod { closed_form, grid, descent };

struct MinimizeOptions {
    std::size_t grid_points = 100'000;
    std::size_t restarts = 100;
    std::size_t iterations = 500;
    double step = 0.1;
    std::uint64_t seed = 0;
};

/// Minimizes L over all qubit states. L is affine in rho, so the optimum is
/// pure; grid and descent search the Bloch sphere and serve as oracles for
/// the closed form.
ViolationWitness minimize_L(const Projector &p1, const Projector &q1, MinimizeMethod method,
                            MinimizeOptions opts = {});

/// (1 + cos(alpha) - 2 cos(alpha / 2)) / 2.
double closed_form_min(double alpha);

/// Parameterizes the qubit table by t = p_11 and intersects
/// tr(rho lower(P_a, Q_b)) <= p_ab <= tr(rho upper(P_a, Q_b)) over all four
/// cells. Throws UnsupportedDimension for d != 2, IncompleteFamily unless both
/// families are complete two-outcome families.
FeasibleSlice feasibility_audit(const DensityMatrix &rho, const ProjectorFamily &p_family,
                                const ProjectorFamily &q_family, double tol = 1e-12);

/// tr(P_a Q_b) + tr(rho P_a) + tr(rho Q_b) - 1 for (a, b) in
/// {(1,1), (1,2), (2,1), (2,2)}.
std::array<double, 4> violation_variants(const DensityMatrix &rho,
                                         const ProjectorFamily &p_family,
                                         const ProjectorFamily &q_family);

struct ContextualCell {
    std::size_t a = 0, b = 0;
    double p_given_p = 0.0; ///< tr(rho P_a Q_b P_a)
    double p_given_q = 0.0; ///< tr(rho Q_b P_a Q_b)
    double lower = 0.0;
    double upper = 0.0;
};

struct ContextualReport {
    std::vector<ContextualCell> cells;
    double marginal_defect_p = 0.0; ///< max_a |sum_b tr(rho P_a Q_b P_a) - tr(rho P_a)|
    double marginal_defect_q = 0.0; ///< max_b |sum_a tr(rho Q_b P_a Q_b) - tr(rho Q_b)|
    double bound_violation = 0.0;
    bool pass = false;
};

/// Context-dependent sequential tables against generalized marginality and
/// the imprecise bounds. Any dimension.
ContextualReport contextual_bounds_audit(const DensityMatrix &rho,
                                         const ProjectorFamily &p_family,
                                         const ProjectorFamily &q_family, double tol = 1e-10);

struct BoundsCheck {
    double max_violation = 0.0; ///< largest excursion outside [lower, upper]
    double max_z = 0.0;         ///< same in standard errors (stochastic tables)
    bool within = true;
};

/// Does a precise table sit inside the imprecise bounds cell by cell?
/// Stochastic tables get z_limit standard errors of slack.
BoundsCheck table_within_bounds(const JointTable &table, const DensityMatrix &rho,
                                const ProjectorFamily &p_family,
                                const ProjectorFamily &q_family, double tol = 1e-10,
                                double z_limit = 5.0);

} // namespace qjp
