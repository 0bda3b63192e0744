#pragma once

#include "qjp/linalg.hpp"

#include <vector>

namespace qjp {

enum class MeetMethod {
    spectral, ///< eigenvalue-1 cluster of (P + Q) / 2
    iterated, ///< limit of (PQ)^n by repeated squaring
};

struct LatticeOptions {
    double cluster_tol = 1e-9;     ///< spectral: distance from 1 that counts as 1
    double idempotency_tol = 1e-9; ///< iterated: stop when |M^2 - M| drops below
    int max_squarings = 200;
};

/// I - P.
Projector negate(const Projector &p);

/// Projector onto the intersection of the ranges. The iterated method throws
/// ConvergenceFailure if (PQ)^n is still not idempotent after max_squarings.
Projector meet(const Projector &p, const Projector &q,
               MeetMethod method = MeetMethod::spectral, LatticeOptions opts = {});

/// Projector onto the span of both ranges, via (P' ^ Q')'.
Projector join(const Projector &p, const Projector &q,
               MeetMethod method = MeetMethod::spectral, LatticeOptions opts = {});

/// max(0, -lambda_min(B - A)): zero iff A <= B in the Loewner order.
double loewner_defect(const Matrix &a, const Matrix &b);
inline bool loewner_leq(const Matrix &a, const Matrix &b, double tol = 1e-10) {
    return loewner_defect(a, b) <= tol;
}

/// Principal angles (radians, ascending) between the ranges of P and Q;
/// one per dimension of the smaller range.
std::vector<double> principal_angles(const Projector &p, const Projector &q);

/// True when some principal angle lies in (~3e-8, threshold): small enough
/// that the spectral cluster and the iterated limit may classify it
/// differently. Angles below the noise floor count as shared directions.
bool near_degenerate(const Projector &p, const Projector &q, double threshold = 1e-6);

} // namespace qjp
