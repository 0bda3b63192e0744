#pragma once

#include "qjp/linalg.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace qjp {

using Rng = std::mt19937_64;

/// Seed for sub-stream `stream` of `base` (splitmix64 finalizer). Used to
/// partition seeds across samples and batches independently of thread count.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

inline Rng make_rng(std::uint64_t base, std::uint64_t stream) {
    return Rng(derive_seed(base, stream));
}

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
cplx complex_gaussian(Rng &rng);

/// Uniform direction on the unit sphere.
BlochVector sample_unit_vector(Rng &rng);

/// Orthonormalize in place (modified Gram-Schmidt, two passes). Throws
/// InvalidRank if the vectors are numerically dependent.
void orthonormalize(std::vector<std::vector<cplx>> &vectors);

/// Unitarily invariant orthonormal frame of `count` vectors in C^dim.
std::vector<std::vector<cplx>> sample_frame(std::size_t dim, std::size_t count, Rng &rng);

enum class StateKind { pure, mixed };

/// Pure: normalized complex Gaussian vector. Mixed: G G^dagger / tr(G G^dagger)
/// with G a complex Gaussian matrix (Hilbert-Schmidt measure).
DensityMatrix sample_state(std::size_t dim, StateKind kind, Rng &rng);

Projector sample_projector(std::size_t dim, std::size_t rank, Rng &rng);

/// Random Hermitian matrix with complex Gaussian entries.
HermitianMatrix sample_hermitian(std::size_t dim, Rng &rng);

/// State commuting with `p`: P M1 P + (I-P) M2 (I-P), normalized.
DensityMatrix sample_commuting_state(const Projector &p, StateKind kind, Rng &rng);

/// Two projectors diagonal in one shared random frame.
std::pair<Projector, Projector> sample_commuting_pair(std::size_t dim, std::size_t rank_p,
                                                      std::size_t rank_q, Rng &rng);

/// Nested pair (outer >= inner) built from one random frame.
std::pair<Projector, Projector> sample_nested_pair(std::size_t dim, std::size_t outer_rank,
                                                   std::size_t inner_rank, Rng &rng);

} // namespace qjp
