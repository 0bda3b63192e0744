#include "qjp/random.hpp"

#include "qjp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qjp {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

cplx complex_gaussian(Rng &rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

BlochVector sample_unit_vector(Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (;;) {
        BlochVector v{normal(rng), normal(rng), normal(rng)};
        const double n = v.norm();
        if (n > 1e-12) {
            return (1.0 / n) * v;
        }
    }
}

void orthonormalize(std::vector<std::vector<cplx>> &vectors) {
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        auto &v = vectors[k];
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < k; ++j) {
                const auto &u = vectors[j];
                cplx proj{0.0, 0.0};
                for (std::size_t i = 0; i < v.size(); ++i) {
                    proj += std::conj(u[i]) * v[i];
                }
                for (std::size_t i = 0; i < v.size(); ++i) {
                    v[i] -= proj * u[i];
                }
            }
        }
        double n2 = 0.0;
        for (const auto &z : v) {
            n2 += std::norm(z);
        }
        if (!(n2 > 1e-24)) {
            throw Error(Errc::InvalidRank, "linearly dependent frame");
        }
        const double inv = 1.0 / std::sqrt(n2);
        for (auto &z : v) {
            z *= inv;
        }
    }
}

std::vector<std::vector<cplx>> sample_frame(std::size_t dim, std::size_t count, Rng &rng) {
    if (count > dim) {
        throw Error(Errc::InvalidRank, "frame larger than the space");
    }
    std::vector<std::vector<cplx>> frame(count, std::vector<cplx>(dim));
    for (auto &v : frame) {
        for (auto &z : v) {
            z = complex_gaussian(rng);
        }
    }
    orthonormalize(frame);
    return frame;
}

DensityMatrix sample_state(std::size_t dim, StateKind kind, Rng &rng) {
    if (dim == 0) {
        throw Error(Errc::DimensionMismatch, "dimension must be positive");
    }
    if (kind == StateKind::pure) {
        std::vector<cplx> psi(dim);
        for (auto &z : psi) {
            z = complex_gaussian(rng);
        }
        return DensityMatrix::pure(psi);
    }
    Matrix g(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            g(i, j) = complex_gaussian(rng);
        }
    }
    Matrix w = g * g.adjoint();
    w *= 1.0 / w.trace().real();
    return DensityMatrix(w);
}

Projector sample_projector(std::size_t dim, std::size_t rank, Rng &rng) {
    if (rank > dim) {
        throw Error(Errc::InvalidRank, "rank exceeds dimension");
    }
    const auto frame = sample_frame(dim, rank, rng);
    return Projector::onto(frame, dim);
}

HermitianMatrix sample_hermitian(std::size_t dim, Rng &rng) {
    Matrix g(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            g(i, j) = complex_gaussian(rng);
        }
    }
    return HermitianMatrix(hermitize(g));
}

DensityMatrix sample_commuting_state(const Projector &p, StateKind kind, Rng &rng) {
    const std::size_t d = p.dim();
    const Matrix perp = Matrix::identity(d) - p.matrix();
    const DensityMatrix a = sample_state(d, kind, rng);
    const DensityMatrix b = sample_state(d, kind, rng);
    Matrix w = p.matrix() * a.matrix() * p.matrix() + perp * b.matrix() * perp;
    const double tr = w.trace().real();
    if (!(tr > 1e-12)) {
        return DensityMatrix::maximally_mixed(d);
    }
    w *= 1.0 / tr;
    return DensityMatrix(w);
}

std::pair<Projector, Projector> sample_commuting_pair(std::size_t dim, std::size_t rank_p,
                                                      std::size_t rank_q, Rng &rng) {
    if (rank_p > dim || rank_q > dim) {
        throw Error(Errc::InvalidRank, "rank exceeds dimension");
    }
    const auto frame = sample_frame(dim, dim, rng);
    std::vector<std::size_t> idx(dim);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::vector<cplx>> fp, fq;
    for (std::size_t k = 0; k < rank_p; ++k) {
        fp.push_back(frame[idx[k]]);
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t k = 0; k < rank_q; ++k) {
        fq.push_back(frame[idx[k]]);
    }
    return {Projector::onto(fp, dim), Projector::onto(fq, dim)};
}

std::pair<Projector, Projector> sample_nested_pair(std::size_t dim, std::size_t outer_rank,
                                                   std::size_t inner_rank, Rng &rng) {
    if (inner_rank > outer_rank || outer_rank > dim) {
        throw Error(Errc::InvalidRank, "need inner_rank <= outer_rank <= dim");
    }
    const auto frame = sample_frame(dim, outer_rank, rng);
    const std::span<const std::vector<cplx>> all(frame);
    return {Projector::onto(all, dim), Projector::onto(all.first(inner_rank), dim)};
}

} // namespace qjp
