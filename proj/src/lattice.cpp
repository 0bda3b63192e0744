#include "qjp/lattice.hpp"

#include "qjp/error.hpp"

#include <algorithm>
#include <cmath>

namespace qjp {

namespace {

std::vector<std::vector<cplx>> eigenvectors_where(const EigenSystem &es, auto &&keep) {
    std::vector<std::vector<cplx>> out;
    for (std::size_t k = 0; k < es.values.size(); ++k) {
        if (keep(es.values[k])) {
            out.push_back(es.vector(k));
        }
    }
    return out;
}

Projector spectral_meet(const Projector &p, const Projector &q, const LatticeOptions &opts) {
    const Matrix mean = (p.matrix() + q.matrix()) * cplx(0.5);
    const EigenSystem es = eig_hermitian(mean, 1e-10);
    const auto basis = eigenvectors_where(
        es, [&](double lambda) { return lambda >= 1.0 - opts.cluster_tol; });
    return Projector::onto(basis, p.dim());
}

Projector iterated_meet(const Projector &p, const Projector &q, const LatticeOptions &opts) {
    Matrix m = p.matrix() * q.matrix();
    bool converged = false;
    for (int k = 0; k <= opts.max_squarings; ++k) {
        Matrix sq = m * m;
        if (max_abs_diff(sq, m) < opts.idempotency_tol) {
            converged = true;
            break;
        }
        m = std::move(sq);
    }
    if (!converged) {
        throw Error(Errc::ConvergenceFailure, "(PQ)^n did not become idempotent");
    }
    // The limit is Hermitian; round its spectrum to {0, 1}.
    const EigenSystem es = eig_hermitian(hermitize(m), 1e-6);
    const auto basis = eigenvectors_where(es, [](double lambda) { return lambda > 0.5; });
    return Projector::onto(basis, p.dim());
}

} // namespace

Projector negate(const Projector &p) {
    return Projector(Matrix::identity(p.dim()) - p.matrix());
}

Projector meet(const Projector &p, const Projector &q, MeetMethod method,
               LatticeOptions opts) {
    require_same_dim(p, q);
    return method == MeetMethod::spectral ? spectral_meet(p, q, opts)
                                          : iterated_meet(p, q, opts);
}

Projector join(const Projector &p, const Projector &q, MeetMethod method,
               LatticeOptions opts) {
    return negate(meet(negate(p), negate(q), method, opts));
}

double loewner_defect(const Matrix &a, const Matrix &b) {
    return std::max(0.0, -min_eigenvalue(hermitize(b - a)));
}

std::vector<double> principal_angles(const Projector &p, const Projector &q) {
    require_same_dim(p, q);
    const Projector &small = p.rank() <= q.rank() ? p : q;
    const Projector &large = p.rank() <= q.rank() ? q : p;
    const EigenSystem ep = eig_hermitian(small, 1e-10);
    std::vector<std::vector<cplx>> basis =
        eigenvectors_where(ep, [](double lambda) { return lambda > 0.5; });

    // Restricted to range(small), the compression of I - large has the
    // squared sines of the principal angles as eigenvalues.
    const std::size_t r = basis.size();
    if (r == 0) {
        return {};
    }
    const Matrix perp = Matrix::identity(p.dim()) - large.matrix();
    Matrix compressed(r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            cplx s{0.0, 0.0};
            for (std::size_t a = 0; a < p.dim(); ++a) {
                for (std::size_t b = 0; b < p.dim(); ++b) {
                    s += std::conj(basis[i][a]) * perp(a, b) * basis[j][b];
                }
            }
            compressed(i, j) = s;
        }
    }
    const EigenSystem ec = eig_hermitian(hermitize(compressed), 1e-9);
    std::vector<double> angles;
    angles.reserve(r);
    for (double s2 : ec.values) {
        angles.push_back(std::asin(std::sqrt(std::clamp(s2, 0.0, 1.0))));
    }
    return angles;
}

bool near_degenerate(const Projector &p, const Projector &q, double threshold) {
    constexpr double noise_floor = 3.2e-8; // sin^2 = 1e-15
    const auto angles = principal_angles(p, q);
    return std::any_of(angles.begin(), angles.end(), [&](double theta) {
        return theta > noise_floor && theta < threshold;
    });
}

} // namespace qjp
