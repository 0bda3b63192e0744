#include "qjp/linalg.hpp"

#include "qjp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qjp {

Matrix::Matrix(std::size_t dim) : dim_(dim), a_(dim * dim, cplx{0.0, 0.0}) {}

Matrix::Matrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), a_(std::move(entries)) {
    if (a_.size() != dim_ * dim_) {
        throw Error(Errc::DimensionMismatch, "entry count does not match dim*dim");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
    a_.reserve(dim_ * dim_);
    for (const auto &row : rows) {
        if (row.size() != dim_) {
            throw Error(Errc::DimensionMismatch, "matrix literal is not square");
        }
        a_.insert(a_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
    Matrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            r(j, i) = std::conj((*this)(i, j));
        }
    }
    return r;
}

cplx Matrix::trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const auto &z : a_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

double Matrix::frobenius() const {
    double s = 0.0;
    for (const auto &z : a_) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

Matrix &Matrix::operator+=(const Matrix &rhs) {
    require_same_dim(*this, rhs);
    for (std::size_t k = 0; k < a_.size(); ++k) {
        a_[k] += rhs.a_[k];
    }
    return *this;
}

Matrix &Matrix::operator-=(const Matrix &rhs) {
    require_same_dim(*this, rhs);
    for (std::size_t k = 0; k < a_.size(); ++k) {
        a_[k] -= rhs.a_[k];
    }
    return *this;
}

Matrix &Matrix::operator*=(cplx s) {
    for (auto &z : a_) {
        z *= s;
    }
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix &rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix &rhs) { return lhs -= rhs; }
Matrix operator*(cplx s, Matrix m) { return m *= s; }
Matrix operator*(Matrix m, cplx s) { return m *= s; }

Matrix operator*(const Matrix &lhs, const Matrix &rhs) {
    require_same_dim(lhs, rhs);
    const std::size_t n = lhs.dim();
    Matrix r(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx a = lhs(i, k);
            if (a == cplx{0.0, 0.0}) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                r(i, j) += a * rhs(k, j);
            }
        }
    }
    return r;
}

Matrix commutator(const Matrix &a, const Matrix &b) { return a * b - b * a; }

double max_abs_diff(const Matrix &a, const Matrix &b) {
    require_same_dim(a, b);
    double m = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) {
        m = std::max(m, std::abs(da[k] - db[k]));
    }
    return m;
}

cplx trace_product(const Matrix &a, const Matrix &b) {
    require_same_dim(a, b);
    const std::size_t n = a.dim();
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            t += a(i, j) * b(j, i);
        }
    }
    return t;
}

double hermiticity_defect(const Matrix &a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = i; j < a.dim(); ++j) {
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
        }
    }
    return m;
}

Matrix hermitize(const Matrix &a) {
    Matrix r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        r(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < a.dim(); ++j) {
            const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            r(i, j) = v;
            r(j, i) = std::conj(v);
        }
    }
    return r;
}

Matrix outer(std::span<const cplx> u, std::span<const cplx> v) {
    if (u.size() != v.size()) {
        throw Error(Errc::DimensionMismatch, "outer product of unequal lengths");
    }
    Matrix r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            r(i, j) = u[i] * std::conj(v[j]);
        }
    }
    return r;
}

void require_same_dim(const Matrix &a, const Matrix &b) {
    if (a.dim() != b.dim()) {
        std::ostringstream os;
        os << "dimension " << a.dim() << " vs " << b.dim();
        throw Error(Errc::DimensionMismatch, os.str());
    }
}

HermitianMatrix::HermitianMatrix(const Matrix &m, double tol) {
    if (m.dim() == 0) {
        throw Error(Errc::DimensionMismatch, "dimension must be at least 1");
    }
    const double defect = hermiticity_defect(m);
    if (!(defect <= tol)) {
        std::ostringstream os;
        os << "symmetry defect " << defect << " exceeds " << tol;
        throw Error(Errc::NotHermitian, os.str());
    }
    m_ = hermitize(m);
}

DensityMatrix::DensityMatrix(const Matrix &m, double trace_tol, double psd_tol)
    : h_(m) {
    const cplx tr = h_.matrix().trace();
    if (!(std::abs(tr.real() - 1.0) <= trace_tol)) {
        std::ostringstream os;
        os << "trace " << tr.real() << " is not 1";
        throw Error(Errc::NotDensityMatrix, os.str());
    }
    const double lmin = min_eigenvalue(h_.matrix());
    if (lmin < -psd_tol) {
        std::ostringstream os;
        os << "minimum eigenvalue " << lmin << " is negative";
        throw Error(Errc::NotDensityMatrix, os.str());
    }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    return DensityMatrix(Matrix::identity(dim) * cplx(1.0 / static_cast<double>(dim)));
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> psi) {
    double n2 = 0.0;
    for (const auto &z : psi) {
        n2 += std::norm(z);
    }
    if (!(n2 > 0.0)) {
        throw Error(Errc::NotDensityMatrix, "zero state vector");
    }
    Matrix m = outer(psi, psi);
    m *= 1.0 / n2;
    return DensityMatrix(m);
}

Projector::Projector(const Matrix &m, double tol) : h_(m, tol) {
    const Matrix &p = h_.matrix();
    const double defect = max_abs_diff(p * p, p);
    if (!(defect <= tol)) {
        std::ostringstream os;
        os << "idempotency defect " << defect << " exceeds " << tol;
        throw Error(Errc::NotProjector, os.str());
    }
    rank_ = static_cast<std::size_t>(std::llround(p.trace().real()));
}

Projector Projector::zero(std::size_t dim) { return Projector(Matrix::zeros(dim)); }

Projector Projector::identity(std::size_t dim) {
    return Projector(Matrix::identity(dim));
}

Projector Projector::onto(std::span<const std::vector<cplx>> orthonormal,
                          std::size_t dim) {
    Matrix m(dim);
    for (const auto &v : orthonormal) {
        if (v.size() != dim) {
            throw Error(Errc::DimensionMismatch, "basis vector length");
        }
        m += outer(v, v);
    }
    return Projector(m);
}

std::vector<cplx> EigenSystem::vector(std::size_t k) const {
    std::vector<cplx> v(vectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = vectors(i, k);
    }
    return v;
}

namespace {

double off_diagonal_norm(const Matrix &a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

// Apply the unitary U that acts as [[upp, upq], [uqp, uqq]] on the (p, q)
// coordinate plane: A <- U^dagger A U, V <- V U.
void rotate(Matrix &a, Matrix &v, std::size_t p, std::size_t q, cplx upp, cplx upq,
            cplx uqp, cplx uqq) {
    const std::size_t n = a.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = akp * upp + akq * uqp;
        a(k, q) = akp * upq + akq * uqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
        a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = vkp * upp + vkq * uqp;
        v(k, q) = vkp * upq + vkq * uqq;
    }
}

} // namespace

EigenSystem eig_hermitian(const Matrix &m, double herm_tol, JacobiOptions opts) {
    if (m.dim() == 0) {
        throw Error(Errc::DimensionMismatch, "empty matrix");
    }
    const double defect = hermiticity_defect(m);
    if (!(defect <= herm_tol)) {
        std::ostringstream os;
        os << "symmetry defect " << defect << " exceeds " << herm_tol;
        throw Error(Errc::NotHermitian, os.str());
    }

    const std::size_t n = m.dim();
    Matrix a = hermitize(m);
    Matrix v = Matrix::identity(n);
    const double threshold = opts.offdiag_tol * std::max(1.0, a.frobenius());

    bool converged = off_diagonal_norm(a) <= threshold;
    for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double g = std::abs(apq);
                if (g == 0.0) {
                    continue;
                }
                // Strip the phase of a_pq, then apply the real symmetric
                // rotation that annihilates the now-real off-diagonal entry.
                const cplx phase_conj = std::conj(apq / g);
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                rotate(a, v, p, q, c, s, -s * phase_conj, c * phase_conj);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
        converged = off_diagonal_norm(a) <= threshold;
    }
    if (!converged) {
        throw Error(Errc::ConvergenceFailure, "Jacobi sweeps exhausted");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() < a(j, j).real();
    });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = Matrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        es.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            es.vectors(i, k) = v(i, order[k]);
        }
    }
    return es;
}

double min_eigenvalue(const Matrix &hermitian) {
    return eig_hermitian(hermitian, 1e-9).values.front();
}

HermitianMatrix psd_sqrt(const HermitianMatrix &m, double psd_tol) {
    const EigenSystem es = eig_hermitian(m);
    const std::size_t n = m.dim();
    if (es.values.front() < -psd_tol) {
        std::ostringstream os;
        os << "minimum eigenvalue " << es.values.front() << " below " << -psd_tol;
        throw Error(Errc::NotPSD, os.str());
    }
    // Eigenvalues below the solver's resolution are zero; their square roots
    // would otherwise inflate rounding noise to ~1e-8.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, m.matrix().frobenius());
    Matrix r(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double root = es.values[k] <= floor ? 0.0 : std::sqrt(es.values[k]);
        if (root == 0.0) {
            continue;
        }
        const auto vk = es.vector(k);
        r += outer(vk, vk) * cplx(root);
    }
    return HermitianMatrix(r, 1e-10);
}

double BlochVector::norm() const { return std::sqrt(dot(*this)); }

BlochVector BlochVector::normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
}

const std::array<Matrix, 3> &pauli() {
    static const std::array<Matrix, 3> sigma = {
        Matrix{{0.0, 1.0}, {1.0, 0.0}},
        Matrix{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}},
        Matrix{{1.0, 0.0}, {0.0, -1.0}},
    };
    return sigma;
}

HermitianMatrix bloch_to_matrix(const BlochVector &beta) {
    Matrix r{{0.5 * (1.0 + beta.z), 0.5 * cplx(beta.x, -beta.y)},
             {0.5 * cplx(beta.x, beta.y), 0.5 * (1.0 - beta.z)}};
    return HermitianMatrix(r);
}

BlochVector matrix_to_bloch(const Matrix &r) {
    if (r.dim() != 2) {
        throw Error(Errc::DimensionMismatch, "Bloch representation needs dim 2");
    }
    return {2.0 * r(0, 1).real(), -2.0 * r(0, 1).imag(),
            (r(0, 0) - r(1, 1)).real()};
}

double born(const DensityMatrix &rho, const Projector &p) {
    require_same_dim(rho, p);
    return std::clamp(trace_product(rho, p).real(), 0.0, 1.0);
}

DensityMatrix mix(const DensityMatrix &rho1, const DensityMatrix &rho2, double mu) {
    require_same_dim(rho1, rho2);
    if (!(mu >= 0.0 && mu <= 1.0)) {
        throw Error(Errc::InvalidWeight, "mixing weight outside [0, 1]");
    }
    return DensityMatrix(rho1.matrix() * cplx(mu) + rho2.matrix() * cplx(1.0 - mu));
}

} // namespace qjp
