#pragma once

/**
 * @file linalg.hpp
 * Dense complex linear algebra for small Hilbert spaces (d = 1..8).
 *
 * Matrix is the general square carrier. HermitianMatrix, DensityMatrix and
 * Projector are validated roles on top of it; each converts implicitly to
 * `const Matrix &` so the arithmetic operators apply to all of them.
 */

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qjp {

using cplx = std::complex<double>;

/// Default numerical tolerances. Every function that uses one takes it as a
/// defaulted parameter.
struct Tolerances {
    static constexpr double hermitian = 1e-12;
    static constexpr double trace = 1e-12;
    static constexpr double psd = 1e-10;
    static constexpr double idempotent = 1e-10;
    static constexpr double offdiag = 1e-12;
    static constexpr int max_sweeps = 100;
};

class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t dim);
    Matrix(std::size_t dim, std::vector<cplx> entries);
    Matrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static Matrix zeros(std::size_t dim) { return Matrix(dim); }
    static Matrix identity(std::size_t dim);
    static Matrix diagonal(std::span<const double> values);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    cplx &operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const cplx &operator()(std::size_t i, std::size_t j) const {
        return a_[i * dim_ + j];
    }

    [[nodiscard]] std::span<const cplx> data() const noexcept { return a_; }

    [[nodiscard]] Matrix adjoint() const;
    [[nodiscard]] cplx trace() const;
    [[nodiscard]] double max_abs() const;
    [[nodiscard]] double frobenius() const;

    Matrix &operator+=(const Matrix &rhs);
    Matrix &operator-=(const Matrix &rhs);
    Matrix &operator*=(cplx s);

    friend bool operator==(const Matrix &, const Matrix &) = default;

  private:
    std::size_t dim_ = 0;
    std::vector<cplx> a_;
};

Matrix operator+(Matrix lhs, const Matrix &rhs);
Matrix operator-(Matrix lhs, const Matrix &rhs);
Matrix operator*(const Matrix &lhs, const Matrix &rhs);
Matrix operator*(cplx s, Matrix m);
Matrix operator*(Matrix m, cplx s);

/// [A, B] = AB - BA.
Matrix commutator(const Matrix &a, const Matrix &b);
/// Largest entrywise |a_ij - b_ij|.
double max_abs_diff(const Matrix &a, const Matrix &b);
/// tr(AB) without forming the product.
cplx trace_product(const Matrix &a, const Matrix &b);
/// Largest |a_ij - conj(a_ji)|.
double hermiticity_defect(const Matrix &a);
/// (A + A^dagger) / 2.
Matrix hermitize(const Matrix &a);
/// Outer product |u><v|.
Matrix outer(std::span<const cplx> u, std::span<const cplx> v);

void require_same_dim(const Matrix &a, const Matrix &b);

class HermitianMatrix {
  public:
    /// Throws NotHermitian when the symmetry defect exceeds `tol`; the stored
    /// matrix is the exact Hermitian part of `m`.
    explicit HermitianMatrix(const Matrix &m, double tol = Tolerances::hermitian);

    [[nodiscard]] const Matrix &matrix() const noexcept { return m_; }
    operator const Matrix &() const noexcept { return m_; }
    [[nodiscard]] std::size_t dim() const noexcept { return m_.dim(); }

  private:
    Matrix m_;
};

/// Unit-trace, positive semidefinite.
class DensityMatrix {
  public:
    explicit DensityMatrix(const Matrix &m, double trace_tol = Tolerances::trace,
                           double psd_tol = Tolerances::psd);

    static DensityMatrix maximally_mixed(std::size_t dim);
    /// |psi><psi| for a (not necessarily normalized) nonzero vector.
    static DensityMatrix pure(std::span<const cplx> psi);

    [[nodiscard]] const Matrix &matrix() const noexcept { return h_.matrix(); }
    operator const Matrix &() const noexcept { return h_.matrix(); }
    [[nodiscard]] const HermitianMatrix &hermitian() const noexcept { return h_; }
    [[nodiscard]] std::size_t dim() const noexcept { return h_.dim(); }

  private:
    HermitianMatrix h_;
};

/// Hermitian idempotent. The rank is the rounded trace.
class Projector {
  public:
    explicit Projector(const Matrix &m, double tol = Tolerances::idempotent);

    static Projector zero(std::size_t dim);
    static Projector identity(std::size_t dim);
    /// Projector onto the span of orthonormal column vectors.
    static Projector onto(std::span<const std::vector<cplx>> orthonormal,
                          std::size_t dim);

    [[nodiscard]] const Matrix &matrix() const noexcept { return h_.matrix(); }
    operator const Matrix &() const noexcept { return h_.matrix(); }
    [[nodiscard]] std::size_t dim() const noexcept { return h_.dim(); }
    [[nodiscard]] std::size_t rank() const noexcept { return rank_; }

  private:
    HermitianMatrix h_;
    std::size_t rank_ = 0;
};

struct EigenSystem {
    std::vector<double> values; ///< ascending
    Matrix vectors;             ///< column k is the eigenvector of values[k]

    [[nodiscard]] std::vector<cplx> vector(std::size_t k) const;
};

struct JacobiOptions {
    double offdiag_tol = Tolerances::offdiag;
    int max_sweeps = Tolerances::max_sweeps;
};

/// Cyclic complex Jacobi eigensolver. Throws NotHermitian if the input is
/// not Hermitian within `herm_tol`, ConvergenceFailure if the off-diagonal
/// mass does not fall below `offdiag_tol * max(1, ||M||_F)`.
EigenSystem eig_hermitian(const Matrix &m, double herm_tol = Tolerances::hermitian,
                          JacobiOptions opts = {});

double min_eigenvalue(const Matrix &hermitian);

/// Principal square root of a PSD operator. Eigenvalues in [-psd_tol, 0) are
/// clamped to zero; anything lower throws NotPSD.
HermitianMatrix psd_sqrt(const HermitianMatrix &m, double psd_tol = Tolerances::psd);
inline HermitianMatrix psd_sqrt(const DensityMatrix &rho,
                                double psd_tol = Tolerances::psd) {
    return psd_sqrt(rho.hermitian(), psd_tol);
}

struct BlochVector {
    double x = 0.0, y = 0.0, z = 0.0;

    [[nodiscard]] double dot(const BlochVector &o) const {
        return x * o.x + y * o.y + z * o.z;
    }
    [[nodiscard]] double norm() const;
    [[nodiscard]] BlochVector normalized() const;

    friend BlochVector operator+(BlochVector a, const BlochVector &b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend BlochVector operator-(BlochVector a, const BlochVector &b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend BlochVector operator*(double s, const BlochVector &a) {
        return {s * a.x, s * a.y, s * a.z};
    }
    friend BlochVector operator-(const BlochVector &a) { return {-a.x, -a.y, -a.z}; }
    friend bool operator==(const BlochVector &, const BlochVector &) = default;
};

const std::array<Matrix, 3> &pauli();

/// (I + beta . sigma) / 2. The caller decides whether the result is read as a
/// state (|beta| <= 1) or a rank-1 projector (|beta| = 1).
HermitianMatrix bloch_to_matrix(const BlochVector &beta);
/// beta = tr(R sigma). Throws DimensionMismatch unless dim == 2.
BlochVector matrix_to_bloch(const Matrix &r);

/// tr(rho P), clamped to [0, 1].
double born(const DensityMatrix &rho, const Projector &p);

/// mu * rho1 + (1 - mu) * rho2.
DensityMatrix mix(const DensityMatrix &rho1, const DensityMatrix &rho2, double mu);

} // namespace qjp
