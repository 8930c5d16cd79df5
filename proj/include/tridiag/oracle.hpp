#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tridiag/model.hpp"
#include "tridiag/spectrum.hpp"

namespace tridiag {

/// All eigenvalues of a real square matrix by Francis double-shift QR on the
/// upper Hessenberg form. Throws NoConvergence after 100 * order iterations.
std::vector<cplx> qr_eigenvalues(const DenseMatrix& M);

/// The selected matrix after the diagonal similarity diag(tau^k), which makes
/// the interior couplings equal to sqrt(ac).
DenseMatrix balanced_matrix(const SystemParams& p, MatrixKind kind);

/// qr_eigenvalues of the balanced matrix.
std::vector<cplx> oracle_eigenvalues(const SystemParams& p, MatrixKind kind);

/// Monic polynomial with coefficients held in multiple precision, so that
/// evaluation near clustered roots does not lose every significant digit.
class MpPoly {
public:
    /// Ascending coefficients; the last one must be 1.
    explicit MpPoly(std::span<const double> coeffs);
    MpPoly(const MpPoly& other);
    MpPoly& operator=(const MpPoly& other);
    MpPoly(MpPoly&&) noexcept;
    MpPoly& operator=(MpPoly&&) noexcept;
    ~MpPoly();

    int degree() const;
    long precision() const;
    /// Coefficients rounded to double, ascending.
    std::vector<double> coefficients() const;

    /// p(z) as mantissa * 2^exponent, safe from overflow.
    struct Scaled {
        cplx mantissa;
        long exponent = 0;
    };
    Scaled evaluate(cplx z) const;
    /// sum |c_i| |z|^i, same scaled form (real).
    Scaled magnitude(cplx z) const;
    /// p(z) / p'(z); zero at an exact root, infinite at a critical point.
    cplx newton_ratio(cplx z) const;

    struct Impl;

private:
    explicit MpPoly(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
    friend MpPoly charpoly(const SystemParams& p, MatrixKind kind);
};

/// Characteristic polynomial det(lambda I - M) of the selected matrix by the
/// tridiagonal determinant recurrence, carried out in multiple precision.
MpPoly charpoly(const SystemParams& p, MatrixKind kind);

/// Ascending monic coefficients of charpoly, rounded to double.
std::vector<double> charpoly_coeffs(const SystemParams& p, MatrixKind kind);

/// Simultaneous iteration with Aberth corrections, at most 500 sweeps.
std::vector<cplx> polynomial_eigenvalues(const MpPoly& poly);
std::vector<cplx> polynomial_eigenvalues(std::span<const double> coeffs);

struct ValidationReport {
    double max_pairing_error = 0.0;           // theory path vs QR
    std::optional<double> method_agreement;   // QR vs polynomial roots (n <= 400)
    int n = 0;
    MatrixKind kind = MatrixKind::Full;
    RegimeLabel regime;
};

inline constexpr int kPolynomialPathMaxN = 400;

/// Compares compute_spectrum with the QR oracle and, for n <= 400, QR with the
/// polynomial-root oracle. Errors of the sub-operations propagate.
ValidationReport cross_validate(const SystemParams& p, MatrixKind kind);

}  // namespace tridiag
