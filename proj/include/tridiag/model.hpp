#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tridiag {

/// Scalars of the boundary-parameterized tridiagonal matrix
///
///     A = | b                     |
///         | a  0  c               |
///         |    a  0  c            |
///         |          ...          |
///         |             a+e   d   |
///
/// of order n+1. `tau` = sqrt(a/c) is derived once at construction.
struct SystemParams {
    double a = 1.0;
    double c = 1.0;
    double b = 0.0;
    double d = 0.0;
    double e = 0.0;
    int n = 2;
    double tau = 1.0;

    double sqrt_ac() const;
    /// 2 sqrt(ac), the half-width of the bulk interval.
    double bulk_edge() const { return 2.0 * sqrt_ac(); }
    SystemParams with_n(int new_n) const;
};

/// Validates and builds parameters. Throws DegenerateCoupling for a <= 0 or
/// c <= 0, DimensionTooSmall for n < 2 and DomainError for non-finite input.
SystemParams make_params(double a, double c, double b, double d, double e, int n);

inline constexpr double kDecentralizedSlack = 1e-12;  // slack used internally for computed parameters

/// Exact check of b == a + c and c == e + d.
bool is_decentralized(const SystemParams& p);
/// Same check with an absolute-plus-relative slack for computed parameters.
bool is_decentralized(const SystemParams& p, double tol);

/// Square row-major matrix.
class DenseMatrix {
public:
    explicit DenseMatrix(std::size_t order);

    std::size_t order() const { return order_; }
    double& operator()(std::size_t i, std::size_t j) { return entries_[i * order_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * order_ + j]; }
    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * order_, order_}; }
    std::span<const double> entries() const { return entries_; }

    double frobenius_norm() const;
    double row_sum(std::size_t i) const;

private:
    std::size_t order_;
    std::vector<double> entries_;
};

/// Which matrix a spectral computation refers to. `Laplacian` denotes the
/// consensus system matrix -L = A - D, whose spectrum decides stability;
/// build_laplacian itself returns L.
enum class MatrixKind { Full, Reduced, Laplacian };

const char* to_string(MatrixKind kind);

DenseMatrix build_full_matrix(const SystemParams& p);
/// Trailing n x n block of A (first row and column removed).
DenseMatrix build_reduced_matrix(const SystemParams& p);
/// L = D - A with D the diagonal of row sums of A.
DenseMatrix build_laplacian(const SystemParams& p);
/// A, Q or -L depending on `kind`.
DenseMatrix system_matrix(const SystemParams& p, MatrixKind kind);

}  // namespace tridiag
