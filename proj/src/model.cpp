#include "tridiag/model.hpp"

#include <cmath>
#include <string>

#include "tridiag/error.hpp"

namespace tridiag {

double SystemParams::sqrt_ac() const { return std::sqrt(a * c); }

SystemParams SystemParams::with_n(int new_n) const {
    return make_params(a, c, b, d, e, new_n);
}

SystemParams make_params(double a, double c, double b, double d, double e, int n) {
    for (double v : {a, c, b, d, e}) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::DomainError, "parameters must be finite");
        }
    }
    if (a <= 0.0 || c <= 0.0) {
        throw Error(ErrorCode::DegenerateCoupling,
                    "couplings a and c must be positive (got a=" + std::to_string(a) +
                        ", c=" + std::to_string(c) + ")",
                    {{"a", a}, {"c", c}});
    }
    if (n < 2) {
        throw Error(ErrorCode::DimensionTooSmall, "n must be at least 2 (got " + std::to_string(n) + ")",
                    {{"n", n}});
    }
    SystemParams p;
    p.a = a;
    p.c = c;
    p.b = b;
    p.d = d;
    p.e = e;
    p.n = n;
    p.tau = std::sqrt(a / c);
    return p;
}

bool is_decentralized(const SystemParams& p) {
    return p.b == p.a + p.c && p.c == p.e + p.d;
}

bool is_decentralized(const SystemParams& p, double tol) {
    const double scale = 1.0 + std::abs(p.a) + std::abs(p.c);
    return std::abs(p.b - (p.a + p.c)) <= tol * scale && std::abs(p.c - (p.e + p.d)) <= tol * scale;
}

DenseMatrix::DenseMatrix(std::size_t order) : order_(order), entries_(order * order, 0.0) {
    if (order == 0) {
        throw Error(ErrorCode::DimensionMismatch, "matrix order must be at least 1");
    }
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : entries_) s += v * v;
    return std::sqrt(s);
}

double DenseMatrix::row_sum(std::size_t i) const {
    double s = 0.0;
    for (double v : row(i)) s += v;
    return s;
}

const char* to_string(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::Full: return "full";
        case MatrixKind::Reduced: return "reduced";
        case MatrixKind::Laplacian: return "laplacian";
    }
    return "unknown";
}

DenseMatrix build_full_matrix(const SystemParams& p) {
    const std::size_t m = static_cast<std::size_t>(p.n) + 1;
    DenseMatrix A(m);
    A(0, 0) = p.b;
    for (std::size_t k = 1; k + 1 < m; ++k) {
        A(k, k - 1) = p.a;
        A(k, k + 1) = p.c;
    }
    A(m - 1, m - 2) = p.a + p.e;
    A(m - 1, m - 1) = p.d;
    return A;
}

DenseMatrix build_reduced_matrix(const SystemParams& p) {
    const std::size_t m = static_cast<std::size_t>(p.n);
    DenseMatrix Q(m);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        Q(k, k + 1) = p.c;
        if (k > 0) Q(k, k - 1) = p.a;
    }
    Q(m - 1, m - 2) = p.a + p.e;
    Q(m - 1, m - 1) = p.d;
    return Q;
}

DenseMatrix build_laplacian(const SystemParams& p) {
    const DenseMatrix A = build_full_matrix(p);
    const std::size_t m = A.order();
    DenseMatrix L(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double degree = A.row_sum(i);
        for (std::size_t j = 0; j < m; ++j) {
            L(i, j) = (i == j ? degree : 0.0) - A(i, j);
        }
    }
    return L;
}

DenseMatrix system_matrix(const SystemParams& p, MatrixKind kind) {
    switch (kind) {
        case MatrixKind::Full: return build_full_matrix(p);
        case MatrixKind::Reduced: return build_reduced_matrix(p);
        case MatrixKind::Laplacian: {
            DenseMatrix M = build_laplacian(p);
            for (std::size_t i = 0; i < M.order(); ++i)
                for (std::size_t j = 0; j < M.order(); ++j) M(i, j) = -M(i, j);
            return M;
        }
    }
    return build_full_matrix(p);
}

}  // namespace tridiag
