#include <doctest.h>

#include <cmath>
#include <limits>

#include "tridiag/error.hpp"
#include "tridiag/model.hpp"

using namespace tridiag;

namespace {

void check_matrix(const DenseMatrix& M, std::initializer_list<std::initializer_list<double>> expected) {
    REQUIRE(M.order() == expected.size());
    std::size_t i = 0;
    for (const auto& row : expected) {
        std::size_t j = 0;
        for (double v : row) {
            CHECK(M(i, j) == v);
            ++j;
        }
        ++i;
    }
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::DomainError;
}

}  // namespace

TEST_CASE("make_params derives tau") {
    CHECK(make_params(1, 1, 2, 0, 0, 10).tau == 1.0);
    auto p = make_params(1, 4, 5, 3, 1, 50);
    CHECK(p.tau == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.tau * p.tau * p.c == doctest::Approx(p.a).epsilon(1e-15));
}

TEST_CASE("make_params rejects degenerate input") {
    CHECK(code_of([] { make_params(0, 1, 1, 0, 0, 10); }) == ErrorCode::DegenerateCoupling);
    CHECK(code_of([] { make_params(1, -1, 1, 0, 0, 10); }) == ErrorCode::DegenerateCoupling);
    CHECK(code_of([] { make_params(1, 1, 1, 0, 0, 1); }) == ErrorCode::DimensionTooSmall);
    double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(code_of([&] { make_params(1, 1, nan, 0, 0, 5); }) == ErrorCode::DomainError);
}

TEST_CASE("is_decentralized") {
    CHECK(is_decentralized(make_params(1, 1, 2, 0.5, 0.5, 4)));
    CHECK_FALSE(is_decentralized(make_params(1, 1, 2, 0, 0, 4)));
    CHECK(is_decentralized(make_params(1, 2, 3, 1, 1, 4)));
    auto near = make_params(0.1, 0.2, 0.1 + 0.2, 0.1, 0.1, 4);
    CHECK(is_decentralized(near, 1e-12));
}

TEST_CASE("full matrix") {
    check_matrix(build_full_matrix(make_params(1, 1, 2, 3, 4, 2)), {{2, 0, 0}, {1, 0, 1}, {0, 5, 3}});
    check_matrix(build_full_matrix(make_params(1, 1, 0, 0, 0, 2)), {{0, 0, 0}, {1, 0, 1}, {0, 1, 0}});

    auto p = make_params(1, 1, 2, 0.5, 0.5, 3);
    auto A = build_full_matrix(p);
    CHECK(A(3, 2) == 1.5);
    CHECK(A(3, 3) == 0.5);
    for (std::size_t i = 0; i < A.order(); ++i) CHECK(A.row_sum(i) == 2.0);
}

TEST_CASE("full matrix is zero off the three diagonals") {
    auto A = build_full_matrix(make_params(1.3, 0.7, -2, 4, 0.25, 9));
    for (std::size_t i = 0; i < A.order(); ++i)
        for (std::size_t j = 0; j < A.order(); ++j)
            if (i > j + 1 || j > i + 1) CHECK(A(i, j) == 0.0);
    CHECK(A(0, 1) == 0.0);
}

TEST_CASE("reduced matrix") {
    check_matrix(build_reduced_matrix(make_params(1, 1, 2, 3, 4, 2)), {{0, 1}, {5, 3}});
    check_matrix(build_reduced_matrix(make_params(1, 1, 2, 0, -1, 3)), {{0, 1, 0}, {1, 0, 1}, {0, 0, 0}});
    check_matrix(build_reduced_matrix(make_params(4, 1, 0, 1, 0, 3)), {{0, 1, 0}, {4, 0, 1}, {0, 4, 1}});
}

TEST_CASE("reduced matrix is the trailing block of the full matrix") {
    auto p = make_params(0.6, 2.5, 1, -3, 1.75, 7);
    auto A = build_full_matrix(p);
    auto Q = build_reduced_matrix(p);
    for (std::size_t i = 0; i < Q.order(); ++i)
        for (std::size_t j = 0; j < Q.order(); ++j) CHECK(Q(i, j) == A(i + 1, j + 1));
}

TEST_CASE("laplacian") {
    check_matrix(build_laplacian(make_params(1, 1, 2, 0.5, 0.5, 2)), {{0, 0, 0}, {-1, 2, -1}, {0, -1.5, 1.5}});
    // D = diag(0, 2, 1)
    check_matrix(build_laplacian(make_params(1, 1, 0, 0, 0, 2)), {{0, 0, 0}, {-1, 2, -1}, {0, -1, 1}});

    auto p = make_params(1, 3, 4, 5, -2, 12);
    auto L = build_laplacian(p);
    for (std::size_t i = 0; i < L.order(); ++i) CHECK(L.row_sum(i) == doctest::Approx(0.0));

    auto minus_l = system_matrix(p, MatrixKind::Laplacian);
    for (std::size_t i = 0; i < L.order(); ++i)
        for (std::size_t j = 0; j < L.order(); ++j) CHECK(minus_l(i, j) == -L(i, j));
}
