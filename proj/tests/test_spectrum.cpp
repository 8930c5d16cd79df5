#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tridiag/error.hpp"
#include "tridiag/spectrum.hpp"

using namespace tridiag;
using std::numbers::pi;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::DomainError;
}

std::vector<double> sorted_real(const std::vector<cplx>& zs) {
    std::vector<double> out;
    for (cplx z : zs) out.push_back(z.real());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<cplx> to_cplx(std::span<const double> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("classify regimes of the trailing-case family") {
    auto b = classify_regime(make_params(1, 1, 2, 2.95, -2.25, 100));
    CHECK(b.theorem == Theorem::T3);
    CHECK(b.case_id == "2b");
    auto c = classify_regime(make_params(1, 1, 2, 3.05, -2.25, 100));
    CHECK(c.theorem == Theorem::T3);
    CHECK(c.case_id == "2c");
    auto t = classify_regime(make_params(1, 1, 2, 3.3, -2.25, 100));
    CHECK(t.theorem == Theorem::T3);
    CHECK(t.case_id == "3");
}

TEST_CASE("classify decentralized cell") {
    auto label = classify_regime(make_params(1, 1, 2, 0.5, 0.5, 10));
    CHECK(label.theorem == Theorem::T1);
    CHECK(label.case_id == "2");
    REQUIRE(label.cell);
    CHECK(label.cell->row == 1);
    CHECK(label.cell->column == 1);
    CHECK(label.cell->predicted.empty());
    CHECK(label.special.empty());

    auto none = classify_regime(make_params(1, 1, 2, 0, 0, 10));
    CHECK_FALSE(none.cell);
    CHECK(classify_regime(make_params(1, 1, 2, 3, -1, 10)).theorem == Theorem::P31);
}

TEST_CASE("classification boundaries") {
    // threshold (a - e) sqrt(c/a) = 1 for a = c = 1, e = 0
    auto at = classify_regime(make_params(1, 1, 2, 1, 0, 10));
    CHECK(at.on_boundary);
    auto inside = classify_regime(make_params(1, 1, 2, 0.5, 0, 10));
    CHECK_FALSE(inside.on_boundary);
    CHECK(inside.case_id == "2");
}

TEST_CASE("closed-form spectra of the full matrix") {
    auto s0 = compute_spectrum(make_params(1, 1, 2, 0, 0, 10), MatrixKind::Full);
    REQUIRE(s0.leader);
    CHECK(*s0.leader == 2.0);
    auto ev0 = s0.eigenvalues();
    REQUIRE(ev0.size() == 11);
    std::vector<cplx> expect0{2.0};
    for (int k = 1; k <= 10; ++k) expect0.push_back(2 * std::cos(k * pi / 11));
    auto got0 = sorted_real(ev0), want0 = sorted_real(expect0);
    for (std::size_t i = 0; i < got0.size(); ++i) CHECK(got0[i] == doctest::Approx(want0[i]).epsilon(1e-12));

    auto s1 = compute_spectrum(make_params(1, 1, 2, 1, 0, 10), MatrixKind::Full);
    std::vector<cplx> expect1{2.0};
    for (int k = 1; k <= 10; ++k) expect1.push_back(2 * std::cos((2 * k - 1) * pi / 21));
    auto got1 = sorted_real(s1.eigenvalues()), want1 = sorted_real(expect1);
    REQUIRE(got1.size() == want1.size());
    for (std::size_t i = 0; i < got1.size(); ++i) CHECK(got1[i] == doctest::Approx(want1[i]).epsilon(1e-12));
}

TEST_CASE("decentralized spectrum with both special eigenvalues") {
    auto p = make_params(1, 2, 3, -1, 3, 60);
    auto s = compute_spectrum(p, MatrixKind::Full);
    CHECK(s.eigenvalues().size() == 61);
    CHECK(s.bulk.size() == 58);
    REQUIRE(s.special.size() == 2);
    std::vector<double> special;
    for (const auto& r : s.special) special.push_back(r.eigenvalue.real());
    std::sort(special.begin(), special.end());
    // -(ac/e + e) and a + c
    CHECK(special[0] == doctest::Approx(-(2.0 / 3 + 3)).epsilon(1e-9));
    CHECK(special[1] == doctest::Approx(3.0).epsilon(1e-9));
    for (const auto& r : s.bulk) CHECK(std::abs(r.eigenvalue) <= 2 * std::sqrt(2.0));
}

TEST_CASE("decentralized spectrum at e = a has only a + c") {
    auto p = make_params(1, 2, 3, 1, 1, 60);
    auto s = compute_spectrum(p, MatrixKind::Full);
    CHECK(s.eigenvalues().size() == 61);
    REQUIRE(s.special.size() == 1);
    CHECK(s.special[0].eigenvalue.real() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s.bulk.size() == 59);
}

TEST_CASE("reduced and laplacian kinds") {
    auto p = make_params(1, 1, 2, 0, 1, 30);
    auto q = compute_spectrum(p, MatrixKind::Reduced);
    CHECK_FALSE(q.leader);
    CHECK(q.eigenvalues().size() == 30);

    auto l = compute_spectrum(p, MatrixKind::Laplacian);
    auto got = sorted_real(l.eigenvalues());
    std::vector<cplx> want{0.0};
    for (int k = 1; k <= 30; ++k) want.push_back(2 * std::cos((2 * k - 1) * pi / 60) - 2);
    auto expect = sorted_real(want);
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-12).scale(1));
}

TEST_CASE("bulk and special eigenvalue ranges") {
    for (auto p : {make_params(1, 1, 2, 3.3, -2.25, 100), make_params(0.5, 2, 2.5, 1.5, 2.5, 80),
                   make_params(2, 1, 3, -4, 0.5, 70)}) {
        auto s = compute_spectrum(p, MatrixKind::Reduced);
        for (const auto& r : s.bulk) CHECK(std::abs(r.eigenvalue) <= p.bulk_edge() * (1 + 1e-15));
        for (const auto& r : s.special) {
            CHECK(std::abs(r.y) > 1.0);
            CHECK(r.eigenvalue.imag() == 0.0);
            CHECK(std::abs(r.eigenvalue) >= p.bulk_edge());
        }
    }
}

TEST_CASE("special eigenvalues of the e > a regime stay inside the asymptotic bounds") {
    auto p = make_params(1, 1, 2, 0, 2, 120);
    auto label = classify_regime(p);
    CHECK(label.theorem == Theorem::T2);
    CHECK(label.case_id == "2");
    auto s = compute_spectrum(p, MatrixKind::Reduced);
    REQUIRE(s.special.size() == 2);
    double outer = std::sqrt(p.a * p.c) * (p.e / p.a + p.a / p.e);
    for (const auto& r : s.special) {
        double v = r.eigenvalue.real();
        if (v > 0) {
            CHECK(v >= p.bulk_edge());
            CHECK(v < outer);
        } else {
            CHECK(v <= -p.bulk_edge());
            CHECK(v > -outer);
        }
    }
}

TEST_CASE("spectrum is closed under conjugation") {
    auto s = compute_spectrum(make_params(1, 1, 2, 2.95, -2.25, 100), MatrixKind::Full);
    auto ev = s.eigenvalues();
    int complex_count = 0;
    for (cplx z : ev) {
        if (z.imag() == 0.0) continue;
        ++complex_count;
        double best = 1e300;
        for (cplx w : ev) best = std::min(best, std::abs(w - std::conj(z)));
        CHECK(best < 1e-12);
    }
    CHECK(complex_count == 2);
}

TEST_CASE("a + e = 0 closed form") {
    auto p = make_params(1, 1, 2, 3, -1, 60);
    auto s = compute_spectrum(p, MatrixKind::Reduced);
    REQUIRE(s.bulk.size() == 59);
    for (const auto& r : s.bulk) CHECK(r.eigenvalue == doctest::Approx(2 * std::cos(pi * (r.ell - 1) / 60)).epsilon(1e-12));
}

TEST_CASE("eigenvector from a unit-circle root") {
    const int n = 12;
    auto p = make_params(1, 1, 2, 0, 0, n);
    auto Q = build_reduced_matrix(p);
    auto pair = eigenvector_for(p, std::polar(1.0, pi / (n + 1)));
    CHECK(pair.eigenvalue.real() == doctest::Approx(2 * std::cos(pi / (n + 1))));
    CHECK(residual(Q, pair.eigenvalue, pair.vector) < 1e-10);
    // v_k proportional to sin(k pi/(n+1))
    cplx scale = pair.vector[0] / std::sin(pi / (n + 1));
    for (int k = 1; k <= n; ++k) CHECK(std::abs(pair.vector[k - 1] - scale * std::sin(k * pi / (n + 1))) < 1e-12);
}

TEST_CASE("eigenvector growth for tau = 2") {
    const int n = 20;
    auto p = make_params(4, 1, 5, 0, 0, n);
    CHECK(p.tau == 2.0);
    double theta = pi / (n + 1);
    auto pair = eigenvector_for(p, std::polar(1.0, theta));
    CHECK(residual(build_reduced_matrix(p), pair.eigenvalue, pair.vector) < 1e-10);
    for (int k = 1; k <= n; ++k) {
        double ratio = std::abs(pair.vector[k - 1]) / (std::pow(2.0, k) * std::sin(k * theta));
        double ref = std::abs(pair.vector[n - 1]) / (std::pow(2.0, n) * std::sin(n * theta));
        CHECK(ratio == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("eigenvectors of computed roots pass the residual test") {
    auto p = make_params(1, 1, 2, 3.3, -2.25, 60);
    auto Q = build_reduced_matrix(p);
    auto s = compute_spectrum(p, MatrixKind::Reduced);
    for (const auto& r : s.bulk) {
        auto pair = eigenvector_for(p, std::polar(1.0, r.phi));
        CHECK(residual(Q, pair.eigenvalue, pair.vector) < 1e-8);
    }
    for (const auto& r : s.special) {
        auto pair = eigenvector_for(p, r.y);
        CHECK(residual(Q, pair.eigenvalue, pair.vector) < 1e-8);
    }
}

TEST_CASE("eigenvector errors") {
    auto p = make_params(1, 1, 2, 0, 0, 5);
    CHECK(code_of([&] { eigenvector_for(p, 1.0); }) == ErrorCode::DegenerateRoot);
    CHECK(code_of([&] { eigenvector_for(p, -1.0); }) == ErrorCode::DegenerateRoot);
}

TEST_CASE("leader eigenvector") {
    auto p = make_params(1, 1, 2, 0.5, 0.5, 5);
    auto pair = leader_eigenvector(p);
    REQUIRE(pair.vector.size() == 6);
    for (cplx v : pair.vector) CHECK(v == pair.vector[0]);
    CHECK(residual(build_full_matrix(p), 2.0, pair.vector) == 0.0);

    auto q = make_params(1, 1, 3, 0, 0, 4);
    auto lead = leader_eigenvector(q);
    CHECK(lead.eigenvalue.real() == 3.0);
    CHECK(residual(build_full_matrix(q), 3.0, lead.vector) < 1e-10);
    CHECK(std::abs(lead.vector[1] - lead.vector[0]) > 1e-3);

    auto r = make_params(0.5, 2, -3, 1.2, 0.7, 30);
    auto far = leader_eigenvector(r);
    CHECK(residual(build_full_matrix(r), -3.0, far.vector) < 1e-10);

    CHECK(code_of([] { leader_eigenvector(make_params(1, 1, 2, 0, 0, 4)); }) == ErrorCode::DiscriminantCollapse);
}

TEST_CASE("residual") {
    DenseMatrix I(3);
    for (std::size_t i = 0; i < 3; ++i) I(i, i) = 1.0;
    std::vector<cplx> v{1.0, cplx{2, -1}, 3.0};
    CHECK(residual(I, 1.0, v) == 0.0);

    auto Q = build_reduced_matrix(make_params(1, 1, 2, 0, 0, 3));
    std::vector<double> w{1.0, std::sqrt(2.0), 1.0};
    CHECK(residual(Q, std::sqrt(2.0), to_cplx(w)) < 1e-15);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    DenseMatrix M(4);
    std::vector<cplx> x(4);
    for (std::size_t i = 0; i < 4; ++i) {
        x[i] = u(rng);
        for (std::size_t j = 0; j < 4; ++j) M(i, j) = u(rng);
    }
    CHECK(residual(M, 0.0, x) > 0.0);

    std::vector<cplx> short_v(2, 1.0);
    CHECK(code_of([&] { residual(M, 0.0, short_v); }) == ErrorCode::DimensionMismatch);
}
