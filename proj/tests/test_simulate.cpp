#include <doctest.h>

#include <cmath>

#include "tridiag/error.hpp"
#include "tridiag/simulate.hpp"
#include "tridiag/stability.hpp"

using namespace tridiag;

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

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
    double m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

const SystemParams kStable = make_params(1, 1, 2, 0.5, 0.5, 20);

}  // namespace

TEST_CASE("starting at the offsets is a fixed point") {
    auto cfg = default_config(kStable, 10.0, std::nullopt, 1.0, 0.0);
    auto traj = simulate_first_order(cfg);
    for (const auto& x : traj.positions) CHECK(max_abs_diff(x, cfg.h) == 0.0);
    for (double err : traj.coherence_errors) CHECK(err == 0.0);
}

TEST_CASE("stable decentralized flock converges at the spectral rate") {
    auto verdict = first_order_verdict(kStable);
    REQUIRE(verdict.stable == Verdict::Stable);
    auto traj = simulate_first_order(default_config(kStable, 2000.0));
    CHECK(traj.coherence_errors.back() < 1e-3 * traj.coherence_errors.front());
    double rate = fit_decay_rate(traj);
    CHECK(rate < 0.0);
    CHECK(rate <= 0.9 * verdict.spectral_abscissa);
    CHECK(rate == doctest::Approx(verdict.spectral_abscissa).epsilon(0.05));
}

TEST_CASE("unstable decentralized flock drifts apart") {
    auto p = make_params(1, 3, 4, 5, -2, 6);
    auto verdict = first_order_verdict(p);
    REQUIRE(verdict.stable == Verdict::Unstable);
    auto traj = simulate_first_order(default_config(p, 1000.0));
    CHECK(traj.coherence_errors.back() > traj.coherence_errors.front());
    CHECK(fit_decay_rate(traj) == doctest::Approx(verdict.witness->real()).epsilon(0.02));
}

TEST_CASE("second order preserves a coherent flight") {
    auto cfg = default_config(kStable, 30.0, SecondOrderParams{1, 1}, 2.0, 0.0);
    const double x_bar = 5.0, v_bar = 0.75;
    for (double& x : cfg.x0) x += x_bar;
    cfg.v0 = std::vector<double>(cfg.x0.size(), v_bar);
    auto traj = simulate_second_order(cfg);
    REQUIRE(traj.second_order());
    for (double err : traj.coherence_errors) CHECK(err < 1e-12);
    const auto& last = traj.positions.back();
    for (std::size_t k = 0; k < last.size(); ++k) CHECK(last[k] == doctest::Approx(v_bar * 30.0 + x_bar + cfg.h[k]).epsilon(1e-12));
}

TEST_CASE("second order converges to a common velocity") {
    auto cfg = default_config(kStable, 3000.0, SecondOrderParams{1, 1});
    cfg.save_stride = 50;
    auto traj = simulate_second_order(cfg);
    CHECK(traj.coherence_errors.back() < 1e-3 * traj.coherence_errors.front());
    const auto& v = traj.velocities.back();
    CHECK(max_abs_diff(v, std::vector<double>(v.size(), v[0])) < 1e-4);
}

TEST_CASE("second order with negative alpha diverges") {
    auto cfg = default_config(kStable, 40.0, SecondOrderParams{-1, 1});
    auto traj = simulate_second_order(cfg);
    CHECK(traj.coherence_errors.back() > 1e3 * traj.coherence_errors.front());
}

TEST_CASE("coherence error") {
    Trajectory traj;
    std::vector<double> h{0, -1, -2, -3};
    traj.times = {0, 1, 2};
    traj.positions = {h, {5, 4, 3, 2}, {1, -1, -2, -3}};
    auto err = coherence_error(traj, h);
    REQUIRE(err.size() == 3);
    CHECK(err[0] == 0.0);
    CHECK(err[1] == 0.0);
    // deviation (1, 0, 0, 0) minus its mean
    CHECK(err[2] == doctest::Approx(std::sqrt(0.75)));

    std::vector<double> short_h{0, 1};
    CHECK(code_of([&] { coherence_error(traj, short_h); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("halving the step shows fourth-order convergence") {
    auto base = default_config(kStable, 5.0);
    const double dt_max = max_stable_step(kStable);
    std::vector<std::vector<double>> finals;
    for (double dt : {dt_max / 2, dt_max / 4, dt_max / 8}) {
        auto cfg = base;
        cfg.dt = dt;
        finals.push_back(simulate_first_order(cfg).positions.back());
    }
    double ratio = max_abs_diff(finals[0], finals[1]) / max_abs_diff(finals[1], finals[2]);
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("step size and configuration errors") {
    auto cfg = default_config(kStable, 5.0);
    cfg.dt = 1.01 * max_stable_step(kStable);
    CHECK(code_of([&] { simulate_first_order(cfg); }) == ErrorCode::StepSizeTooLarge);

    auto second = default_config(kStable, 5.0);
    CHECK(code_of([&] { simulate_second_order(second); }) == ErrorCode::InvalidConfig);

    auto bad = default_config(kStable, 5.0);
    bad.x0.pop_back();
    CHECK(code_of([&] { simulate_first_order(bad); }) == ErrorCode::DimensionMismatch);

    auto neg = default_config(kStable, -1.0);
    CHECK(code_of([&] { simulate_first_order(neg); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("default step and recorded times") {
    auto cfg = default_config(kStable, 3.0);
    cfg.save_stride = 7;
    auto traj = simulate_first_order(cfg);
    CHECK(traj.dt <= 0.5 / spectral_radius(kStable) + 1e-15);
    CHECK(traj.dt_max == doctest::Approx(1.8 / spectral_radius(kStable)));
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == 3.0);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
}
