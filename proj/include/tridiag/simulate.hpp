#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tridiag/model.hpp"
#include "tridiag/stability.hpp"

namespace tridiag {

struct SimConfig {
    SystemParams params;
    std::vector<double> h;   // offsets, length n+1
    std::vector<double> x0;  // initial positions, length n+1
    std::optional<std::vector<double>> v0;
    std::optional<double> alpha;
    std::optional<double> beta;
    double t_end = 1.0;
    double dt = 0.0;  // 0 selects 0.5 / rho
    int save_stride = 1;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> positions;
    std::vector<std::vector<double>> velocities;  // empty for first order
    std::vector<double> coherence_errors;
    double dt = 0.0;
    double dt_max = 0.0;

    bool second_order() const { return !velocities.empty(); }
};

/// Largest eigenvalue modulus of the system matrix: -L for first order, the
/// (x, x') augmentation for second order.
double spectral_radius(const SystemParams& p, std::optional<SecondOrderParams> so = std::nullopt);

/// 1.8 / rho, inside the real-axis stability interval of classical RK4.
double max_stable_step(const SystemParams& p, std::optional<SecondOrderParams> so = std::nullopt);

/// h_k = -k spacing, x0 = h + N(0, noise^2) from a fixed seed, v0 = 0 when
/// second-order parameters are given.
SimConfig default_config(const SystemParams& p, double t_end, std::optional<SecondOrderParams> so = std::nullopt,
                         double spacing = 1.0, double noise = 0.1, std::uint64_t seed = 20240607);

/// RK4 on x' = -L (x - h). Throws StepSizeTooLarge, DimensionMismatch.
Trajectory simulate_first_order(const SimConfig& cfg);

/// RK4 on x'' = -alpha L (x - h) - beta L x'. Throws StepSizeTooLarge,
/// DimensionMismatch, InvalidConfig when alpha, beta or v0 are missing.
Trajectory simulate_second_order(const SimConfig& cfg);

/// Distance of each snapshot from the coherent family: the L2 norm of x - h
/// (and of x') after removing the mean.
std::vector<double> coherence_error(const Trajectory& traj, std::span<const double> h);

/// Least-squares slope of log(coherence error) against time over the final
/// third of the run; zero errors are skipped.
double fit_decay_rate(const Trajectory& traj);

}  // namespace tridiag
