#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tridiag/charpoly.hpp"
#include "tridiag/model.hpp"

namespace tridiag {

struct ConvergenceReport {
    std::vector<int> n_values;
    std::vector<std::optional<double>> deviations;  // |z1(n) - z0|, empty where the solve failed
    std::vector<std::string> status;                // "ok" or the error code name
    std::vector<int> sign_pattern;                  // sign of r1(n) - r0; 0 when complex or failed
    double fitted_rate = 0.0;                       // kappa: deviation ~ kappa^{-n}
    double r_squared = 0.0;
    double r_expected = 0.0;  // |z0|
    SeedSide side = SeedSide::Plus;
    cplx seed;
};

/// Follows the special root near the first off-circle quadratic root as n
/// grows. Entries without a special root are recorded as NoConvergence.
ConvergenceReport track_root_convergence(const SystemParams& p, std::span<const int> n_values);

/// Sign of z1 - z0 for the regime's leading real special root at size n.
/// Throws NotApplicable when that root is complex or absent, or a + e = 0.
int perturbation_sign(const SystemParams& p, int n);

struct MonotonicityReport {
    int branch = 0;
    int sample_count = 0;
    std::vector<std::pair<double, double>> violations;  // (phi, finite-difference slope)
    double B = 0.0;
};

/// Samples g(phi) = cot(n phi) sin(phi) - B cos(phi) on every branch and
/// lists the adjacent pairs where it increases. Throws ZeroDenominator when
/// a + e = 0.
std::vector<MonotonicityReport> verify_branch_monotonicity(const SystemParams& p, int n, int samples_per_branch);

}  // namespace tridiag
