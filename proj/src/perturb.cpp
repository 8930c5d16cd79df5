#include "tridiag/perturb.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tridiag/error.hpp"
#include "tridiag/spectrum.hpp"

namespace tridiag {

namespace {

// Deviations below this are denormal noise rather than data.
constexpr double kDeviationFloor = 1e-290;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

ConvergenceReport track_root_convergence(const SystemParams& p, std::span<const int> n_values) {
    for (std::size_t i = 1; i < n_values.size(); ++i) {
        if (n_values[i] <= n_values[i - 1]) {
            throw Error(ErrorCode::InvalidConfig, "n values must be strictly increasing");
        }
    }
    ConvergenceReport report;
    const std::vector<Seed> seeds = off_circle_seeds(p);
    if (!seeds.empty()) {
        report.side = seeds.front().side;
        report.seed = seeds.front().y;
        report.r_expected = std::abs(report.seed);
    }
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0, syy = 0.0;
    int m = 0;
    for (int n : n_values) {
        report.n_values.push_back(n);
        if (seeds.empty()) {
            report.deviations.emplace_back();
            report.status.emplace_back(to_string(ErrorCode::NoConvergence));
            report.sign_pattern.push_back(0);
            continue;
        }
        try {
            const SystemParams pn = p.with_n(n);
            const cplx z0 = report.seed;
            const cplx delta = special_root_deviation(pn, z0);
            const double dev = std::abs(delta);
            report.deviations.emplace_back(dev);
            report.status.emplace_back("ok");
            // r(z0 + delta) - r(z0) = sqrt(ac) delta (1 - 1/(z0 (z0 + delta)))
            const cplx dr = pn.sqrt_ac() * delta * (1.0 - 1.0 / (z0 * (z0 + delta)));
            report.sign_pattern.push_back(z0.imag() == 0.0 ? sign_of(dr.real()) : 0);
            if (dev > kDeviationFloor) {
                const double y = std::log(dev);
                st += n;
                sy += y;
                stt += static_cast<double>(n) * n;
                sty += n * y;
                syy += y * y;
                ++m;
            }
        } catch (const Error& err) {
            report.deviations.emplace_back();
            report.status.emplace_back(to_string(err.code()));
            report.sign_pattern.push_back(0);
        }
    }
    if (m >= 2) {
        const double sxx = stt - st * st / m;
        const double sxy = sty - st * sy / m;
        const double syy_c = syy - sy * sy / m;
        const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
        report.fitted_rate = std::exp(-slope);
        report.r_squared = syy_c > 0.0 ? slope * sxy / syy_c : 1.0;
    } else {
        report.fitted_rate = std::numeric_limits<double>::quiet_NaN();
        report.r_squared = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

int perturbation_sign(const SystemParams& p, int n) {
    if (std::abs(p.a + p.e) < tolerances::zero_denominator * p.a) {
        throw Error(ErrorCode::NotApplicable, "the deviation sign is defined only for a + e != 0");
    }
    const SystemParams pn = p.with_n(n);
    const RegimeLabel label = classify_regime(pn);
    if (label.special.empty()) {
        throw Error(ErrorCode::NotApplicable, "the regime has no special root",
                    {{"theorem", to_string(label.theorem)}, {"case", label.case_id}});
    }
    const QuadraticRoots q = quadratic_roots(pn);
    const SeedSide side = label.special.front();
    const cplx z0 = side == SeedSide::Plus ? q.y_plus : q.y_minus;
    if (z0.imag() != 0.0) {
        throw Error(ErrorCode::NotApplicable, "the special root is complex",
                    {{"theorem", to_string(label.theorem)}, {"case", label.case_id}});
    }
    if (!(std::abs(z0) > 1.0 + tolerances::circle)) {
        throw Error(ErrorCode::NotApplicable, "the asymptotic root lies on the unit circle", {{"y", z0.real()}});
    }
    const cplx delta = special_root_deviation(pn, z0);
    return sign_of(delta.real());
}

std::vector<MonotonicityReport> verify_branch_monotonicity(const SystemParams& p, int n, int samples_per_branch) {
    if (std::abs(p.a + p.e) < tolerances::zero_denominator * p.a) {
        throw Error(ErrorCode::ZeroDenominator, "B is undefined for a + e = 0", {{"a", p.a}, {"e", p.e}});
    }
    if (n < 2 || samples_per_branch < 2) {
        throw Error(ErrorCode::InvalidConfig, "need n >= 2 and at least 2 samples per branch",
                    {{"n", n}, {"samples", samples_per_branch}});
    }
    const double B = (p.e - p.a) / (p.e + p.a);
    const double width = std::numbers::pi / n;
    auto g = [&](double phi) { return std::cos(n * phi) / std::sin(n * phi) * std::sin(phi) - B * std::cos(phi); };
    std::vector<MonotonicityReport> out;
    for (int ell = 1; ell <= n; ++ell) {
        MonotonicityReport r;
        r.branch = ell;
        r.sample_count = samples_per_branch;
        r.B = B;
        const double left = (ell - 1) * width;
        double phi_prev = left + 0.5 * width / samples_per_branch;
        double g_prev = g(phi_prev);
        for (int i = 1; i < samples_per_branch; ++i) {
            const double phi = left + (i + 0.5) * width / samples_per_branch;
            const double gi = g(phi);
            if (gi > g_prev) r.violations.emplace_back(0.5 * (phi + phi_prev), (gi - g_prev) / (phi - phi_prev));
            phi_prev = phi;
            g_prev = gi;
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace tridiag
