#include "tridiag/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tridiag/error.hpp"
#include "tridiag/oracle.hpp"

namespace tridiag {

namespace {

// L stored by its three diagonals.
struct Band {
    std::vector<double> lower, diag, upper;

    explicit Band(const DenseMatrix& L) : lower(L.order()), diag(L.order()), upper(L.order()) {
        const std::size_t n = L.order();
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] = L(i, i);
            if (i > 0) lower[i] = L(i, i - 1);
            if (i + 1 < n) upper[i] = L(i, i + 1);
        }
    }

    // out = -L v
    void apply_negative(std::span<const double> v, std::span<double> out) const {
        const std::size_t n = diag.size();
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * v[i];
            if (i > 0) s += lower[i] * v[i - 1];
            if (i + 1 < n) s += upper[i] * v[i + 1];
            out[i] = -s;
        }
    }
};

void check_length(std::span<const double> v, std::size_t expected, const char* name) {
    if (v.size() != expected) {
        throw Error(ErrorCode::DimensionMismatch, std::string(name) + " must have length n+1",
                    {{"field", name}, {"expected", expected}, {"length", v.size()}});
    }
}

double rms_deviation(std::span<const double> v, std::span<const double> offset) {
    double mean = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) mean += v[i] - (offset.empty() ? 0.0 : offset[i]);
    mean /= static_cast<double>(v.size());
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = v[i] - (offset.empty() ? 0.0 : offset[i]) - mean;
        s += r * r;
    }
    return s;
}

struct StepPlan {
    int steps;
    double dt;
};

StepPlan plan_steps(const SimConfig& cfg, double dt_max, double rho) {
    if (!(cfg.t_end > 0.0)) throw Error(ErrorCode::InvalidConfig, "t_end must be positive", {{"t_end", cfg.t_end}});
    if (cfg.save_stride < 1) throw Error(ErrorCode::InvalidConfig, "save stride must be >= 1");
    double dt = cfg.dt > 0.0 ? cfg.dt : (rho > 0.0 ? 0.5 / rho : cfg.t_end);
    if (dt > dt_max) {
        throw Error(ErrorCode::StepSizeTooLarge, "time step exceeds the RK4 stability bound",
                    {{"dt", dt}, {"dt_max", dt_max}});
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(cfg.t_end / dt - 1e-9)));
    return {steps, cfg.t_end / steps};
}

}  // namespace

double spectral_radius(const SystemParams& p, std::optional<SecondOrderParams> so) {
    const std::vector<cplx> lambdas = oracle_eigenvalues(p, MatrixKind::Laplacian);
    std::vector<cplx> modes = so ? second_order_eigenvalues(lambdas, *so) : lambdas;
    double rho = 0.0;
    for (const cplx& v : modes) rho = std::max(rho, std::abs(v));
    return rho;
}

double max_stable_step(const SystemParams& p, std::optional<SecondOrderParams> so) {
    const double rho = spectral_radius(p, so);
    return rho > 0.0 ? 1.8 / rho : std::numeric_limits<double>::infinity();
}

SimConfig default_config(const SystemParams& p, double t_end, std::optional<SecondOrderParams> so, double spacing,
                         double noise, std::uint64_t seed) {
    SimConfig cfg;
    cfg.params = p;
    cfg.t_end = t_end;
    const std::size_t size = static_cast<std::size_t>(p.n) + 1;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, noise);
    for (std::size_t k = 0; k < size; ++k) {
        cfg.h.push_back(-static_cast<double>(k) * spacing);
        cfg.x0.push_back(cfg.h.back() + (noise > 0.0 ? jitter(rng) : 0.0));
    }
    if (so) {
        cfg.alpha = so->alpha;
        cfg.beta = so->beta;
        cfg.v0 = std::vector<double>(size, 0.0);
    }
    return cfg;
}

Trajectory simulate_first_order(const SimConfig& cfg) {
    const SystemParams& p = cfg.params;
    const std::size_t size = static_cast<std::size_t>(p.n) + 1;
    check_length(cfg.h, size, "h");
    check_length(cfg.x0, size, "x0");
    const double rho = spectral_radius(p);
    Trajectory traj;
    traj.dt_max = rho > 0.0 ? 1.8 / rho : std::numeric_limits<double>::infinity();
    const StepPlan plan = plan_steps(cfg, traj.dt_max, rho);
    traj.dt = plan.dt;

    const Band L(build_laplacian(p));
    // Work in z = x - h, where the system is z' = -L z.
    std::vector<double> z(size), k1(size), k2(size), k3(size), k4(size), tmp(size);
    for (std::size_t i = 0; i < size; ++i) z[i] = cfg.x0[i] - cfg.h[i];
    auto record = [&](double t) {
        std::vector<double> x(size);
        for (std::size_t i = 0; i < size; ++i) x[i] = z[i] + cfg.h[i];
        traj.times.push_back(t);
        traj.positions.push_back(std::move(x));
    };
    record(0.0);
    const double dt = plan.dt;
    for (int s = 1; s <= plan.steps; ++s) {
        L.apply_negative(z, k1);
        for (std::size_t i = 0; i < size; ++i) tmp[i] = z[i] + 0.5 * dt * k1[i];
        L.apply_negative(tmp, k2);
        for (std::size_t i = 0; i < size; ++i) tmp[i] = z[i] + 0.5 * dt * k2[i];
        L.apply_negative(tmp, k3);
        for (std::size_t i = 0; i < size; ++i) tmp[i] = z[i] + dt * k3[i];
        L.apply_negative(tmp, k4);
        for (std::size_t i = 0; i < size; ++i) z[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (s % cfg.save_stride == 0 || s == plan.steps) record(s == plan.steps ? cfg.t_end : s * dt);
    }
    traj.coherence_errors = coherence_error(traj, cfg.h);
    return traj;
}

Trajectory simulate_second_order(const SimConfig& cfg) {
    const SystemParams& p = cfg.params;
    const std::size_t size = static_cast<std::size_t>(p.n) + 1;
    if (!cfg.alpha || !cfg.beta || !cfg.v0) {
        throw Error(ErrorCode::InvalidConfig, "second-order simulation needs alpha, beta and v0");
    }
    check_length(cfg.h, size, "h");
    check_length(cfg.x0, size, "x0");
    check_length(*cfg.v0, size, "v0");
    const double alpha = *cfg.alpha, beta = *cfg.beta;
    const double rho = spectral_radius(p, SecondOrderParams{alpha, beta});
    Trajectory traj;
    traj.dt_max = rho > 0.0 ? 1.8 / rho : std::numeric_limits<double>::infinity();
    const StepPlan plan = plan_steps(cfg, traj.dt_max, rho);
    traj.dt = plan.dt;

    const Band L(build_laplacian(p));
    std::vector<double> z(size), v(*cfg.v0);
    for (std::size_t i = 0; i < size; ++i) z[i] = cfg.x0[i] - cfg.h[i];
    std::vector<double> lz(size), lv(size);
    // (z, v)' = (v, -alpha L z - beta L v)
    auto deriv = [&](std::span<const double> zz, std::span<const double> vv, std::span<double> dz, std::span<double> dv) {
        L.apply_negative(zz, lz);
        L.apply_negative(vv, lv);
        for (std::size_t i = 0; i < size; ++i) {
            dz[i] = vv[i];
            dv[i] = alpha * lz[i] + beta * lv[i];
        }
    };
    std::vector<double> kz[4], kv[4];
    for (int k = 0; k < 4; ++k) {
        kz[k].resize(size);
        kv[k].resize(size);
    }
    std::vector<double> tz(size), tv(size);
    auto record = [&](double t) {
        std::vector<double> x(size);
        for (std::size_t i = 0; i < size; ++i) x[i] = z[i] + cfg.h[i];
        traj.times.push_back(t);
        traj.positions.push_back(std::move(x));
        traj.velocities.push_back(v);
    };
    record(0.0);
    const double dt = plan.dt;
    const double weights[3] = {0.5, 0.5, 1.0};
    for (int s = 1; s <= plan.steps; ++s) {
        deriv(z, v, kz[0], kv[0]);
        for (int k = 1; k < 4; ++k) {
            for (std::size_t i = 0; i < size; ++i) {
                tz[i] = z[i] + weights[k - 1] * dt * kz[k - 1][i];
                tv[i] = v[i] + weights[k - 1] * dt * kv[k - 1][i];
            }
            deriv(tz, tv, kz[k], kv[k]);
        }
        for (std::size_t i = 0; i < size; ++i) {
            z[i] += dt / 6.0 * (kz[0][i] + 2.0 * kz[1][i] + 2.0 * kz[2][i] + kz[3][i]);
            v[i] += dt / 6.0 * (kv[0][i] + 2.0 * kv[1][i] + 2.0 * kv[2][i] + kv[3][i]);
        }
        if (s % cfg.save_stride == 0 || s == plan.steps) record(s == plan.steps ? cfg.t_end : s * dt);
    }
    traj.coherence_errors = coherence_error(traj, cfg.h);
    return traj;
}

std::vector<double> coherence_error(const Trajectory& traj, std::span<const double> h) {
    std::vector<double> out;
    out.reserve(traj.positions.size());
    for (std::size_t s = 0; s < traj.positions.size(); ++s) {
        check_length(h, traj.positions[s].size(), "h");
        double sq = rms_deviation(traj.positions[s], h);
        if (traj.second_order()) sq += rms_deviation(traj.velocities[s], {});
        out.push_back(std::sqrt(sq));
    }
    return out;
}

double fit_decay_rate(const Trajectory& traj) {
    const std::size_t count = traj.times.size();
    const std::size_t start = count - count / 3;
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    int m = 0;
    for (std::size_t i = start; i < count; ++i) {
        const double err = traj.coherence_errors[i];
        if (!(err > 0.0) || !std::isfinite(err)) continue;
        const double t = traj.times[i], y = std::log(err);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
        ++m;
    }
    if (m < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = m * stt - st * st;
    return denom != 0.0 ? (m * sty - st * sy) / denom : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace tridiag
