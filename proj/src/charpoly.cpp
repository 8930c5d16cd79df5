#include "tridiag/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tridiag/error.hpp"

namespace tridiag {

namespace {

constexpr double kPi = std::numbers::pi;

cplx ipow(cplx base, long long exponent) {
    cplx result{1.0, 0.0};
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

struct Quadratics {
    double a, dt, e;
    cplx f(cplx y) const { return (a * y - dt) * y - e; }
    cplx df(cplx y) const { return 2.0 * a * y - dt; }
    cplx q(cplx y) const { return (e * y + dt) * y - a; }
    cplx dq(cplx y) const { return 2.0 * e * y + dt; }
    double f_abs(double m) const { return a * m * m + std::abs(dt) * m + std::abs(e); }
    double q_abs(double m) const { return std::abs(e) * m * m + std::abs(dt) * m + a; }
};

Quadratics quadratics(const SystemParams& p) { return {p.a, p.d * p.tau, p.e}; }

// G(y) = f(y) + q(y) y^{-2n} and its derivative; valid for |y| >= 1.
struct ScaledValue {
    cplx g;
    cplx dg;
};

ScaledValue scaled_polynomial(const SystemParams& p, cplx y) {
    const Quadratics Q = quadratics(p);
    const long long two_n = 2LL * p.n;
    const cplx w = ipow(1.0 / y, two_n);
    const cplx qy = Q.q(y);
    return {Q.f(y) + qy * w, Q.df(y) + Q.dq(y) * w - static_cast<double>(two_n) * qy * w / y};
}

bool is_closed_form(const SystemParams& p) {
    return std::abs(p.e + p.a) < tolerances::zero_denominator * p.a;
}

double cotangent_form(const SystemParams& p, double phi) {
    const double s = std::sin(p.n * phi);
    const double k0 = p.d * p.tau / (p.e + p.a);
    const double B = (p.e - p.a) / (p.e + p.a);
    return std::cos(p.n * phi) / s * std::sin(phi) - k0 - B * std::cos(phi);
}

int samples_per_branch(const SystemParams& p) {
    const double B = std::abs((p.e - p.a) / (p.e + p.a));
    return std::max(32, 8 * static_cast<int>(std::ceil(B)));
}

template <class F>
double polish_bracket(F&& g, double lo, double hi, double g_lo, double g_hi) {
    // Bisection down to the coarse width, then Illinois false-position steps.
    while (hi - lo > tolerances::bisect_width) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = g(mid);
        if (g_mid == 0.0) return mid;
        if ((g_mid > 0) == (g_lo > 0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    // Illinois false position: the retained endpoint's value is halved so the
    // bracket keeps shrinking from both sides.
    int side = 0;
    for (int it = 0; it < 200 && hi - lo > tolerances::phi; ++it) {
        double x = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double gx = g(x);
        if (gx == 0.0) return x;
        if ((gx > 0) == (g_lo > 0)) {
            lo = x;
            g_lo = gx;
            if (side == -1) g_hi *= 0.5;
            side = -1;
        } else {
            hi = x;
            g_hi = gx;
            if (side == 1) g_lo *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (lo + hi);
}

// Real roots of G on (1, Y] and [-Y, -1): log-spaced sign-change scan.
std::vector<double> scan_real_axis(const SystemParams& p, double y_max) {
    std::vector<double> roots;
    constexpr int kSamples = 4000;
    const double lo_exp = -12.0;
    const double hi_exp = std::log10(std::max(y_max - 1.0, 1e-6));
    for (double sign : {1.0, -1.0}) {
        auto g = [&](double t) { return scaled_polynomial(p, cplx{sign * (1.0 + t), 0.0}).g.real(); };
        double t_prev = std::pow(10.0, lo_exp);
        double g_prev = g(t_prev);
        for (int i = 1; i <= kSamples; ++i) {
            const double t = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / kSamples);
            const double gt = g(t);
            if (g_prev == 0.0) {
                roots.push_back(sign * (1.0 + t_prev));
            } else if ((gt > 0) != (g_prev > 0) && gt != 0.0) {
                double lo = t_prev, hi = t, g_lo = g_prev;
                for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = g(mid);
                    if ((gm > 0) == (g_lo > 0)) {
                        lo = mid;
                        g_lo = gm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push_back(sign * (1.0 + 0.5 * (lo + hi)));
            }
            t_prev = t;
            g_prev = gt;
        }
    }
    return roots;
}

}  // namespace

const char* to_string(SeedSide side) {
    switch (side) {
        case SeedSide::Plus: return "plus";
        case SeedSide::Minus: return "minus";
        case SeedSide::ClosedForm: return "closed_form";
        case SeedSide::RealScan: return "real_scan";
    }
    return "unknown";
}

cplx eval_polynomial(const SystemParams& p, cplx y) {
    if (y == cplx{0.0, 0.0}) {
        throw Error(ErrorCode::DomainError, "characteristic polynomial is evaluated at y != 0");
    }
    const Quadratics Q = quadratics(p);
    return Q.f(y) * ipow(y, 2LL * p.n) + Q.q(y);
}

double polynomial_residual(const SystemParams& p, cplx y) {
    if (y == cplx{0.0, 0.0}) {
        throw Error(ErrorCode::DomainError, "characteristic polynomial is evaluated at y != 0");
    }
    const Quadratics Q = quadratics(p);
    const double m = std::abs(y);
    if (m > 1.0) {
        const double w = std::pow(m, -2.0 * p.n);
        const double scale = Q.f_abs(m) + Q.q_abs(m) * w;
        return std::abs(scaled_polynomial(p, y).g) / scale;
    }
    const double scale = Q.f_abs(m) * std::pow(m, 2.0 * p.n) + Q.q_abs(m);
    return std::abs(eval_polynomial(p, y)) / scale;
}

double eval_cotangent_residual(const SystemParams& p, double phi) {
    if (is_closed_form(p)) {
        throw Error(ErrorCode::ZeroDenominator, "e + a = 0: the cotangent form is undefined",
                    {{"a", p.a}, {"e", p.e}});
    }
    if (std::abs(std::sin(p.n * phi)) < tolerances::pole) {
        throw Error(ErrorCode::BranchPole, "phi is at a pole of cot(n phi)", {{"phi", phi}, {"n", p.n}});
    }
    return cotangent_form(p, phi);
}

QuadraticRoots quadratic_roots(const SystemParams& p) {
    const double dt = p.d * p.tau;
    const double disc = dt * dt + 4.0 * p.a * p.e;
    if (disc < 0.0) {
        const cplx s = std::sqrt(cplx{disc, 0.0});
        return {(dt + s) / (2.0 * p.a), (dt - s) / (2.0 * p.a)};
    }
    // Real case: compute the larger-magnitude root first, recover the other
    // from the product -e/a to avoid cancellation.
    const double s = std::sqrt(disc);
    const double product = -p.e / p.a;
    double y_plus, y_minus;
    if (dt >= 0.0) {
        y_plus = (dt + s) / (2.0 * p.a);
        y_minus = y_plus != 0.0 ? product / y_plus : (dt - s) / (2.0 * p.a);
    } else {
        y_minus = (dt - s) / (2.0 * p.a);
        y_plus = y_minus != 0.0 ? product / y_minus : (dt + s) / (2.0 * p.a);
    }
    return {cplx{y_plus, 0.0}, cplx{y_minus, 0.0}};
}

SpecialEigenEstimate special_eigen_estimates(const SystemParams& p) {
    SpecialEigenEstimate out;
    if (p.e == 0.0) {
        if (p.d > 0.0) out.r_plus = cplx{p.d + p.a * p.c / p.d, 0.0};
        if (p.d < 0.0) out.r_minus = cplx{p.d + p.a * p.c / p.d, 0.0};
        return out;
    }
    const cplx s = std::sqrt(cplx{p.d * p.d + 4.0 * p.c * p.e, 0.0});
    const double lead = 0.5 * (1.0 - p.a / p.e) * p.d;
    const double spread = 0.5 * (1.0 + p.a / p.e);
    out.r_plus = lead + spread * s;
    out.r_minus = lead - spread * s;
    return out;
}

TransferRoots transfer_roots(const SystemParams& p, cplx r) {
    const double tau2 = p.tau * p.tau;
    const cplx trace = r * tau2 / p.a;
    cplx s = std::sqrt(trace * trace - 4.0 * tau2);
    if (s.real() < 0.0) s = -s;
    const cplx x_plus = 0.5 * (trace + s);
    const cplx x_minus = x_plus != cplx{0.0, 0.0} ? tau2 / x_plus : 0.5 * (trace - s);
    return {x_plus, x_minus, x_plus / p.tau};
}

cplx eigenvalue_from_root(const SystemParams& p, cplx y) { return p.sqrt_ac() * (y + 1.0 / y); }

std::vector<BranchRoot> scan_branches(const SystemParams& p) {
    if (is_closed_form(p)) {
        throw Error(ErrorCode::ZeroDenominator, "e + a = 0: use the closed-form branch roots",
                    {{"a", p.a}, {"e", p.e}});
    }
    const int n = p.n;
    const int samples = samples_per_branch(p);
    const double width = kPi / n;
    const double delta = 1e-9 / n;
    const double edge = p.bulk_edge();
    auto g = [&](double phi) { return cotangent_form(p, phi); };

    std::vector<BranchRoot> roots;
    for (int ell = 1; ell <= n; ++ell) {
        const double left = (ell - 1) * width;
        const double right = ell * width;
        const double lo = left + delta;
        const double hi = right - delta;
        double phi_prev = lo;
        double g_prev = g(lo);
        for (int i = 1; i <= samples; ++i) {
            const double phi = (i == samples) ? hi : lo + (hi - lo) * i / samples;
            const double gi = g(phi);
            double root = std::numeric_limits<double>::quiet_NaN();
            if (g_prev == 0.0) {
                root = phi_prev;
            } else if (gi != 0.0 && (gi > 0) != (g_prev > 0)) {
                root = polish_bracket(g, phi_prev, phi, g_prev, gi);
            } else if (gi == 0.0 && i == samples) {
                root = phi;
            }
            if (std::isfinite(root)) {
                bool keep = true;
                if (root - left < 10 * delta || right - root < 10 * delta) {
                    keep = polynomial_residual(p, std::polar(1.0, root)) < 1e-8;
                }
                if (keep) roots.push_back({ell, root, edge * std::cos(root)});
            }
            phi_prev = phi;
            g_prev = gi;
        }
    }
    return roots;
}

cplx refine_special_root(const SystemParams& p, cplx seed) {
    if (!(std::abs(seed) > 1.0)) {
        throw Error(ErrorCode::DomainError, "special-root seed must lie outside the unit circle",
                    {{"seed_re", seed.real()}, {"seed_im", seed.imag()}});
    }
    cplx y = seed;
    for (int it = 0; it < tolerances::max_newton; ++it) {
        const ScaledValue v = scaled_polynomial(p, y);
        if (v.dg == cplx{0.0, 0.0} || !std::isfinite(std::abs(v.dg))) break;
        cplx next = y - v.g / v.dg;
        if (!std::isfinite(std::abs(next))) break;
        // Roots are symmetric under y -> 1/conj(y); keep the iterate outside the disk.
        if (std::abs(next) < 1.0) next = 1.0 / std::conj(next);
        if (std::abs(next) < 1.0 + tolerances::circle) {
            throw Error(ErrorCode::UnitCircleCollapse, "Newton iterate collapsed onto the unit circle",
                        {{"seed_re", seed.real()}, {"seed_im", seed.imag()}, {"iteration", it}});
        }
        const double step = std::abs(next - y);
        y = next;
        if (step <= tolerances::root * std::abs(y)) {
            const ScaledValue last = scaled_polynomial(p, y);
            if (last.dg != cplx{0.0, 0.0}) y -= last.g / last.dg;
            if (polynomial_residual(p, y) < 1e-10) return y;
            break;
        }
    }
    throw Error(ErrorCode::NoConvergence, "Newton refinement of a special root did not converge",
                {{"seed_re", seed.real()}, {"seed_im", seed.imag()}, {"n", p.n}});
}

cplx special_root_deviation(const SystemParams& p, cplx seed) {
    if (!(std::abs(seed) > 1.0)) {
        throw Error(ErrorCode::DomainError, "deviation seed must lie outside the unit circle");
    }
    const Quadratics Q = quadratics(p);
    const cplx f_prime = Q.df(seed);
    const long long two_n = 2LL * p.n;
    // H(delta) = delta (f'(z0) + a delta) + q(z0 + delta) (z0 + delta)^{-2n}, using f(z0) = 0.
    cplx delta{0.0, 0.0};
    for (int it = 0; it < tolerances::max_newton; ++it) {
        const cplx z = seed + delta;
        const cplx w = ipow(1.0 / z, two_n);
        const cplx qz = Q.q(z);
        const cplx h = delta * (f_prime + p.a * delta) + qz * w;
        const cplx dh = f_prime + 2.0 * p.a * delta + Q.dq(z) * w - static_cast<double>(two_n) * qz * w / z;
        if (dh == cplx{0.0, 0.0}) break;
        const cplx step = h / dh;
        delta -= step;
        if (std::abs(step) <= 1e-15 * std::abs(delta) || delta == cplx{0.0, 0.0}) return delta;
        if (std::abs(delta) > 0.5 * (std::abs(seed) - 1.0)) break;
    }
    throw Error(ErrorCode::NoConvergence, "deviation solve from the asymptotic root did not converge",
                {{"seed_re", seed.real()}, {"seed_im", seed.imag()}, {"n", p.n}});
}

std::vector<Seed> off_circle_seeds(const SystemParams& p) {
    const QuadraticRoots q = quadratic_roots(p);
    std::vector<Seed> seeds;
    if (std::abs(q.y_plus) > 1.0 + tolerances::circle) seeds.push_back({SeedSide::Plus, q.y_plus});
    if (std::abs(q.y_minus) > 1.0 + tolerances::circle && std::abs(q.y_minus - q.y_plus) > 1e-12) {
        seeds.push_back({SeedSide::Minus, q.y_minus});
    }
    return seeds;
}

namespace {

// Roots near a nearly coincident pair y0 +- h of the quadratic. With
// delta = y - y0 the quadratic part is a (delta^2 - h^2) exactly, so Newton on
// delta avoids the cancellation that stalls Newton on y. Returns the two roots
// ordered like the seeds, or nothing when the pair is well separated.
std::vector<cplx> split_pair(const SystemParams& p, cplx first, cplx second) {
    const Quadratics Q = quadratics(p);
    const cplx y0{Q.dt / (2.0 * Q.a), 0.0};
    // (d tau)^2 = d^2 a / c, formed without the rounded tau
    const cplx h2 = cplx{p.d * p.d * p.a / p.c + 4.0 * Q.a * Q.e, 0.0} / (4.0 * Q.a * Q.a);
    const long long two_n = 2LL * p.n;
    const cplx eps = -Q.q(y0) * ipow(1.0 / y0, two_n) / Q.a;
    if (std::abs(h2) >= 100.0 * std::abs(eps) || !(std::abs(y0) > 1.0)) return {};
    const cplx h = 0.5 * (first - second);
    cplx s = std::sqrt(h2 + eps);
    if ((s * std::conj(h)).real() < 0.0 || (h == cplx{0.0, 0.0} && s.imag() < 0.0)) s = -s;

    std::vector<cplx> out;
    for (cplx delta : {s, -s}) {
        for (int it = 0; it < tolerances::max_newton; ++it) {
            const cplx y = y0 + delta;
            const cplx w = ipow(1.0 / y, two_n);
            const cplx qy = Q.q(y);
            const cplx H = Q.a * (delta * delta - h2) + qy * w;
            const cplx dH = 2.0 * Q.a * delta + Q.dq(y) * w - static_cast<double>(two_n) * qy * w / y;
            if (dH == cplx{0.0, 0.0}) break;
            const cplx step = H / dH;
            delta -= step;
            if (std::abs(step) <= 1e-14 * std::abs(delta)) break;
        }
        out.push_back(y0 + delta);
    }
    return out;
}

}  // namespace

RootSet locate_roots(const SystemParams& p, std::span<const Seed> seeds) {
    RootSet out;
    out.bulk = scan_branches(p);

    const SpecialEigenEstimate est = special_eigen_estimates(p);
    auto is_new = [&](cplx y) {
        for (const SpecialRoot& s : out.special) {
            if (std::abs(s.y - y) <= 1e-8 * std::abs(y)) return false;
        }
        return true;
    };
    std::vector<Seed> work(seeds.begin(), seeds.end());
    std::vector<cplx> pair;
    if (work.size() == 2 && work[0].side != work[1].side) pair = split_pair(p, work[0].y, work[1].y);
    for (std::size_t k = 0; k < work.size(); ++k) {
        const Seed& seed = work[k];
        try {
            const cplx y = pair.empty() ? refine_special_root(p, seed.y) : pair[k];
            if (pair.empty() && !is_new(y)) continue;
            SpecialRoot root;
            root.side = seed.side;
            root.seed = seed.y;
            root.asymptotic = seed.side == SeedSide::Plus ? est.r_plus : est.r_minus;
            root.y = y;
            root.eigenvalue = eigenvalue_from_root(p, y);
            out.special.push_back(root);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::NoConvergence && err.code() != ErrorCode::UnitCircleCollapse) throw;
        }
    }

    const auto n = static_cast<std::size_t>(p.n);
    if (out.bulk.size() + out.special.size() < n) {
        const QuadraticRoots q = quadratic_roots(p);
        const double y_max = 2.0 * std::max({1.0, std::abs(q.y_plus), std::abs(q.y_minus)}) + 1.0;
        for (double y : scan_real_axis(p, y_max)) {
            if (out.bulk.size() + out.special.size() >= n) break;
            if (!is_new(cplx{y, 0.0}) || std::abs(y) < 1.0 + tolerances::circle) continue;
            SpecialRoot root;
            root.side = SeedSide::RealScan;
            root.seed = cplx{y, 0.0};
            root.y = cplx{y, 0.0};
            root.eigenvalue = eigenvalue_from_root(p, root.y);
            out.special.push_back(root);
        }
    }

    if (out.bulk.size() + out.special.size() != n) {
        nlohmann::json per_branch = nlohmann::json::object();
        for (const BranchRoot& r : out.bulk) {
            const std::string key = std::to_string(r.ell);
            per_branch[key] = per_branch.value(key, 0) + 1;
        }
        throw Error(ErrorCode::RootCountAnomaly,
                    "found " + std::to_string(out.bulk.size()) + " branch roots and " +
                        std::to_string(out.special.size()) + " special roots for n = " + std::to_string(p.n),
                    {{"n", p.n},
                     {"branch_roots", out.bulk.size()},
                     {"special_roots", out.special.size()},
                     {"roots_per_branch", per_branch},
                     {"samples_per_branch", samples_per_branch(p)}});
    }
    return out;
}

std::vector<BranchRoot> find_branch_roots(const SystemParams& p) {
    const std::vector<Seed> seeds = off_circle_seeds(p);
    return locate_roots(p, seeds).bulk;
}

}  // namespace tridiag
