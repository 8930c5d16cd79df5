// One PASS/FAIL line per acceptance criterion. Exit status is nonzero only
// when a check fails that is not listed as a known defect of the criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "tridiag/charpoly.hpp"
#include "tridiag/error.hpp"
#include "tridiag/matching.hpp"
#include "tridiag/oracle.hpp"
#include "tridiag/perturb.hpp"
#include "tridiag/simulate.hpp"
#include "tridiag/spectrum.hpp"
#include "tridiag/stability.hpp"

using namespace tridiag;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
    bool known_defect = false;  // failure expected, see README
};

struct Criterion {
    int id;
    double budget_s;
    std::function<std::vector<Check>()> run;
};

double max_match(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    return match_multisets(x, y).max_distance;
}

std::vector<cplx> real_list(const std::vector<double>& v) {
    return {v.begin(), v.end()};
}

// 1: boundary cases with cosine closed forms.
std::vector<Check> closed_forms() {
    const int n = 50;
    struct Case {
        double d, e;
        std::function<double(int)> value;
        const char* name;
    };
    std::vector<Case> cases = {
        {0, 0, [](int k) { return 2 * std::cos(kPi * k / 51); }, "e=d=0"},
        {1, 0, [](int k) { return 2 * std::cos((2 * k - 1) * kPi / 101); }, "e=0,d=1"},
        {0, 1, [](int k) { return 2 * std::cos((2 * k - 1) * kPi / 100); }, "e=1,d=0"},
    };
    std::vector<Check> out;
    for (const auto& c : cases) {
        auto spec = compute_spectrum(make_params(1, 1, 2, c.d, c.e, n), MatrixKind::Reduced);
        std::vector<double> want;
        for (int k = 1; k <= n; ++k) want.push_back(c.value(k));
        double err = max_match(spec.eigenvalues(), real_list(want));
        out.push_back({c.name, err <= 1e-10, fmt("max error %.3g", err)});
    }
    return out;
}

// 2: a + e = 0 closed form.
std::vector<Check> closed_form_p31() {
    const int n = 60;
    std::vector<Check> out;
    for (double d : {0.0, 1.0, 3.0}) {
        auto p = make_params(1, 1, 2, d, -1, n);
        auto spec = compute_spectrum(p, MatrixKind::Reduced);
        std::vector<double> bulk, want;
        for (const auto& r : spec.bulk) bulk.push_back(r.eigenvalue);
        for (int l = 1; l < n; ++l) want.push_back(2 * std::cos(kPi * l / n));
        double bulk_err = bulk.size() == want.size() ? max_match(real_list(bulk), real_list(want)) : INFINITY;

        const double dt = d * p.tau, a = p.a;
        cplx y = dt > 2 * a    ? cplx{(dt + std::sqrt(dt * dt - 4 * a * a)) / (2 * a)}
                 : dt < -2 * a ? cplx{(dt - std::sqrt(dt * dt - 4 * a * a)) / (2 * a)}
                               : cplx{dt, std::sqrt(4 * a * a - dt * dt)} / (2 * a);
        cplx extra = std::sqrt(p.a * p.c) * (y + 1.0 / y);
        double extra_err = spec.special.size() == 1 ? std::abs(spec.special[0].eigenvalue - extra) : INFINITY;
        double oracle_err = max_match(spec.eigenvalues(), oracle_eigenvalues(p, MatrixKind::Reduced));

        bool tri = dt > 2 * a    ? y.imag() == 0 && y.real() > 1
                   : dt < -2 * a ? y.imag() == 0 && y.real() < -1
                                 : std::abs(std::abs(y) - 1) < 1e-14;
        bool ok = bulk_err <= 1e-12 && extra_err <= 1e-12 && oracle_err <= 1e-10 && tri;
        out.push_back({fmt("d=%g", d), ok,
                       fmt("bulk %.3g, extra %.3g, vs QR %.3g, y_n=%.6g%+.6gi", bulk_err, extra_err, oracle_err,
                           y.real(), y.imag())});
    }
    return out;
}

// 3: random oracle-equivalence sweep.
std::vector<Check> oracle_sweep() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ac(0.2, 5.0), de(-5.0, 5.0);
    int anomalies = 0, unresolved = 0, bad = 0;
    double worst_theory = 0, worst_methods = 0;
    std::string log;
    for (int draw = 0; draw < 50; ++draw) {
        const double a = ac(rng), c = ac(rng), d = de(rng), e = de(rng);
        for (int n : {30, 60, 120}) {
            auto p = make_params(a, c, a + c, d, e, n);
            try {
                auto rep = cross_validate(p, MatrixKind::Reduced);
                double theory = rep.max_pairing_error / p.sqrt_ac();
                double methods = rep.method_agreement.value_or(INFINITY);
                worst_theory = std::max(worst_theory, theory);
                worst_methods = std::max(worst_methods, methods);
                if (theory > 1e-6 || methods > 1e-6) ++bad;
            } catch (const Error& err) {
                if (err.code() != ErrorCode::RootCountAnomaly) throw;
                ++anomalies;
                if (n == 120) ++unresolved;
                log += fmt(" [draw %d n=%d a=%.4g c=%.4g d=%.4g e=%.4g]", draw, n, a, c, d, e);
            }
        }
    }
    if (!log.empty()) std::printf("  RootCountAnomaly at:%s\n", log.c_str());
    return {{"theory vs QR", bad == 0 && unresolved == 0, fmt("worst %.3g sqrt(ac)", worst_theory)},
            {"QR vs polynomial", bad == 0, fmt("worst %.3g", worst_methods)},
            {"anomalies resolved by n=120", unresolved == 0, fmt("%d anomalies, %d at n=120", anomalies, unresolved)}};
}

// 4: regime reproduction for a = c = 1, e = -2.25.
std::vector<Check> sweep_d_regimes() {
    std::vector<Check> out;
    const char* expect[] = {"2b", "2c", "3"};
    const double ds[] = {2.95, 3.05, 3.3};
    for (int i = 0; i < 3; ++i) {
        auto p = make_params(1, 1, 2, ds[i], -2.25, 100);
        auto spec = compute_spectrum(p, MatrixKind::Reduced);
        const auto& lab = spec.regime;
        bool cls = lab.theorem == Theorem::T3 && lab.case_id == expect[i];
        out.push_back({fmt("d=%g class", ds[i]), cls, fmt("%s case %s", to_string(lab.theorem), lab.case_id.c_str())});
        if (i == 0) {
            bool pair = spec.special.size() == 2;
            double mod = 0, prod = 0;
            for (const auto& s : spec.special) pair = pair && s.y.imag() != 0 && std::abs(s.y) > 1;
            if (pair) {
                mod = std::abs(spec.special[0].y);
                prod = std::abs(spec.special[0].y * spec.special[1].y);
            }
            out.push_back({"2b complex pair off the circle", pair, fmt("%zu special roots", spec.special.size())});
            out.push_back({"2b modulus within 5% of 2.25", pair && std::abs(mod - 2.25) <= 0.05 * 2.25,
                           fmt("|y|=%.6g, |y|^2=%.6g, |y+ y-|=%.6g", mod, mod * mod, prod), true});
        } else {
            bool real = !spec.special.empty();
            for (const auto& s : spec.special) real = real && s.eigenvalue.imag() == 0;
            out.push_back({fmt("d=%g real specials", ds[i]), real, fmt("%zu special", spec.special.size())});
        }
    }
    return out;
}

// 5: decentralized special-eigenvalue table at n = 200.
std::vector<Check> decentralized_table() {
    struct Set {
        double a, c, e;
    };
    const Set sets[] = {{2, 1, -3}, {1, 1, -2},  {1, 4, -3}, {2, 1, -1.8}, {1, 1, 0.5},
                        {1, 4, 0.5}, {2, 1, 3}, {1, 1, 2},  {1, 4, 3}};
    const int n = 200;
    std::vector<Check> out;
    for (const auto& s : sets) {
        auto p = make_params(s.a, s.c, s.a + s.c, s.c - s.e, s.e, n);
        auto lab = classify_regime(p);
        if (!lab.cell) {
            out.push_back({fmt("a=%g c=%g e=%g", s.a, s.c, s.e), false, "no cell"});
            continue;
        }
        const double edge = p.bulk_edge();
        // predicted values on the bulk edge show up as the outermost bulk eigenvalue
        const double edge_window = (kPi / n) * (kPi / n) * edge;
        auto ev = oracle_eigenvalues(p, MatrixKind::Reduced);
        auto theory = compute_spectrum(p, MatrixKind::Reduced).eigenvalues();
        std::vector<bool> used(ev.size(), false);
        bool ok = true;
        std::string detail = fmt("cell (%d,%d) %s:", lab.cell->row, lab.cell->column, lab.cell->domain.c_str());
        for (double v : lab.cell->predicted) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < ev.size(); ++i)
                if (std::abs(ev[i] - v) < std::abs(ev[best] - v)) best = i;
            double dist = std::abs(ev[best] - v);
            double theory_dist = INFINITY;
            for (cplx z : theory) theory_dist = std::min(theory_dist, std::abs(z - v));
            bool on_edge = std::abs(std::abs(v) - edge) <= 1e-12 * edge;
            double tol = on_edge ? edge_window : 1e-6;
            ok = ok && dist <= tol && theory_dist <= tol;
            used[best] = true;
            detail += fmt(" %.6g (QR %.2g, theory %.2g%s)", v, dist, theory_dist, on_edge ? ", edge" : "");
        }
        int stray = 0;
        for (std::size_t i = 0; i < ev.size(); ++i)
            if (!used[i] && (std::abs(ev[i].real()) > edge * (1 + 1e-9) || std::abs(ev[i].imag()) > 1e-9)) ++stray;
        if (stray) detail += fmt(" %d unpredicted", stray);
        out.push_back({fmt("a=%g c=%g e=%g", s.a, s.c, s.e), ok && stray == 0, detail});
    }
    return out;
}

// 6: stability corroborated by simulation.
std::vector<Check> stability() {
    std::vector<Check> out;
    auto stable = make_params(1, 1, 2, 0.5, 0.5, 20);
    auto v = first_order_verdict(stable);
    auto traj = simulate_first_order(default_config(stable, 2000.0));
    double rate = fit_decay_rate(traj);
    out.push_back({"stable decay rate", v.stable == Verdict::Stable &&
                                            std::abs(rate - v.spectral_abscissa) <= 0.15 * std::abs(v.spectral_abscissa),
                   fmt("fitted %.6g vs abscissa %.6g", rate, v.spectral_abscissa)});

    auto unstable = make_params(1, 3, 4, 5, -2, 40);
    auto uv = first_order_verdict(unstable);
    auto utraj = simulate_first_order(default_config(unstable, 200.0));
    double e0 = utraj.coherence_errors.front(), e1 = utraj.coherence_errors.back();
    out.push_back({"unstable verdict", uv.stable == Verdict::Unstable, to_string(uv.stable)});
    out.push_back({"unstable coherence error grows", e1 > 2 * e0, fmt("%.4g -> %.4g over t=200", e0, e1), true});

    auto big = make_params(1, 3, 4, 5, -2, 200);
    auto bv = first_order_verdict(big);
    double w = bv.witness ? bv.witness->real() : NAN;
    double closed = -(big.a + big.e) * (big.c + big.e) / big.e;
    double nearest = INFINITY;
    for (cplx z : laplacian_spectrum(big)) nearest = std::min(nearest, std::abs(z - closed));
    out.push_back({"witness equals 0.5 at n=200", bv.witness && std::abs(w - 0.5) <= 1e-3,
                   fmt("witness %.6g, -(a+e)(c+e)/e=%.6g, nearest -L eigenvalue %.3g away", w, closed, nearest), true});

    auto flight = default_config(stable, 30.0, SecondOrderParams{1, 1}, 2.0, 0.0);
    for (double& x : flight.x0) x += 5.0;
    flight.v0 = std::vector<double>(flight.x0.size(), 0.75);
    auto ftraj = simulate_second_order(flight);
    double drift = *std::max_element(ftraj.coherence_errors.begin(), ftraj.coherence_errors.end());
    double pos = 0;
    for (std::size_t k = 0; k < flight.h.size(); ++k)
        pos = std::max(pos, std::abs(ftraj.positions.back()[k] - (0.75 * 30.0 + 5.0 + flight.h[k])));
    out.push_back({"second-order coherent flight", drift < 1e-12 && pos < 1e-10,
                   fmt("coherence %.3g, position %.3g", drift, pos)});

    auto cfg = default_config(stable, 3000.0, SecondOrderParams{1, 1});
    cfg.save_stride = 50;
    auto ctraj = simulate_second_order(cfg);
    double ratio = ctraj.coherence_errors.back() / ctraj.coherence_errors.front();
    out.push_back({"second-order convergence", ratio < 1e-3, fmt("error ratio %.3g", ratio)});
    return out;
}

// 7: perturbation signs, geometric root convergence and branch monotonicity.
std::vector<Check> appendix() {
    std::vector<Check> out;
    struct Ex {
        SystemParams p;
        int expect;
    };
    for (const auto& [p, expect] : {Ex{make_params(1, 2, 3, 1, 1, 50), -1}, Ex{make_params(1, 3, 4, 5, -2, 50), 1}}) {
        std::string got;
        bool ok = true;
        for (int n : {50, 100, 200}) {
            int s = perturbation_sign(p, n);
            ok = ok && s == expect;
            got += fmt(" %+d", s);
        }
        out.push_back({fmt("sign a+e=%g", p.a + p.e), ok, fmt("expected %+d, got%s", expect, got.c_str())});
    }

    std::vector<int> ns{20, 40, 80, 160};
    auto rep = track_root_convergence(make_params(1, 2, 3, 1, 1, 20), ns);
    out.push_back({"geometric decay", rep.fitted_rate > 1 && rep.r_squared >= 0.95,
                   fmt("kappa %.6g, R^2 %.6g", rep.fitted_rate, rep.r_squared)});

    int violations = 0;
    for (auto p : {make_params(1, 1, 2, 0.5, 0.5, 10), make_params(1, 2, 3, 1, 1, 40), make_params(2, 0.5, 1, -3, 1.5, 200),
                   make_params(1, 3, 4, 5, -2, 60)}) {
        for (const auto& r : verify_branch_monotonicity(p, p.n, 500)) {
            if (r.B > 1) continue;
            violations += static_cast<int>(r.violations.size());
        }
    }
    out.push_back({"no violations for B <= 1", violations == 0, fmt("%d violations", violations)});

    auto cluster = make_params(1, 1, 2, -1.9, -1.05, 12);
    auto roots = scan_branches(cluster);
    std::vector<int> per(13, 0);
    for (const auto& r : roots) ++per[r.ell];
    int crowded = static_cast<int>(std::max_element(per.begin(), per.end()) - per.begin());
    auto mono = verify_branch_monotonicity(cluster, 12, 500);
    bool increasing = !mono[crowded - 1].violations.empty();
    out.push_back({"multi-root branch", per[crowded] >= 2 && increasing,
                   fmt("%d roots in branch %d, B=%.4g", per[crowded], crowded, mono[0].B)});
    return out;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, 1, closed_forms}, {2, 1, closed_form_p31}, {3, 60, oracle_sweep}, {4, 5, sweep_d_regimes},
        {5, 30, decentralized_table}, {6, 30, stability}, {7, 30, appendix},
    };
    int unexpected = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::vector<Check> checks;
        try {
            checks = c.run();
        } catch (const Error& err) {
            checks.push_back({"exception", false, fmt("%s: %s", std::string(to_string(err.code())).c_str(), err.what())});
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        checks.push_back({"runtime", secs < c.budget_s, fmt("%.2f s (budget %g s)", secs, c.budget_s)});

        bool pass = true, only_known = true;
        for (const auto& k : checks) {
            if (k.ok) continue;
            pass = false;
            if (!k.known_defect) only_known = false;
        }
        std::printf("criterion %d: %s%s\n", c.id, pass ? "PASS" : "FAIL",
                    pass ? "" : (only_known ? " (known defect)" : ""));
        for (const auto& k : checks)
            std::printf("  %s %s: %s\n", k.ok ? "ok  " : (k.known_defect ? "KNWN" : "FAIL"), k.name.c_str(),
                        k.detail.c_str());
        if (!pass && !only_known) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
