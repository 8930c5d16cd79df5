#include "tridiag/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tridiag/error.hpp"
#include "tridiag/oracle.hpp"

namespace tridiag {

namespace {

void require_decentralized(const SystemParams& p) {
    if (!is_decentralized(p, kDecentralizedSlack)) {
        throw Error(ErrorCode::NotDecentralized, "stability verdicts need b = a + c and c = e + d",
                    {{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"e", p.e}});
    }
}

struct AsymptoticRule {
    Verdict verdict;
    std::string rule;
};

AsymptoticRule first_order_rule(const SystemParams& p) {
    const double ae = p.a + p.e;
    if (std::abs(ae) < tolerances::zero_denominator * p.a) return {Verdict::Inconclusive, "a+e=0"};
    if (ae > 0.0) return {Verdict::Stable, "a+e>0"};
    if (p.c + p.e == 0.0) return {Verdict::Inconclusive, "a+e<0, c+e=0"};
    return {Verdict::Unstable, "a+e<0, c+e!=0"};
}

// Finite-n status of a set of modes given which are zero modes and which
// carry a resolved sign.
struct FiniteCheck {
    std::optional<Verdict> verdict;
    std::optional<cplx> witness;
    double abscissa = -std::numeric_limits<double>::infinity();
    int zero_count = 0;
};

FiniteCheck check_modes(std::span<const cplx> values, const std::vector<bool>& zero,
                        const std::vector<bool>& resolved, double tol, int expected_zeros) {
    FiniteCheck out;
    bool positive = false, undecided = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (zero[i]) {
            ++out.zero_count;
            continue;
        }
        const double re = values[i].real();
        if (!out.witness || re > out.abscissa) {
            out.abscissa = re;
            out.witness = values[i];
        }
        if (resolved[i]) {
            if (re > 0.0) positive = true;
            if (re == 0.0) undecided = true;
        } else if (re > tol) {
            positive = true;
        } else if (re >= -tol) {
            undecided = true;
        }
    }
    if (positive) {
        out.verdict = Verdict::Unstable;
    } else if (!undecided && out.zero_count == expected_zeros) {
        out.verdict = Verdict::Stable;
    }
    if (!out.witness) out.abscissa = 0.0;
    return out;
}

StabilityVerdict combine(const AsymptoticRule& rule, const FiniteCheck& check) {
    StabilityVerdict v;
    v.asymptotic = rule.verdict;
    v.finite_n = check.verdict;
    v.witness = check.witness;
    v.zero_multiplicity = check.zero_count;
    v.spectral_abscissa = check.abscissa;
    v.rule = rule.rule;
    if (rule.verdict == Verdict::Inconclusive) {
        v.stable = Verdict::Inconclusive;
    } else if (!check.verdict || *check.verdict == rule.verdict) {
        v.stable = rule.verdict;
    } else {
        v.stable = Verdict::Inconclusive;
        v.rule += "; finite-n spectrum disagrees";
    }
    return v;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::Unstable: return "unstable";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

double zero_tolerance(const SystemParams& p) { return 1e-8 * (p.a + p.c); }

LaplacianModes laplacian_modes(const SystemParams& p) {
    LaplacianModes modes;
    const double tol = zero_tolerance(p);
    auto from_oracle = [&] {
        modes.values = oracle_eigenvalues(p, MatrixKind::Laplacian);
        modes.resolved.assign(modes.values.size(), false);
        for (const cplx& v : modes.values) modes.zero.push_back(std::abs(v) <= tol);
        return modes;
    };
    if (!is_decentralized(p, kDecentralizedSlack)) return from_oracle();
    Spectrum spec;
    try {
        spec = compute_spectrum(p, MatrixKind::Laplacian);
    } catch (const Error& err) {
        // Below the size where the asymptotic root layout holds.
        if (err.code() != ErrorCode::RootCountAnomaly) throw;
        return from_oracle();
    }
    const double lead = p.a + p.c;
    modes.values.push_back(0.0);  // constant vector, exact
    modes.resolved.push_back(true);
    modes.zero.push_back(true);
    for (const BranchRoot& r : spec.bulk) {
        const cplx v = r.eigenvalue + spec.shift;
        modes.values.push_back(v);
        modes.resolved.push_back(false);
        modes.zero.push_back(std::abs(v) <= tol);
    }
    for (const SpecialRoot& s : spec.special) {
        cplx v = s.eigenvalue + spec.shift;
        bool resolved = false;
        // The special root whose limit is exactly a + c gives a mode that is
        // exponentially small; take it from the offset solve instead of the
        // difference r - (a + c), which is pure rounding.
        const cplx r0 = eigenvalue_from_root(p, s.seed);
        if ((s.side == SeedSide::Plus || s.side == SeedSide::Minus) && s.seed.imag() == 0.0 &&
            std::abs(r0 - lead) <= 1e-12 * lead) {
            try {
                const cplx delta = special_root_deviation(p, s.seed);
                v = p.sqrt_ac() * delta * (1.0 - 1.0 / (s.seed * (s.seed + delta)));
                resolved = true;
            } catch (const Error&) {
            }
        }
        modes.values.push_back(v);
        modes.resolved.push_back(resolved);
        modes.zero.push_back(!resolved && std::abs(v) <= tol);
    }
    return modes;
}

std::vector<cplx> laplacian_spectrum(const SystemParams& p) { return laplacian_modes(p).values; }

StabilityVerdict first_order_verdict(const SystemParams& p) {
    require_decentralized(p);
    const LaplacianModes modes = laplacian_modes(p);
    const FiniteCheck check = check_modes(modes.values, modes.zero, modes.resolved, zero_tolerance(p), 1);
    return combine(first_order_rule(p), check);
}

std::vector<cplx> second_order_eigenvalues(std::span<const cplx> lambdas, SecondOrderParams so) {
    std::vector<cplx> out;
    out.reserve(2 * lambdas.size());
    for (const cplx& l : lambdas) {
        const cplx bl = so.beta * l;
        const cplx root = std::sqrt(bl * bl + 4.0 * so.alpha * l);
        out.push_back(0.5 * (bl + root));
        out.push_back(0.5 * (bl - root));
    }
    return out;
}

StabilityVerdict second_order_verdict(const SystemParams& p, SecondOrderParams so) {
    require_decentralized(p);
    const LaplacianModes modes = laplacian_modes(p);
    const std::vector<cplx> nu = second_order_eigenvalues(modes.values, so);
    std::vector<bool> zero, resolved;
    for (std::size_t i = 0; i < modes.values.size(); ++i) {
        for (int k = 0; k < 2; ++k) {
            zero.push_back(modes.zero[i]);
            resolved.push_back(modes.resolved[i]);
        }
    }
    const double tol = zero_tolerance(p) * std::max({1.0, std::abs(so.alpha), std::abs(so.beta)});
    const FiniteCheck check = check_modes(nu, zero, resolved, tol, 2);

    AsymptoticRule rule = first_order_rule(p);
    if (!(so.alpha > 0.0) || !(so.beta > 0.0)) {
        rule = {Verdict::Unstable, "alpha<=0 or beta<=0"};
    } else {
        rule.rule = "alpha,beta>0; " + rule.rule;
    }
    return combine(rule, check);
}

}  // namespace tridiag
