#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "tridiag/model.hpp"

namespace tridiag {

using cplx = std::complex<double>;

/// Numerical constants of the root finders.
namespace tolerances {
inline constexpr double pole = 1e-14;            // |sin(n phi)| below this is a pole
inline constexpr double zero_denominator = 1e-12;  // |e + a| < this * a routes to the a+e=0 closed form
inline constexpr double bisect_width = 1e-3;     // bisection phase stops at this bracket width
inline constexpr double phi = 1e-13;             // absolute tolerance on branch angles
inline constexpr double root = 1e-13;            // relative step tolerance for Newton on y
inline constexpr double circle = 1e-10;          // |y| < 1 + circle counts as on the unit circle
inline constexpr int max_newton = 100;
}  // namespace tolerances

/// One solution phi of the cotangent equation in branch ell, i.e. in
/// [(ell-1) pi/n, ell pi/n), with bulk eigenvalue 2 sqrt(ac) cos(phi).
struct BranchRoot {
    int ell = 0;
    double phi = 0.0;
    double eigenvalue = 0.0;
};

/// Roots y+- of a y^2 - d tau y - e (square root taken with non-negative real part).
struct QuadraticRoots {
    cplx y_plus;
    cplx y_minus;
    bool is_real() const { return y_plus.imag() == 0.0 && y_minus.imag() == 0.0; }
};

/// Asymptotic special eigenvalues r+- = sqrt(ac) (y+- + 1/y+-). Undefined
/// entries are empty (e = 0 with d <= 0 for r+, d >= 0 for r-).
struct SpecialEigenEstimate {
    std::optional<cplx> r_plus;
    std::optional<cplx> r_minus;
};

/// Eigenvalues x+- of the 2x2 transfer matrix [[0, 1], [-tau^2, r tau^2 / a]]
/// for a trial eigenvalue r; y = x+ / tau and x+ x- = tau^2.
struct TransferRoots {
    cplx x_plus;
    cplx x_minus;
    cplx y;
};

enum class SeedSide { Plus, Minus, ClosedForm, RealScan };

const char* to_string(SeedSide side);

/// An off-circle root of the characteristic polynomial together with the seed
/// it was refined from.
struct SpecialRoot {
    SeedSide side = SeedSide::Plus;
    cplx seed;
    std::optional<cplx> asymptotic;  // r+- for the seed, when defined
    cplx y;
    cplx eigenvalue;
};

/// Polynomial form (a y^2 - d tau y - e) y^{2n} + (e y^2 + d tau y - a).
/// Throws DomainError for y = 0. Overflows for |y|^{2n} beyond double range;
/// use polynomial_residual for large arguments.
cplx eval_polynomial(const SystemParams& p, cplx y);

/// |P(y)| divided by the sum of the moduli of its terms, evaluated in the
/// y^{-2n}-scaled form when |y| > 1 so that it never overflows.
double polynomial_residual(const SystemParams& p, cplx y);

/// cot(n phi) sin(phi) - d tau/(e+a) - (e-a)/(e+a) cos(phi).
/// Throws BranchPole near sin(n phi) = 0 and ZeroDenominator when e + a = 0.
double eval_cotangent_residual(const SystemParams& p, double phi);

QuadraticRoots quadratic_roots(const SystemParams& p);

SpecialEigenEstimate special_eigen_estimates(const SystemParams& p);

TransferRoots transfer_roots(const SystemParams& p, cplx r);

/// sqrt(ac) (y + 1/y).
cplx eigenvalue_from_root(const SystemParams& p, cplx y);

/// Sign-change scan of every branch followed by bisection and false-position polish.
/// Returns every root found, in branch order, without any count check.
/// Requires e + a != 0.
std::vector<BranchRoot> scan_branches(const SystemParams& p);

/// Roots of the cotangent equation, one list entry per root. Throws
/// RootCountAnomaly when branch roots plus refined special roots != n and
/// ZeroDenominator when e + a = 0.
std::vector<BranchRoot> find_branch_roots(const SystemParams& p);

/// Newton iteration on the polynomial form, started at |seed| > 1.
/// Throws NoConvergence or UnitCircleCollapse.
cplx refine_special_root(const SystemParams& p, cplx seed);

/// z1 - z0 for the polynomial root z1 near an exact root z0 = seed of
/// a y^2 - d tau y - e. Solved directly in the offset so the result keeps
/// full relative precision even when it is far below the rounding level of z0.
cplx special_root_deviation(const SystemParams& p, cplx seed);

/// Complete root set of the reduced matrix: bulk roots plus refined special
/// roots from the given seeds. Seeds that fail to refine are dropped; if the
/// count is short a real-axis scan fills in. Throws RootCountAnomaly if the
/// total still differs from n, DomainError for a seed with |y| <= 1.
struct RootSet {
    std::vector<BranchRoot> bulk;
    std::vector<SpecialRoot> special;
};

struct Seed {
    SeedSide side;
    cplx y;
};

RootSet locate_roots(const SystemParams& p, std::span<const Seed> seeds);

/// Quadratic roots with modulus > 1, tagged with their side.
std::vector<Seed> off_circle_seeds(const SystemParams& p);

}  // namespace tridiag
