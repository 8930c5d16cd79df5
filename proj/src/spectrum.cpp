#include "tridiag/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tridiag/error.hpp"
#include "tridiag/oracle.hpp"

namespace tridiag {

namespace {

constexpr double kPi = std::numbers::pi;

std::optional<DecentralizedCell> decentralized_cell(const SystemParams& p) {
    if (!is_decentralized(p, kDecentralizedSlack)) return std::nullopt;
    const double a = p.a, c = p.c, e = p.e;
    const double s = p.sqrt_ac();
    DecentralizedCell cell;
    cell.row = e < -a ? 0 : (e <= a ? 1 : 2);
    cell.column = c < a ? 0 : (c == a ? 1 : 2);
    const double lead = a + c;
    const double other = e != 0.0 ? -(a * c / e + e) : 0.0;
    switch (cell.row * 3 + cell.column) {
        case 0:
        case 1:
            cell.domain = "(-inf,-a)";
            cell.predicted = {other};
            break;
        case 2:
            if (e < -s) {
                cell.domain = "(-inf,-sqrt(ac))";
                cell.predicted = {lead, other};
            } else {
                cell.domain = "[-sqrt(ac),-a)";
                cell.predicted = {lead};
            }
            break;
        case 3:
            if (e < -s) {
                cell.domain = "[-a,-sqrt(ac))";
                cell.predicted = {other};
            } else if (e <= s) {
                cell.domain = "[-sqrt(ac),sqrt(ac)]";
            } else {
                cell.domain = "(sqrt(ac),a]";
                cell.predicted = {other};
            }
            break;
        case 4:
            cell.domain = "[-a,a]";
            break;
        case 5:
            cell.domain = "[-a,a]";
            cell.predicted = {lead};
            break;
        case 6:
            cell.domain = "(a,inf)";
            cell.predicted = {other};
            break;
        case 7:
            cell.domain = "(a,inf)";
            cell.predicted = {other, 2.0 * a};
            break;
        case 8:
            if (e <= s) {
                cell.domain = "(a,sqrt(ac)]";
                cell.predicted = {lead};
            } else {
                cell.domain = "(sqrt(ac),inf)";
                cell.predicted = {other, lead};
            }
            break;
        default:
            break;
    }
    return cell;
}

Spectrum closed_form_spectrum(const SystemParams& p, Spectrum spec) {
    // a + e = 0: the last row decouples; roots e^{i pi l / n} plus y_n from y^2 - (d tau / a) y + 1.
    const int n = p.n;
    const double edge = p.bulk_edge();
    for (int l = 1; l <= n - 1; ++l) {
        const double phi = kPi * l / n;
        spec.bulk.push_back({l + 1, phi, edge * std::cos(phi)});
    }
    const double dt = p.d * p.tau;
    const double disc = dt * dt - 4.0 * p.a * p.a;
    cplx y_n;
    if (dt > 2.0 * p.a) {
        y_n = (dt + std::sqrt(disc)) / (2.0 * p.a);
    } else if (dt < -2.0 * p.a) {
        y_n = (dt - std::sqrt(disc)) / (2.0 * p.a);
    } else {
        y_n = cplx{dt, std::sqrt(std::max(0.0, -disc))} / (2.0 * p.a);
    }
    SpecialRoot extra;
    extra.side = SeedSide::ClosedForm;
    extra.seed = y_n;
    extra.y = y_n;
    extra.eigenvalue = eigenvalue_from_root(p, y_n);
    spec.special.push_back(extra);
    return spec;
}

}  // namespace

const char* to_string(Theorem t) {
    switch (t) {
        case Theorem::T1: return "T1";
        case Theorem::T2: return "T2";
        case Theorem::T3: return "T3";
        case Theorem::P31: return "P31";
    }
    return "unknown";
}

RegimeLabel classify_regime(const SystemParams& p) {
    const double a = p.a, c = p.c, d = p.d, e = p.e;
    RegimeLabel label;
    label.cell = decentralized_cell(p);

    if (std::abs(a + e) < tolerances::zero_denominator * a) {
        const double dt = d * p.tau;
        label.theorem = Theorem::P31;
        label.on_boundary = std::abs(dt) == 2.0 * a;
        if (dt > 2.0 * a) {
            label.case_id = "1";
            label.special = {SeedSide::ClosedForm};
        } else if (dt < -2.0 * a) {
            label.case_id = "3";
            label.special = {SeedSide::ClosedForm};
        } else {
            label.case_id = "2";
        }
        return label;
    }

    // Threshold (a - e) sqrt(c/a); cases are tested in listed order so that
    // equality resolves to the first case whose inequality admits it.
    const double th = (a - e) * std::sqrt(c / a);
    if (e >= -a && e <= a) {
        label.theorem = Theorem::T1;
        label.on_boundary = d == th || d == -th;
        if (th < d) {
            label.case_id = "1";
            label.special = {SeedSide::Plus};
        } else if (-th <= d && d <= th) {
            label.case_id = "2";
        } else {
            label.case_id = "3";
            label.special = {SeedSide::Minus};
        }
    } else if (e > a) {
        label.theorem = Theorem::T2;
        label.on_boundary = d == th || d == -th;
        if (-th <= d) {
            label.case_id = "1";
            label.special = {SeedSide::Plus};
        } else if (th < d && d < -th) {
            label.case_id = "2";
            label.special = {SeedSide::Plus, SeedSide::Minus};
        } else {
            label.case_id = "3";
            label.special = {SeedSide::Minus};
        }
    } else {
        label.theorem = Theorem::T3;
        const double split = 2.0 * std::sqrt(std::abs(c * e));
        label.on_boundary = d == th || d == -th || d == split || d == -split;
        if (d <= -th) {
            label.case_id = "1";
            label.special = {SeedSide::Minus};
        } else if (d < th) {
            label.special = {SeedSide::Plus, SeedSide::Minus};
            if (d <= -split) {
                label.case_id = "2a";
            } else if (d < split) {
                label.case_id = "2b";
            } else {
                label.case_id = "2c";
            }
        } else {
            label.case_id = "3";
            label.special = {SeedSide::Plus};
        }
    }
    return label;
}

std::vector<cplx> Spectrum::eigenvalues() const {
    if (!oracle_values.empty()) return oracle_values;
    std::vector<cplx> out;
    out.reserve(bulk.size() + special.size() + 1);
    if (leader) out.emplace_back(*leader);
    for (const BranchRoot& r : bulk) out.emplace_back(r.eigenvalue + shift);
    for (const SpecialRoot& s : special) out.push_back(s.eigenvalue + shift);
    return out;
}

Spectrum compute_spectrum(const SystemParams& p, MatrixKind kind) {
    Spectrum spec;
    spec.kind = kind;
    spec.n = p.n;
    spec.params = p;
    spec.regime = classify_regime(p);

    if (kind == MatrixKind::Laplacian && !is_decentralized(p, kDecentralizedSlack)) {
        // Row sums are not constant, so -L is not a shift of A.
        spec.oracle_values = oracle_eigenvalues(p, MatrixKind::Laplacian);
        return spec;
    }
    if (kind == MatrixKind::Full) spec.leader = p.b;
    if (kind == MatrixKind::Laplacian) {
        spec.shift = -(p.a + p.c);
        spec.leader = 0.0;
    }

    if (spec.regime.theorem == Theorem::P31) return closed_form_spectrum(p, std::move(spec));

    const QuadraticRoots q = quadratic_roots(p);
    std::vector<Seed> seeds;
    for (SeedSide side : spec.regime.special) {
        seeds.push_back({side, side == SeedSide::Plus ? q.y_plus : q.y_minus});
    }
    RootSet roots = locate_roots(p, seeds);
    spec.bulk = std::move(roots.bulk);
    spec.special = std::move(roots.special);
    return spec;
}

EigenPair eigenvector_for(const SystemParams& p, cplx y) {
    if (y == cplx{0.0, 0.0}) throw Error(ErrorCode::DomainError, "eigenvector root must be nonzero");
    constexpr double kDegenerate = 1e-8;
    if (std::abs(y - 1.0) < kDegenerate || std::abs(y + 1.0) < kDegenerate) {
        throw Error(ErrorCode::DegenerateRoot, "y = +-1 gives the zero vector; the eigenvalue is a double root",
                    {{"y_re", y.real()}, {"y_im", y.imag()}});
    }
    const int n = p.n;
    const cplx log_tau{std::log(p.tau), 0.0};
    const cplx log_y = std::log(y);
    double scale = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n; ++k) {
        scale = std::max({scale, (static_cast<double>(k) * (log_tau + log_y)).real(), (static_cast<double>(k) * (log_tau - log_y)).real()});
    }
    EigenPair out;
    out.eigenvalue = eigenvalue_from_root(p, y);
    out.vector.resize(static_cast<std::size_t>(n));
    double vmax = 0.0;
    for (int k = 1; k <= n; ++k) {
        const cplx v = std::exp(static_cast<double>(k) * (log_tau + log_y) - scale) -
                       std::exp(static_cast<double>(k) * (log_tau - log_y) - scale);
        out.vector[static_cast<std::size_t>(k - 1)] = v;
        vmax = std::max(vmax, std::abs(v));
    }
    if (vmax > 0.0)
        for (cplx& v : out.vector) v /= vmax;
    return out;
}

EigenPair leader_eigenvector(const SystemParams& p) {
    const int n = p.n;
    EigenPair out;
    out.eigenvalue = p.b;
    if (is_decentralized(p, kDecentralizedSlack)) {
        out.vector.assign(static_cast<std::size_t>(n) + 1, cplx{1.0, 0.0});
        return out;
    }
    const double disc = p.b * p.b - 4.0 * p.a * p.c;
    if (std::abs(disc) < 1e-12 * std::max(p.b * p.b, 4.0 * p.a * p.c)) {
        throw Error(ErrorCode::DiscriminantCollapse, "b^2 - 4ac = 0: the leader eigenvector is a limit case",
                    {{"b", p.b}, {"a", p.a}, {"c", p.c}});
    }
    const cplx s = std::sqrt(cplx{disc, 0.0});
    const cplx x_plus = (p.b + s) / (2.0 * p.c);
    const cplx x_minus = (p.a / p.c) / x_plus;
    const cplx numer = (p.a + p.e) + (p.d - p.b) * x_plus;
    const cplx denom = p.c * (1.0 + p.e / p.a) * x_plus + (p.d - p.b);

    // v_k = x+^k + c- x-^k with c- = -(c/a)^n x+^{2n-1} numer/denom, in log form.
    const cplx log_xp = std::log(x_plus);
    const cplx log_xm = std::log(x_minus);
    std::vector<cplx> first(static_cast<std::size_t>(n) + 1), second(static_cast<std::size_t>(n) + 1);
    bool use_first = true, use_second = true;
    cplx log_cm{0.0, 0.0};
    if (numer == cplx{0.0, 0.0}) {
        use_second = false;
    } else if (std::abs(denom) == 0.0) {
        use_first = false;  // c+ = 0: pure x-^k solution
    } else {
        log_cm = std::log(-numer / denom) + static_cast<double>(n) * std::log(p.c / p.a) +
                 static_cast<double>(2 * n - 1) * log_xp;
    }
    double scale = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        first[static_cast<std::size_t>(k)] = static_cast<double>(k) * log_xp;
        second[static_cast<std::size_t>(k)] = (use_first ? log_cm : cplx{0.0, 0.0}) + static_cast<double>(k) * log_xm;
        if (use_first) scale = std::max(scale, first[static_cast<std::size_t>(k)].real());
        if (use_second) scale = std::max(scale, second[static_cast<std::size_t>(k)].real());
    }
    out.vector.resize(static_cast<std::size_t>(n) + 1);
    double vmax = 0.0;
    for (std::size_t k = 0; k < out.vector.size(); ++k) {
        cplx v{0.0, 0.0};
        if (use_first) v += std::exp(first[k] - scale);
        if (use_second) v += std::exp(second[k] - scale);
        out.vector[k] = v;
        vmax = std::max(vmax, std::abs(v));
    }
    if (vmax > 0.0)
        for (cplx& v : out.vector) v /= vmax;
    return out;
}

double residual(const DenseMatrix& M, cplx r, std::span<const cplx> v) {
    if (v.size() != M.order()) {
        throw Error(ErrorCode::DimensionMismatch, "vector length does not match matrix order",
                    {{"order", M.order()}, {"length", v.size()}});
    }
    double vnorm = 0.0;
    for (const cplx& x : v) vnorm += std::norm(x);
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) throw Error(ErrorCode::DomainError, "residual of the zero vector is undefined");
    double rnorm = 0.0;
    for (std::size_t i = 0; i < M.order(); ++i) {
        cplx acc = -r * v[i];
        for (std::size_t j = 0; j < M.order(); ++j) acc += M(i, j) * v[j];
        rnorm += std::norm(acc);
    }
    const double mnorm = M.frobenius_norm();
    return std::sqrt(rnorm) / ((mnorm > 0.0 ? mnorm : 1.0) * vnorm);
}

}  // namespace tridiag
