#include "tridiag/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <mpfr.h>

#include "tridiag/error.hpp"
#include "tridiag/matching.hpp"

namespace tridiag {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Row-major working copy reduced to upper Hessenberg form by stabilized
// elementary similarity transforms.
void reduce_to_hessenberg(std::vector<double>& a, std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    for (std::size_t m = 1; m + 1 < n; ++m) {
        double x = 0.0;
        std::size_t pivot = m;
        for (std::size_t j = m; j < n; ++j) {
            if (std::abs(at(j, m - 1)) > std::abs(x)) {
                x = at(j, m - 1);
                pivot = j;
            }
        }
        if (pivot != m) {
            for (std::size_t j = m - 1; j < n; ++j) std::swap(at(pivot, j), at(m, j));
            for (std::size_t j = 0; j < n; ++j) std::swap(at(j, pivot), at(j, m));
        }
        if (x == 0.0) continue;
        for (std::size_t i = m + 1; i < n; ++i) {
            double y = at(i, m - 1);
            if (y == 0.0) continue;
            y /= x;
            at(i, m - 1) = 0.0;
            for (std::size_t j = m; j < n; ++j) at(i, j) -= y * at(m, j);
            for (std::size_t j = 0; j < n; ++j) at(j, m) += y * at(j, i);
        }
    }
}

std::vector<cplx> hessenberg_qr(std::vector<double>& a, std::size_t order) {
    const int n = static_cast<int>(order);
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * order + static_cast<std::size_t>(j)]; };
    std::vector<cplx> w(order);
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));

    const long budget = 100L * n;
    long total = 0;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l > 0; --l) {
                double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(at(l, l - 1)) <= kEps * s) {
                    at(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = at(nn, nn);
            if (l == nn) {
                w[static_cast<std::size_t>(nn--)] = x + t;
                continue;
            }
            double y = at(nn - 1, nn - 1);
            double ww = at(nn, nn - 1) * at(nn - 1, nn);
            if (l == nn - 1) {
                const double p = 0.5 * (y - x);
                const double q = p * p + ww;
                double z = std::sqrt(std::abs(q));
                x += t;
                if (q >= 0.0) {
                    z = p + std::copysign(z, p);
                    w[static_cast<std::size_t>(nn - 1)] = w[static_cast<std::size_t>(nn)] = x + z;
                    if (z != 0.0) w[static_cast<std::size_t>(nn)] = x - ww / z;
                } else {
                    w[static_cast<std::size_t>(nn)] = cplx{x + p, -z};
                    w[static_cast<std::size_t>(nn - 1)] = cplx{x + p, z};
                }
                nn -= 2;
                continue;
            }
            if (++total > budget) {
                throw Error(ErrorCode::NoConvergence, "QR iteration failed to deflate",
                            {{"order", n}, {"iterations", total}, {"active_block", nn + 1}});
            }
            if (its > 0 && its % 10 == 0) {
                // Exceptional shift to break cycles.
                t += x;
                for (int i = 0; i <= nn; ++i) at(i, i) -= x;
                const double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
                y = x = 0.75 * s;
                ww = -0.4375 * s * s;
            }
            ++its;
            int m;
            double p = 0.0, q = 0.0, r = 0.0, z;
            for (m = nn - 2; m >= l; --m) {
                z = at(m, m);
                r = x - z;
                const double s0 = y - z;
                p = (r * s0 - ww) / at(m + 1, m) + at(m, m + 1);
                q = at(m + 1, m + 1) - z - r - s0;
                r = at(m + 2, m + 1);
                const double s = std::abs(p) + std::abs(q) + std::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
                const double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) + std::abs(at(m + 1, m + 1)));
                if (u <= kEps * v) break;
            }
            for (int i = m; i < nn - 1; ++i) {
                at(i + 2, i) = 0.0;
                if (i != m) at(i + 2, i - 1) = 0.0;
            }
            for (int k = m; k < nn; ++k) {
                if (k != m) {
                    p = at(k, k - 1);
                    q = at(k + 1, k - 1);
                    r = 0.0;
                    if (k + 1 != nn) r = at(k + 2, k - 1);
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x != 0.0) {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
                if (s == 0.0) continue;
                if (k == m) {
                    if (l != m) at(k, k - 1) = -at(k, k - 1);
                } else {
                    at(k, k - 1) = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for (int j = k; j <= nn; ++j) {
                    p = at(k, j) + q * at(k + 1, j);
                    if (k + 1 != nn) {
                        p += r * at(k + 2, j);
                        at(k + 2, j) -= p * z;
                    }
                    at(k + 1, j) -= p * y;
                    at(k, j) -= p * x;
                }
                const int mmin = nn < k + 3 ? nn : k + 3;
                for (int i = l; i <= mmin; ++i) {
                    p = x * at(i, k) + y * at(i, k + 1);
                    if (k + 1 != nn) {
                        p += z * at(i, k + 2);
                        at(i, k + 2) -= p * r;
                    }
                    at(i, k + 1) -= p * q;
                    at(i, k) -= p;
                }
            }
        } while (l + 1 < nn);
    }
    return w;
}

// RAII wrapper over one MPFR number.
class MpReal {
public:
    explicit MpReal(long prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    MpReal(const MpReal& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    MpReal& operator=(const MpReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    ~MpReal() { mpfr_clear(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

// x = mantissa * 2^exponent with the mantissa in [0.5, 1).
struct Split {
    double mantissa;
    long exponent;
};

Split split(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return {0.0, std::numeric_limits<long>::min() / 4};
    long exponent = 0;
    const double m = mpfr_get_d_2exp(&exponent, x, MPFR_RNDN);
    return {m, exponent};
}

MpPoly::Scaled combine(mpfr_srcptr re, mpfr_srcptr im) {
    const Split r = split(re);
    const Split i = split(im);
    const long e = std::max(r.exponent, i.exponent);
    if (r.mantissa == 0.0 && i.mantissa == 0.0) return {cplx{0.0, 0.0}, 0};
    return {cplx{std::ldexp(r.mantissa, static_cast<int>(std::max(r.exponent - e, -2000L))),
                 std::ldexp(i.mantissa, static_cast<int>(std::max(i.exponent - e, -2000L)))},
            e};
}

cplx scaled_to_cplx(cplx mantissa, long exponent) {
    const long clamped = std::clamp(exponent, -4000L, 4000L);
    return {std::ldexp(mantissa.real(), static_cast<int>(clamped)), std::ldexp(mantissa.imag(), static_cast<int>(clamped))};
}

long precision_for(std::size_t degree) { return 128 + 2 * static_cast<long>(degree); }

}  // namespace

struct MpPoly::Impl {
    long prec;
    std::vector<MpReal> coeffs;  // ascending, monic
};

MpPoly::MpPoly(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

MpPoly::MpPoly(std::span<const double> coeffs) {
    if (coeffs.size() < 2 || coeffs.back() != 1.0) {
        throw Error(ErrorCode::DomainError, "polynomial must be monic with degree >= 1",
                    {{"length", coeffs.size()}});
    }
    const long prec = precision_for(coeffs.size() - 1);
    impl_ = std::make_unique<Impl>(Impl{prec, {}});
    impl_->coeffs.reserve(coeffs.size());
    for (double c : coeffs) {
        MpReal x(prec);
        mpfr_set_d(x.get(), c, MPFR_RNDN);
        impl_->coeffs.push_back(std::move(x));
    }
}

MpPoly::MpPoly(const MpPoly& other) : impl_(std::make_unique<Impl>(*other.impl_)) {}
MpPoly& MpPoly::operator=(const MpPoly& other) {
    if (this != &other) impl_ = std::make_unique<Impl>(*other.impl_);
    return *this;
}
MpPoly::MpPoly(MpPoly&&) noexcept = default;
MpPoly& MpPoly::operator=(MpPoly&&) noexcept = default;
MpPoly::~MpPoly() = default;

int MpPoly::degree() const { return static_cast<int>(impl_->coeffs.size()) - 1; }
long MpPoly::precision() const { return impl_->prec; }

std::vector<double> MpPoly::coefficients() const {
    std::vector<double> out;
    out.reserve(impl_->coeffs.size());
    for (const MpReal& c : impl_->coeffs) out.push_back(mpfr_get_d(c.get(), MPFR_RNDN));
    return out;
}

MpPoly::Scaled MpPoly::evaluate(cplx z) const {
    const long prec = impl_->prec;
    MpReal re(prec), im(prec), zr(prec), zi(prec), tmp(prec);
    mpfr_set_d(zr.get(), z.real(), MPFR_RNDN);
    mpfr_set_d(zi.get(), z.imag(), MPFR_RNDN);
    const auto& c = impl_->coeffs;
    mpfr_set(re.get(), c.back().get(), MPFR_RNDN);
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        // (re + i im)(zr + i zi) + c_k
        mpfr_fmms(tmp.get(), re.get(), zr.get(), im.get(), zi.get(), MPFR_RNDN);
        mpfr_fmma(im.get(), re.get(), zi.get(), im.get(), zr.get(), MPFR_RNDN);
        mpfr_add(re.get(), tmp.get(), c[k].get(), MPFR_RNDN);
    }
    return combine(re.get(), im.get());
}

cplx MpPoly::newton_ratio(cplx z) const {
    const long prec = impl_->prec;
    MpReal re(prec), im(prec), dre(prec), dim(prec), zr(prec), zi(prec), tmp(prec);
    mpfr_set_d(zr.get(), z.real(), MPFR_RNDN);
    mpfr_set_d(zi.get(), z.imag(), MPFR_RNDN);
    const auto& c = impl_->coeffs;
    mpfr_set(re.get(), c.back().get(), MPFR_RNDN);
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        // p' <- p' z + p, then p <- p z + c_k
        mpfr_fmms(tmp.get(), dre.get(), zr.get(), dim.get(), zi.get(), MPFR_RNDN);
        mpfr_fmma(dim.get(), dre.get(), zi.get(), dim.get(), zr.get(), MPFR_RNDN);
        mpfr_add(dre.get(), tmp.get(), re.get(), MPFR_RNDN);
        mpfr_add(dim.get(), dim.get(), im.get(), MPFR_RNDN);
        mpfr_fmms(tmp.get(), re.get(), zr.get(), im.get(), zi.get(), MPFR_RNDN);
        mpfr_fmma(im.get(), re.get(), zi.get(), im.get(), zr.get(), MPFR_RNDN);
        mpfr_add(re.get(), tmp.get(), c[k].get(), MPFR_RNDN);
    }
    const Scaled value = combine(re.get(), im.get());
    if (value.mantissa == cplx{0.0, 0.0}) return {0.0, 0.0};
    const Scaled slope = combine(dre.get(), dim.get());
    if (slope.mantissa == cplx{0.0, 0.0}) return {std::numeric_limits<double>::infinity(), 0.0};
    return scaled_to_cplx(value.mantissa / slope.mantissa, value.exponent - slope.exponent);
}

MpPoly::Scaled MpPoly::magnitude(cplx z) const {
    const long prec = impl_->prec;
    MpReal acc(prec), r(prec), term(prec);
    mpfr_set_d(r.get(), std::abs(z), MPFR_RNDN);
    const auto& c = impl_->coeffs;
    mpfr_abs(acc.get(), c.back().get(), MPFR_RNDN);
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        mpfr_abs(term.get(), c[k].get(), MPFR_RNDN);
        mpfr_fma(acc.get(), acc.get(), r.get(), term.get(), MPFR_RNDN);
    }
    const Split s = split(acc.get());
    return {cplx{s.mantissa, 0.0}, s.exponent};
}

std::vector<cplx> qr_eigenvalues(const DenseMatrix& M) {
    const std::size_t n = M.order();
    if (n == 0) throw Error(ErrorCode::DimensionTooSmall, "QR needs a matrix of order >= 1");
    std::vector<double> a(M.entries().begin(), M.entries().end());
    for (double v : a) {
        if (!std::isfinite(v)) throw Error(ErrorCode::DomainError, "matrix has non-finite entries");
    }
    reduce_to_hessenberg(a, n);
    return hessenberg_qr(a, n);
}

DenseMatrix balanced_matrix(const SystemParams& p, MatrixKind kind) {
    DenseMatrix M = system_matrix(p, kind);
    // S^{-1} M S with S = diag(tau^k): entry (i, i+1) gains tau, (i+1, i) loses it.
    for (std::size_t i = 0; i + 1 < M.order(); ++i) {
        M(i, i + 1) *= p.tau;
        M(i + 1, i) /= p.tau;
    }
    return M;
}

std::vector<cplx> oracle_eigenvalues(const SystemParams& p, MatrixKind kind) {
    return qr_eigenvalues(balanced_matrix(p, kind));
}

MpPoly charpoly(const SystemParams& p, MatrixKind kind) {
    const DenseMatrix M = system_matrix(p, kind);
    const std::size_t order = M.order();
    const long prec = precision_for(order);
    auto poly = std::make_unique<MpPoly::Impl>(MpPoly::Impl{prec, {}});

    // D_k = (lambda - m_kk) D_{k-1} - m_{k,k-1} m_{k-1,k} D_{k-2}; D_{-1} = 1.
    std::vector<MpReal> prev{MpReal(prec)};
    mpfr_set_ui(prev[0].get(), 1, MPFR_RNDN);
    std::vector<MpReal> prev2;
    MpReal diag(prec), coupling(prec), tmp(prec);
    for (std::size_t k = 0; k < order; ++k) {
        std::vector<MpReal> cur(prev.size() + 1, MpReal(prec));
        mpfr_set_d(diag.get(), M(k, k), MPFR_RNDN);
        for (std::size_t i = 0; i < prev.size(); ++i) {
            mpfr_add(cur[i + 1].get(), cur[i + 1].get(), prev[i].get(), MPFR_RNDN);
            mpfr_mul(tmp.get(), diag.get(), prev[i].get(), MPFR_RNDN);
            mpfr_sub(cur[i].get(), cur[i].get(), tmp.get(), MPFR_RNDN);
        }
        if (k > 0) {
            mpfr_set_d(coupling.get(), M(k, k - 1), MPFR_RNDN);
            mpfr_mul_d(coupling.get(), coupling.get(), M(k - 1, k), MPFR_RNDN);
            if (!mpfr_zero_p(coupling.get())) {
                for (std::size_t i = 0; i < prev2.size(); ++i) {
                    mpfr_mul(tmp.get(), coupling.get(), prev2[i].get(), MPFR_RNDN);
                    mpfr_sub(cur[i].get(), cur[i].get(), tmp.get(), MPFR_RNDN);
                }
            }
        }
        prev2 = std::move(prev);
        prev = std::move(cur);
    }
    poly->coeffs = std::move(prev);
    return MpPoly(std::move(poly));
}

std::vector<double> charpoly_coeffs(const SystemParams& p, MatrixKind kind) { return charpoly(p, kind).coefficients(); }

std::vector<cplx> polynomial_eigenvalues(const MpPoly& poly) {
    const int n = poly.degree();
    const std::vector<double> c = poly.coefficients();
    if (n == 1) return {cplx{-c[0], 0.0}};

    // Starting points on circles whose radii come from the upper convex hull
    // of (k, log|c_k|): each hull edge carries as many roots as its width.
    std::vector<int> hull;
    auto log_abs = [&](int k) {
        const double v = std::abs(c[static_cast<std::size_t>(k)]);
        return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
    };
    for (int k = 0; k <= n; ++k) {
        if (!std::isfinite(log_abs(k))) continue;
        while (hull.size() >= 2) {
            const int i = hull[hull.size() - 2], j = hull.back();
            const double cross = (j - i) * (log_abs(k) - log_abs(i)) - (k - i) * (log_abs(j) - log_abs(i));
            if (cross >= 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(k);
    }
    std::vector<cplx> z;
    z.reserve(static_cast<std::size_t>(n));
    if (hull.front() > 0) {
        // c_0 = ... = c_{k-1} = 0: exact roots at the origin.
        z.assign(static_cast<std::size_t>(hull.front()), cplx{0.0, 0.0});
    }
    double radius = 1e-12;
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        const int lo = hull[h], hi = hull[h + 1];
        const double r = std::exp((log_abs(lo) - log_abs(hi)) / (hi - lo));
        radius = std::max(radius, r);
        for (int k = 0; k < hi - lo; ++k) {
            const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) / (hi - lo) + static_cast<double>(h) / n) + 0.4;
            z.push_back(std::polar(r, angle));
        }
    }
    // Mostly-real spectra: start on an ellipse around the real segment whose
    // half-width matches the arcsine law with the same first two moments.
    const int free_roots = n - hull.front();
    if (free_roots >= 2) {
        const double s1 = -c[static_cast<std::size_t>(n - 1)];
        const double s2 = s1 * s1 - 2.0 * c[static_cast<std::size_t>(n - 2)];
        const double mean = s1 / free_roots;
        const double var = s2 / free_roots - mean * mean;
        if (var > 0.0) {
            const double semi = std::sqrt(2.0 * var);
            const double minor = 0.02 * semi;
            for (int k = 0; k < free_roots; ++k) {
                const double angle = 2.0 * std::numbers::pi * (k + 0.5) / free_roots + 0.4;
                z[static_cast<std::size_t>(hull.front() + k)] = {mean + semi * std::cos(angle), minor * std::sin(angle)};
            }
            radius = std::max(radius, std::abs(mean) + semi);
        }
    }
    std::vector<char> frozen(static_cast<std::size_t>(n), 0);
    std::fill_n(frozen.begin(), hull.front(), 1);
    constexpr int kMaxSweeps = 500;
    const double floor = 1e-18 * radius;
    int active = n - hull.front();
    std::vector<double> last_step(z.size(), 0.0);
    for (int sweep = 0; sweep < kMaxSweeps && active > 0; ++sweep) {
        // Gauss-Seidel Aberth update z_i -= N_i / (1 - N_i sum_{j != i} 1/(z_i - z_j)), N_i = p/p'.
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (frozen[i]) continue;
            const cplx ratio = poly.newton_ratio(z[i]);
            if (ratio == cplx{0.0, 0.0}) {
                frozen[i] = 1;
                --active;
                continue;
            }
            cplx step;
            if (!std::isfinite(std::abs(ratio))) {
                step = std::polar(1e-8 * radius, 0.7 * static_cast<double>(i));
            } else {
                cplx sum{0.0, 0.0};
                for (std::size_t j = 0; j < z.size(); ++j) {
                    if (j != i && z[i] != z[j]) sum += 1.0 / (z[i] - z[j]);
                }
                const cplx denom = 1.0 - ratio * sum;
                step = denom == cplx{0.0, 0.0} ? ratio : ratio / denom;
                if (!std::isfinite(std::abs(step))) step = ratio;
            }
            z[i] -= step;
            last_step[i] = std::abs(step);
            if (last_step[i] <= 4.0 * kEps * std::abs(z[i]) || last_step[i] <= floor) {
                frozen[i] = 1;
                --active;
            }
        }
    }
    if (active > 0) {
        double worst_step = 0.0;
        cplx worst_root;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (!frozen[i] && last_step[i] >= worst_step) {
                worst_step = last_step[i];
                worst_root = z[i];
            }
        }
        throw Error(ErrorCode::NoConvergence, "polynomial root iteration did not converge",
                    {{"degree", n},
                     {"unconverged", active},
                     {"max_sweeps", kMaxSweeps},
                     {"last_step", worst_step},
                     {"root_re", worst_root.real()},
                     {"root_im", worst_root.imag()}});
    }
    return z;
}

std::vector<cplx> polynomial_eigenvalues(std::span<const double> coeffs) {
    return polynomial_eigenvalues(MpPoly(coeffs));
}

ValidationReport cross_validate(const SystemParams& p, MatrixKind kind) {
    ValidationReport report;
    report.n = p.n;
    report.kind = kind;
    const Spectrum spec = compute_spectrum(p, kind);
    report.regime = spec.regime;
    const std::vector<cplx> theory = spec.eigenvalues();
    const std::vector<cplx> qr = oracle_eigenvalues(p, kind);
    report.max_pairing_error = match_multisets(theory, qr).max_distance;
    if (p.n <= kPolynomialPathMaxN) {
        const std::vector<cplx> roots = polynomial_eigenvalues(charpoly(p, kind));
        report.method_agreement = match_multisets(qr, roots).max_distance;
    }
    return report;
}

}  // namespace tridiag
