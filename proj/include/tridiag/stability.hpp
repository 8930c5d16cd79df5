#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tridiag/model.hpp"
#include "tridiag/spectrum.hpp"

namespace tridiag {

enum class Verdict { Stable, Unstable, Inconclusive };

const char* to_string(Verdict v);

struct SecondOrderParams {
    double alpha = 1.0;
    double beta = 1.0;
};

struct StabilityVerdict {
    Verdict stable = Verdict::Inconclusive;
    std::optional<cplx> witness;  // nonzero mode with the largest real part
    int zero_multiplicity = 0;
    std::string rule;
    double spectral_abscissa = 0.0;  // max real part over nonzero modes
    Verdict asymptotic = Verdict::Inconclusive;
    std::optional<Verdict> finite_n;  // empty when the finite-n check cannot decide
};

/// Eigenvalues of -L with flags for modes whose sign is resolved below the
/// rounding level of a + c.
struct LaplacianModes {
    std::vector<cplx> values;
    std::vector<bool> resolved;  // sign known from the offset solve
    std::vector<bool> zero;      // counted as a zero mode
};

/// |lambda| <= 1e-8 (a + c) marks a zero mode.
double zero_tolerance(const SystemParams& p);

LaplacianModes laplacian_modes(const SystemParams& p);

/// Eigenvalues of -L. Decentralized parameters use the theory path shifted
/// by -(a + c); otherwise, or when n is too small for the asymptotic root
/// layout, the QR oracle on L.
std::vector<cplx> laplacian_spectrum(const SystemParams& p);

/// Throws NotDecentralized.
StabilityVerdict first_order_verdict(const SystemParams& p);

/// nu = (beta lambda +- sqrt(beta^2 lambda^2 + 4 alpha lambda)) / 2 for each
/// lambda, the roots of nu^2 - beta lambda nu - alpha lambda = 0.
std::vector<cplx> second_order_eigenvalues(std::span<const cplx> lambdas, SecondOrderParams so);

/// Throws NotDecentralized.
StabilityVerdict second_order_verdict(const SystemParams& p, SecondOrderParams so);

}  // namespace tridiag
