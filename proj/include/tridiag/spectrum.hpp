#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tridiag/charpoly.hpp"
#include "tridiag/model.hpp"

namespace tridiag {

/// Which asymptotic theorem governs the parameters: T1 for -a <= e <= a,
/// T2 for e > a, T3 for e < -a and P31 for the a + e = 0 closed form.
enum class Theorem { T1, T2, T3, P31 };

const char* to_string(Theorem t);

/// Cell of the decentralized special-eigenvalue table. Rows are
/// 0: e < -a, 1: |e| <= a, 2: e > a; columns are 0: c < a, 1: c = a, 2: c > a.
struct DecentralizedCell {
    int row = 0;
    int column = 0;
    std::string domain;             // sub-interval of e within the cell
    std::vector<double> predicted;  // predicted special eigenvalues of A
};

struct RegimeLabel {
    Theorem theorem = Theorem::T1;
    std::string case_id;               // "1", "2", "3", "2a", "2b", "2c"
    std::vector<SeedSide> special;     // which quadratic roots produce off-circle roots
    bool on_boundary = false;          // d sits exactly on a case threshold
    std::optional<DecentralizedCell> cell;
};

RegimeLabel classify_regime(const SystemParams& p);

struct Spectrum {
    MatrixKind kind = MatrixKind::Full;
    std::optional<double> leader;  // b (full A), 0 for -L
    std::vector<BranchRoot> bulk;
    std::vector<SpecialRoot> special;
    RegimeLabel regime;
    double shift = 0.0;  // added to A-eigenvalues, -(a+c) for -L
    /// Filled only for -L with non-decentralized parameters, where the
    /// eigenvalues come from the QR oracle on L directly.
    std::vector<cplx> oracle_values;
    int n = 0;
    SystemParams params;

    /// Every eigenvalue of the selected matrix (after the shift).
    std::vector<cplx> eigenvalues() const;
};

/// Theory-path spectrum. Throws RootCountAnomaly when the asymptotic root
/// layout does not yet hold at this n.
Spectrum compute_spectrum(const SystemParams& p, MatrixKind kind);

struct EigenPair {
    cplx eigenvalue;
    std::vector<cplx> vector;
};

/// Eigenpair of Q from a root y of the characteristic polynomial:
/// v_k = (tau y)^k - (tau / y)^k for k = 1..n, r = sqrt(ac)(y + 1/y).
/// The vector is rescaled to unit max-modulus. Throws DegenerateRoot at y = +-1.
EigenPair eigenvector_for(const SystemParams& p, cplx y);

/// Eigenvector of A for the leader eigenvalue b (length n+1).
/// Returns the constant vector for decentralized parameters; otherwise throws
/// DiscriminantCollapse when b^2 - 4ac vanishes.
EigenPair leader_eigenvector(const SystemParams& p);

/// ||M v - r v|| / (||M||_F ||v||).
double residual(const DenseMatrix& M, cplx r, std::span<const cplx> v);

}  // namespace tridiag
