#pragma once

#include <Eigen/Dense>

#include "phonoq/errors.hpp"
#include "phonoq/types.hpp"

// Dense complex linear algebra over a truncated harmonic-oscillator Hilbert
// space: operator construction, state preparation, expectations, and
// truncation-quality accounting. Everything is immutable after construction
// and safe to use concurrently across independent inputs.
namespace phonoq::fock {

using Matrix = Eigen::MatrixXcd;

// Number of retained Fock levels {|0>, ..., |dim-1>}.
struct FockDim {
    int dim;
    explicit FockDim(int d) : dim(d) {
        if (d < 2) throw InvalidDimensionError("Fock dimension must be at least 2, got " + std::to_string(d));
    }
};

// Minimal dimension the truncation rule demands for a state reaching
// amplitude |beta_eff| with thermal occupation n_m on Fock level n:
//   dim = ceil(|beta_eff|^2 + 8|beta_eff| + 12(n_m+1) + n + 10)
int required_dim(double beta_eff, double n_m = 0.0, int n = 0);

// required_dim plus the support margin a displaced thermal state needs; its
// number tail scales as (|beta| + z*sqrt(n_m + 1/2))^2 rather than additively
// in n_m. Keeps doubled-dim moment drift below 1e-8 relative.
int recommended_dim(double beta_eff, double n_m = 0.0, int n = 0);

enum class OperatorKind { ladder, number, displacement, parity, herald, generic };

struct OperatorMatrix {
    Matrix elements;
    OperatorKind kind = OperatorKind::generic;

    int dim() const { return static_cast<int>(elements.rows()); }
};

// Hermitian, positive, unit-trace operator on the truncated space.
// trace_deficit records the tail mass removed by truncation before the final
// renormalization (1 - trace).
struct DensityMatrix {
    Matrix elements;
    double trace_deficit = 0.0;

    int dim() const { return static_cast<int>(elements.rows()); }

    // Validates hermiticity and (optionally) positivity, renormalizes the
    // trace, and records the deficit. Throws TruncationError when the deficit
    // exceeds the policy bound.
    static DensityMatrix validated(Matrix rho, double trace_deficit,
                                   const NumericPolicy& policy = {});
};

enum class StateKind { coherent, thermal, displaced_thermal, fock, displaced_fock };

// Annihilation operator b with <n-1|b|n> = sqrt(n).
OperatorMatrix ladder_matrix(FockDim dim);

// n = b^dag b, diagonal with entries 0..dim-1.
OperatorMatrix number_operator(FockDim dim);

// Parity (-1)^n, diagonal.
OperatorMatrix parity_operator(FockDim dim);

// exp(beta b^dag - conj(beta) b), built from the exact anti-Hermitian
// generator via eigendecomposition (uniform accuracy at large |beta|).
// Throws TruncationError when dim violates the rule for |beta|.
OperatorMatrix displacement_operator(cplx beta, FockDim dim, const NumericPolicy& policy = {});

// coherent           -> D(beta)|0><0|D^dag(beta)
// thermal            -> diagonal geometric distribution with mean n_m
// displaced_thermal  -> D(beta) rho_th D^dag(beta)
// fock               -> |n><n|
// displaced_fock     -> D(beta)|n><n|D^dag(beta)
DensityMatrix prepare_state(StateKind kind, cplx beta, double n_m, int n, FockDim dim,
                            const NumericPolicy& policy = {});

// Tr[rho * op]. Throws ShapeError on dimension mismatch.
cplx expectation(const DensityMatrix& rho, const OperatorMatrix& op);

struct Moments {
    double mean;
    double variance;
};

// (<n>, <n^2> - <n>^2) of the number operator.
Moments number_moments(const DensityMatrix& rho);

// Tr[rho^2].
double purity(const DensityMatrix& rho);

// Tr[rho sigma]; equals the fidelity when either argument is pure.
double state_overlap(const DensityMatrix& rho, const DensityMatrix& sigma);

} // namespace phonoq::fock
