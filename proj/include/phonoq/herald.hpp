#pragma once

#include <optional>

#include "phonoq/fock.hpp"

// Herald projection P = k_R b + k_B b^dag, the conditional mechanical state
// after a single sideband-photon detection, and the map from experimental
// drive parameters (lambda, theta, beta) to the superposition parameter r.
namespace phonoq::herald {

// Complex sideband coefficients plus the initial displacement. Only the ratio
// k_R/k_B affects the conditional state; the global phase is fixed internally
// so that k_B is real and non-negative.
struct HeraldSpec {
    cplx k_R;
    cplx k_B;
    cplx beta;

    static HeraldSpec from_coefficients(cplx k_R, cplx k_B, cplx beta);
    // k_B = 1, k_R = (r - conj(beta))/beta. Requires beta != 0.
    static HeraldSpec from_r(cplx r, cplx beta);

    // r = conj(beta) + beta k_R/k_B; undefined (nullopt) for pure phonon
    // subtraction k_B = 0.
    std::optional<cplx> r() const;
};

// lambda = |G_R/G_B|, theta = arg(G_R G_B^* beta^2).
struct DriveRatio {
    double lambda;
    double theta;
};

struct ConditionalState {
    fock::DensityMatrix rho;
    double herald_prob_weight; // Tr[P^dag P rho], unnormalized relative likelihood
};

// rho_c = P rho P^dag / Tr[P^dag P rho]. Throws ZeroLikelihoodError when the
// normalization vanishes.
ConditionalState conditional_state(const fock::DensityMatrix& rho, const HeraldSpec& spec,
                                   const NumericPolicy& policy = {});

struct RComputation {
    cplx r;
    double phi;      // arg(beta r); 0 when degenerate
    bool degenerate; // r = 0, phi undefined
};

// r = conj(beta)(1 + lambda e^{i theta}); phi = arg(beta r).
RComputation r_from_drives(const DriveRatio& ratio, cplx beta);

// Drive settings realizing |r| = r_target with cos(2 phi) = 1 (theta = pi,
// lambda = 1 + r_target/|beta|). Defaults to the Q-minimizing target
// |r| = sqrt(3(1+2 n_m)) when r_target is not given.
DriveRatio optimal_drive_settings(std::optional<double> r_target_mag, double n_m, cplx beta);

// Pure state (r|beta> + |beta,1>)/sqrt(1+|r|^2) as a density matrix.
fock::DensityMatrix ideal_superposition(cplx r, cplx beta, fock::FockDim dim,
                                        const NumericPolicy& policy = {});

// cos(2 arg(beta r)) computed from the complex values; returns 1 in the
// degenerate |beta r| -> 0 case (the formulas consuming it carry |r|^2
// factors that vanish there).
double cos_two_phi(cplx r, cplx beta);

} // namespace phonoq::herald
