#pragma once

#include <string>
#include <vector>

#include "phonoq/fock.hpp"

// Mandel Q: exact evaluation on density matrices plus every closed form used
// by the protocol analysis (high-displacement limits, the full conditioned
// expression with thermal correlators, the drive-error sensitivity), and
// point evaluation of the Wigner function via displaced parity.
namespace phonoq::mandel {

enum class QMethod { numeric, highdisp_pure, highdisp_thermal, conditioned_analytic };

struct QReport {
    double q;
    double mean_n;
    double var_n;
    QMethod method;
};

// Q = <Delta n^2>/<n> - 1 from number_moments. Throws UndefinedQError for
// vacuum-dominated states (<n> below the policy floor).
QReport mandel_q(const fock::DensityMatrix& rho, const NumericPolicy& policy = {});

// High-displacement limit of the conditioned Q for a displaced thermal input:
//   2 [ (1 + 2 n_m - r^2 cos(2 phi)) / (1 + 2 n_m + r^2)^2 + n_m ]
// n_m = 0 reduces to the pure-state limit.
double q_highdisp(double r_mag, double phi, double n_m);

// Same, with cos(2 phi) taken from the complex pair (r, beta) to avoid
// branch-cut ambiguity.
double q_highdisp(cplx r, cplx beta, double n_m);

// Finite-beta Q of the conditional state for a displaced thermal input,
// assembled from the five conditioned noise correlators. Throws
// DegenerateError when the correlator denominator D vanishes.
double q_conditioned_analytic(cplx r, cplx beta, double n_m, const NumericPolicy& policy = {});

struct SensitivityInput {
    double delta_lambda;
    double delta_theta; // radians
    cplx beta;
    double n_m;

    std::vector<std::string> warnings(const NumericPolicy& policy = {}) const;
};

// Second-order drive-error penalty:
//   |beta|^2 / (4 (1+2 n_m)^2) * (3/4 dlambda^2 + dtheta^2)
double delta_q_sensitivity(const SensitivityInput& s);

// W(alpha) = (2/pi) Tr[D(-alpha) rho D(alpha) Pi], Pi the parity operator.
double wigner_at(const fock::DensityMatrix& rho, cplx alpha, const NumericPolicy& policy = {});

} // namespace phonoq::mandel
