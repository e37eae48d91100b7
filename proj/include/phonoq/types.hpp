#pragma once

#include <complex>

namespace phonoq {

using cplx = std::complex<double>;

// Central numeric policy. All tolerances used by the library live here so a
// run can override them in one place (see config::RunConfig).
struct NumericPolicy {
    double hermiticity_tol = 1e-12;      // max |rho_mn - conj(rho_nm)|
    double eigenvalue_floor = -1e-10;    // smallest admissible density-matrix eigenvalue
    double trace_deficit_max = 1e-8;     // accepted truncation tail mass
    double unitarity_tol = 1e-10;        // ||U^dag U - I||_max for displacement operators
    double herald_norm_floor = 1e-14;    // Tr[P^dag P rho] below this is a zero-likelihood event
    double mean_occupation_floor = 1e-14; // <n> below this makes Q undefined
    double degenerate_floor = 1e-14;     // D (conditioned-correlator denominator) floor
    double fixed_point_tol = 1e-12;      // relative tolerance on omega_m_eff
    int fixed_point_max_iters = 50;
    double fixed_point_damping = 0.5;
    double phase_match_tol = 1e-9;       // relative modulus tolerance in ideal_measurement_time
    double sensitivity_soft_limit = 0.2; // |delta_lambda|, |delta_theta| above this draw a warning
    bool validate_positivity = true;     // full eigenvalue check on density-matrix construction
};

} // namespace phonoq
