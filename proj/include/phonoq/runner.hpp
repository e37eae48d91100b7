#pragma once

#include <iosfwd>

#include "phonoq/config.hpp"
#include "phonoq/table.hpp"

// Experiment orchestration. Sweeps evaluate pure operations over cartesian
// grids; rows are emitted in row-major axis order regardless of the number of
// worker threads, so identical configs produce byte-identical output.
namespace phonoq::runner {

// Row status column values used by protocol/steady tables.
enum RowStatus : int {
    kOk = 0,
    kZeroLikelihood = 2,
    kUndefinedEstimator = 3,
    kNumericError = 4,
};

// Grid over {r, phi, n_m, beta}; columns
// [axes..., q_analytic, q_numeric, q_highdisp, abs_diff].
// Negative r values select the cos(phi) = -1 branch (phi shifted by pi).
table::ResultTable run_sweep_q(const config::RunConfig& cfg);

// End-to-end pulsed protocol; one row per grid point over {lambda, theta,
// n_m, beta} (single row when no axes are given).
table::ResultTable run_protocol(const config::RunConfig& cfg);

// Steady-state report for the configured tone list.
table::ResultTable run_steady(const config::RunConfig& cfg);

// Eq.-(12)-style quadratic penalty versus centered second differences of the
// finite-beta conditioned Q, taken at the finite-beta minimum.
table::ResultTable run_sensitivity(const config::RunConfig& cfg);

// Full invariant suite; prints one line per check, returns the failure count.
int run_validation(std::ostream& out);

// Regime warnings for the configured system/pulse/filter (strict mode turns
// these into RegimeError).
std::vector<std::string> collect_warnings(const config::RunConfig& cfg);

} // namespace phonoq::runner
