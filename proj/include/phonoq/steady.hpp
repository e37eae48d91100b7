#pragma once

#include <span>
#include <string>
#include <vector>

#include "phonoq/pulse.hpp"

// Continuous-wave protocol: multi-tone linearized adiabatic steady state.
// Sideband coefficients, the drive-induced self-energy with the renormalized
// mechanics, optical heating budget, coherent displacement from beat notes,
// drive-amplitude bounds, filter leakage, and the ideal projective
// measurement time.
//
// Tone frequencies follow the continuous-wave convention: omega is the
// detuning of the drive from the cavity resonance (red cooling tone at
// -omega_m_eff), with the steady amplitude abar_j = Omega_j/(kappa/2 - i omega_j).
namespace phonoq::steady {

using pulse::SystemParams;

enum class ToneTag { cool, displace_plus, displace_minus, meas_red, meas_blue, custom };

struct DriveTone {
    double omega;  // rad/s, detuning from cavity resonance
    cplx Omega;    // sqrt(photon flux)
    ToneTag tag = ToneTag::custom;
};

struct FilterSpec {
    double center; // rad/s relative to cavity resonance
    double W;      // bandwidth, rad/s

    std::vector<std::string> regime_warnings(const SystemParams& p) const;
};

struct SidebandCoeffs {
    cplx k_R; // anti-Stokes
    cplx k_B; // Stokes
};

struct SteadyStateReport {
    cplx sigma;            // self-energy
    double gamma_eff;      // gamma - 2 Im(sigma)
    double omega_m_eff;    // omega_m + Re(sigma), self-consistent
    double n_o = 0.0;      // optical contribution to the occupation
    double n_m = 0.0;      // (gamma/gamma_eff) n_th + n_o
    cplx beta{};           // resonant beat-note displacement
    cplx b_c{};            // static shift
    double beta_residual = 0.0; // off-resonant beat-note envelope
    int fixed_point_iters = 0;
    std::vector<cplx> sigma_by_tone;

    std::vector<std::string> regime_warnings(const SystemParams& p) const;
};

// Steady cavity amplitude of one tone.
cplx tone_amplitude(const DriveTone& tone, const SystemParams& p);

// Per-tone Fourier components (time dependence e^{-i omega_j t} implicit):
//   k_R,j = -i g0 abar_j / (kappa/2 - i(omega_j + omega_m_eff))
//   k_B,j = -i g0 abar_j / (kappa/2 - i(omega_j - omega_m_eff))
std::vector<SidebandCoeffs> sideband_coefficients(std::span<const DriveTone> tones,
                                                  const SystemParams& p, double omega_m_eff);

// Self-energy from the antisymmetric single-tone sum, solved self-consistently
// for omega_m_eff by damped fixed-point iteration. Fills sigma, gamma_eff,
// omega_m_eff, fixed_point_iters, sigma_by_tone.
SteadyStateReport effective_mechanics(std::span<const DriveTone> tones, const SystemParams& p,
                                      const NumericPolicy& policy = {});

struct Displacement {
    cplx beta;       // coefficient of the resonant e^{-i omega_m_eff t} beat note
    cplx b_c;        // static displacement
    double residual; // summed magnitude of off-resonant beat terms
};

// Coherent mechanical response to tone-pair beat notes. Pairs beating at
// omega_m_eff (within the resonance window) contribute to beta; all others
// are accumulated into the residual.
Displacement coherent_displacement(std::span<const DriveTone> tones, const SystemParams& p,
                                   const SteadyStateReport& report);

struct ThermalBudget {
    double n_o;
    double n_m;
};

// n_o = sum_j g0^2 kappa |abar_j|^2 / [gamma_eff (kappa^2/4 + (omega_m_eff - omega_j)^2)]
// n_m = (gamma/gamma_eff) n_th + n_o
ThermalBudget thermal_budget(std::span<const DriveTone> tones, const SystemParams& p,
                             const SteadyStateReport& report);

// Largest |beta| keeping the displacement-drive heating below epsilon:
//   (kappa^2+w^2)(kappa^2+9w^2) / (4 g0 kappa (kappa^2+5w^2)) * epsilon
// resolved_sideband selects the 9w^2/(20 kappa g0) * epsilon simplification.
double amplitude_bound(double epsilon, const SystemParams& p, double omega_m_eff,
                       bool resolved_sideband = false);

// eta = 1 / (1 - 2i delta_proj / W)
cplx filter_leakage(double delta_proj, double W);

struct MeasurementTime {
    double t_c;
    double period;   // 2 pi / |delta_proj|
    double mismatch; // relative modulus mismatch at the phase-matched time
    bool exact;      // mismatch within policy.phase_match_tol
};

// Smallest non-negative t_c with
//   (k_R + eta k_cool e^{i delta_proj t_c}) / k_B = (r - conj(beta))/beta.
// Throws NoSolutionError when |eta k_cool| cannot reach the required target.
MeasurementTime ideal_measurement_time(cplx k_R, cplx k_B, cplx k_cool, cplx eta,
                                       double delta_proj, cplx r_target, cplx beta,
                                       const NumericPolicy& policy = {});

} // namespace phonoq::steady
