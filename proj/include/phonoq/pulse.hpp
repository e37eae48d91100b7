#pragma once

#include <string>
#include <vector>

#include "phonoq/fock.hpp"

// Pulsed-protocol machinery: cavity response to the write tones, the
// temporal-mode coefficients (k_R, k_B) from the transcendental pulse
// relation, readout conversion, and the Hanbury Brown-Twiss click model with
// its Q estimator.
namespace phonoq::pulse {

// Hardware constants. All rates and frequencies in angular rad/s.
struct SystemParams {
    double kappa = 1.0;   // cavity energy decay
    double gamma = 1e-6;  // mechanical decay
    double omega_m = 10.0;
    double g0 = 1e-3;     // single-photon coupling
    double n_th = 0.0;    // bath occupation
    double delta_c = 0.0; // common detuning

    std::vector<std::string> regime_warnings() const;
};

// Flattop write pulse: enhanced couplings G_i = g0 abar_i, duration tau_w.
// The common phase is fixed so that Im(G_R G_B) = 0.
struct PulsePlan {
    cplx G_R;
    cplx G_B;
    double tau_w;
    double kappa;
    double gamma_R; // 4|G_R|^2/kappa
    double gamma_B; // 4|G_B|^2/kappa
    double G_w;     // (gamma_R - gamma_B)/2

    static PulsePlan make(cplx G_R, cplx G_B, double tau_w, double kappa);

    std::vector<std::string> regime_warnings() const;
};

struct DetectionModel {
    double eta = 1.0;     // end-to-end detection efficiency
    double epsilon = 1.0; // readout conversion 1 - exp(-2 G_r tau_r)
    double split = 0.5;   // beamsplitter ratio

    double thinning() const { return eta * epsilon; }
    void validate() const;
};

// Steady cavity amplitude of one write tone:
//   abar = Omega / (kappa/2 - i (delta_c - omega_drive))
// omega_drive is the tone's offset measured downward from the mean drive
// frequency omega_ave (red-positive): the red-detuned write tone sits at
// +omega_m, the blue one at -omega_m, and omega_drive = delta_c is resonant
// with the cavity.
cplx cavity_amplitude(double omega_drive, cplx Omega, const SystemParams& p);

struct HeraldCoeffs {
    cplx k_R;
    cplx k_B;
};

// Unique small-|k| solution of
//   k_R/k_B = G_R/G_B,   cos(sqrt(|k_R|^2 - |k_B|^2)) = exp(-G_w tau_w)
// (cosh branch for G_w < 0). Short pulses give |k_i| -> sqrt(gamma_i tau_w).
HeraldCoeffs pulse_coefficients(const PulsePlan& plan);

// epsilon = 1 - exp(-2 G_r tau_r) with G_r = 2|G_R|^2/kappa.
double readout_conversion(cplx G_R, double kappa, double tau_r);

struct ClickProbabilities {
    double p0;
    double p1; // exactly one detector fires
    double p2; // both fire
};

// Each of the n phonons converts to a detected photon independently with
// probability eta*epsilon; each detected photon lands on detector A or B with
// probability (split, 1-split); dead time longer than the pulse makes each
// detector fire at most once. p0 + p1 + p2 = 1 exactly.
ClickProbabilities click_probabilities(const fock::DensityMatrix& rho, const DetectionModel& det);

// Q_est = (4 p2/p1 - p1) / eps_eta. Throws UndefinedQError when p1 = 0.
double q_from_clicks(double p1, double p2, double eps_eta);

// Moments of the binomially thinned number distribution, by explicit
// summation over the detected-photon distribution (independent of the
// Q_detected = q Q_source identity it is used to check).
fock::Moments thinned_number_moments(const fock::DensityMatrix& rho, double q);

} // namespace phonoq::pulse
