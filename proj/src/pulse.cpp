#include "phonoq/pulse.hpp"

#include <cmath>

namespace phonoq::pulse {

std::vector<std::string> SystemParams::regime_warnings() const {
    std::vector<std::string> w;
    if (!(kappa < omega_m))
        w.push_back("outside resolved-sideband regime: kappa = " + std::to_string(kappa) +
                    " >= omega_m = " + std::to_string(omega_m));
    if (std::abs(delta_c) > kappa / 10.0)
        w.push_back("common detuning |delta_c| = " + std::to_string(std::abs(delta_c)) +
                    " exceeds kappa/10");
    return w;
}

PulsePlan PulsePlan::make(cplx G_R, cplx G_B, double tau_w, double kappa) {
    if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
    if (tau_w < 0.0) throw DomainError("tau_w must be non-negative");
    // Common phase rotation so Im(G_R G_B) = 0 with non-negative real part.
    const cplx prod = G_R * G_B;
    if (prod != cplx(0, 0)) {
        const cplx rot = std::exp(cplx(0, -0.5 * std::arg(prod)));
        G_R *= rot;
        G_B *= rot;
    }
    const double gamma_R = 4.0 * std::norm(G_R) / kappa;
    const double gamma_B = 4.0 * std::norm(G_B) / kappa;
    return PulsePlan{G_R, G_B, tau_w, kappa, gamma_R, gamma_B, 0.5 * (gamma_R - gamma_B)};
}

std::vector<std::string> PulsePlan::regime_warnings() const {
    std::vector<std::string> w;
    if (std::abs(G_R) > kappa / 10.0 || std::abs(G_B) > kappa / 10.0)
        w.push_back("adiabatic regime violated: |G_i| exceeds kappa/10");
    if (gamma_R * tau_w > 0.1 || gamma_B * tau_w > 0.1)
        w.push_back("short-pulse regime violated: gamma_i tau_w exceeds 0.1");
    return w;
}

void DetectionModel::validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(eta) || !in01(epsilon) || !in01(split))
        throw DomainError("detection model parameters must lie in [0,1]");
}

cplx cavity_amplitude(double omega_drive, cplx Omega, const SystemParams& p) {
    return Omega / cplx(p.kappa / 2.0, -(p.delta_c - omega_drive));
}

HeraldCoeffs pulse_coefficients(const PulsePlan& plan) {
    const double s = plan.G_w * plan.tau_w;
    if (std::abs(s) > 3.0)
        throw RegimeError("|G_w| tau_w = " + std::to_string(std::abs(s)) +
                          " too large for the principal-branch solution");

    // x = |k_R|^2 - |k_B|^2 from the transcendental constraint; the magnitude
    // scale then follows from the ratio |k_R/k_B|^2 = gamma_R/gamma_B via
    // |k_i|^2 = x gamma_i / (2 G_w).
    double kR2, kB2;
    if (std::abs(s) < 1e-8) {
        // degenerate limit gamma_R -> gamma_B; series of both branches
        kR2 = plan.gamma_R * plan.tau_w * (1.0 - s / 3.0);
        kB2 = plan.gamma_B * plan.tau_w * (1.0 - s / 3.0);
    } else {
        double x;
        if (s > 0.0) {
            const double mu = std::acos(std::exp(-s));
            x = mu * mu;
        } else {
            const double mu = std::acosh(std::exp(-s));
            x = -mu * mu;
        }
        kR2 = x * plan.gamma_R / (2.0 * plan.G_w);
        kB2 = x * plan.gamma_B / (2.0 * plan.G_w);
    }

    const cplx k_B = std::sqrt(std::max(kB2, 0.0));
    cplx k_R;
    if (plan.G_B != cplx(0, 0)) {
        k_R = k_B * plan.G_R / plan.G_B;
    } else {
        const double m = std::sqrt(std::max(kR2, 0.0));
        k_R = (plan.G_R == cplx(0, 0)) ? cplx(0, 0) : m * plan.G_R / std::abs(plan.G_R);
    }
    return {k_R, k_B};
}

double readout_conversion(cplx G_R, double kappa, double tau_r) {
    if (tau_r < 0.0) throw DomainError("tau_r must be non-negative");
    const double G_r = 2.0 * std::norm(G_R) / kappa;
    return -std::expm1(-2.0 * G_r * tau_r);
}

ClickProbabilities click_probabilities(const fock::DensityMatrix& rho, const DetectionModel& det) {
    det.validate();
    const double q = det.thinning();
    const double a_silent = 1.0 - q * det.split;         // detector A stays dark
    const double b_silent = 1.0 - q * (1.0 - det.split); // detector B stays dark
    const double none = 1.0 - q;

    const int d = rho.dim();
    double p0 = 0.0, psame = 0.0;
    double wa = 1.0, wb = 1.0, wn = 1.0;
    for (int n = 0; n < d; ++n) {
        const double pn = rho.elements(n, n).real();
        p0 += pn * wn;
        psame += pn * (wa + wb);
        wa *= a_silent;
        wb *= b_silent;
        wn *= none;
    }
    const double p1 = std::max(psame - 2.0 * p0, 0.0);
    const double p2 = std::max(1.0 - p0 - p1, 0.0);
    return {p0, p1, p2};
}

double q_from_clicks(double p1, double p2, double eps_eta) {
    if (!(p1 > 0.0)) throw UndefinedQError("click estimator undefined for p1 = 0");
    if (!(eps_eta > 0.0)) throw DomainError("eps_eta must be positive");
    return (4.0 * p2 / p1 - p1) / eps_eta;
}

fock::Moments thinned_number_moments(const fock::DensityMatrix& rho, double q) {
    if (q < 0.0 || q > 1.0) throw DomainError("thinning probability must lie in [0,1]");
    const int d = rho.dim();
    double mean = 0.0, second = 0.0;
    for (int n = 0; n < d; ++n) {
        const double pn = rho.elements(n, n).real();
        if (pn <= 0.0) continue;
        // binomial(n, q) walked in place
        if (q == 1.0) {
            mean += pn * n;
            second += pn * double(n) * n;
            continue;
        }
        double w = std::pow(1.0 - q, n);
        for (int m = 0; m <= n; ++m) {
            mean += pn * w * m;
            second += pn * w * double(m) * m;
            if (m < n) w *= double(n - m) / double(m + 1) * q / (1.0 - q);
        }
    }
    return {mean, second - mean * mean};
}

} // namespace phonoq::pulse
