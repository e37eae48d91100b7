#include "phonoq/steady.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace phonoq::steady {

std::vector<std::string> FilterSpec::regime_warnings(const SystemParams& p) const {
    std::vector<std::string> w;
    if (!(W > 0.0)) {
        w.push_back("filter bandwidth W must be positive");
        return w;
    }
    if (!(std::abs(p.delta_c) < W))
        w.push_back("filter regime |delta_c| << W violated");
    if (!(W < p.omega_m))
        w.push_back("filter regime W << omega_m violated");
    return w;
}

std::vector<std::string> SteadyStateReport::regime_warnings(const SystemParams& p) const {
    std::vector<std::string> w;
    if (gamma_eff <= 0.0)
        w.push_back("anti-damped configuration: gamma_eff = " + std::to_string(gamma_eff));
    else if (gamma_eff < p.gamma)
        w.push_back("blue-dominated configuration: gamma_eff below bare gamma");
    return w;
}

cplx tone_amplitude(const DriveTone& tone, const SystemParams& p) {
    return tone.Omega / cplx(p.kappa / 2.0, -tone.omega);
}

std::vector<SidebandCoeffs> sideband_coefficients(std::span<const DriveTone> tones,
                                                  const SystemParams& p, double omega_m_eff) {
    std::vector<SidebandCoeffs> out;
    out.reserve(tones.size());
    for (const auto& t : tones) {
        const cplx abar = tone_amplitude(t, p);
        const cplx pre = cplx(0, -1) * p.g0 * abar;
        out.push_back({pre / cplx(p.kappa / 2.0, -(t.omega + omega_m_eff)),
                       pre / cplx(p.kappa / 2.0, -(t.omega - omega_m_eff))});
    }
    return out;
}

namespace {

cplx sigma_of_tone(const DriveTone& t, const SystemParams& p, double wm) {
    const double lorentz = std::norm(t.Omega) / (p.kappa * p.kappa / 4.0 + t.omega * t.omega);
    const cplx bracket = 1.0 / cplx(p.kappa / 2.0, -(wm + t.omega)) -
                         1.0 / cplx(p.kappa / 2.0, -(wm - t.omega));
    return cplx(0, -1) * p.g0 * p.g0 * lorentz * bracket;
}

cplx sigma_total(std::span<const DriveTone> tones, const SystemParams& p, double wm) {
    cplx s = 0;
    for (const auto& t : tones) s += sigma_of_tone(t, p, wm);
    return s;
}

} // namespace

SteadyStateReport effective_mechanics(std::span<const DriveTone> tones, const SystemParams& p,
                                      const NumericPolicy& policy) {
    double wm = p.omega_m;
    int iters = 0;
    double residual = 0.0;
    bool converged = tones.empty();
    for (; iters < policy.fixed_point_max_iters && !converged; ++iters) {
        const double target = p.omega_m + sigma_total(tones, p, wm).real();
        const double next = wm + policy.fixed_point_damping * (target - wm);
        residual = std::abs(next - wm) / std::max(std::abs(next), 1e-300);
        wm = next;
        if (residual <= policy.fixed_point_tol) converged = true;
    }
    if (!converged)
        throw ConvergenceError("omega_m_eff fixed point did not converge", residual);

    SteadyStateReport rep;
    rep.omega_m_eff = wm;
    rep.sigma = sigma_total(tones, p, wm);
    rep.gamma_eff = p.gamma - 2.0 * rep.sigma.imag();
    rep.fixed_point_iters = iters;
    rep.sigma_by_tone.reserve(tones.size());
    for (const auto& t : tones) rep.sigma_by_tone.push_back(sigma_of_tone(t, p, wm));
    return rep;
}

Displacement coherent_displacement(std::span<const DriveTone> tones, const SystemParams& p,
                                   const SteadyStateReport& report) {
    const double wm = report.omega_m_eff;
    const double gt = report.gamma_eff;
    // A beat note counts as resonant when its detuning from omega_m_eff is
    // within half the effective linewidth (or numerically indistinguishable).
    const double window = std::max(0.5 * std::abs(gt), 1e-9 * std::abs(wm));

    cplx beta = 0, b_c = 0;
    double residual = 0.0;
    std::vector<cplx> abar(tones.size());
    for (size_t j = 0; j < tones.size(); ++j) abar[j] = tone_amplitude(tones[j], p);

    for (size_t j = 0; j < tones.size(); ++j) {
        for (size_t k = 0; k < tones.size(); ++k) {
            if (j == k) continue;
            const double beat = tones[j].omega - tones[k].omega;
            const cplx term = cplx(0, -1) * p.g0 * abar[j] * std::conj(abar[k]) /
                              cplx(gt / 2.0, wm - beat);
            if (std::abs(beat - wm) <= window)
                beta += term;
            else
                residual += std::abs(term);
        }
        b_c += cplx(0, -1) * p.g0 * std::norm(abar[j]) / cplx(gt / 2.0, wm);
    }
    return {beta, b_c, residual};
}

ThermalBudget thermal_budget(std::span<const DriveTone> tones, const SystemParams& p,
                             const SteadyStateReport& report) {
    if (!(report.gamma_eff > 0.0))
        throw DomainError("thermal budget undefined for non-positive gamma_eff");
    const double wm = report.omega_m_eff;
    double n_o = 0.0;
    for (const auto& t : tones) {
        const double abar2 = std::norm(tone_amplitude(t, p));
        const double stokes = wm - t.omega;
        n_o += p.g0 * p.g0 * p.kappa * abar2 /
               (report.gamma_eff * (p.kappa * p.kappa / 4.0 + stokes * stokes));
    }
    return {n_o, (p.gamma / report.gamma_eff) * p.n_th + n_o};
}

double amplitude_bound(double epsilon, const SystemParams& p, double omega_m_eff,
                       bool resolved_sideband) {
    if (!(epsilon > 0.0)) throw DomainError("epsilon threshold must be positive");
    const double k2 = p.kappa * p.kappa;
    const double w2 = omega_m_eff * omega_m_eff;
    if (resolved_sideband) return 9.0 * w2 / (20.0 * p.kappa * p.g0) * epsilon;
    return (k2 + w2) * (k2 + 9.0 * w2) / (4.0 * p.g0 * p.kappa * (k2 + 5.0 * w2)) * epsilon;
}

cplx filter_leakage(double delta_proj, double W) {
    if (!(W > 0.0)) throw DomainError("filter bandwidth W must be positive");
    return 1.0 / cplx(1.0, -2.0 * delta_proj / W);
}

MeasurementTime ideal_measurement_time(cplx k_R, cplx k_B, cplx k_cool, cplx eta,
                                       double delta_proj, cplx r_target, cplx beta,
                                       const NumericPolicy& policy) {
    if (k_B == cplx(0, 0)) throw DomainError("ideal_measurement_time requires k_B != 0");
    if (beta == cplx(0, 0)) throw DomainError("ideal_measurement_time requires beta != 0");

    const cplx target = k_B * (r_target - std::conj(beta)) / beta - k_R;
    const cplx reach = eta * k_cool;
    const double tm = std::abs(target), rm = std::abs(reach);
    const double scale = std::max({tm, rm, 1e-300});
    const double mismatch = std::abs(rm - tm) / scale;

    const double period =
        delta_proj == 0.0 ? std::numeric_limits<double>::infinity()
                          : 2.0 * std::numbers::pi / std::abs(delta_proj);

    if (tm <= policy.phase_match_tol * scale && rm <= policy.phase_match_tol * scale)
        return {0.0, period, 0.0, true}; // already satisfied, no rotation needed

    if (rm + policy.phase_match_tol * scale < tm)
        throw NoSolutionError("cooling-sideband contribution cannot reach the target modulus",
                              mismatch);

    // Phase alignment: e^{i delta_proj t_c} = target / reach.
    const double phase = std::arg(target / reach);
    double t_c;
    if (delta_proj == 0.0) {
        if (std::abs(phase) > policy.phase_match_tol)
            throw NoSolutionError("delta_proj = 0 cannot rotate the cooling contribution", mismatch);
        t_c = 0.0;
    } else {
        t_c = phase / delta_proj;
        t_c -= std::floor(t_c / period) * period;
        if (t_c >= period) t_c -= period;
    }
    return {t_c, period, mismatch, mismatch <= policy.phase_match_tol};
}

} // namespace phonoq::steady
