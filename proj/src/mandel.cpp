#include "phonoq/mandel.hpp"

#include <cmath>
#include <numbers>

#include "phonoq/herald.hpp"

namespace phonoq::mandel {

QReport mandel_q(const fock::DensityMatrix& rho, const NumericPolicy& policy) {
    const auto [mean, var] = fock::number_moments(rho);
    if (!(mean > policy.mean_occupation_floor))
        throw UndefinedQError("Mandel Q undefined for vacuum-dominated state (<n> = " +
                              std::to_string(mean) + ")");
    return {var / mean - 1.0, mean, var, QMethod::numeric};
}

double q_highdisp(double r_mag, double phi, double n_m) {
    const double r2 = r_mag * r_mag;
    const double a = 1.0 + 2.0 * n_m;
    return 2.0 * ((a - r2 * std::cos(2.0 * phi)) / ((a + r2) * (a + r2)) + n_m);
}

double q_highdisp(cplx r, cplx beta, double n_m) {
    const double r2 = std::norm(r);
    const double a = 1.0 + 2.0 * n_m;
    return 2.0 * ((a - r2 * herald::cos_two_phi(r, beta)) / ((a + r2) * (a + r2)) + n_m);
}

double q_conditioned_analytic(cplx r, cplx beta, double n_m, const NumericPolicy& policy) {
    const double b2 = std::norm(beta);
    const double r2 = std::norm(r);
    const double nm = n_m;

    // D = |beta|^2 (1+|r|^2) + (2|beta|^2 + |r|^2 - 2 Re(beta r)) n_m
    const double D = b2 * (1.0 + r2) + (2.0 * b2 + r2 - 2.0 * (beta * r).real()) * nm;
    if (!(D > policy.degenerate_floor))
        throw DegenerateError("conditioned-correlator denominator D = " + std::to_string(D));

    // Noise frame: P/k_B = r + g b_n + b_n^dag with g = (r - conj(beta))/beta.
    // Conditioned correlators of b_n by Wick contraction on the thermal state.
    const cplx g = (r - std::conj(beta)) / beta;
    const double g2 = std::norm(g);
    const double pp = r2 + g2 * nm + (nm + 1.0); // <P'^dag P'> = D/|beta|^2

    const cplx x = (std::conj(r) * (nm + 1.0) + r * std::conj(g) * nm) / pp;
    const double xdx = (r2 * nm + 2.0 * g2 * nm * nm + (nm + 1.0) * (2.0 * nm + 1.0)) / pp;
    const cplx xx = 2.0 * std::conj(g) * nm * (nm + 1.0) / pp;
    const cplx xdxx = (2.0 * std::conj(r) * nm * (nm + 1.0) + 2.0 * r * std::conj(g) * nm * nm) / pp;
    const double xdxdxx =
        (2.0 * r2 * nm * nm + 6.0 * g2 * nm * nm * nm + 2.0 * nm * (nm + 1.0) * (3.0 * nm + 2.0)) / pp;

    const double lin = xdx + 2.0 * (std::conj(beta) * x).real();
    const double mean_n = b2 + lin;
    if (!(mean_n > policy.mean_occupation_floor))
        throw UndefinedQError("conditioned mean occupation vanishes");

    const double num = 2.0 * b2 * xdx + 2.0 * (std::conj(beta) * std::conj(beta) * xx).real() +
                       4.0 * (std::conj(beta) * xdxx).real() + xdxdxx - lin * lin;
    return num / mean_n;
}

std::vector<std::string> SensitivityInput::warnings(const NumericPolicy& policy) const {
    std::vector<std::string> w;
    if (std::abs(delta_lambda) > policy.sensitivity_soft_limit)
        w.push_back("sensitivity expansion dubious: |delta_lambda| = " + std::to_string(std::abs(delta_lambda)));
    if (std::abs(delta_theta) > policy.sensitivity_soft_limit)
        w.push_back("sensitivity expansion dubious: |delta_theta| = " + std::to_string(std::abs(delta_theta)));
    return w;
}

double delta_q_sensitivity(const SensitivityInput& s) {
    if (s.n_m < 0.0) throw DomainError("n_m must be non-negative");
    const double a = 1.0 + 2.0 * s.n_m;
    return std::norm(s.beta) / (4.0 * a * a) *
           (0.75 * s.delta_lambda * s.delta_lambda + s.delta_theta * s.delta_theta);
}

double wigner_at(const fock::DensityMatrix& rho, cplx alpha, const NumericPolicy& policy) {
    const int d = rho.dim();
    const fock::Matrix D = fock::displacement_operator(-alpha, fock::FockDim(d), policy).elements;
    fock::Matrix shifted = D * rho.elements * D.adjoint();

    // Boundary-aliasing guard: the displaced state must not pile up against
    // the truncation edge.
    double tail = 0.0;
    for (int k = std::max(0, d - 5); k < d; ++k) tail += shifted(k, k).real();
    if (tail > policy.trace_deficit_max * 10.0)
        throw TruncationError("state support leaves the truncated space under displacement by alpha",
                              fock::required_dim(std::abs(alpha) + std::sqrt(fock::number_moments(rho).mean)));

    double parity_sum = 0.0;
    for (int k = 0; k < d; ++k) parity_sum += ((k % 2 == 0) ? 1.0 : -1.0) * shifted(k, k).real();
    return 2.0 / std::numbers::pi * parity_sum;
}

} // namespace phonoq::mandel
