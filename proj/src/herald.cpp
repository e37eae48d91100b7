#include "phonoq/herald.hpp"

#include <cmath>

namespace phonoq::herald {

HeraldSpec HeraldSpec::from_coefficients(cplx k_R, cplx k_B, cplx beta) {
    if (k_R == cplx(0, 0) && k_B == cplx(0, 0))
        throw DomainError("herald coefficients (k_R, k_B) must not both vanish");
    // Rotate the common phase so k_B is real and non-negative (only the ratio
    // is physical). Pure subtraction k_B = 0 keeps k_R's phase.
    if (k_B != cplx(0, 0)) {
        const cplx phase = std::conj(k_B) / std::abs(k_B);
        k_R *= phase;
        k_B = std::abs(k_B);
    }
    return HeraldSpec{k_R, k_B, beta};
}

HeraldSpec HeraldSpec::from_r(cplx r, cplx beta) {
    if (beta == cplx(0, 0)) throw DomainError("from_r requires beta != 0");
    return HeraldSpec{(r - std::conj(beta)) / beta, cplx(1, 0), beta};
}

std::optional<cplx> HeraldSpec::r() const {
    if (k_B == cplx(0, 0)) return std::nullopt;
    return std::conj(beta) + beta * k_R / k_B;
}

ConditionalState conditional_state(const fock::DensityMatrix& rho, const HeraldSpec& spec,
                                   const NumericPolicy& policy) {
    const int d = rho.dim();
    // Apply P = k_R b + k_B b^dag without materializing P: band structure.
    //   (P v)_n = k_R sqrt(n+1) v_{n+1} + k_B sqrt(n) v_{n-1}
    fock::Matrix tmp(d, d);
    auto apply_left = [&](const fock::Matrix& m, fock::Matrix& out) {
        for (int c = 0; c < d; ++c) {
            for (int n = 0; n < d; ++n) {
                cplx v = 0;
                if (n + 1 < d) v += spec.k_R * std::sqrt(double(n + 1)) * m(n + 1, c);
                if (n >= 1) v += spec.k_B * std::sqrt(double(n)) * m(n - 1, c);
                out(n, c) = v;
            }
        }
    };
    apply_left(rho.elements, tmp); // tmp = P rho
    fock::Matrix tmp_adj = tmp.adjoint();
    fock::Matrix res(d, d);
    apply_left(tmp_adj, res);      // res = P (P rho)^dag = P rho P^dag

    const double weight = res.trace().real();
    if (!(weight > policy.herald_norm_floor))
        throw ZeroLikelihoodError("herald likelihood Tr[P^dag P rho] = " + std::to_string(weight));
    auto rho_c = fock::DensityMatrix::validated(std::move(res), rho.trace_deficit, policy);
    return {std::move(rho_c), weight};
}

RComputation r_from_drives(const DriveRatio& ratio, cplx beta) {
    if (!(ratio.lambda > 0.0) || !std::isfinite(ratio.lambda))
        throw DomainError("drive ratio lambda must be finite and positive");
    const cplx sum = 1.0 + ratio.lambda * std::exp(cplx(0, ratio.theta));
    // Exact destructive interference leaves rounding residue of order
    // eps*(1+lambda); snap it to zero and flag the phase as degenerate.
    if (std::abs(sum) <= 1e-14 * (1.0 + ratio.lambda)) return {cplx(0, 0), 0.0, true};
    const cplx r = std::conj(beta) * sum;
    const cplx br = beta * r;
    if (std::abs(br) < 1e-300) return {r, 0.0, true};
    return {r, std::arg(br), false};
}

DriveRatio optimal_drive_settings(std::optional<double> r_target_mag, double n_m, cplx beta) {
    if (beta == cplx(0, 0)) throw DegenerateError("optimal_drive_settings requires |beta| > 0");
    if (n_m < 0.0) throw DomainError("n_m must be non-negative");
    const double target = r_target_mag.value_or(std::sqrt(3.0 * (1.0 + 2.0 * n_m)));
    if (target < 0.0) throw DomainError("r target magnitude must be non-negative");
    return DriveRatio{1.0 + target / std::abs(beta), M_PI};
}

fock::DensityMatrix ideal_superposition(cplx r, cplx beta, fock::FockDim dim,
                                        const NumericPolicy& policy) {
    const fock::Matrix D = fock::displacement_operator(beta, dim, policy).elements;
    // D(beta) (r|0> + |1>) / sqrt(1+|r|^2)
    Eigen::VectorXcd psi = r * D.col(0) + D.col(1);
    const double norm2 = psi.squaredNorm();
    const double deficit = 1.0 - norm2 / (1.0 + std::norm(r));
    fock::Matrix rho = (psi * psi.adjoint()) / norm2;
    return fock::DensityMatrix::validated(std::move(rho), deficit, policy);
}

double cos_two_phi(cplx r, cplx beta) {
    const cplx br = beta * r;
    const double m2 = std::norm(br);
    if (m2 < 1e-300) return 1.0;
    return (br * br).real() / m2;
}

} // namespace phonoq::herald
