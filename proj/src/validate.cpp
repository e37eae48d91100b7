#include <cmath>
#include <numbers>
#include <ostream>

#include "phonoq/herald.hpp"
#include "phonoq/mandel.hpp"
#include "phonoq/runner.hpp"
#include "phonoq/steady.hpp"

// Invariant suite behind the `validate` subcommand: the library's structural
// guarantees checked on representative inputs, independent of the unit tests.
namespace phonoq::runner {

namespace {

struct Suite {
    std::ostream& out;
    int failures = 0;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        out << (ok ? "ok   " : "FAIL ") << name;
        if (!ok && !detail.empty()) out << "  [" << detail << "]";
        out << "\n";
        if (!ok) ++failures;
    }
};

using fock::FockDim;
using fock::Matrix;

void fock_suite(Suite& s) {
    // ladder commutator on the non-boundary block
    {
        const int d = 12;
        const Matrix b = fock::ladder_matrix(FockDim(d)).elements;
        const Matrix comm = b * b.adjoint() - b.adjoint() * b;
        double worst = 0.0;
        for (int k = 0; k < d - 1; ++k) worst = std::max(worst, std::abs(comm(k, k) - 1.0));
        s.check("fock.commutator", worst < 1e-12);
    }
    // displacement unitarity and inverse across amplitudes
    {
        double worst_u = 0.0, worst_inv = 0.0;
        for (double mag : {0.5, 2.0, 6.0}) {
            const cplx beta = mag * std::exp(cplx(0, 0.7));
            const FockDim dim(fock::recommended_dim(mag));
            const Matrix D = fock::displacement_operator(beta, dim).elements;
            const Matrix Dm = fock::displacement_operator(-beta, dim).elements;
            worst_u = std::max(worst_u, (D.adjoint() * D - Matrix::Identity(dim.dim, dim.dim))
                                            .cwiseAbs()
                                            .maxCoeff());
            worst_inv = std::max(worst_inv, (D * Dm - Matrix::Identity(dim.dim, dim.dim))
                                                .cwiseAbs()
                                                .maxCoeff());
        }
        s.check("fock.displacement_unitarity", worst_u <= 1e-10, std::to_string(worst_u));
        s.check("fock.displacement_inverse", worst_inv <= 1e-10, std::to_string(worst_inv));
    }
    // prepared states: hermiticity/positivity hold by construction (validated),
    // displaced-thermal mean, truncation-doubling stability
    {
        double worst_mean = 0.0, worst_drift = 0.0;
        for (double mag : {1.0, 3.0}) {
            for (double nm : {0.0, 0.5, 2.0}) {
                const int dim = fock::recommended_dim(mag, nm);
                const auto rho = fock::prepare_state(fock::StateKind::displaced_thermal, mag, nm, 0,
                                                     FockDim(dim));
                const auto m1 = fock::number_moments(rho);
                worst_mean = std::max(worst_mean,
                                      std::abs(m1.mean - (mag * mag + nm)) / (mag * mag + nm));
                const auto rho2 = fock::prepare_state(fock::StateKind::displaced_thermal, mag, nm, 0,
                                                      FockDim(2 * dim));
                const auto m2 = fock::number_moments(rho2);
                worst_drift = std::max({worst_drift,
                                        std::abs(m1.mean - m2.mean) / std::abs(m2.mean),
                                        std::abs(m1.variance - m2.variance) / std::abs(m2.variance)});
            }
        }
        s.check("fock.displaced_thermal_mean", worst_mean <= 1e-8, std::to_string(worst_mean));
        s.check("fock.truncation_doubling", worst_drift < 1e-8, std::to_string(worst_drift));
    }
}

void herald_suite(Suite& s) {
    // conditional vs ideal superposition across the drive grid
    {
        double worst = 0.0;
        for (double bmag : {1.0, 3.0, 6.0}) {
            const int dim = fock::recommended_dim(bmag, 0.0, 1);
            const auto rho = fock::prepare_state(fock::StateKind::coherent, bmag, 0, 0, FockDim(dim));
            for (double lam : {0.5, 0.9, 1.1, 1.5}) {
                for (double th : {-2.5, 0.0, 1.0, std::numbers::pi}) {
                    const auto rc = herald::r_from_drives({lam, th}, bmag);
                    const auto cond = herald::conditional_state(
                        rho, herald::HeraldSpec::from_r(rc.r, bmag));
                    const auto ideal = herald::ideal_superposition(rc.r, bmag, FockDim(dim));
                    worst = std::max(worst, 1.0 - fock::state_overlap(cond.rho, ideal));
                }
            }
        }
        s.check("herald.superposition_consistency", worst <= 1e-8, std::to_string(worst));
    }
    // purity preservation and phase covariance
    {
        const double bmag = 2.5;
        const int dim = fock::recommended_dim(bmag, 0.0, 1);
        const auto rho = fock::prepare_state(fock::StateKind::coherent, bmag, 0, 0, FockDim(dim));
        const auto rc = herald::r_from_drives({1.2, 2.0}, bmag);
        const auto cond = herald::conditional_state(rho, herald::HeraldSpec::from_r(rc.r, bmag));
        s.check("herald.purity_preserved", std::abs(fock::purity(cond.rho) - 1.0) <= 1e-8);

        double q_ref = 0.0, worst = 0.0;
        for (double chi : {0.0, 0.9, 2.2}) {
            const cplx beta = bmag * std::exp(cplx(0, chi));
            const auto r2 = herald::r_from_drives({1.2, 2.0}, beta);
            const auto rho_rot =
                fock::prepare_state(fock::StateKind::displaced_thermal, beta, 0.3, 0,
                                    FockDim(fock::recommended_dim(bmag, 0.3, 1)));
            const auto c2 = herald::conditional_state(rho_rot, herald::HeraldSpec::from_r(r2.r, beta));
            const double q = mandel::mandel_q(c2.rho).q;
            if (chi == 0.0)
                q_ref = q;
            else
                worst = std::max(worst, std::abs(q - q_ref));
        }
        s.check("herald.phase_covariance", worst <= 1e-10, std::to_string(worst));
    }
}

void mandel_suite(Suite& s) {
    s.check("mandel.q_min", std::abs(mandel::q_highdisp(std::sqrt(3.0), 0.0, 0.0) + 0.25) < 1e-12);
    s.check("mandel.q_max", std::abs(mandel::q_highdisp(0.0, 0.0, 0.0) - 2.0) < 1e-12);
    // analytic vs numeric on a coarse grid
    {
        double worst = 0.0;
        for (double bmag : {0.5, 2.0, 5.0}) {
            for (double nm : {0.0, 0.1, 1.0}) {
                const int dim = fock::recommended_dim(bmag, nm, 1);
                const auto rho = fock::prepare_state(fock::StateKind::displaced_thermal, bmag, nm, 0,
                                                     FockDim(dim));
                for (double rmag : {0.8, 2.0}) {
                    for (double phi : {0.0, std::numbers::pi / 2}) {
                        const cplx r = rmag * std::exp(cplx(0, phi));
                        const double qa = mandel::q_conditioned_analytic(r, bmag, nm);
                        const auto cond =
                            herald::conditional_state(rho, herald::HeraldSpec::from_r(r, bmag));
                        const double qn = mandel::mandel_q(cond.rho).q;
                        worst = std::max(worst, std::abs(qa - qn) / std::max(1.0, std::abs(qa)));
                    }
                }
            }
        }
        s.check("mandel.analytic_numeric", worst <= 1e-6, std::to_string(worst));
    }
    // high-displacement limit
    {
        double worst = 0.0;
        for (double rmag : {0.5, 1.7, 3.0}) {
            for (double nm : {0.0, 0.1}) {
                const double qa = mandel::q_conditioned_analytic(rmag, 1e3, nm);
                worst = std::max(worst, std::abs(qa - mandel::q_highdisp(rmag, 0.0, nm)));
            }
        }
        s.check("mandel.highdisp_limit", worst < 1e-2, std::to_string(worst));
    }
    s.check("mandel.sensitivity_nonneg",
            mandel::delta_q_sensitivity({0.0, 0.0, 10.0, 0.0}) == 0.0 &&
                mandel::delta_q_sensitivity({1e-3, 1e-3, 10.0, 0.0}) > 0.0);
    // Wigner anchors
    {
        const auto vac = fock::prepare_state(fock::StateKind::fock, 0, 0, 0, FockDim(32));
        const auto one = fock::prepare_state(fock::StateKind::fock, 0, 0, 1, FockDim(32));
        const double two_over_pi = 2.0 / std::numbers::pi;
        s.check("mandel.wigner_anchors",
                std::abs(mandel::wigner_at(vac, 0.0) - two_over_pi) < 1e-10 &&
                    std::abs(mandel::wigner_at(one, 0.0) + two_over_pi) < 1e-10);
    }
}

void pulse_suite(Suite& s) {
    // thinning identity on thermal/coherent/Fock/conditional sources
    {
        double worst = 0.0;
        std::vector<fock::DensityMatrix> sources;
        sources.push_back(fock::prepare_state(fock::StateKind::thermal, 0, 1.5, 0, FockDim(120)));
        sources.push_back(fock::prepare_state(fock::StateKind::coherent, 2.0, 0, 0, FockDim(60)));
        sources.push_back(fock::prepare_state(fock::StateKind::fock, 0, 0, 4, FockDim(40)));
        {
            const auto rho =
                fock::prepare_state(fock::StateKind::coherent, 3.0, 0, 0,
                                    FockDim(fock::recommended_dim(3.0, 0.0, 1)));
            sources.push_back(
                herald::conditional_state(rho, herald::HeraldSpec::from_r(std::sqrt(3.0), 3.0)).rho);
        }
        for (const auto& src : sources) {
            const auto base = fock::number_moments(src);
            const double q_src = base.variance / base.mean - 1.0;
            for (double q : {0.3, 0.02}) {
                const auto thin = pulse::thinned_number_moments(src, q);
                const double q_det = thin.variance / thin.mean - 1.0;
                worst = std::max(worst, std::abs(q_det - q * q_src));
            }
        }
        s.check("pulse.thinning_identity", worst <= 1e-10, std::to_string(worst));
    }
    // click probabilities sum to one
    {
        const auto rho = fock::prepare_state(fock::StateKind::thermal, 0, 1.0, 0, FockDim(80));
        const auto cp = pulse::click_probabilities(rho, {0.7, 0.43, 0.5});
        s.check("pulse.click_sum", std::abs(cp.p0 + cp.p1 + cp.p2 - 1.0) < 1e-14);
    }
    // transcendental inversion
    {
        double worst = 0.0;
        for (double gB : {0.02, 0.05}) {
            for (double gR : {0.01, 0.05, 0.11}) {
                const auto plan = pulse::PulsePlan::make(gR, gB, 1.0, 1.0);
                const auto [kR, kB] = pulse::pulse_coefficients(plan);
                const double x = std::norm(kR) - std::norm(kB);
                const double lhs = x >= 0.0 ? std::cos(std::sqrt(x)) : std::cosh(std::sqrt(-x));
                worst = std::max(worst, std::abs(lhs - std::exp(-plan.G_w * plan.tau_w)));
            }
        }
        s.check("pulse.coefficient_inversion", worst <= 1e-12, std::to_string(worst));
    }
}

void steady_suite(Suite& s) {
    const pulse::SystemParams p{1.0, 1e-6, 10.0, 1e-3, 0.5, 0.0};
    // self-energy antisymmetry
    {
        double worst = 0.0;
        for (double om : {2.0, 5.0, 9.7}) {
            std::vector<steady::DriveTone> pair = {{om, 7.0, steady::ToneTag::custom},
                                                   {-om, 7.0, steady::ToneTag::custom}};
            const auto rep = steady::effective_mechanics(pair, p);
            worst = std::max(worst, std::abs(rep.sigma));
        }
        s.check("steady.sigma_antisymmetry", worst <= 1e-12, std::to_string(worst));
    }
    // fixed-point consistency and n_m -> n_th with no drives
    {
        std::vector<steady::DriveTone> cool = {{-10.0, 100.0, steady::ToneTag::cool}};
        const auto rep = steady::effective_mechanics(cool, p);
        std::vector<steady::DriveTone> retuned = {{-rep.omega_m_eff, 100.0, steady::ToneTag::cool}};
        const auto rep2 = steady::effective_mechanics(retuned, p);
        const double back = p.omega_m + rep2.sigma.real();
        s.check("steady.fixed_point_consistency",
                std::abs(back - rep2.omega_m_eff) / rep2.omega_m_eff <= 1e-11);

        const auto empty = steady::effective_mechanics({}, p);
        const auto budget = steady::thermal_budget({}, p, empty);
        s.check("steady.no_drive_thermal", budget.n_m == p.n_th && empty.gamma_eff == p.gamma);
    }
    // five-tone plan: displacement and measurement pairs cancel pairwise
    {
        const double wm = 10.0;
        std::vector<steady::DriveTone> plan = {
            {wm / 2, 10.0, steady::ToneTag::displace_plus},
            {-wm / 2, 10.0, steady::ToneTag::displace_minus},
            {-wm, 100.0, steady::ToneTag::cool},
            {-wm, 5.0, steady::ToneTag::meas_red},
            {wm, 5.0, steady::ToneTag::meas_blue},
        };
        const auto rep = steady::effective_mechanics(plan, p);
        const cplx disp = rep.sigma_by_tone[0] + rep.sigma_by_tone[1];
        const cplx meas = rep.sigma_by_tone[3] + rep.sigma_by_tone[4];
        s.check("steady.five_tone_pair_cancellation",
                std::abs(disp) <= 1e-12 && std::abs(meas) <= 1e-12,
                std::to_string(std::abs(disp)) + ", " + std::to_string(std::abs(meas)));
    }
    // filter leakage monotone decreasing in |delta|/W
    {
        bool mono = true;
        double prev = 2.0;
        for (double d : {0.0, 0.3, 1.0, 3.0, 10.0}) {
            const double v = std::abs(steady::filter_leakage(d, 1.0));
            mono = mono && v < prev + 1e-15;
            prev = v;
        }
        s.check("steady.filter_monotone", mono);
    }
}

} // namespace

int run_validation(std::ostream& out) {
    Suite s{out};
    fock_suite(s);
    herald_suite(s);
    mandel_suite(s);
    pulse_suite(s);
    steady_suite(s);
    out << (s.failures == 0 ? "all invariants hold\n"
                            : std::to_string(s.failures) + " invariant(s) violated\n");
    return s.failures;
}

} // namespace phonoq::runner
