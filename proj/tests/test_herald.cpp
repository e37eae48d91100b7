#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phonoq/herald.hpp"
#include "phonoq/mandel.hpp"
#include "oracles.hpp"

using namespace phonoq;
using fock::FockDim;

namespace {

fock::DensityMatrix coherent(double beta, int extra_levels = 1) {
    return fock::prepare_state(fock::StateKind::coherent, beta, 0, 0,
                               FockDim(fock::recommended_dim(beta, 0.0, extra_levels)));
}

} // namespace

TEST_CASE("conditional state basics") {
    SUBCASE("r = 0 projects a coherent state onto the displaced one-phonon state") {
        const double beta = 3.0;
        const auto rho = coherent(beta);
        const auto spec = herald::HeraldSpec::from_r(0.0, beta);
        const auto cond = herald::conditional_state(rho, spec);
        const auto target = fock::prepare_state(fock::StateKind::displaced_fock, beta, 0, 1,
                                                FockDim(rho.dim()));
        CHECK(fock::state_overlap(cond.rho, target) > 1.0 - 1e-8);
    }
    SUBCASE("vacuum with k_B = 1 becomes |1><1|") {
        const auto vac = fock::prepare_state(fock::StateKind::fock, 0, 0, 0, FockDim(24));
        const auto spec = herald::HeraldSpec::from_coefficients(cplx(0.3, 0.4), 1.0, 0.0);
        const auto cond = herald::conditional_state(vac, spec);
        CHECK(cond.rho.elements(1, 1).real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cond.herald_prob_weight == doctest::Approx(1.0).epsilon(1e-12)); // |k_B|^2 <b b^dag>
    }
    SUBCASE("sub-Poissonian output at |r| = sqrt(3), cos(2 phi) = 1") {
        const double beta = 5.0;
        const auto rho = coherent(beta);
        const auto cond = herald::conditional_state(
            rho, herald::HeraldSpec::from_r(std::sqrt(3.0), beta));
        CHECK(mandel::mandel_q(cond.rho).q < 0.0);
    }
    SUBCASE("vanishing likelihood throws") {
        const auto vac = fock::prepare_state(fock::StateKind::fock, 0, 0, 0, FockDim(24));
        const auto spec = herald::HeraldSpec::from_coefficients(1.0, 0.0, 0.0); // P = b on vacuum
        CHECK_THROWS_AS(herald::conditional_state(vac, spec), ZeroLikelihoodError);
    }
    SUBCASE("matches the explicit-matrix oracle") {
        const double beta = 2.0, nm = 0.4;
        const int d = fock::recommended_dim(beta, nm, 1);
        const auto rho = fock::prepare_state(fock::StateKind::displaced_thermal, beta, nm, 0,
                                             FockDim(d));
        const cplx k_R(0.2, 0.5), k_B(0.9, 0.0);
        const auto cond = herald::conditional_state(
            rho, herald::HeraldSpec::from_coefficients(k_R, k_B, beta));
        const auto ref = oracles::conditioned(rho.elements, k_R, k_B);
        CHECK((cond.rho.elements - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("r_from_drives") {
    SUBCASE("lambda = 1, theta = pi gives exact destructive interference") {
        const auto rc = herald::r_from_drives({1.0, std::numbers::pi}, cplx(2.0, 1.0));
        CHECK(std::abs(rc.r) < 1e-12);
        CHECK(rc.degenerate);
        CHECK(rc.phi == 0.0);
    }
    SUBCASE("lambda = 1 + |r_t|/|beta|, theta = pi realizes |r_t| with cos(2 phi) = 1") {
        for (double rt : {0.8, std::sqrt(3.0)}) {
            for (cplx beta : {cplx(3.0, 0.0), cplx(1.0, -2.0)}) {
                const auto rc =
                    herald::r_from_drives({1.0 + rt / std::abs(beta), std::numbers::pi}, beta);
                CHECK(std::abs(rc.r) == doctest::Approx(rt).epsilon(1e-12));
                CHECK(herald::cos_two_phi(rc.r, beta) == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
    SUBCASE("lambda = 1, theta = 0 doubles the amplitude") {
        const auto rc = herald::r_from_drives({1.0, 0.0}, 2.0);
        CHECK(std::abs(rc.r) == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("|r|^2 closed form") {
        for (double lam : {0.6, 1.0, 1.4}) {
            for (double th : {-2.0, 0.3, 3.0}) {
                const cplx beta(1.2, 0.7);
                const auto rc = herald::r_from_drives({lam, th}, beta);
                const double expected = std::norm(beta) *
                                        ((1 - lam) * (1 - lam) + 2 * lam * (1 + std::cos(th)));
                CHECK(std::norm(rc.r) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("optimal drive settings") {
    SUBCASE("default target sqrt(3 (1 + 2 n_m))") {
        const auto d0 = herald::optimal_drive_settings(std::nullopt, 0.0, 10.0);
        CHECK((d0.lambda - 1.0) * 10.0 == doctest::Approx(1.7320508).epsilon(1e-7));
        CHECK(d0.theta == doctest::Approx(std::numbers::pi));
        const auto d1 = herald::optimal_drive_settings(std::nullopt, 0.05, 10.0);
        CHECK((d1.lambda - 1.0) * 10.0 == doctest::Approx(1.8165902).epsilon(1e-7));
    }
    SUBCASE("zero target is the exact cancellation point") {
        const auto d = herald::optimal_drive_settings(0.0, 0.0, 5.0);
        CHECK(d.lambda == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(d.theta == doctest::Approx(std::numbers::pi));
    }
    SUBCASE("degenerate beta") {
        CHECK_THROWS_AS(herald::optimal_drive_settings(1.0, 0.0, 0.0), DegenerateError);
    }
    SUBCASE("realized r matches the requested target") {
        const cplx beta(4.0, 3.0);
        const auto d = herald::optimal_drive_settings(1.3, 0.0, beta);
        const auto rc = herald::r_from_drives(d, beta);
        CHECK(std::abs(rc.r) == doctest::Approx(1.3).epsilon(1e-12));
        CHECK(herald::cos_two_phi(rc.r, beta) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ideal superposition") {
    SUBCASE("r = 0 is the displaced one-phonon state") {
        const double beta = 2.0;
        const int d = fock::recommended_dim(beta, 0.0, 1);
        const auto psi = herald::ideal_superposition(0.0, beta, FockDim(d));
        const auto target = fock::prepare_state(fock::StateKind::displaced_fock, beta, 0, 1, FockDim(d));
        CHECK(fock::state_overlap(psi, target) > 1.0 - 1e-10);
    }
    SUBCASE("large |r| approaches the coherent state") {
        const double beta = 2.0;
        const int d = fock::recommended_dim(beta, 0.0, 1);
        const auto psi = herald::ideal_superposition(1e6, beta, FockDim(d));
        const auto target = fock::prepare_state(fock::StateKind::coherent, beta, 0, 0, FockDim(d));
        CHECK(fock::state_overlap(psi, target) > 1.0 - 1e-11);
    }
    SUBCASE("purity") {
        const auto psi = herald::ideal_superposition(cplx(0.5, -1.0), 3.0,
                                                     FockDim(fock::recommended_dim(3.0, 0.0, 1)));
        CHECK(fock::purity(psi) > 1.0 - 1e-10);
    }
    SUBCASE("consistency with conditional_state over the drive grid") {
        for (double bmag : {1.0, 3.0, 6.0}) {
            const auto rho = coherent(bmag);
            for (double lam : {0.5, 1.0, 1.5}) {
                for (double th : {-3.0, -1.0, 0.5, std::numbers::pi}) {
                    const auto rc = herald::r_from_drives({lam, th}, bmag);
                    const auto cond = herald::conditional_state(
                        rho, herald::HeraldSpec::from_r(rc.r, bmag));
                    const auto ideal = herald::ideal_superposition(rc.r, bmag, FockDim(rho.dim()));
                    CHECK(fock::state_overlap(cond.rho, ideal) > 1.0 - 1e-8);
                }
            }
        }
    }
}

TEST_CASE("purity preservation for pure inputs") {
    const double beta = 4.0;
    const auto rho = coherent(beta);
    for (double rmag : {0.0, 1.0, 2.5}) {
        const auto cond =
            herald::conditional_state(rho, herald::HeraldSpec::from_r(rmag, beta));
        CHECK(std::abs(fock::purity(cond.rho) - 1.0) <= 1e-8);
    }
}

TEST_CASE("phase covariance of the conditioned Q") {
    const double bmag = 3.0, nm = 0.3;
    double q_ref = 0.0;
    for (double chi : {0.0, 0.7, 2.1, -1.3}) {
        const cplx beta = bmag * std::exp(cplx(0, chi));
        const auto rho = fock::prepare_state(fock::StateKind::displaced_thermal, beta, nm, 0,
                                             FockDim(fock::recommended_dim(bmag, nm, 1)));
        const auto rc = herald::r_from_drives({1.2, 2.0}, beta);
        const auto cond = herald::conditional_state(rho, herald::HeraldSpec::from_r(rc.r, beta));
        const double q = mandel::mandel_q(cond.rho).q;
        if (chi == 0.0)
            q_ref = q;
        else
            CHECK(std::abs(q - q_ref) <= 1e-10);
    }
}

TEST_CASE("herald spec plumbing") {
    CHECK_THROWS_AS(herald::HeraldSpec::from_coefficients(0.0, 0.0, 1.0), DomainError);
    const auto spec = herald::HeraldSpec::from_coefficients(cplx(0, 2), cplx(0, 1), 2.0);
    CHECK(spec.k_B.imag() == 0.0);
    CHECK(spec.k_B.real() > 0.0);
    REQUIRE(spec.r().has_value());
    CHECK(spec.r()->real() == doctest::Approx(6.0).epsilon(1e-12)); // 2 + 2*(2i/1i)

    const auto sub = herald::HeraldSpec::from_coefficients(1.0, 0.0, 2.0);
    CHECK(!sub.r().has_value());
}
