#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "relcov/relativity.hpp"

using namespace relcov;

namespace {

constexpr double kPi = std::numbers::pi;

// Active boost along z written out by hand.
LorentzTransformd z_boost(double beta) {
    const double g = 1.0 / std::sqrt(1.0 - beta * beta);
    LorentzTransformd lam = LorentzTransformd::Identity();
    lam(0, 0) = lam(3, 3) = g;
    lam(0, 3) = lam(3, 0) = g * beta;
    return lam;
}

}  // namespace

TEST_CASE("gamma") {
    CHECK(relcov::gamma(0.0) == 1.0);
    CHECK(relcov::gamma(0.6) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(relcov::gamma(0.8) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(relcov::gamma(1.0), DomainError);
    CHECK_THROWS_AS(relcov::gamma(-0.1), DomainError);
    CHECK_THROWS_AS(relcov::gamma(std::nan("")), DomainError);
    CHECK(std::isfinite(relcov::gamma(kMaxSpeed)));
}

TEST_CASE("boost_transform") {
    const Eigen::Vector3d z(0, 0, 1);
    CHECK(boost_transform(0.0, z).isApprox(LorentzTransformd::Identity(), 0.0));

    const FourVectord moved = boost_transform(0.6, z) * FourVectord(1, 0, 0, 0);
    CHECK((moved - FourVectord(1.25, 0, 0, 0.75)).cwiseAbs().maxCoeff() < 1e-15);

    CHECK((boost_transform(0.6, z) - z_boost(0.6)).cwiseAbs().maxCoeff() < 1e-15);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 100; ++k) {
        Eigen::Vector3d n(gauss(rng), gauss(rng), gauss(rng));
        n.normalize();
        const double beta = 0.999 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const LorentzTransformd lam = boost_transform(beta, n);
        const LorentzTransformd back = boost_transform(beta, Eigen::Vector3d(-n));
        CHECK((lam * back - LorentzTransformd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(metric_violation(lam) < 1e-10);
        CHECK(lam.determinant() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(lam(0, 0) >= 1.0);
        const FourVectord v(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
        const double s = minkowski_square(v);
        CHECK(std::abs(minkowski_square(FourVectord(lam * v)) - s) <=
              1e-10 * std::max(1.0, v.squaredNorm()));
    }

    CHECK_THROWS_AS(boost_transform(0.5, Eigen::Vector3d(0, 0, 2)), DomainError);
    CHECK_THROWS_AS(boost_transform(1.5, z), DomainError);
}

TEST_CASE("standard_boost") {
    CHECK(standard_boost(FourVectord(2, 0, 0, 0), 2.0).isApprox(LorentzTransformd::Identity(), 0.0));

    const LorentzTransformd l = standard_boost(FourVectord(1.25, 0, 0, 0.75), 1.0);
    CHECK((l * FourVectord(1, 0, 0, 0) - FourVectord(1.25, 0, 0, 0.75)).cwiseAbs().maxCoeff() < 1e-15);

    std::mt19937_64 rng(12);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 100; ++k) {
        const double m = 0.3 + std::abs(gauss(rng));
        const Eigen::Vector3d q(3 * gauss(rng), 3 * gauss(rng), 3 * gauss(rng));
        FourVectord p;
        p << std::sqrt(m * m + q.squaredNorm()), q;
        const FourVectord rest = inverse_standard_boost(p, m) * p;
        CHECK((rest - FourVectord(m, 0, 0, 0)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((standard_boost(p, m) * inverse_standard_boost(p, m) - LorentzTransformd::Identity())
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
    }

    CHECK_THROWS_AS(standard_boost(FourVectord(1, 0, 0, 0.5), 1.0), PrecisionError);
    CHECK_THROWS_AS(standard_boost(FourVectord(1, 0, 0, 0), 0.0), DomainError);
    CHECK_THROWS_AS(standard_boost(FourVectord(-1, 0, 0, 0), 1.0), DomainError);
    try {
        standard_boost(FourVectord(1, 0, 0, 0.5), 1.0);
    } catch (const PrecisionError& e) {
        CHECK(e.violation() == doctest::Approx(-0.25));
    }
}

TEST_CASE("wigner_transform") {
    const FourVectord p = particle_momentum(0.6, 1.0, +1);
    const LorentzTransformd identity = LorentzTransformd::Identity();
    CHECK((wigner_transform(identity, p, 1.0) - identity).cwiseAbs().maxCoeff() < 1e-14);
    // Boost along the momentum itself.
    CHECK((wigner_transform(z_boost(0.8), p, 1.0) - LorentzTransformd::Identity()).cwiseAbs().maxCoeff() <
          1e-12);

    // Generic boost: a pure rotation in the x-z plane fixing the rest momentum.
    const BoostParamsd bp(0.8, 0.6, kPi / 3);
    const LorentzTransformd w = wigner_transform(bp.boost(), p, 1.0);
    CHECK(std::abs(w(0, 0) - 1.0) < 1e-12);
    CHECK(w.row(0).tail<3>().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(w.col(0).tail<3>().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(w(2, 2) - 1.0) < 1e-12);
    const Eigen::Matrix3d r = w.bottomRightCorner<3, 3>();
    CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r(0, 0) - r(2, 2)) < 1e-12);
    CHECK(std::abs(r(0, 2) + r(2, 0)) < 1e-12);
}

TEST_CASE("wigner_angle special values") {
    const FourVectord p = particle_momentum(0.6, 1.0, +1);
    CHECK(wigner_angle(BoostParamsd(0.7, 0.6, 0.0).boost(), p, 1.0).omega < 1e-12);
    CHECK(wigner_angle(BoostParamsd(0.0, 0.6, 1.1).boost(), p, 1.0).omega == 0.0);

    const auto rot = wigner_angle(BoostParamsd(0.6, 0.6, kPi / 2).boost(), p, 1.0);
    CHECK(rot.cos_omega() == doctest::Approx(2 * 1.25 / (1 + 1.25 * 1.25)).epsilon(1e-12));
    CHECK(rot.cos_omega() == doctest::Approx(0.975609756097561).epsilon(1e-12));

    // Extracted rotation is about -y for the +z branch.
    const auto generic = wigner_angle(BoostParamsd(0.8, 0.6, 1.0).boost(), p, 1.0);
    CHECK(generic.axis_sign == -1);
    CHECK(generic.signed_angle() < 0);
    const LorentzTransformd w = wigner_transform(BoostParamsd(0.8, 0.6, 1.0).boost(), p, 1.0);
    CHECK((generic.matrix() - w).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("wigner_angle rejects a non-y rotation") {
    // A boost with a y component rotates about an axis off y.
    const Eigen::Vector3d dir = Eigen::Vector3d(0.3, 0.5, 0.2).normalized();
    const FourVectord p = particle_momentum(0.6, 1.0, +1);
    CHECK_THROWS_AS(wigner_angle(boost_transform(0.9, dir), p, 1.0), StructureError);
}

TEST_CASE("closed form agrees with the matrix route") {
    for (double b : {0.0, 0.1, 0.5, 0.9, 0.999}) {
        for (double bv : {0.0, 0.2, 0.6, 0.95, 0.999}) {
            for (double a : {0.0, 0.3, kPi / 4, 1.2, kPi / 2, 2.0, 2.8, kPi}) {
                const BoostParamsd bp(b, bv, a);
                const auto rot = wigner_angle(bp.boost(), particle_momentum(bv, 1.0, +1), 1.0);
                CHECK(std::abs(rot.cos_omega() - wigner_cos_closed_form(bp)) < 1e-9);
                if (a > 0 && a < kPi / 2) CHECK(rot.cos_omega() >= 0.0);
            }
        }
    }
}

TEST_CASE("-z branch rotates by the closed form at pi - alpha") {
    for (double b : {0.3, 0.8, 0.99}) {
        for (double bv : {0.2, 0.6, 0.95}) {
            for (double a : {0.2, kPi / 3, 1.4, 2.5}) {
                const BoostParamsd bp(b, bv, a);
                const auto rot = wigner_angle(bp.boost(), particle_momentum(bv, 1.0, -1), 1.0);
                const double mirrored = wigner_cos_closed_form(BoostParamsd(b, bv, kPi - a));
                CHECK(std::abs(rot.cos_omega() - mirrored) < 1e-9);
            }
        }
    }
    // The two branches differ in general.
    const BoostParamsd bp(0.8, 0.6, kPi / 3);
    const double up = wigner_angle(bp.boost(), particle_momentum(0.6, 1.0, +1), 1.0).omega;
    const double down = wigner_angle(bp.boost(), particle_momentum(0.6, 1.0, -1), 1.0).omega;
    CHECK(std::abs(up - down) > 0.01);
}

TEST_CASE("closed form limits") {
    for (double b : {0.0, 0.4, 0.999}) {
        for (double bv : {0.0, 0.4, 0.999}) {
            CHECK(std::abs(wigner_cos_closed_form(BoostParamsd(b, bv, 0.0)) - 1.0) <= 1e-12);
            const BoostParamsd across(b, bv, kPi / 2);
            const double g = across.gamma(), gv = across.gamma_v();
            CHECK(std::abs(wigner_cos_closed_form(across) - (g + gv) / (1 + g * gv)) <= 1e-12);
        }
    }
    for (double a : {0.3, 1.0}) {
        CHECK(wigner_cos_closed_form(BoostParamsd(0.0, 0.9, a)) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(wigner_cos_closed_form(BoostParamsd(0.9, 0.0, a)) == doctest::Approx(1.0).epsilon(1e-14));
    }
    const double u = 0.999999;
    CHECK(std::abs(wigner_cos_closed_form(BoostParamsd(u, u, kPi / 4)) - std::cos(kPi / 4)) < 1e-3);
    // Long double reproduces the double route near the light cone.
    const BoostParams<long double> lbp(0.9999L, 0.9999L, 0.7L);
    CHECK(std::abs(static_cast<double>(wigner_cos_closed_form(lbp)) -
                   wigner_cos_closed_form(BoostParamsd(0.9999, 0.9999, 0.7))) < 1e-12);
}

TEST_CASE("BoostParams validation") {
    CHECK_THROWS_AS(BoostParamsd(1.0, 0.5, 0.1), DomainError);
    CHECK_THROWS_AS(BoostParamsd(0.5, 0.5, -0.1), DomainError);
    CHECK_THROWS_AS(BoostParamsd(0.5, 0.5, 3.2), DomainError);
    CHECK_NOTHROW(BoostParamsd(kMaxSpeed, 0.0, kPi));
    const BoostParamsd bp(0.5, 0.5, kPi / 2);
    CHECK((bp.direction() - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-15);
}

TEST_CASE("branch_momenta") {
    SUBCASE("alpha = pi/2 merges energies") {
        const auto m = branch_momenta(BoostParamsd(0.5, 0.5, kPi / 2), 1.0);
        CHECK(m.t_equal);
        CHECK(m.any_equal());
    }
    SUBCASE("generic boost keeps all components distinct") {
        const auto m = branch_momenta(BoostParamsd(0.5, 0.5, kPi / 4), 1.0);
        CHECK_FALSE(m.any_equal());
    }
    SUBCASE("beta = 0 leaves the momenta unchanged") {
        const auto m = branch_momenta(BoostParamsd(0.0, 0.6, 1.0), 1.0);
        CHECK((m.plus - FourVectord(1.25, 0, 0, 0.75)).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((m.minus - FourVectord(1.25, 0, 0, -0.75)).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(m.t_equal);
        CHECK(m.x_equal);
        CHECK_FALSE(m.z_equal);
    }
    SUBCASE("boosted momenta stay on shell") {
        const auto m = branch_momenta(BoostParamsd(0.99, 0.9, 1.0), 2.0);
        CHECK(std::abs(minkowski_square(m.plus) - 4.0) < 1e-9);
        CHECK(std::abs(minkowski_square(m.minus) - 4.0) < 1e-9);
    }
}
