#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chiralsim/error.hpp"
#include "chiralsim/hamiltonian.hpp"
#include "oracles.hpp"

using namespace chiralsim;

namespace {

const double s2 = std::numbers::sqrt2;
const cplx I(0.0, 1.0);

RabiSet step2_couplings(double omega0)
{
    return {I * omega0, omega0, 0.0};
}

RabiSet random_rabi(std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    return {cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng))};
}

} // namespace

TEST_CASE("chirality sign rule")
{
    const double w = 0.8;
    const RabiSet r{w, w, w};
    CHECK(chirality_signed(r, Chirality::Left) == r);
    CHECK(chirality_signed(r, Chirality::Right) == RabiSet{w, w, -w});
    CHECK(chirality_signed(RabiSet{}, Chirality::Right) == RabiSet{});
}

TEST_CASE("build_resonant")
{
    SUBCASE("single 1-3 coupling")
    {
        const Matrix3c h = build_resonant({0.0, 0.0, 1.3}).matrix();
        Matrix3c expected = Matrix3c::Zero();
        expected(0, 2) = expected(2, 0) = 1.3;
        CHECK(h == expected);
    }

    SUBCASE("two couplings with Omega12 = i Omega23 give Omega_eff (|B><2| + h.c.)")
    {
        const double w = 0.7;
        const Matrix3c h = build_resonant(step2_couplings(w)).matrix();
        const Vector3c bright = Vector3c(I, 0.0, 1.0) / s2;
        const Vector3c two(0.0, 1.0, 0.0);
        const Matrix3c expected = s2 * w * (bright * two.adjoint() + two * bright.adjoint());
        CHECK((h - expected).norm() < 1e-15);
    }

    SUBCASE("zero couplings")
    {
        CHECK(build_resonant({}).matrix() == Matrix3c::Zero());
    }

    SUBCASE("properties over random couplings")
    {
        std::mt19937_64 rng(11);
        for (int k = 0; k < 100; ++k) {
            const RabiSet r = random_rabi(rng);
            const Matrix3c h = build_resonant(r).matrix();
            CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);

            Matrix3c flipped = h;
            flipped(0, 2) = -flipped(0, 2);
            flipped(2, 0) = -flipped(2, 0);
            CHECK(build_resonant(chirality_signed(r, Chirality::Right)).matrix() == flipped);
        }
    }
}

TEST_CASE("build_detuned")
{
    std::mt19937_64 rng(3);
    const RabiSet r = random_rabi(rng);
    CHECK(build_detuned(r, {}).matrix() == build_resonant(r).matrix());

    const double d = 0.25;
    Matrix3c diag = Matrix3c::Zero();
    diag(1, 1) = -d;
    diag(2, 2) = -d;
    CHECK(build_detuned({}, {d, 0.0, d}).matrix() == diag);

    SUBCASE("eigenvalues agree with the characteristic-polynomial oracle")
    {
        const double w = 1.0;
        const HermitianOp3 h = build_detuned(step2_couplings(w), {0.0, 0.0, 0.1 * w});
        Eigen::SelfAdjointEigenSolver<Matrix3c> es(h.matrix());
        const auto ref = oracle::cubic_eigenvalues(h.matrix());
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(es.eigenvalues()(k) - ref[k]) <= 1e-10);
        }
    }
}

TEST_CASE("bright state")
{
    const double w = 1.9;
    const StateVec3 b = bright_state(step2_couplings(w));
    CHECK(fidelity(b, normalize(Vector3c(I, 0.0, 1.0))) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fidelity(bright_state({w, 0.0, 0.0}), StateVec3::basis(1)) == 1.0);
    CHECK_THROWS_WITH_AS(bright_state({}), "bright state undefined", Error);
}

TEST_CASE("dressed eigensystem")
{
    const StateVec3 dark = normalize(Vector3c(1.0, 0.0, I));

    for (double w : {0.1, 1.0, 10.0}) {
        CAPTURE(w);
        const RabiSet r = step2_couplings(w);
        const auto pairs = dressed_eigensystem(r);
        REQUIRE(pairs.size() == 3);
        CHECK(pairs[0].value == doctest::Approx(-s2 * w).epsilon(1e-12));
        CHECK(std::abs(pairs[1].value) <= 1e-12 * w);
        CHECK(pairs[2].value == doctest::Approx(s2 * w).epsilon(1e-12));

        CHECK(fidelity(pairs[1].state, dark) == doctest::Approx(1.0).epsilon(1e-12));
        const StateVec3 two = StateVec3::basis(2);
        const Vector3c b = bright_state(r).amplitudes();
        CHECK(fidelity(pairs[2].state, normalize(two.amplitudes() + b)) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fidelity(pairs[0].state, normalize(two.amplitudes() - b)) ==
              doctest::Approx(1.0).epsilon(1e-12));

        CHECK(std::abs(bright_state(r).amplitudes().dot(pairs[1].state.amplitudes())) <= 1e-12);
        CHECK((build_resonant(r).matrix() * dark.amplitudes()).norm() <= 1e-12);
    }

    SUBCASE("degenerate couplings return the canonical basis")
    {
        const auto pairs = dressed_eigensystem({});
        for (int k = 0; k < 3; ++k) {
            CHECK(pairs[k].value == 0.0);
            CHECK(fidelity(pairs[k].state, StateVec3::basis(k + 1)) == 1.0);
        }
    }

    CHECK_THROWS_AS(dressed_eigensystem({1.0, 1.0, 1.0}), Error);
}
