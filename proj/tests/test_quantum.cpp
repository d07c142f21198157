#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chiralsim/error.hpp"
#include "chiralsim/quantum.hpp"
#include "oracles.hpp"

using namespace chiralsim;

namespace {

const double s2 = std::numbers::sqrt2;
const cplx I(0.0, 1.0);

} // namespace

TEST_CASE("normalize")
{
    const StateVec3 one = normalize(Vector3c(1.0, 0.0, 0.0));
    CHECK(fidelity(one, StateVec3::basis(1)) == doctest::Approx(1.0).epsilon(1e-15));

    const StateVec3 v = normalize(Vector3c(1.0, 0.0, -I));
    CHECK(std::abs(v[1] - 1.0 / s2) < 1e-15);
    CHECK(std::abs(v[3] + I / s2) < 1e-15);

    CHECK_THROWS_WITH_AS(normalize(Vector3c::Zero()), "degenerate state", Error);
    CHECK_THROWS_AS(StateVec3(Vector3c(1.0, 1.0, 0.0)), Error);
}

TEST_CASE("fidelity and population")
{
    const auto e1 = StateVec3::basis(1);
    const auto e2 = StateVec3::basis(2);
    const auto minus = normalize(Vector3c(1.0, 0.0, -I));
    const auto plus = normalize(Vector3c(1.0, 0.0, I));

    CHECK(fidelity(e1, e1) == doctest::Approx(1.0));
    CHECK(fidelity(e1, e2) == 0.0);
    CHECK(fidelity(minus, e1) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(population(plus, 3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(population(StateVec3(-e2.amplitudes()), 2) == 1.0);
    CHECK(population(e1, 2) == 0.0);
    CHECK_THROWS_AS(population(e1, 0), Error);
    CHECK_THROWS_AS(population(e1, 4), Error);

    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
        const StateVec3 a(oracle::random_state(rng));
        const StateVec3 b(oracle::random_state(rng));
        CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) < 1e-15);
        const double phi = 0.37 * k;
        CHECK(fidelity(a, StateVec3(std::polar(1.0, phi) * a.amplitudes())) ==
              doctest::Approx(1.0).epsilon(1e-14));
        double total = 0.0;
        for (int l = 1; l <= 3; ++l) {
            total += population(a, l);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("operator invariants are enforced")
{
    Matrix3c m = Matrix3c::Zero();
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(HermitianOp3{m}, Error);
    CHECK_THROWS_AS(Unitary3(2.0 * Matrix3c::Identity()), Error);
    CHECK_THROWS_AS(DensityMatrix3(2.0 * Matrix3c::Identity()), Error);
    Matrix3c neg = Matrix3c::Zero();
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix3{neg}, Error);
    CHECK_NOTHROW(DensityMatrix3::pure(StateVec3::basis(2)));
}

TEST_CASE("expm_hermitian")
{
    SUBCASE("zero generator is the identity")
    {
        const Unitary3 u = expm_hermitian(HermitianOp3::zero(), 3.7);
        CHECK((u.matrix() - Matrix3c::Identity()).norm() < 1e-15);
    }

    SUBCASE("pi/2 rotation on 1<->3")
    {
        Matrix3c h = Matrix3c::Zero();
        const double omega = 2.0;
        h(0, 2) = h(2, 0) = omega;
        const Unitary3 u = expm_hermitian(HermitianOp3(h), std::numbers::pi / 4.0 / omega);
        const StateVec3 out = apply(u, StateVec3::basis(1));
        const StateVec3 expected = normalize(Vector3c(1.0, 0.0, -I));
        CHECK(std::abs(out[1] - expected[1]) < 1e-12);
        CHECK(std::abs(out[3] - expected[3]) < 1e-12);
        CHECK(fidelity(out, expected) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("matches the scaled Taylor oracle on random generators")
    {
        std::mt19937_64 rng(2024);
        for (int k = 0; k < 200; ++k) {
            const Matrix3c h = oracle::random_hermitian(rng, 1.0 + 0.05 * k);
            const double t = k % 2 == 0 ? 1.0 : 0.1 * k;
            const Matrix3c ref = oracle::propagator(h, t);
            const Unitary3 u = expm_hermitian(HermitianOp3(h), t);
            CHECK((u.matrix() - ref).norm() <= 1e-9);
            CHECK(unitarity_defect(u.matrix()) <= 1e-10);
        }
    }

    SUBCASE("group property")
    {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> dt(-3.0, 3.0);
        for (int k = 0; k < 100; ++k) {
            const HermitianOp3 h(oracle::random_hermitian(rng));
            const double t1 = dt(rng), t2 = dt(rng);
            const Matrix3c lhs = (expm_hermitian(h, t1) * expm_hermitian(h, t2)).matrix();
            const Matrix3c rhs = expm_hermitian(h, t1 + t2).matrix();
            CHECK((lhs - rhs).norm() <= 1e-10);
        }
    }
}

TEST_CASE("apply preserves the norm and round-trips")
{
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        const Unitary3 u = expm_hermitian(HermitianOp3(oracle::random_hermitian(rng, 2.0)), 1.3);
        const StateVec3 psi(oracle::random_state(rng));
        const StateVec3 out = apply(u, psi);
        CHECK(std::abs(out.amplitudes().norm() - 1.0) <= 1e-12);
        const StateVec3 back = apply(u.adjoint(), out);
        CHECK((back.amplitudes() - psi.amplitudes()).norm() <= 1e-10);
    }
    const StateVec3 e1 = StateVec3::basis(1);
    CHECK(apply(Unitary3::identity(), e1).amplitudes() == e1.amplitudes());
}
