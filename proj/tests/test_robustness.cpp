#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "chiralsim/error.hpp"
#include "chiralsim/robustness.hpp"
#include "oracles.hpp"

using namespace chiralsim;

namespace {

constexpr double pi = std::numbers::pi;

bool same_bits(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

bool identical(const SweepRecord& a, const SweepRecord& b)
{
    bool ok = same_bits(a.contrast, b.contrast) && same_bits(a.drift, b.drift) &&
              a.engine == b.engine && a.error == b.error;
    for (int k = 0; k < 3; ++k) {
        ok = ok && same_bits(a.p_left[k], b.p_left[k]) && same_bits(a.p_right[k], b.p_right[k]);
    }
    return ok;
}

ErrorModel uniform(double eps)
{
    ErrorModel m;
    m.area_error = eps;
    return m;
}

} // namespace

TEST_CASE("apply_error")
{
    const ProtocolSpec spec;
    const ProtocolSpec same = apply_error(spec, ErrorModel{});
    CHECK(same.areas == spec.areas);
    CHECK(same.phase12 == spec.phase12);
    CHECK(same.detuning.is_resonant());
    CHECK(same.decay.empty());

    const ProtocolSpec scaled = apply_error(spec, uniform(0.1));
    for (int k = 0; k < 3; ++k) {
        CHECK(scaled.areas[k] == doctest::Approx(1.1 * spec.areas[k]).epsilon(1e-15));
    }

    ErrorModel per_step;
    per_step.step_area_errors = {0.0, -0.2, 0.0};
    CHECK(apply_error(spec, per_step).areas[1] == doctest::Approx(0.8 * spec.areas[1]));

    ErrorModel phase;
    phase.phase_error = pi / 2.0;
    const ProtocolSpec broken = apply_error(spec, phase);
    CHECK(broken.phase12 == doctest::Approx(pi));
    const auto ref = oracle::protocol(broken.areas, broken.phase12);
    const double c = discriminate(broken).contrast;
    CHECK(std::abs(c - ref.contrast) <= 1e-12);
    CHECK(c < 0.5);
}

TEST_CASE("grid expansion order")
{
    SweepGrid g;
    g.area_error = {-0.1, 0.1};
    g.phase_error = {0.0, 0.2, 0.4};
    const auto models = g.expand();
    REQUIRE(models.size() == 6);
    CHECK(models[0].area_error == -0.1);
    CHECK(models[0].phase_error == 0.0);
    CHECK(models[2].phase_error == 0.4);
    CHECK(models[3].area_error == 0.1);

    SweepGrid d;
    d.gamma = {0.0, 0.02};
    const auto dm = d.expand();
    CHECK(dm[0].decay.empty());
    REQUIRE(dm[1].decay.size() == 3);
    CHECK(dm[1].max_rate() == 0.02);
}

TEST_CASE("run_sweep")
{
    const ProtocolSpec spec;

    SUBCASE("ideal point")
    {
        const auto recs = run_sweep(spec, {ErrorModel{}});
        REQUIRE(recs.size() == 1);
        CHECK(std::abs(recs[0].contrast - 1.0) <= 1e-10);
        CHECK(recs[0].engine == Engine::Piecewise);
    }

    SUBCASE("uniform area error: grid order, symmetric, matches closed form")
    {
        const auto recs = run_sweep(spec, {uniform(-0.1), uniform(0.0), uniform(0.1)});
        REQUIRE(recs.size() == 3);
        CHECK(recs[0].model.area_error == -0.1);
        CHECK(recs[2].model.area_error == 0.1);
        CHECK(std::abs(recs[0].contrast - recs[2].contrast) <= 1e-10);
        CHECK(recs[0].contrast < 1.0);
        for (const auto& r : recs) {
            auto areas = spec.areas;
            for (double& a : areas) {
                a *= 1.0 + r.model.area_error;
            }
            CHECK(std::abs(r.contrast - oracle::protocol(areas, spec.phase12).contrast) <= 1e-12);
        }
    }

    SUBCASE("decay lowers the contrast")
    {
        SweepGrid g;
        g.gamma = {0.0, 0.05};
        const auto recs = run_sweep(spec, g.expand());
        CHECK(recs[0].engine == Engine::Piecewise);
        CHECK(recs[1].engine == Engine::Lindblad);
        CHECK(recs[1].contrast < recs[0].contrast);
        for (const auto& r : recs) {
            double l = 0.0, rr = 0.0;
            for (int k = 0; k < 3; ++k) {
                l += r.p_left[k];
                rr += r.p_right[k];
            }
            CHECK(std::abs(l - 1.0) <= 1e-8);
            CHECK(std::abs(rr - 1.0) <= 1e-8);
        }
    }

    SUBCASE("detuned points use RK4")
    {
        SweepGrid g;
        g.delta13 = {0.0, 0.2};
        const auto recs = run_sweep(spec, g.expand());
        CHECK(recs[0].engine == Engine::Piecewise);
        CHECK(recs[1].engine == Engine::Rk4);
        CHECK(recs[1].contrast < 1.0);
    }

    SUBCASE("failures are annotated per record")
    {
        const auto recs = run_sweep(spec, {uniform(0.0), uniform(-2.0), uniform(0.05)});
        CHECK(recs[0].error.empty());
        CHECK_FALSE(recs[1].error.empty());
        CHECK(std::isnan(recs[1].contrast));
        CHECK(recs[2].error.empty());
    }

    SUBCASE("deterministic regardless of worker count")
    {
        SweepGrid g;
        g.area_error = {-0.1, -0.05, 0.0, 0.05, 0.1};
        g.phase_error = {-0.3, 0.0, 0.3};
        g.gamma = {0.0, 0.01};
        const auto models = g.expand();
        const auto serial = run_sweep(spec, models, 1);
        const auto parallel = run_sweep(spec, models, 4);
        const auto again = run_sweep(spec, models, 4);
        REQUIRE(serial.size() == models.size());
        for (std::size_t k = 0; k < models.size(); ++k) {
            CHECK(identical(serial[k], parallel[k]));
            CHECK(identical(parallel[k], again[k]));
        }
    }

    CHECK_THROWS_AS(run_sweep(spec, {}), Error);
}
