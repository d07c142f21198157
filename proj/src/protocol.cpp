#include "chiralsim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chiralsim/error.hpp"

namespace chiralsim {

namespace {

constexpr double k_population_tol = 1e-8;

Envelope make_envelope(const ProtocolSpec& spec, double t_start, double duration, double area,
                       double phase)
{
    Envelope env;
    env.shape = spec.shape;
    env.t_start = t_start;
    env.duration = duration;
    env.amplitude = calibrate_amplitude(spec.shape, duration, area);
    env.phase = phase;
    return env;
}

TimeDependentGenerator generator(const ProtocolSpec& spec, Chirality chi)
{
    return {build_protocol(spec), spec.detuning, chi};
}

} // namespace

const char* to_string(Engine engine)
{
    switch (engine) {
    case Engine::Auto:
        return "auto";
    case Engine::Piecewise:
        return "piecewise";
    case Engine::Rk4:
        return "rk4";
    case Engine::Lindblad:
        return "lindblad";
    }
    return "?";
}

Engine engine_from_string(const std::string& name)
{
    for (Engine e : {Engine::Auto, Engine::Piecewise, Engine::Rk4, Engine::Lindblad}) {
        if (name == to_string(e)) {
            return e;
        }
    }
    throw Error("unknown engine '" + name + "'");
}

void ProtocolSpec::validate() const
{
    for (double d : durations) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw Error("step durations must be positive");
        }
    }
    for (double g : gaps) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw Error("overlapping durations: gaps between steps must be non-negative");
        }
    }
    for (double a : areas) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw Error("negative areas are not allowed");
        }
    }
    if (!std::isfinite(phase12) || !std::isfinite(phase23) || !std::isfinite(phase13)) {
        throw Error("phases must be finite");
    }
    if (!std::isfinite(detuning.delta12) || !std::isfinite(detuning.delta23) ||
        !std::isfinite(detuning.delta13)) {
        throw Error("detunings must be finite");
    }
    for (const auto& ch : decay) {
        ch.validate();
    }
    if (steps_per_segment < 10) {
        throw Error("steps_per_segment must be at least 10");
    }
}

double ProtocolSpec::integration_step() const
{
    return *std::min_element(durations.begin(), durations.end()) /
           static_cast<double>(steps_per_segment);
}

Schedule build_protocol(const ProtocolSpec& spec)
{
    spec.validate();
    std::vector<PulseSegment> segs(3);
    double t = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        segs[k].t_start = t;
        segs[k].duration = spec.durations[k];
        t += spec.durations[k] + (k < 2 ? spec.gaps[k] : 0.0);
    }

    auto& s1 = segs[0];
    s1.channel(Channel::C13) =
        make_envelope(spec, s1.t_start, s1.duration, spec.areas[0], spec.phase13);

    auto& s2 = segs[1];
    s2.channel(Channel::C12) =
        make_envelope(spec, s2.t_start, s2.duration, spec.areas[1], spec.phase12);
    s2.channel(Channel::C23) =
        make_envelope(spec, s2.t_start, s2.duration, spec.areas[1], spec.phase23);

    auto& s3 = segs[2];
    s3.channel(Channel::C13) =
        make_envelope(spec, s3.t_start, s3.duration, spec.areas[2], spec.phase13);

    return Schedule(std::move(segs));
}

Engine select_engine(const ProtocolSpec& spec)
{
    if (spec.engine != Engine::Auto) {
        return spec.engine;
    }
    const bool dissipative = std::any_of(spec.decay.begin(), spec.decay.end(),
                                         [](const CollapseChannel& c) { return c.rate > 0.0; });
    if (dissipative) {
        return Engine::Lindblad;
    }
    return spec.detuning.is_resonant() ? Engine::Piecewise : Engine::Rk4;
}

ProtocolResult run_protocol(const ProtocolSpec& spec, Chirality chi)
{
    const TimeDependentGenerator gen = generator(spec, chi);
    const StateVec3 ground = StateVec3::basis(1);
    const Engine engine = select_engine(spec);

    ProtocolResult res{chi, engine, ground, {}, 0.0};
    switch (engine) {
    case Engine::Auto:
    case Engine::Piecewise: {
        const StateVec3 psi = evolve_piecewise(gen, ground);
        res.final_state = psi;
        for (int l = 1; l <= 3; ++l) {
            res.populations[l - 1] = population(psi, l);
        }
        res.drift = std::abs(psi.amplitudes().norm() - 1.0);
        break;
    }
    case Engine::Rk4: {
        const Rk4Result r = evolve_rk4(gen, ground, spec.integration_step());
        for (int l = 0; l < 3; ++l) {
            res.populations[l] = std::norm(r.amplitudes(l));
        }
        res.drift = r.norm_drift;
        if (res.drift > k_population_tol) {
            throw NumericalError("RK4 norm drift " + std::to_string(res.drift) +
                                 " exceeds tolerance");
        }
        res.final_state = r.state();
        break;
    }
    case Engine::Lindblad: {
        const LindbladResult r = evolve_lindblad(gen, spec.decay, DensityMatrix3::pure(ground),
                                                 spec.integration_step());
        for (int l = 1; l <= 3; ++l) {
            res.populations[l - 1] = r.rho.population(l);
        }
        res.drift = r.max_trace_drift;
        res.final_state = r.rho;
        break;
    }
    }

    const double total = res.populations[0] + res.populations[1] + res.populations[2];
    if (std::abs(total - 1.0) > k_population_tol) {
        throw NumericalError("populations sum to " + std::to_string(total));
    }
    return res;
}

std::array<StateVec3, 4> checkpoints(const ProtocolSpec& spec, Chirality chi)
{
    const TimeDependentGenerator full = generator(spec, chi);
    const auto& segs = full.schedule.segments();
    std::array<StateVec3, 4> out{StateVec3::basis(1), StateVec3::basis(1), StateVec3::basis(1),
                                 StateVec3::basis(1)};
    for (std::size_t k = 1; k <= segs.size(); ++k) {
        TimeDependentGenerator prefix{
            Schedule({segs.begin(), segs.begin() + static_cast<std::ptrdiff_t>(k)}),
            spec.detuning, chi};
        out[k] = evolve_piecewise(prefix, out[0]);
    }
    return out;
}

double contrast(const ProtocolResult& left, const ProtocolResult& right)
{
    const auto& pl = left.populations;
    const auto& pr = right.populations;
    return 0.5 * ((pl[1] - pr[1]) + (pr[0] - pl[0]));
}

DiscriminationReport discriminate(const ProtocolSpec& spec)
{
    ProtocolResult left = run_protocol(spec, Chirality::Left);
    ProtocolResult right = run_protocol(spec, Chirality::Right);
    const double c = contrast(left, right);
    return {std::move(left), std::move(right), c};
}

} // namespace chiralsim
