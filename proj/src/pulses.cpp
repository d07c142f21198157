#include "chiralsim/pulses.hpp"

#include <cmath>
#include <numbers>

#include "chiralsim/error.hpp"

namespace chiralsim {

namespace {

// erf(3 / sqrt 2): fraction of a gaussian inside +-3 sigma
const double k_gauss_window = std::erf(3.0 / std::numbers::sqrt2);

} // namespace

const char* to_string(Shape shape)
{
    switch (shape) {
    case Shape::Rect:
        return "rect";
    case Shape::Gaussian:
        return "gaussian";
    case Shape::Sin2:
        return "sin2";
    }
    return "?";
}

Shape shape_from_string(const std::string& name)
{
    if (name == "rect") {
        return Shape::Rect;
    }
    if (name == "gaussian") {
        return Shape::Gaussian;
    }
    if (name == "sin2") {
        return Shape::Sin2;
    }
    throw Error("unknown pulse shape '" + name + "'");
}

void Envelope::validate() const
{
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw Error("pulse duration must be positive");
    }
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw Error("pulse amplitude must be non-negative");
    }
    if (!std::isfinite(t_start) || !std::isfinite(phase)) {
        throw Error("pulse timing and phase must be finite");
    }
}

double Envelope::profile(double t) const
{
    if (t < t_start || t > t_start + duration) {
        return 0.0;
    }
    const double x = t - t_start;
    switch (shape) {
    case Shape::Rect:
        return 1.0;
    case Shape::Gaussian: {
        const double sigma = duration / 6.0;
        const double u = (x - 0.5 * duration) / sigma;
        return std::exp(-0.5 * u * u);
    }
    case Shape::Sin2: {
        const double s = std::sin(std::numbers::pi * x / duration);
        return s * s;
    }
    }
    return 0.0;
}

cplx Envelope::value(double t) const
{
    return complex_amplitude() * profile(t);
}

double profile_integral(Shape shape, double duration)
{
    switch (shape) {
    case Shape::Rect:
        return duration;
    case Shape::Gaussian:
        return duration / 6.0 * std::sqrt(2.0 * std::numbers::pi) * k_gauss_window;
    case Shape::Sin2:
        return 0.5 * duration;
    }
    return 0.0;
}

double area(const Envelope& env)
{
    env.validate();
    return env.amplitude * profile_integral(env.shape, env.duration);
}

double rotation_angle(double area)
{
    return 2.0 * area;
}

double calibrate_amplitude(Shape shape, double duration, double target_area)
{
    if (!(duration > 0.0)) {
        throw Error("pulse duration must be positive");
    }
    if (!(target_area >= 0.0)) {
        throw Error("target area must be non-negative");
    }
    return target_area / profile_integral(shape, duration);
}

void PulseSegment::validate() const
{
    if (!(duration > 0.0) || !std::isfinite(duration) || !std::isfinite(t_start)) {
        throw Error("segment duration must be positive");
    }
    for (const auto& env : channels) {
        if (!env) {
            continue;
        }
        env->validate();
        if (env->t_start != t_start || env->duration != duration) {
            throw Error("envelopes in a segment must share its time window");
        }
    }
}

Schedule::Schedule(std::vector<PulseSegment> segments) : m_segments(std::move(segments))
{
    for (std::size_t k = 0; k < m_segments.size(); ++k) {
        m_segments[k].validate();
        if (k > 0 && m_segments[k].t_start < m_segments[k - 1].t_end()) {
            throw Error("schedule segments overlap");
        }
    }
}

double Schedule::t_begin() const
{
    return m_segments.empty() ? 0.0 : m_segments.front().t_start;
}

double Schedule::t_end() const
{
    return m_segments.empty() ? 0.0 : m_segments.back().t_end();
}

} // namespace chiralsim
