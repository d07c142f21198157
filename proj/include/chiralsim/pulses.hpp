#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "chiralsim/quantum.hpp"

namespace chiralsim {

enum class Shape { Rect, Gaussian, Sin2 };

const char* to_string(Shape shape);
Shape shape_from_string(const std::string& name);

/// Optical transition driven by a channel. Index order matches RabiSet fields.
enum class Channel { C12 = 0, C23 = 1, C13 = 2 };

inline constexpr std::array<Channel, 3> all_channels{Channel::C12, Channel::C23, Channel::C13};

/**
 * Time-windowed drive on one channel. The complex Rabi amplitude is
 * amplitude * e^{i phase} * profile(t), with profile peaking at 1.
 * Gaussians are centred in the window with sigma = duration / 6 and cut at +-3 sigma.
 */
struct Envelope
{
    Shape shape = Shape::Rect;
    double amplitude = 0.0;
    double t_start = 0.0;
    double duration = 1.0;
    double phase = 0.0;

    /// Throws Error on non-positive duration or negative amplitude.
    void validate() const;

    /// Unit-peak profile at time t, zero outside [t_start, t_start + duration].
    double profile(double t) const;
    cplx value(double t) const;
    cplx complex_amplitude() const { return std::polar(amplitude, phase); }
};

/// Integral of the unit-peak profile over the window.
double profile_integral(Shape shape, double duration);

/// Integral of |Omega(t)| over the pulse window (rad).
double area(const Envelope& env);

/// Rotation angle of a resonant pulse: twice its area.
double rotation_angle(double area);

/// Amplitude giving the requested area. Throws Error for duration <= 0.
double calibrate_amplitude(Shape shape, double duration, double target_area);

/// One protocol step. Present envelopes share the segment's window.
struct PulseSegment
{
    double t_start = 0.0;
    double duration = 1.0;
    std::array<std::optional<Envelope>, 3> channels;

    const std::optional<Envelope>& channel(Channel c) const
    {
        return channels[static_cast<std::size_t>(c)];
    }
    std::optional<Envelope>& channel(Channel c) { return channels[static_cast<std::size_t>(c)]; }

    double t_end() const { return t_start + duration; }
    void validate() const;
};

/// Ordered, non-overlapping pulse segments.
class Schedule
{
public:
    Schedule() = default;
    /// Throws Error if segments are invalid or overlap.
    explicit Schedule(std::vector<PulseSegment> segments);

    const std::vector<PulseSegment>& segments() const { return m_segments; }
    bool empty() const { return m_segments.empty(); }
    double t_begin() const;
    double t_end() const;

private:
    std::vector<PulseSegment> m_segments;
};

} // namespace chiralsim
