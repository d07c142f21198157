#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "chiralsim/evolution.hpp"
#include "chiralsim/hamiltonian.hpp"
#include "chiralsim/pulses.hpp"

namespace chiralsim {

enum class Engine { Auto, Piecewise, Rk4, Lindblad };

const char* to_string(Engine engine);
Engine engine_from_string(const std::string& name);

namespace defaults {
/// pi/2 rotation on 1<->3
inline constexpr double step1_area = std::numbers::pi / 4.0;
/// per channel; effective area sqrt(2) * this = pi/2, a pi rotation on |B> <-> |2>
inline constexpr double step2_area = std::numbers::pi / (2.0 * std::numbers::sqrt2);
/// 3pi/2 rotation on 1<->3
inline constexpr double step3_area = 3.0 * std::numbers::pi / 4.0;
/// Omega12 = i Omega23 during step II
inline constexpr double phase12 = std::numbers::pi / 2.0;
} // namespace defaults

/**
 * Three-step discrimination sequence: a pulse on 1<->3, then simultaneous
 * pulses on 1<->2 and 2<->3, then a second pulse on 1<->3. Areas are the
 * integral of |Omega| per channel; rotation angle is twice the area.
 */
struct ProtocolSpec
{
    Shape shape = Shape::Rect;
    std::array<double, 3> durations{1.0, 1.0, 1.0};
    /// idle time after step I and after step II
    std::array<double, 2> gaps{0.0, 0.0};
    std::array<double, 3> areas{defaults::step1_area, defaults::step2_area, defaults::step3_area};
    double phase12 = defaults::phase12;
    double phase23 = 0.0;
    double phase13 = 0.0;
    DetuningSet detuning;
    std::vector<CollapseChannel> decay;
    Engine engine = Engine::Auto;
    /// RK4/Lindblad step = shortest duration / steps_per_segment
    std::size_t steps_per_segment = 1000;

    void validate() const;
    double integration_step() const;
};

/// Throws Error for overlapping (negative-gap) steps, non-positive durations or negative areas.
Schedule build_protocol(const ProtocolSpec& spec);

/// Piecewise at resonance, RK4 when detuned, Lindblad when any decay rate is positive.
Engine select_engine(const ProtocolSpec& spec);

struct ProtocolResult
{
    Chirality chirality = Chirality::Left;
    Engine engine = Engine::Piecewise;
    std::variant<StateVec3, DensityMatrix3> final_state;
    std::array<double, 3> populations{};
    /// norm drift (state engines) or peak trace drift (Lindblad)
    double drift = 0.0;
};

/// Evolves |1> through the schedule seen by one chirality.
ProtocolResult run_protocol(const ProtocolSpec& spec, Chirality chi);

/// States after 0, 1, 2 and 3 steps, exact propagation. Requires a resonant spec.
std::array<StateVec3, 4> checkpoints(const ProtocolSpec& spec, Chirality chi);

/**
 * Discrimination contrast
 *   C = ((P_L(2) - P_R(2)) + (P_R(1) - P_L(1))) / 2.
 * 1 iff left ends in |2> and right in |1>; 0 whenever both chiralities end with
 * the same populations (identity protocol, any two-coupling protocol).
 */
double contrast(const ProtocolResult& left, const ProtocolResult& right);

struct DiscriminationReport
{
    ProtocolResult left;
    ProtocolResult right;
    double contrast = 0.0;
};

DiscriminationReport discriminate(const ProtocolSpec& spec);

} // namespace chiralsim
