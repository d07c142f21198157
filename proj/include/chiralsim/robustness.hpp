#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "chiralsim/protocol.hpp"

namespace chiralsim {

/// Deviations from the ideal protocol. The default-constructed model is the identity.
struct ErrorModel
{
    /// every area scaled by (1 + area_error)
    double area_error = 0.0;
    /// step k additionally scaled by (1 + step_area_errors[k])
    std::array<double, 3> step_area_errors{0.0, 0.0, 0.0};
    /// added to the channel-12 phase
    double phase_error = 0.0;
    DetuningSet detuning;
    std::vector<CollapseChannel> decay;

    /// largest decay rate, 0 without dissipation
    double max_rate() const;
};

ProtocolSpec apply_error(const ProtocolSpec& spec, const ErrorModel& model);

/// Axis values of a cartesian sweep. Axes are expanded in declaration order, first outermost.
struct SweepGrid
{
    std::vector<double> area_error{0.0};
    std::vector<double> step1_area_error{0.0};
    std::vector<double> step2_area_error{0.0};
    std::vector<double> step3_area_error{0.0};
    std::vector<double> phase_error{0.0};
    std::vector<double> delta12{0.0};
    std::vector<double> delta23{0.0};
    std::vector<double> delta13{0.0};
    std::vector<double> gamma{0.0};
    /// (source, target) pairs receiving rate gamma
    std::vector<std::pair<int, int>> decay_paths{{3, 1}, {3, 2}, {2, 1}};

    std::vector<ErrorModel> expand() const;
};

struct SweepRecord
{
    ErrorModel model;
    std::array<double, 3> p_left{};
    std::array<double, 3> p_right{};
    double contrast = 0.0;
    Engine engine = Engine::Piecewise;
    double drift = 0.0;
    /// empty on success; otherwise the failure message, other fields are NaN
    std::string error;
};

/**
 * One record per grid point, in grid order. Points are evaluated on up to
 * `threads` workers (0 = hardware concurrency); a failing point is annotated in
 * its record and does not stop the sweep. Throws Error on an empty grid.
 */
std::vector<SweepRecord> run_sweep(const ProtocolSpec& spec, const std::vector<ErrorModel>& grid,
                                   unsigned threads = 0);

} // namespace chiralsim
