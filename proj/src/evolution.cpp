#include "chiralsim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "chiralsim/error.hpp"

namespace chiralsim {

namespace {

constexpr double k_invariant_tol = 1e-8;

void add_to(RabiSet& rabi, Channel c, cplx value)
{
    switch (c) {
    case Channel::C12:
        rabi.omega12 += value;
        break;
    case Channel::C23:
        rabi.omega23 += value;
        break;
    case Channel::C13:
        rabi.omega13 += value;
        break;
    }
}

// Shape shared by every envelope with nonzero amplitude, if they agree.
std::optional<Shape> common_shape(const PulseSegment& seg, bool& consistent)
{
    std::optional<Shape> shape;
    consistent = true;
    for (const auto& env : seg.channels) {
        if (!env || env->amplitude == 0.0) {
            continue;
        }
        if (shape && *shape != env->shape) {
            consistent = false;
        }
        shape = env->shape;
    }
    return shape;
}

HermitianOp3 peak_coupling(const TimeDependentGenerator& gen, const PulseSegment& seg)
{
    RabiSet rabi;
    for (Channel c : all_channels) {
        if (const auto& env = seg.channel(c)) {
            add_to(rabi, c, env->complex_amplitude());
        }
    }
    return build_resonant(chirality_signed(rabi, gen.chirality));
}

double min_segment_duration(const Schedule& schedule)
{
    double d = std::numeric_limits<double>::infinity();
    for (const auto& seg : schedule.segments()) {
        d = std::min(d, seg.duration);
    }
    return d;
}

void check_step(const Schedule& schedule, double step)
{
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw Error("integration step must be positive");
    }
    if (!schedule.empty() && step > min_segment_duration(schedule) / 10.0 * (1.0 + 1e-12)) {
        throw Error("integration step too large: must not exceed segment duration / 10");
    }
}

std::size_t step_count(double length, double step)
{
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / step - 1e-9)));
}

// Fixed-step RK4 over the whole schedule. Idle gaps are integrated when
// idle_moves is set (detuned frame, or dissipation present).
template <class State, class Derivative, class Observer>
State integrate(const TimeDependentGenerator& gen, State y, double step, bool idle_moves,
                Derivative&& deriv, Observer&& observe)
{
    const auto& segments = gen.schedule.segments();
    const Matrix3c idle = gen.idle_hamiltonian().matrix();

    auto run = [&](double t0, double length, auto&& h_at) {
        const std::size_t n = step_count(length, step);
        const double h = length / static_cast<double>(n);
        const double t1 = t0 + length;
        auto clamp = [&](double t) { return std::min(t, t1); };
        for (std::size_t i = 0; i < n; ++i) {
            const double t = t0 + static_cast<double>(i) * h;
            const Matrix3c ha = h_at(t);
            const Matrix3c hb = h_at(clamp(t + 0.5 * h));
            const Matrix3c hc = h_at(clamp(t + h));
            const State k1 = deriv(ha, y);
            const State k2 = deriv(hb, State(y + 0.5 * h * k1));
            const State k3 = deriv(hb, State(y + 0.5 * h * k2));
            const State k4 = deriv(hc, State(y + h * k3));
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            observe(y);
        }
    };

    double t = gen.schedule.t_begin();
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto& seg = segments[k];
        if (seg.t_start > t && idle_moves) {
            run(t, seg.t_start - t, [&](double) { return idle; });
        }
        run(seg.t_start, seg.duration,
            [&](double tt) { return gen.hamiltonian(k, tt).matrix(); });
        t = seg.t_end();
    }
    return y;
}

} // namespace

RabiSet TimeDependentGenerator::rabi(std::size_t segment, double t) const
{
    const auto& seg = schedule.segments().at(segment);
    RabiSet r;
    for (Channel c : all_channels) {
        if (const auto& env = seg.channel(c)) {
            // window is closed: callers stay inside [t_start, t_end]
            const double tt = std::clamp(t, seg.t_start, seg.t_end());
            add_to(r, c, env->value(tt));
        }
    }
    const double mismatch = detuning.loop_mismatch();
    if (mismatch != 0.0) {
        r.omega23 *= std::polar(1.0, mismatch * t);
    }
    return chirality_signed(r, chirality);
}

HermitianOp3 TimeDependentGenerator::hamiltonian(std::size_t segment, double t) const
{
    return build_detuned(rabi(segment, t), detuning);
}

HermitianOp3 TimeDependentGenerator::idle_hamiltonian() const
{
    return build_detuned(RabiSet{}, detuning);
}

void CollapseChannel::validate() const
{
    if (source < 1 || source > 3 || target < 1 || target > 3) {
        throw Error("collapse channel level out of range");
    }
    if (source == target) {
        throw Error("collapse channel source and target must differ");
    }
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw Error("collapse rate must be finite and non-negative");
    }
}

std::vector<CollapseChannel> default_decay_channels(double rate)
{
    return {{3, 1, rate}, {3, 2, rate}, {2, 1, rate}};
}

Unitary3 propagator_piecewise(const TimeDependentGenerator& gen)
{
    const bool resonant = gen.detuning.is_resonant();
    const HermitianOp3 idle = gen.idle_hamiltonian();
    Unitary3 u = Unitary3::identity();

    double t = gen.schedule.t_begin();
    for (const auto& seg : gen.schedule.segments()) {
        if (seg.t_start > t && !resonant) {
            u = expm_hermitian(idle, seg.t_start - t) * u;
        }
        bool consistent = true;
        const std::optional<Shape> shape = common_shape(seg, consistent);
        if (!consistent) {
            throw Error("non-commuting segment; use evolve_rk4");
        }
        const HermitianOp3 coupling = peak_coupling(gen, seg);
        if (!shape) {
            u = expm_hermitian(idle, seg.duration) * u;
        } else if (resonant) {
            u = expm_hermitian(coupling, profile_integral(*shape, seg.duration)) * u;
        } else if (*shape == Shape::Rect && gen.detuning.loop_mismatch() == 0.0) {
            u = expm_hermitian(coupling + idle, seg.duration) * u;
        } else {
            throw Error("non-commuting segment; use evolve_rk4");
        }
        t = seg.t_end();
    }
    return u;
}

StateVec3 evolve_piecewise(const TimeDependentGenerator& gen, const StateVec3& psi0)
{
    return apply(propagator_piecewise(gen), psi0);
}

Rk4Result evolve_rk4(const TimeDependentGenerator& gen, const Vector3c& psi0, double step)
{
    check_step(gen.schedule, step);
    const cplx minus_i(0.0, -1.0);
    Vector3c psi = integrate(
        gen, Vector3c(psi0), step, !gen.detuning.is_resonant(),
        [&](const Matrix3c& h, const Vector3c& y) -> Vector3c { return minus_i * (h * y); },
        [](const Vector3c&) {});
    return {psi, std::abs(psi.norm() - 1.0)};
}

Rk4Result evolve_rk4(const TimeDependentGenerator& gen, const StateVec3& psi0, double step)
{
    return evolve_rk4(gen, psi0.amplitudes(), step);
}

Matrix3c lindblad_rhs(const Matrix3c& h, const std::vector<CollapseChannel>& channels,
                      const Matrix3c& rho)
{
    const cplx i(0.0, 1.0);
    Matrix3c out = -i * (h * rho - rho * h);
    for (const auto& ch : channels) {
        if (ch.rate == 0.0) {
            continue;
        }
        const int s = ch.source - 1;
        const int d = ch.target - 1;
        // L rho L^dag = rho_ss |d><d|, L^dag L = |s><s|
        out(d, d) += ch.rate * rho(s, s);
        for (int k = 0; k < 3; ++k) {
            out(s, k) -= 0.5 * ch.rate * rho(s, k);
            out(k, s) -= 0.5 * ch.rate * rho(k, s);
        }
    }
    return out;
}

LindbladResult evolve_lindblad(const TimeDependentGenerator& gen,
                               const std::vector<CollapseChannel>& channels,
                               const DensityMatrix3& rho0, double step)
{
    check_step(gen.schedule, step);
    for (const auto& ch : channels) {
        ch.validate();
    }

    double max_drift = 0.0;
    Matrix3c rho = integrate(
        gen, Matrix3c(rho0.matrix()), step, true,
        [&](const Matrix3c& h, const Matrix3c& r) -> Matrix3c {
            return lindblad_rhs(h, channels, r);
        },
        [&](const Matrix3c& r) { max_drift = std::max(max_drift, std::abs(r.trace() - 1.0)); });

    rho = 0.5 * (rho + rho.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix3c> es(rho, Eigen::EigenvaluesOnly);
    const double min_ev = es.eigenvalues().minCoeff();
    if (max_drift > k_invariant_tol) {
        throw NumericalError("Lindblad trace drift " + std::to_string(max_drift) +
                             " exceeds tolerance");
    }
    if (min_ev < -k_invariant_tol) {
        throw NumericalError("Lindblad state lost positivity (eigenvalue " +
                             std::to_string(min_ev) + ")");
    }
    return {DensityMatrix3(rho, k_invariant_tol), max_drift, min_ev};
}

} // namespace chiralsim
