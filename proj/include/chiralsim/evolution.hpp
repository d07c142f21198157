#pragma once

#include <cstddef>
#include <vector>

#include "chiralsim/hamiltonian.hpp"
#include "chiralsim/pulses.hpp"
#include "chiralsim/quantum.hpp"

namespace chiralsim {

/**
 * H(t) for a schedule seen by one chirality. Inside segment k the couplings are
 * the sum of that segment's envelopes (closed window); between segments only the
 * detuning diagonal remains. A nonzero loop mismatch rotates Omega23 by
 * exp(i * mismatch * t).
 */
struct TimeDependentGenerator
{
    Schedule schedule;
    DetuningSet detuning;
    Chirality chirality = Chirality::Left;

    RabiSet rabi(std::size_t segment, double t) const;
    HermitianOp3 hamiltonian(std::size_t segment, double t) const;
    HermitianOp3 idle_hamiltonian() const;
};

/// Incoherent jump |target><source| at the given rate (rad/s).
struct CollapseChannel
{
    int source = 3;
    int target = 1;
    double rate = 0.0;

    void validate() const;
};

/// Downhill channels 3->1, 3->2, 2->1, all at the same rate.
std::vector<CollapseChannel> default_decay_channels(double rate);

/**
 * Exact propagation, one spectral exponential per segment. Requires every
 * segment to be a common scalar profile times a constant matrix; otherwise throws
 * Error("non-commuting segment; use evolve_rk4").
 */
StateVec3 evolve_piecewise(const TimeDependentGenerator& gen, const StateVec3& psi0);

/// Exact product of the per-segment propagators (including idle gaps).
Unitary3 propagator_piecewise(const TimeDependentGenerator& gen);

struct Rk4Result
{
    Vector3c amplitudes;  ///< not renormalized
    double norm_drift = 0.0;  ///< | ||psi|| - 1 | at the end

    /// Explicitly renormalized final state.
    StateVec3 state() const { return normalize(amplitudes); }
};

/**
 * Classical fixed-step RK4 for d psi/dt = -i H(t) psi. Each segment (and gap) is
 * tiled by ceil(length / step) equal steps. Throws Error if step <= 0 or
 * step > shortest segment duration / 10.
 */
Rk4Result evolve_rk4(const TimeDependentGenerator& gen, const Vector3c& psi0, double step);
Rk4Result evolve_rk4(const TimeDependentGenerator& gen, const StateVec3& psi0, double step);

struct LindbladResult
{
    DensityMatrix3 rho;
    double max_trace_drift = 0.0;  ///< sampled after every step
    double min_eigenvalue = 0.0;
};

/// Lindblad right-hand side for a fixed Hamiltonian.
Matrix3c lindblad_rhs(const Matrix3c& h, const std::vector<CollapseChannel>& channels,
                      const Matrix3c& rho);

/**
 * RK4 integration of the Lindblad master equation with the same tiling as
 * evolve_rk4. Throws NumericalError if trace drift or the smallest eigenvalue
 * leave +-1e-8.
 */
LindbladResult evolve_lindblad(const TimeDependentGenerator& gen,
                               const std::vector<CollapseChannel>& channels,
                               const DensityMatrix3& rho0, double step);

} // namespace chiralsim
