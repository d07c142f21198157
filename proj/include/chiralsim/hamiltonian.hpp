#pragma once

#include <array>
#include <vector>

#include "chiralsim/quantum.hpp"

namespace chiralsim {

/// Complex Rabi amplitudes (rad/s) of the three optical couplings.
struct RabiSet
{
    cplx omega12{0.0};
    cplx omega23{0.0};
    cplx omega13{0.0};

    bool operator==(const RabiSet&) const = default;
};

enum class Chirality { Left, Right };

const char* to_string(Chirality chi);

/// Field detunings Delta_ij = omega_ij(field) - (omega_i - omega_j), rad/s.
struct DetuningSet
{
    double delta12 = 0.0;
    double delta23 = 0.0;
    double delta13 = 0.0;

    bool is_resonant() const { return delta12 == 0.0 && delta23 == 0.0 && delta13 == 0.0; }

    /// delta12 + delta23 - delta13; nonzero when the three fields do not close the loop.
    double loop_mismatch() const { return delta12 + delta23 - delta13; }
};

/// Right-handed molecules see Omega13 with the opposite sign.
RabiSet chirality_signed(const RabiSet& rabi, Chirality chi);

/**
 * Resonant interaction-picture Hamiltonian
 *   H = O12 |1><2| + O23 |2><3| + O13 |1><3| + h.c.
 */
HermitianOp3 build_resonant(const RabiSet& rabi);

/**
 * Resonant couplings plus diag(0, -delta12, -delta13), the frame co-rotating
 * with fields 12 and 13. delta23 only enters through the loop mismatch, which
 * the time-dependent generator carries as a phase on Omega23.
 */
HermitianOp3 build_detuned(const RabiSet& rabi, const DetuningSet& det);

/// (O12 |1> + conj(O23) |3>) normalized; requires omega13 == 0.
StateVec3 bright_state(const RabiSet& rabi);

struct EigenPair
{
    double value;
    StateVec3 state;
};

/**
 * Eigensystem of the two-coupling (omega13 = 0) Hamiltonian, eigenvalues in
 * ascending order. Each eigenvector is phase-fixed so its largest component is
 * real and positive. The all-zero Hamiltonian returns the canonical basis.
 */
std::vector<EigenPair> dressed_eigensystem(const RabiSet& rabi);

} // namespace chiralsim
