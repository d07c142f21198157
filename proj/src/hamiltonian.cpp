#include "chiralsim/hamiltonian.hpp"

#include <cmath>

#include "chiralsim/error.hpp"

namespace chiralsim {

const char* to_string(Chirality chi)
{
    return chi == Chirality::Left ? "left" : "right";
}

RabiSet chirality_signed(const RabiSet& rabi, Chirality chi)
{
    RabiSet out = rabi;
    if (chi == Chirality::Right) {
        out.omega13 = -rabi.omega13;
    }
    return out;
}

HermitianOp3 build_resonant(const RabiSet& rabi)
{
    Matrix3c h = Matrix3c::Zero();
    h(0, 1) = rabi.omega12;
    h(1, 2) = rabi.omega23;
    h(0, 2) = rabi.omega13;
    h(1, 0) = std::conj(rabi.omega12);
    h(2, 1) = std::conj(rabi.omega23);
    h(2, 0) = std::conj(rabi.omega13);
    return HermitianOp3(h);
}

HermitianOp3 build_detuned(const RabiSet& rabi, const DetuningSet& det)
{
    Matrix3c h = build_resonant(rabi).matrix();
    h(1, 1) = -det.delta12;
    h(2, 2) = -det.delta13;
    return HermitianOp3(h);
}

StateVec3 bright_state(const RabiSet& rabi)
{
    if (rabi.omega13 != cplx(0.0)) {
        throw Error("bright state requires omega13 = 0");
    }
    Vector3c v(rabi.omega12, 0.0, std::conj(rabi.omega23));
    if (v.squaredNorm() == 0.0) {
        throw Error("bright state undefined");
    }
    return normalize(v);
}

std::vector<EigenPair> dressed_eigensystem(const RabiSet& rabi)
{
    if (rabi.omega13 != cplx(0.0)) {
        throw Error("dressed eigensystem requires omega13 = 0");
    }
    const HermitianOp3 h = build_resonant(rabi);
    std::vector<EigenPair> out;
    out.reserve(3);
    if (h.matrix().cwiseAbs().maxCoeff() == 0.0) {
        for (int level = 1; level <= 3; ++level) {
            out.push_back({0.0, StateVec3::basis(level)});
        }
        return out;
    }

    Eigen::SelfAdjointEigenSolver<Matrix3c> es(h.matrix());
    for (int k = 0; k < 3; ++k) {
        Vector3c v = es.eigenvectors().col(k);
        Eigen::Index peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        v *= std::polar(1.0, -std::arg(v(peak)));
        out.push_back({es.eigenvalues()(k), normalize(v)});
    }
    return out;
}

} // namespace chiralsim
