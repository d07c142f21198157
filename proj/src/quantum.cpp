#include "chiralsim/quantum.hpp"

#include <cmath>
#include <string>

#include "chiralsim/error.hpp"

namespace chiralsim {

namespace {

void check_level(int level)
{
    if (level < 1 || level > 3) {
        throw Error("level index out of range: " + std::to_string(level));
    }
}

} // namespace

StateVec3::StateVec3(const Vector3c& amps) : m_amps(amps)
{
    if (std::abs(m_amps.squaredNorm() - 1.0) > tol::construct) {
        throw Error("state is not normalized");
    }
}

StateVec3 StateVec3::basis(int level)
{
    check_level(level);
    Vector3c v = Vector3c::Zero();
    v(level - 1) = 1.0;
    return StateVec3(v);
}

cplx StateVec3::operator[](int level) const
{
    check_level(level);
    return m_amps(level - 1);
}

HermitianOp3::HermitianOp3(const Matrix3c& m) : m_mat(m)
{
    if ((m_mat - m_mat.adjoint()).cwiseAbs().maxCoeff() > tol::construct) {
        throw Error("operator is not Hermitian");
    }
}

HermitianOp3 HermitianOp3::operator+(const HermitianOp3& other) const
{
    return HermitianOp3(m_mat + other.m_mat);
}

HermitianOp3 HermitianOp3::operator*(double s) const
{
    return HermitianOp3(m_mat * s);
}

double unitarity_defect(const Matrix3c& u)
{
    return (u.adjoint() * u - Matrix3c::Identity()).norm();
}

Unitary3::Unitary3(const Matrix3c& m) : m_mat(m)
{
    if (unitarity_defect(m_mat) > tol::derived) {
        throw Error("operator is not unitary");
    }
}

Unitary3 Unitary3::adjoint() const
{
    return Unitary3(m_mat.adjoint());
}

Unitary3 Unitary3::operator*(const Unitary3& other) const
{
    return Unitary3(m_mat * other.m_mat);
}

DensityMatrix3::DensityMatrix3(const Matrix3c& m, double tolerance) : m_mat(m)
{
    if ((m_mat - m_mat.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
        throw Error("density matrix is not Hermitian");
    }
    if (std::abs(m_mat.trace() - 1.0) > tolerance) {
        throw Error("density matrix trace differs from 1");
    }
    if (min_eigenvalue() < -tolerance) {
        throw Error("density matrix has a negative eigenvalue");
    }
}

DensityMatrix3 DensityMatrix3::pure(const StateVec3& psi)
{
    return DensityMatrix3(psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityMatrix3::population(int level) const
{
    check_level(level);
    return m_mat(level - 1, level - 1).real();
}

double DensityMatrix3::min_eigenvalue() const
{
    // symmetrize so the solver sees an exactly Hermitian input
    const Matrix3c h = 0.5 * (m_mat + m_mat.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix3c> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

StateVec3 normalize(const Vector3c& v)
{
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error("degenerate state");
    }
    return StateVec3(v / n);
}

double fidelity(const StateVec3& a, const StateVec3& b)
{
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double population(const StateVec3& psi, int level)
{
    return std::norm(psi[level]);
}

Unitary3 expm_hermitian(const HermitianOp3& h, double duration)
{
    Eigen::SelfAdjointEigenSolver<Matrix3c> es(h.matrix());
    const Matrix3c& v = es.eigenvectors();
    Vector3c phases;
    for (int k = 0; k < 3; ++k) {
        phases(k) = std::polar(1.0, -es.eigenvalues()(k) * duration);
    }
    return Unitary3(v * phases.asDiagonal() * v.adjoint());
}

StateVec3 apply(const Unitary3& u, const StateVec3& psi)
{
    return StateVec3(u.matrix() * psi.amplitudes());
}

} // namespace chiralsim
