#pragma once

#include <complex>

#include <Eigen/Dense>

namespace chiralsim {

using cplx = std::complex<double>;
using Vector3c = Eigen::Vector3cd;
using Matrix3c = Eigen::Matrix3cd;

namespace tol {
inline constexpr double construct = 1e-12;
inline constexpr double derived = 1e-10;
} // namespace tol

/**
 * Pure state of a three-level system in the basis (|1>, |2>, |3>).
 * Always unit norm within tol::construct.
 */
class StateVec3
{
public:
    /// Throws Error unless amps has unit norm.
    explicit StateVec3(const Vector3c& amps);

    /// Basis state |level>, level in 1..3.
    static StateVec3 basis(int level);

    const Vector3c& amplitudes() const { return m_amps; }
    cplx operator[](int level) const;

private:
    Vector3c m_amps;
};

class HermitianOp3
{
public:
    explicit HermitianOp3(const Matrix3c& m);
    static HermitianOp3 zero() { return HermitianOp3(Matrix3c::Zero()); }

    const Matrix3c& matrix() const { return m_mat; }

    HermitianOp3 operator+(const HermitianOp3& other) const;
    HermitianOp3 operator*(double s) const;

private:
    Matrix3c m_mat;
};

class Unitary3
{
public:
    explicit Unitary3(const Matrix3c& m);
    static Unitary3 identity() { return Unitary3(Matrix3c::Identity()); }

    const Matrix3c& matrix() const { return m_mat; }
    Unitary3 adjoint() const;
    Unitary3 operator*(const Unitary3& other) const;

private:
    Matrix3c m_mat;
};

/// Hermitian, unit trace, positive semidefinite (eigenvalues >= -tolerance).
class DensityMatrix3
{
public:
    explicit DensityMatrix3(const Matrix3c& m, double tolerance = tol::derived);
    static DensityMatrix3 pure(const StateVec3& psi);

    const Matrix3c& matrix() const { return m_mat; }
    double population(int level) const;
    double min_eigenvalue() const;

private:
    Matrix3c m_mat;
};

/// Scale v to unit norm. Throws Error("degenerate state") for the zero vector.
StateVec3 normalize(const Vector3c& v);

/// |<a|b>|^2, insensitive to global phase.
double fidelity(const StateVec3& a, const StateVec3& b);

double population(const StateVec3& psi, int level);

/// exp(-i H t) from the spectral decomposition of H.
Unitary3 expm_hermitian(const HermitianOp3& h, double duration);

StateVec3 apply(const Unitary3& u, const StateVec3& psi);

/// Frobenius norm of U^dagger U - I.
double unitarity_defect(const Matrix3c& u);

} // namespace chiralsim
