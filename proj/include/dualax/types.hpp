#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace dualax {

using Complex    = std::complex<double>;
using Matrix     = Eigen::MatrixXcd;
using Vector     = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Error taxonomy. Every contract violation has a distinct type so callers can
// tell input problems from numerical degeneracies.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonHermitianInput : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct OrbitViolation : Error { using Error::Error; };
struct ChamberViolation : Error { using Error::Error; };
struct ConstraintViolated : Error { using Error::Error; };
struct CollidingEigenvalues : Error { using Error::Error; };
struct PhaseDegeneracy : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Small helpers shared by all modules. Residuals are always measured in the
// entrywise max-abs norm.
// ---------------------------------------------------------------------------

inline double max_abs(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double max_abs(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline double max_abs(const RealVector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Cartan split X = antiherm_part(X) + herm_part(X).
inline Matrix herm_part(const Matrix& x) { return (x + x.adjoint()) / 2.0; }
inline Matrix antiherm_part(const Matrix& x) { return (x - x.adjoint()) / 2.0; }

}  // namespace dualax
