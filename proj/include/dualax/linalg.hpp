#pragma once

#include "dualax/types.hpp"

namespace dualax::linalg {

// ---------------------------------------------------------------------------
// Dense Hermitian/polar kernel used by everything else. All decompositions
// order spectra non-increasingly and are deterministic for identical input
// bits; eigenvector phases follow a fixed convention (largest-magnitude
// component made real positive) so downstream gauge fixing never sees
// run-to-run phase noise.
// ---------------------------------------------------------------------------

struct EigenDecomposition {
    RealVector values;  // non-increasing
    Matrix basis;       // unitary, basis.adjoint() * H * basis = diag(values)
};

// g = u * diag(sigma) * v.adjoint(), sigma non-increasing and >= 0.
struct Svd {
    Matrix u;
    RealVector sigma;
    Matrix v;
};

// g = pd * unitary (right polar / Cartan decomposition g = g_- g_+).
struct RightPolar {
    Matrix pd;
    Matrix unitary;
};

// g = unitary * pd (left polar g = h_+ h_-).
struct LeftPolar {
    Matrix unitary;
    Matrix pd;
};

// Hermiticity gate: rejects inputs with ||H - H^dag||_inf > 1e-12 ||H||_inf.
EigenDecomposition eigh_desc(const Matrix& h);

// Eigendecomposition of a * a.adjoint() by one-sided Jacobi on the columns
// of a.  Given a factor from a rank-revealing decomposition, eigenvalue
// relative error scales with cond(a) rather than cond(a a^dag); severely
// graded Gram matrices stay usable downstream.
EigenDecomposition gram_eigh(Matrix a);

// Principal square root of a positive definite Hermitian matrix.
Matrix sqrt_pd(const Matrix& p);

// exp(t H) for Hermitian H via the spectral decomposition.
Matrix exp_herm(const Matrix& h, double t);

Svd svd(const Matrix& g);

// Both polar factorizations require g invertible; near-singular inputs
// (smallest singular value <= 1e-13 * max(1, largest)) are rejected.
RightPolar polar_right(const Matrix& g);
LeftPolar polar_left(const Matrix& g);

// LU determinant with partial pivoting; returns 0 for singular input.
Complex det(const Matrix& g);

// Spectral H^k for Hermitian H; k may be negative (then H must be
// invertible) and k = 0 yields the identity.
Matrix power_herm(const Matrix& h, int k);

// Throws CollidingEigenvalues when any adjacent gap of the non-increasing
// values drops to 1e-10 * (1 + scale) or below.
void require_distinct(const RealVector& values, double scale,
                      const char* context);

}  // namespace dualax::linalg
