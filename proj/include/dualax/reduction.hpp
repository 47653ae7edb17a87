#pragma once

#include "dualax/model.hpp"

// Extended phase space, moment map, slice embeddings and the two
// constructive gauge-fixing algorithms.

namespace dualax::reduction {

using model::Coupling;
using model::RSState;
using model::SutherlandState;

// ---------------------------------------------------------------------------
// Points and gauge transformations
// ---------------------------------------------------------------------------

// (g, J, v): group element in left trivialization, Lie-algebra value, orbit
// vector.  On the constraint surface J is Hermitian and moment_residual
// vanishes.
struct UnreducedPoint {
    Matrix g;
    Matrix J;
    Vector v;
};

// Pair of unitaries acting by
//   g -> eta_L g eta_R^dag,  J -> eta_R J eta_R^dag,  v -> eta_L v.
struct KElement {
    Matrix eta_L;
    Matrix eta_R;
};

KElement identity_k(int n);

// compose(k2, k1) acts like k1 followed by k2.
KElement compose(const KElement& k2, const KElement& k1);

UnreducedPoint act(const KElement& k, const UnreducedPoint& pt);

// ||antiherm(g J g^{-1}) + xi(v)|| + ||antiherm(J)|| in the operator 2-norm
// (unitarily invariant, hence gauge invariant); zero exactly on the
// constraint surface.
double moment_residual(const UnreducedPoint& pt, const Coupling& c);

// ---------------------------------------------------------------------------
// Slice embeddings
// ---------------------------------------------------------------------------

// (exp(diag q), lax_suth, all-ones vector).
UnreducedPoint embed_s1(const SutherlandState& s, const Coupling& c);

// (sqrt of lax_rs, diag p_hat, v_vec).
UnreducedPoint embed_s2(const RSState& s, const Coupling& c);

// ---------------------------------------------------------------------------
// Gauge fixing
// ---------------------------------------------------------------------------

struct Residuals {
    double constraint;  // moment residual of the input point
    double slice;       // distance of the transformed point from slice form
};

struct SuthFixResult {
    SutherlandState state;
    KElement transform;  // act(transform, input) lands on the slice
    Residuals residuals;
};

struct RSFixResult {
    RSState state;
    KElement transform;
    Residuals residuals;
};

// Unique chamber representative through the Sutherland slice.  Singular
// values of g give exp(q); the residual torus phase is fixed by rotating the
// orbit vector to the all-ones vector.  The input must satisfy
// moment_residual < constraint_tol * n * (1 + ||J||_inf); off-surface points
// are refused, not projected.
SuthFixResult gauge_fix_s1(const UnreducedPoint& pt, const Coupling& c,
                           double constraint_tol = 1e-8);

// Unique representative through the RS slice: diagonalize J to get p_hat,
// move g into its positive definite polar factor, make u positive by a torus
// rotation, then invert the u-product formula for q_hat.
RSFixResult gauge_fix_s2(const UnreducedPoint& pt, const Coupling& c,
                         double constraint_tol = 1e-8);

}  // namespace dualax::reduction
