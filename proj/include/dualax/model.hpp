#pragma once

#include "dualax/linalg.hpp"
#include "dualax/types.hpp"

// States, Lax matrices, orbit vectors and Hamiltonians for the hyperbolic
// Sutherland model and its rational Ruijsenaars-Schneider dual.

namespace dualax::model {

// ---------------------------------------------------------------------------
// Parameters and states
// ---------------------------------------------------------------------------

struct Coupling {
    int n;
    double kappa;

    // n >= 1 and |kappa| >= 1e-12; a vanishing coupling collapses the
    // internal orbit to a point and the construction degenerates.
    Coupling(int n_, double kappa_);
};

// Sutherland side: positions q strictly decreasing (open Weyl chamber),
// momenta p unconstrained.
struct SutherlandState {
    RealVector q;
    RealVector p;
};

// RS side: p_hat strictly decreasing, q_hat unconstrained.  Under duality
// p_hat carries the Sutherland action variables.
struct RSState {
    RealVector p_hat;
    RealVector q_hat;
};

enum class Family { H, Hhat };

struct HamiltonianId {
    Family family;
    int index;
};

// family H: 1 <= index <= n; family Hhat: index in {+-1, ..., +-n}.
void validate_id(const HamiltonianId& id, int n);

// ---------------------------------------------------------------------------
// Chamber and orbit guards
// ---------------------------------------------------------------------------

// Wall tolerance scales with the coordinate magnitude.
inline double chamber_tol(const RealVector& x) {
    return 1e-10 * (1.0 + max_abs(x));
}

// Throws ChamberViolation unless x is strictly decreasing with gaps above
// chamber_tol(x).
void require_chamber(const RealVector& x, const char* context);

// Throws OrbitViolation unless | |v|^2 - n | <= tol.
void require_orbit(const Vector& v, double tol, const char* context);

// ---------------------------------------------------------------------------
// Matrix constructors
// ---------------------------------------------------------------------------

// i*kappa*(1 - w w^T) with w the all-ones vector; anti-Hermitian, traceless.
Matrix mu_kappa(const Coupling& c);

// xi(v) = i*kappa*(v v^dag - 1); requires |v|^2 = n within 1e-10*n.
Matrix xi_of_v(const Vector& v, const Coupling& c);

// Sutherland Lax matrix: diagonal p_j, off-diagonal -i*kappa/sinh(q_j - q_k).
Matrix lax_suth(const SutherlandState& s, const Coupling& c);

// (1/4) sum_{m != j} log(1 + 4 kappa^2/(p_hat_j - p_hat_m)^2).  Shared by
// u_vec and by the gauge fixing that inverts it, so the two stay consistent
// to roundoff.
double log_u_product(const RealVector& p_hat, double kappa, int j);

// u_j = exp(-q_hat_j) * prod_{m != j} (1 + 4 kappa^2/(p_hat_j - p_hat_m)^2)^{1/4}.
RealVector u_vec(const RSState& s, const Coupling& c);

// RS Lax matrix: L[j][k] = u_j * 2i*kappa/(2i*kappa + p_hat_j - p_hat_k) * u_k.
// Hermitian and positive definite on chamber states.
Matrix lax_rs(const RSState& s, const Coupling& c);

// Factor a with lax_rs = a a^dag, from pivoted Schur elimination on the
// Cauchy kernel 2ik/(2ik + p_hat_j - p_hat_k).  Every entry is a product of
// difference quotients of distinct rapidities, so the factor keeps near-full
// relative accuracy even where lax_rs itself is badly conditioned.
Matrix lax_rs_factor(const RSState& s, const Coupling& c);

// Eigendecomposition of lax_rs through the factor (linalg::gram_eigh);
// eigenvalue relative error follows the factor's modest condition number,
// not lax_rs's, which can reach 1e6 on legal chamber states.
linalg::EigenDecomposition lax_rs_eigh(const RSState& s, const Coupling& c);

// v = lax_rs^{-1/2} u; satisfies |v|^2 = n within 1e-9*n.
Vector v_vec(const RSState& s, const Coupling& c);

// ---------------------------------------------------------------------------
// Hamiltonians
// ---------------------------------------------------------------------------

// (1/2) sum p^2 + (kappa^2/2) sum_{j != k} 1/sinh^2(q_j - q_k);
// equals (1/2) tr lax_suth^2.
double ham_suth(const SutherlandState& s, const Coupling& c);

// (1/2) tr(lax_rs + lax_rs^{-1}).
double ham_rs(const RSState& s, const Coupling& c);

// Family H: (1/j) tr(L^j) for Hermitian L.
// Family Hhat: (1/2k) tr(L^k) for positive definite L, k possibly negative.
// Powers are evaluated spectrally.
double reduced_hamiltonian(const Matrix& lax, const HamiltonianId& id);

}  // namespace dualax::model
