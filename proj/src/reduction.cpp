#include "dualax/reduction.hpp"

#include <cmath>
#include <string>

#include "dualax/linalg.hpp"

namespace dualax::reduction {

namespace {

void require_point(const UnreducedPoint& pt, int n, const char* context) {
    if (pt.g.rows() != n || pt.g.cols() != n || pt.J.rows() != n ||
        pt.J.cols() != n || pt.v.size() != n)
        throw IndexOutOfRange(std::string(context) + ": point dimensions do not match n=" +
                              std::to_string(n));
    if (!pt.g.allFinite() || !pt.J.allFinite() || !pt.v.allFinite())
        throw Error(std::string(context) + ": point has non-finite entries");
}

// Scaled moment-map tolerance: the residual is a sum of n x n entrywise
// norms, so it grows with both dimension and the size of J.
double effective_tol(double constraint_tol, int n, const Matrix& J) {
    return constraint_tol * n * (1.0 + max_abs(J));
}

// Diagonal torus action: conjugates a by diag(tau) (tau unit-modulus).
Matrix torus_conj(const Vector& tau, const Matrix& a) {
    return tau.asDiagonal() * a * tau.conjugate().asDiagonal();
}

}  // namespace

// ---------------------------------------------------------------------------
// Gauge group
// ---------------------------------------------------------------------------

KElement identity_k(int n) {
    return {Matrix::Identity(n, n), Matrix::Identity(n, n)};
}

KElement compose(const KElement& k2, const KElement& k1) {
    return {k2.eta_L * k1.eta_L, k2.eta_R * k1.eta_R};
}

UnreducedPoint act(const KElement& k, const UnreducedPoint& pt) {
    return {k.eta_L * pt.g * k.eta_R.adjoint(),
            k.eta_R * pt.J * k.eta_R.adjoint(), k.eta_L * pt.v};
}

double moment_residual(const UnreducedPoint& pt, const Coupling& c) {
    require_point(pt, c.n, "moment_residual");
    // g J g^{-1} without forming the inverse: solve X g = g J.
    const Matrix gj = pt.g * pt.J;
    const Matrix conj_t =
        pt.g.transpose().partialPivLu().solve(gj.transpose());
    const Matrix gjg = conj_t.transpose();
    // A non-finite conjugate means the solve hit a zero pivot: g is singular
    // and the point is off the phase space, not merely off the constraint.
    if (!gjg.allFinite())
        throw SingularMatrix("moment_residual: g numerically singular");
    // Both components are anti-Hermitian, so the operator 2-norm is the
    // largest |eigenvalue| of i times the component.  A unitarily invariant
    // norm makes the residual itself gauge invariant.
    const auto op_norm = [](const Matrix& a) {
        const Matrix h = Complex(0, 1) * a;
        return linalg::eigh_desc(h).values.cwiseAbs().maxCoeff();
    };
    return op_norm(antiherm_part(gjg) + model::xi_of_v(pt.v, c)) +
           op_norm(antiherm_part(pt.J));
}

// ---------------------------------------------------------------------------
// Slice embeddings
// ---------------------------------------------------------------------------

UnreducedPoint embed_s1(const SutherlandState& s, const Coupling& c) {
    const Matrix J = model::lax_suth(s, c);
    Matrix g = Matrix::Zero(c.n, c.n);
    for (int j = 0; j < c.n; ++j) g(j, j) = std::exp(s.q(j));
    return {g, J, Vector::Ones(c.n)};
}

UnreducedPoint embed_s2(const RSState& s, const Coupling& c) {
    // g and v come from one factored eigendecomposition so their errors
    // cancel in the moment-map constraint instead of compounding.
    const linalg::EigenDecomposition e = model::lax_rs_eigh(s, c);
    const RealVector u = model::u_vec(s, c);
    Matrix J = Matrix::Zero(c.n, c.n);
    J.diagonal() = s.p_hat.cast<Complex>();
    const RealVector sigma = e.values.cwiseSqrt();
    const Matrix g = e.basis * sigma.asDiagonal() * e.basis.adjoint();
    const Vector w = e.basis.adjoint() * u.cast<Complex>();
    const Vector v = e.basis * (w.array() / sigma.cast<Complex>().array()).matrix();
    model::require_orbit(v, 1e-9 * c.n, "embed_s2");
    return {g, J, v};
}

// ---------------------------------------------------------------------------
// Gauge fixing onto the Sutherland slice
// ---------------------------------------------------------------------------

SuthFixResult gauge_fix_s1(const UnreducedPoint& pt, const Coupling& c,
                           double constraint_tol) {
    const int n = c.n;
    require_point(pt, n, "gauge_fix_s1");
    const double constraint = moment_residual(pt, c);
    const double eff_tol = effective_tol(constraint_tol, n, pt.J);
    if (constraint > eff_tol)
        throw ConstraintViolated("gauge_fix_s1: moment residual " +
                                 std::to_string(constraint) + " exceeds " +
                                 std::to_string(eff_tol));

    // g = U Sigma W^dag; the pair (U^dag, W^dag) maps g to the positive
    // diagonal Sigma, which is exp(diag q) with q descending.
    const linalg::Svd s = linalg::svd(pt.g);
    if (s.sigma(n - 1) <= 1e-13 * std::max(1.0, s.sigma(0)))
        throw SingularMatrix("gauge_fix_s1: g numerically singular");
    RealVector q(n);
    for (int j = 0; j < n; ++j) q(j) = std::log(s.sigma(j));
    linalg::require_distinct(q, max_abs(q), "gauge_fix_s1");

    const Matrix j1 = s.v.adjoint() * pt.J * s.v;
    const Vector v1 = s.u.adjoint() * pt.v;

    // On the surface the orbit vector lands on the unit torus; the moment
    // constraint controls how far the modulus may drift.
    const double phase_tol = std::max(1e-6, 10.0 * eff_tol / std::abs(c.kappa));
    Vector tau(n);
    for (int j = 0; j < n; ++j) {
        const double m = std::abs(v1(j));
        if (std::abs(m - 1.0) > phase_tol)
            throw PhaseDegeneracy("gauge_fix_s1: |v_" + std::to_string(j) +
                                  "| = " + std::to_string(m) +
                                  " off the unit torus");
        tau(j) = std::conj(v1(j)) / m;
    }

    SutherlandState state{q, j1.diagonal().real()};
    const Matrix j2 = torus_conj(tau, j1);
    const double slice = max_abs(Matrix(j2 - model::lax_suth(state, c)));
    KElement transform{tau.asDiagonal() * s.u.adjoint(),
                       tau.asDiagonal() * s.v.adjoint()};
    return {std::move(state), std::move(transform), {constraint, slice}};
}

// ---------------------------------------------------------------------------
// Gauge fixing onto the RS slice
// ---------------------------------------------------------------------------

RSFixResult gauge_fix_s2(const UnreducedPoint& pt, const Coupling& c,
                         double constraint_tol) {
    const int n = c.n;
    require_point(pt, n, "gauge_fix_s2");
    const double constraint = moment_residual(pt, c);
    const double eff_tol = effective_tol(constraint_tol, n, pt.J);
    if (constraint > eff_tol)
        throw ConstraintViolated("gauge_fix_s2: moment residual " +
                                 std::to_string(constraint) + " exceeds " +
                                 std::to_string(eff_tol));

    // The constraint bounds the anti-Hermitian part of J, so diagonalize the
    // Hermitian part.
    const linalg::EigenDecomposition e = linalg::eigh_desc(herm_part(pt.J));
    const RealVector p_hat = e.values;
    linalg::require_distinct(p_hat, max_abs(p_hat), "gauge_fix_s2");

    const Matrix g1 = pt.g * e.basis;
    const linalg::LeftPolar lp = linalg::polar_left(g1);

    // After moving g into its positive factor h, the would-be u vector is
    // h h_+^dag v; its phases are the leftover torus freedom.
    const Vector u1 = lp.pd * (lp.unitary.adjoint() * pt.v);
    const double u_floor = 1e-10 * (1.0 + max_abs(u1));
    Vector tau(n);
    RealVector q_hat(n);
    for (int j = 0; j < n; ++j) {
        const double m = std::abs(u1(j));
        if (m <= u_floor)
            throw PhaseDegeneracy("gauge_fix_s2: u_" + std::to_string(j) +
                                  " vanishes");
        tau(j) = std::conj(u1(j)) / m;
        q_hat(j) = -std::log(m) + model::log_u_product(p_hat, c.kappa, j);
    }

    RSState state{p_hat, q_hat};
    const Matrix h2 = torus_conj(tau, Matrix(lp.pd * lp.pd));
    const double slice = max_abs(Matrix(h2 - model::lax_rs(state, c)));
    KElement transform{tau.asDiagonal() * lp.unitary.adjoint(),
                       tau.asDiagonal() * e.basis.adjoint()};
    return {std::move(state), std::move(transform), {constraint, slice}};
}

}  // namespace dualax::reduction
