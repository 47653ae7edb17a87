#include "dualax/model.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dualax/linalg.hpp"

namespace dualax::model {

namespace {

void require_finite(const RealVector& x, const char* context) {
    if (!x.allFinite())
        throw ChamberViolation(std::string(context) + ": non-finite coordinate");
}

void require_size(const RealVector& x, int n, const char* context) {
    if (x.size() != n)
        throw IndexOutOfRange(std::string(context) + ": coordinate size " +
                              std::to_string(x.size()) + " does not match n=" +
                              std::to_string(n));
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters and guards
// ---------------------------------------------------------------------------

Coupling::Coupling(int n_, double kappa_) : n(n_), kappa(kappa_) {
    if (n < 1) throw ConfigError("Coupling: n must be >= 1");
    if (!std::isfinite(kappa) || std::abs(kappa) < 1e-12)
        throw ConfigError("Coupling: kappa must be finite and nonzero");
}

void validate_id(const HamiltonianId& id, int n) {
    if (id.family == Family::H) {
        if (id.index < 1 || id.index > n)
            throw IndexOutOfRange("HamiltonianId: family H needs 1 <= index <= n");
    } else {
        if (id.index == 0 || id.index < -n || id.index > n)
            throw IndexOutOfRange(
                "HamiltonianId: family Hhat needs index in {+-1, ..., +-n}");
    }
}

void require_chamber(const RealVector& x, const char* context) {
    require_finite(x, context);
    const double tol = chamber_tol(x);
    for (Eigen::Index j = 0; j + 1 < x.size(); ++j)
        if (x(j) - x(j + 1) <= tol)
            throw ChamberViolation(std::string(context) +
                                   ": coordinates not strictly decreasing (gap " +
                                   std::to_string(x(j) - x(j + 1)) + " at index " +
                                   std::to_string(j) + ")");
}

void require_orbit(const Vector& v, double tol, const char* context) {
    const double norm2 = v.squaredNorm();
    const double n = static_cast<double>(v.size());
    if (!(std::abs(norm2 - n) <= tol))
        throw OrbitViolation(std::string(context) + ": |v|^2 = " +
                             std::to_string(norm2) + ", expected " +
                             std::to_string(n));
}

// ---------------------------------------------------------------------------
// Matrix constructors
// ---------------------------------------------------------------------------

Matrix mu_kappa(const Coupling& c) {
    const Complex ik(0.0, c.kappa);
    Matrix m = Matrix::Constant(c.n, c.n, -ik);
    m.diagonal().setZero();
    return m;
}

Matrix xi_of_v(const Vector& v, const Coupling& c) {
    if (v.size() != c.n) throw IndexOutOfRange("xi_of_v: vector size mismatch");
    require_orbit(v, 1e-10 * c.n, "xi_of_v");
    // Evaluate the Hermitian outer product first and rotate by i*kappa
    // entrywise afterwards: folding the scalar into the product would break
    // the conjugate symmetry in the last bit.
    Matrix m = v * v.adjoint();
    m.diagonal().array() -= 1.0;
    return Complex(0.0, c.kappa) * m;
}

Matrix lax_suth(const SutherlandState& s, const Coupling& c) {
    require_size(s.q, c.n, "lax_suth");
    require_size(s.p, c.n, "lax_suth");
    require_chamber(s.q, "lax_suth");
    require_finite(s.p, "lax_suth");
    Matrix l(c.n, c.n);
    for (int j = 0; j < c.n; ++j) {
        l(j, j) = s.p(j);
        for (int k = j + 1; k < c.n; ++k) {
            const Complex off(0.0, -c.kappa / std::sinh(s.q(j) - s.q(k)));
            l(j, k) = off;
            l(k, j) = std::conj(off);
        }
    }
    return l;
}

double log_u_product(const RealVector& p_hat, double kappa, int j) {
    double acc = 0.0;
    for (Eigen::Index m = 0; m < p_hat.size(); ++m) {
        if (m == j) continue;
        const double d = p_hat(j) - p_hat(m);
        acc += std::log1p(4.0 * kappa * kappa / (d * d));
    }
    return 0.25 * acc;
}

RealVector u_vec(const RSState& s, const Coupling& c) {
    require_size(s.p_hat, c.n, "u_vec");
    require_size(s.q_hat, c.n, "u_vec");
    require_chamber(s.p_hat, "u_vec");
    require_finite(s.q_hat, "u_vec");
    RealVector u(c.n);
    for (int j = 0; j < c.n; ++j)
        u(j) = std::exp(-s.q_hat(j) + log_u_product(s.p_hat, c.kappa, j));
    return u;
}

Matrix lax_rs(const RSState& s, const Coupling& c) {
    const RealVector u = u_vec(s, c);
    const Complex tik(0.0, 2.0 * c.kappa);
    Matrix l(c.n, c.n);
    for (int j = 0; j < c.n; ++j) {
        l(j, j) = u(j) * u(j);
        for (int k = j + 1; k < c.n; ++k) {
            const Complex off = u(j) * u(k) * tik / (tik + s.p_hat(j) - s.p_hat(k));
            l(j, k) = off;
            l(k, j) = std::conj(off);
        }
    }
    return l;
}

Matrix lax_rs_factor(const RSState& s, const Coupling& c) {
    const RealVector u = u_vec(s, c);
    const int n = c.n;
    const Complex theta(0.0, 2.0 * c.kappa);
    // Schur elimination on the kernel theta/(theta + p_j - p_k): every
    // complement stays in the family with per-row weights w, so the whole
    // elimination is multiplicative and never cancels.  Diagonal pivoting
    // keeps the triangular factor tame.
    Vector w = Vector::Ones(n);
    std::vector<int> act(n);
    std::iota(act.begin(), act.end(), 0);
    Matrix a = Matrix::Zero(n, n);
    for (int m = 0; m < n; ++m) {
        int best = m;
        for (int i = m + 1; i < n; ++i)
            if (std::norm(w(act[i])) > std::norm(w(act[best]))) best = i;
        std::swap(act[m], act[best]);
        const int jm = act[m];
        const double sd = std::abs(w(jm));
        a(jm, m) = u(jm) * sd;
        for (int i = m + 1; i < n; ++i) {
            const int j = act[i];
            const Complex den = theta + (s.p_hat(j) - s.p_hat(jm));
            a(j, m) = u(j) * theta * w(j) * std::conj(w(jm)) / (den * sd);
            w(j) *= (s.p_hat(j) - s.p_hat(jm)) / den;
        }
    }
    return a;
}

linalg::EigenDecomposition lax_rs_eigh(const RSState& s, const Coupling& c) {
    return linalg::gram_eigh(lax_rs_factor(s, c));
}

Vector v_vec(const RSState& s, const Coupling& c) {
    const RealVector u = u_vec(s, c);
    const linalg::EigenDecomposition e = lax_rs_eigh(s, c);
    // v = L^{-1/2} u through the eigenbasis; eigenvalues from the factored
    // decomposition are positive by construction.
    const Vector w = e.basis.adjoint() * u.cast<Complex>();
    const Vector v =
        e.basis * (w.array() / e.values.array().sqrt().cast<Complex>()).matrix();
    require_orbit(v, 1e-9 * c.n, "v_vec");
    return v;
}

// ---------------------------------------------------------------------------
// Hamiltonians
// ---------------------------------------------------------------------------

double ham_suth(const SutherlandState& s, const Coupling& c) {
    require_size(s.q, c.n, "ham_suth");
    require_size(s.p, c.n, "ham_suth");
    require_chamber(s.q, "ham_suth");
    require_finite(s.p, "ham_suth");
    double h = 0.5 * s.p.squaredNorm();
    for (int j = 0; j < c.n; ++j)
        for (int k = 0; k < c.n; ++k) {
            if (j == k) continue;
            const double sh = std::sinh(s.q(j) - s.q(k));
            h += 0.5 * c.kappa * c.kappa / (sh * sh);
        }
    return h;
}

double ham_rs(const RSState& s, const Coupling& c) {
    const linalg::EigenDecomposition e = lax_rs_eigh(s, c);
    return 0.5 * (e.values.array() + e.values.array().inverse()).sum();
}

double reduced_hamiltonian(const Matrix& lax, const HamiltonianId& id) {
    // Evaluation is defined for every positive power (family H) and nonzero
    // power (family Hhat); the 1..n independence bound is enforced by
    // validate_id at interfaces that promise independent invariants.
    if (id.family == Family::H ? id.index < 1 : id.index == 0)
        throw IndexOutOfRange("reduced_hamiltonian: index outside family range");
    const int n = static_cast<int>(lax.rows());
    const linalg::EigenDecomposition e = linalg::eigh_desc(lax);
    if (id.family == Family::H) {
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += std::pow(e.values(i), id.index);
        return tr / id.index;
    }
    if (e.values.minCoeff() <= 0.0)
        throw NotPositiveDefinite(
            "reduced_hamiltonian: family Hhat needs a positive definite matrix");
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += std::pow(e.values(i), id.index);
    return tr / (2.0 * id.index);
}

}  // namespace dualax::model
