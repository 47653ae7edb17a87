#include "dualax/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace dualax::linalg {

namespace {

void require_square(const Matrix& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw IndexOutOfRange(std::string(who) + ": matrix must be square and non-empty");
    if (!a.allFinite())
        throw Error(std::string(who) + ": matrix has non-finite entries");
}

// Rotate each column so its largest-magnitude entry is real positive; ties
// resolved by the first index attaining the maximum.
void fix_phases(Matrix& u) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            const double m = std::abs(u(r, c));
            if (m > best) { best = m; imax = r; }
        }
        const Complex z = u(imax, c);
        if (best > 0.0) u.col(c) *= std::conj(z) / best;
    }
}

}  // namespace

EigenDecomposition eigh_desc(const Matrix& h) {
    require_square(h, "eigh_desc");
    const double scale = max_abs(h);
    const double dev = max_abs(Matrix(h - h.adjoint()));
    // Absolute floor: matrices at roundoff scale are Hermitian for every
    // purpose here, and a purely relative gate would reject them.
    if (dev > 1e-12 * (1.0 + scale))
        throw NonHermitianInput("eigh_desc: ||H - H^dag|| = " + std::to_string(dev));

    const Eigen::Index n = h.rows();
    EigenDecomposition out;
    if (n == 1) {
        // Scalar fast path keeps the value bit-exact.
        out.values = RealVector::Constant(1, h(0, 0).real());
        out.basis = Matrix::Identity(1, 1);
        return out;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success)
        throw Error("eigh_desc: eigensolver failed to converge");
    out.values = es.eigenvalues().reverse();
    out.basis = es.eigenvectors().rowwise().reverse();
    fix_phases(out.basis);
    return out;
}

EigenDecomposition gram_eigh(Matrix a) {
    require_square(a, "gram_eigh");
    const Eigen::Index n = a.rows();

    // One-sided Jacobi: rotate column pairs until the Gram matrix is diagonal
    // to working precision.  Sweep order is fixed, so the result is
    // deterministic for identical input bits.
    for (int sweep = 0;; ++sweep) {
        if (sweep > 64) throw Error("gram_eigh: Jacobi failed to converge");
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double app = a.col(p).squaredNorm();
                const double aqq = a.col(q).squaredNorm();
                const Complex apq = a.col(p).dot(a.col(q));
                const double g = std::abs(apq);
                if (g <= 1e-15 * std::sqrt(app) * std::sqrt(aqq)) continue;
                rotated = true;
                // Strip the phase of the Gram entry, then a real rotation
                // annihilates it.
                const double tau = (aqq - app) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::hypot(1.0, tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;
                const Complex ph = std::conj(apq) / g;
                const Vector cp = a.col(p);
                const Vector cq = a.col(q);
                a.col(p) = cs * cp - sn * (ph * cq);
                a.col(q) = sn * cp + cs * (ph * cq);
            }
        }
        if (!rotated) break;
    }

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    RealVector norms(n);
    for (Eigen::Index i = 0; i < n; ++i) norms(i) = a.col(i).norm();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) {
                         return norms(i) > norms(j);
                     });

    EigenDecomposition out;
    out.values.resize(n);
    out.basis.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double s = norms(order[k]);
        if (!(s > 0.0))
            throw SingularMatrix("gram_eigh: rank-deficient factor");
        out.values(k) = s * s;
        out.basis.col(k) = a.col(order[k]) / s;
    }
    fix_phases(out.basis);
    return out;
}

Matrix sqrt_pd(const Matrix& p) {
    const EigenDecomposition e = eigh_desc(p);
    if (e.values.minCoeff() <= 0.0)
        throw NotPositiveDefinite("sqrt_pd: min eigenvalue = " +
                                  std::to_string(e.values.minCoeff()));
    return e.basis * e.values.cwiseSqrt().asDiagonal() * e.basis.adjoint();
}

Matrix exp_herm(const Matrix& h, double t) {
    const EigenDecomposition e = eigh_desc(h);
    return e.basis * (t * e.values.array()).exp().matrix().asDiagonal() *
           e.basis.adjoint();
}

Svd svd(const Matrix& g) {
    require_square(g, "svd");
    Eigen::JacobiSVD<Matrix> s(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {s.matrixU(), s.singularValues(), s.matrixV()};
}

namespace {

Svd svd_invertible(const Matrix& g, const char* who) {
    Svd s = svd(g);
    const double smax = s.sigma(0);
    if (s.sigma(s.sigma.size() - 1) <= 1e-13 * std::max(1.0, smax))
        throw SingularMatrix(std::string(who) + ": matrix numerically singular");
    return s;
}

}  // namespace

RightPolar polar_right(const Matrix& g) {
    if (g.rows() == 1) {
        // Exact scalar split g = |g| * phase.
        const Complex z = g(0, 0);
        const double r = std::abs(z);
        if (r <= 1e-13) throw SingularMatrix("polar_right: scalar near zero");
        return {Matrix::Constant(1, 1, r), Matrix::Constant(1, 1, z / r)};
    }
    const Svd s = svd_invertible(g, "polar_right");
    // g = (U S U^dag)(U V^dag): the unitary factor is exactly unitary by
    // construction, and small singular values keep full relative accuracy
    // (no Gram matrix is ever formed).
    return {s.u * s.sigma.asDiagonal() * s.u.adjoint(), s.u * s.v.adjoint()};
}

LeftPolar polar_left(const Matrix& g) {
    if (g.rows() == 1) {
        const Complex z = g(0, 0);
        const double r = std::abs(z);
        if (r <= 1e-13) throw SingularMatrix("polar_left: scalar near zero");
        return {Matrix::Constant(1, 1, z / r), Matrix::Constant(1, 1, r)};
    }
    const Svd s = svd_invertible(g, "polar_left");
    return {s.u * s.v.adjoint(), s.v * s.sigma.asDiagonal() * s.v.adjoint()};
}

Complex det(const Matrix& g) {
    require_square(g, "det");
    return g.partialPivLu().determinant();
}

Matrix power_herm(const Matrix& h, int k) {
    require_square(h, "power_herm");
    const Eigen::Index n = h.rows();
    if (k == 0) return Matrix::Identity(n, n);
    if (k == 1) return h;
    const EigenDecomposition e = eigh_desc(h);
    if (k < 0) {
        const double amax = max_abs(e.values);
        if (e.values.cwiseAbs().minCoeff() <= 1e-13 * std::max(1.0, amax))
            throw SingularMatrix("power_herm: negative power of singular matrix");
    }
    RealVector powers(n);
    for (Eigen::Index i = 0; i < n; ++i) powers(i) = std::pow(e.values(i), k);
    return e.basis * powers.asDiagonal() * e.basis.adjoint();
}

void require_distinct(const RealVector& values, double scale,
                      const char* context) {
    const double tol = 1e-10 * (1.0 + scale);
    for (Eigen::Index i = 0; i + 1 < values.size(); ++i)
        if (values(i) - values(i + 1) <= tol)
            throw CollidingEigenvalues(std::string(context) +
                                       ": eigenvalue gap below " +
                                       std::to_string(tol));
}

}  // namespace dualax::linalg
