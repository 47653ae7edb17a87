#include "dualax/duality.hpp"

#include <cmath>

namespace dualax::duality {

using reduction::embed_s1;
using reduction::embed_s2;
using reduction::gauge_fix_s1;
using reduction::gauge_fix_s2;
using reduction::identity_k;
using reduction::moment_residual;

RSFixResult suth_to_rs(const SutherlandState& s, const Coupling& c) {
    if (c.n == 1) {
        // Scalar case in closed form: the slice data transfer is just
        // (q, p) -> (p, -q), with no transcendental round trip on the
        // coordinates.  Residuals are still measured, not assumed.
        model::require_chamber(s.q, "suth_to_rs");
        if (s.p.size() != 1 || !s.p.allFinite())
            throw IndexOutOfRange("suth_to_rs: bad momentum vector");
        RSState out{RealVector::Constant(1, s.p(0)),
                    RealVector::Constant(1, -s.q(0))};
        const reduction::UnreducedPoint pt = embed_s1(s, c);
        const double constraint = moment_residual(pt, c);
        const double slice =
            std::abs(std::norm(pt.g(0, 0)) - model::lax_rs(out, c)(0, 0).real());
        return {std::move(out), identity_k(1), {constraint, slice}};
    }
    return gauge_fix_s2(embed_s1(s, c), c);
}

SuthFixResult rs_to_suth(const RSState& s, const Coupling& c) {
    if (c.n == 1) {
        model::require_chamber(s.p_hat, "rs_to_suth");
        if (s.q_hat.size() != 1 || !s.q_hat.allFinite())
            throw IndexOutOfRange("rs_to_suth: bad coordinate vector");
        SutherlandState out{RealVector::Constant(1, -s.q_hat(0)),
                            RealVector::Constant(1, s.p_hat(0))};
        const reduction::UnreducedPoint pt = embed_s2(s, c);
        const double constraint = moment_residual(pt, c);
        const double slice =
            std::abs(pt.J(0, 0) - model::lax_suth(out, c)(0, 0));
        return {std::move(out), identity_k(1), {constraint, slice}};
    }
    return gauge_fix_s1(embed_s2(s, c), c);
}

double symplectic_certificate(const SutherlandState& s, const Coupling& c,
                              double h) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw ConfigError("symplectic_certificate: step must be positive");
    const int n = c.n;
    const int d = 2 * n;

    // Coordinates ordered (q, p) on the source, (p_hat, q_hat) on the image;
    // in both orderings the slice symplectic form is A = [[0, -I], [I, 0]].
    RealVector x(d);
    x.head(n) = s.q;
    x.tail(n) = s.p;

    const auto eval = [&](const RealVector& y) {
        const SutherlandState st{y.head(n), y.tail(n)};
        const RSState image = suth_to_rs(st, c).state;
        RealVector out(d);
        out.head(n) = image.p_hat;
        out.tail(n) = image.q_hat;
        return out;
    };

    RealMatrix m(d, d);
    for (int i = 0; i < d; ++i) {
        RealVector xp = x, xm = x;
        xp(i) = x(i) + h;
        xm(i) = x(i) - h;
        // Divide by the spread actually realized in floating point so that
        // affine maps differentiate exactly.
        const double spread = xp(i) - xm(i);
        m.col(i) = (eval(xp) - eval(xm)) / spread;
    }

    RealMatrix a = RealMatrix::Zero(d, d);
    for (int i = 0; i < n; ++i) {
        a(i, n + i) = -1.0;
        a(n + i, i) = 1.0;
    }
    const RealMatrix dev = m.transpose() * a * m - a;
    return dev.cwiseAbs().maxCoeff();
}

}  // namespace dualax::duality
