#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "dualax/linalg.hpp"
#include "dualax/model.hpp"
#include "dualax/sampling.hpp"

using namespace dualax;
using model::Coupling;
using model::Family;
using model::RSState;
using model::SutherlandState;
using sampling::Rng;

namespace {

// Position half-gap that makes sinh(q1 - q2) = 1 for the two-body state.
const double kGolden = std::asinh(1.0) / 2.0;

SutherlandState golden_suth() {
    RealVector q(2), p(2);
    q << kGolden, -kGolden;
    p << 0.0, 0.0;
    return {q, p};
}

RSState golden_rs() {
    RealVector ph(2), qh(2);
    ph << 1.0, -1.0;
    qh << 0.0, 0.0;
    return {ph, qh};
}

double diff(const Matrix& a, const Matrix& b) { return max_abs(Matrix(a - b)); }

}  // namespace

TEST_CASE("coupling validation") {
    CHECK_NOTHROW(Coupling(1, -2.0));
    CHECK_THROWS_AS(Coupling(0, 1.0), ConfigError);
    CHECK_THROWS_AS(Coupling(2, 0.0), ConfigError);
    CHECK_THROWS_AS(Coupling(2, 1e-13), ConfigError);
}

TEST_CASE("hamiltonian id validation") {
    CHECK_NOTHROW(model::validate_id({Family::H, 2}, 3));
    CHECK_NOTHROW(model::validate_id({Family::Hhat, -3}, 3));
    CHECK_THROWS_AS(model::validate_id({Family::H, 0}, 3), IndexOutOfRange);
    CHECK_THROWS_AS(model::validate_id({Family::H, 4}, 3), IndexOutOfRange);
    CHECK_THROWS_AS(model::validate_id({Family::Hhat, 0}, 3), IndexOutOfRange);
    CHECK_THROWS_AS(model::validate_id({Family::Hhat, 4}, 3), IndexOutOfRange);
}

TEST_CASE("chamber guard") {
    RealVector ok(3), wall(2), wrong(2);
    ok << 1.0, 0.0, -1.0;
    wall << 0.5, 0.5;
    wrong << -1.0, 1.0;
    CHECK_NOTHROW(model::require_chamber(ok, "t"));
    CHECK_THROWS_AS(model::require_chamber(wall, "t"), ChamberViolation);
    CHECK_THROWS_AS(model::require_chamber(wrong, "t"), ChamberViolation);
}

TEST_CASE("mu_kappa structure") {
    const Matrix m1 = model::mu_kappa(Coupling(1, 1.0));
    CHECK(std::abs(m1(0, 0)) == 0.0);

    const Matrix m2 = model::mu_kappa(Coupling(2, 1.0));
    CHECK(m2(0, 0) == Complex(0, 0));
    CHECK(m2(0, 1) == Complex(0, -1));
    CHECK(m2(1, 0) == Complex(0, -1));

    for (int n : {2, 5, 16}) {
        const Matrix m = model::mu_kappa(Coupling(n, 0.7));
        CHECK(std::abs(m.trace()) < 1e-14);
        CHECK(max_abs(Matrix(m + m.adjoint())) < 1e-14);  // anti-Hermitian
    }
}

TEST_CASE("xi_of_v closed forms and equivariance") {
    const Coupling c1(1, 2.0);
    CHECK(std::abs(model::xi_of_v(Vector::Ones(1), c1)(0, 0)) == 0.0);

    const Coupling c(4, 1.3);
    const Matrix xi_w = model::xi_of_v(Vector::Ones(4), c);
    CHECK(diff(xi_w, Matrix(-model::mu_kappa(c))) < 1e-14);
    CHECK(std::abs(xi_w.trace()) < 1e-13);

    Rng rng(5);
    Matrix h(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int cc = 0; cc < 4; ++cc)
            h(r, cc) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Matrix eta = linalg::eigh_desc(herm_part(h)).basis;
    Vector v(4);
    for (int i = 0; i < 4; ++i)
        v(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    v *= 2.0 / v.norm();  // |v|^2 = 4
    const Matrix lhs = model::xi_of_v(Vector(eta * v), c);
    const Matrix rhs = eta * model::xi_of_v(v, c) * eta.adjoint();
    CHECK(diff(lhs, rhs) < 1e-12);

    Vector bad = Vector::Ones(4) * 1.2;
    CHECK_THROWS_AS(model::xi_of_v(bad, c), OrbitViolation);
}

TEST_CASE("lax_suth entries") {
    RealVector q1(1), p1(1);
    q1 << 0.0;
    p1 << 0.7;
    const Matrix l1 = model::lax_suth({q1, p1}, Coupling(1, 1.0));
    CHECK(l1(0, 0) == Complex(0.7, 0.0));

    RealVector q(2), p(2);
    q << 0.5, -0.5;
    p << 0.0, 0.0;
    const Matrix l = model::lax_suth({q, p}, Coupling(2, 1.0));
    // off-diagonal -i kappa / sinh(1)
    CHECK(l(0, 1).imag() == doctest::Approx(-0.8509181).epsilon(1e-7));
    CHECK(l(0, 1).imag() ==
          doctest::Approx(-1.0 / std::sinh(1.0)).epsilon(1e-15));
    CHECK(l(1, 0).imag() == doctest::Approx(0.8509181).epsilon(1e-7));

    const Matrix g = model::lax_suth(golden_suth(), Coupling(2, 1.0));
    CHECK(std::abs(g(0, 0)) < 1e-15);
    CHECK(std::abs(g(0, 1) - Complex(0, -1)) < 1e-14);
    const RealVector ev = linalg::eigh_desc(g).values;
    CHECK(ev(0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ev(1) == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("lax_suth hermiticity on random chamber states") {
    Rng rng(31);
    for (int n : {2, 4, 8}) {
        const SutherlandState s =
            sampling::sutherland(rng, n, sampling::battery_box());
        const Matrix l = model::lax_suth(s, Coupling(n, 1.5));
        CHECK(max_abs(Matrix(l - l.adjoint())) < 1e-14);
    }
    RealVector bad(2), p(2);
    bad << -1.0, 1.0;
    p << 0.0, 0.0;
    CHECK_THROWS_AS(model::lax_suth({bad, p}, Coupling(2, 1.0)),
                    ChamberViolation);
}

TEST_CASE("u_vec closed forms") {
    RealVector ph1(1), qh1(1);
    ph1 << 0.0;
    qh1 << 0.4;
    const RealVector u1 = model::u_vec({ph1, qh1}, Coupling(1, 1.0));
    CHECK(u1(0) == doctest::Approx(std::exp(-0.4)).epsilon(1e-15));

    const RealVector ug = model::u_vec(golden_rs(), Coupling(2, 1.0));
    const double fourth = std::pow(2.0, 0.25);
    CHECK(ug(0) == doctest::Approx(fourth).epsilon(1e-14));
    CHECK(ug(1) == doctest::Approx(fourth).epsilon(1e-14));
    CHECK(ug(0) == doctest::Approx(1.1892071).epsilon(1e-7));

    RealVector qh(2);
    qh << std::log(2.0), 0.0;
    const RealVector us =
        model::u_vec({golden_rs().p_hat, qh}, Coupling(2, 1.0));
    CHECK(us(0) == doctest::Approx(0.5946035).epsilon(1e-7));
    CHECK(us(1) == doctest::Approx(1.1892071).epsilon(1e-7));
    CHECK((us.array() > 0).all());
}

TEST_CASE("lax_rs golden matrix") {
    const Matrix l = model::lax_rs(golden_rs(), Coupling(2, 1.0));
    const double r2 = std::sqrt(2.0);
    CHECK(l(0, 0).real() == doctest::Approx(r2).epsilon(1e-13));
    CHECK(l(1, 1).real() == doctest::Approx(r2).epsilon(1e-13));
    CHECK(l(0, 1).real() == doctest::Approx(1 / r2).epsilon(1e-13));
    CHECK(l(0, 1).imag() == doctest::Approx(1 / r2).epsilon(1e-13));
    CHECK(l(1, 0).real() == doctest::Approx(1 / r2).epsilon(1e-13));
    CHECK(l(1, 0).imag() == doctest::Approx(-1 / r2).epsilon(1e-13));
    CHECK(std::abs(linalg::det(l) - Complex(1, 0)) < 1e-12);

    const RealVector ev = linalg::eigh_desc(l).values;
    CHECK(ev(0) == doctest::Approx(r2 + 1).epsilon(1e-13));
    CHECK(ev(1) == doctest::Approx(r2 - 1).epsilon(1e-13));
    CHECK(ev(0) == doctest::Approx(2.4142136).epsilon(1e-7));
    CHECK(ev(1) == doctest::Approx(0.4142136).epsilon(1e-6));
}

TEST_CASE("lax_rs positive definite on random chamber states") {
    Rng rng(37);
    int checked = 0;
    for (int n : {2, 3, 5, 8}) {
        for (double kappa : {0.5, 1.0, 2.0}) {
            const Coupling c(n, kappa);
            for (int i = 0; i < 84; ++i) {
                const RSState s = sampling::rs(rng, c, sampling::battery_box());
                const RealVector ev =
                    linalg::eigh_desc(model::lax_rs(s, c)).values;
                CHECK(ev.minCoeff() > 0.0);
                ++checked;
            }
        }
    }
    CHECK(checked >= 1000);
}

TEST_CASE("determinant of lax_rs equals exp(-2 sum q_hat)") {
    Rng rng(41);
    for (int n : {2, 3, 6}) {
        const Coupling c(n, 1.2);
        const RSState s = sampling::rs(rng, c, sampling::battery_box());
        const double det = linalg::det(model::lax_rs(s, c)).real();
        const double expq = std::exp(-2.0 * s.q_hat.sum());
        CHECK(std::abs(det - expq) <= 1e-9 * expq);
    }
}

TEST_CASE("v_vec lies on the orbit") {
    const Coupling c1(1, 1.0);
    RealVector z(1);
    z << 0.3;
    const Vector v1 = model::v_vec({RealVector::Zero(1), z}, c1);
    CHECK(std::abs(v1(0) - Complex(1, 0)) < 1e-14);

    const Vector vg = model::v_vec(golden_rs(), Coupling(2, 1.0));
    CHECK(std::abs(vg.squaredNorm() - 2.0) < 1e-10);

    Rng rng(43);
    for (int n = 2; n <= 8; ++n) {
        const Coupling c(n, 0.8);
        for (int i = 0; i < 13; ++i) {
            const RSState s = sampling::rs(rng, c, sampling::battery_box());
            const Vector v = model::v_vec(s, c);
            CHECK(std::abs(v.squaredNorm() - n) <= 1e-9 * n);
        }
    }
}

TEST_CASE("lax_rs_factor reconstructs the Lax matrix") {
    Rng rng(97);
    for (int n : {2, 4, 6}) {
        const Coupling c(n, 1.3);
        for (int i = 0; i < 8; ++i) {
            const RSState s = sampling::rs(rng, c, sampling::tame_box());
            const Matrix l = model::lax_rs(s, c);
            const Matrix a = model::lax_rs_factor(s, c);
            CHECK(max_abs(Matrix(a * a.adjoint() - l)) <= 1e-13 * max_abs(l));
        }
    }
}

TEST_CASE("v_vec survives the stiff corner of the grid") {
    // n=8 at the widest coupling pushes cond(lax_rs) to ~1e6 even on ladder
    // states; the factored decomposition keeps the orbit identity at
    // roundoff scale where a dense eigensolver would lose six digits.
    Rng rng(53);
    const Coupling c(8, 2.0);
    for (int i = 0; i < 20; ++i) {
        const RSState s = sampling::rs(rng, c, sampling::battery_box());
        const Vector v = model::v_vec(s, c);
        CHECK(std::abs(v.squaredNorm() - 8.0) <= 1e-10);
    }
}

TEST_CASE("ham_suth values and trace identity") {
    RealVector q1(1), p1(1);
    q1 << 0.0;
    p1 << 2.0;
    CHECK(model::ham_suth({q1, p1}, Coupling(1, 1.0)) ==
          doctest::Approx(2.0).epsilon(1e-15));

    CHECK(model::ham_suth(golden_suth(), Coupling(2, 1.0)) ==
          doctest::Approx(1.0).epsilon(1e-13));

    Rng rng(47);
    for (int n : {2, 3, 5}) {
        const Coupling c(n, 1.7);
        const SutherlandState s =
            sampling::sutherland(rng, n, sampling::battery_box());
        const double direct = model::ham_suth(s, c);
        const double trace =
            model::reduced_hamiltonian(model::lax_suth(s, c), {Family::H, 2});
        CHECK(std::abs(direct - trace) <= 1e-12 * std::abs(direct));
    }
}

TEST_CASE("ham_suth mirror symmetry") {
    Rng rng(53);
    const Coupling c(4, 1.1);
    const SutherlandState s =
        sampling::sutherland(rng, 4, sampling::battery_box());
    SutherlandState m{RealVector(-s.q.reverse()), RealVector(-s.p.reverse())};
    CHECK(model::ham_suth(m, c) ==
          doctest::Approx(model::ham_suth(s, c)).epsilon(1e-12));
}

TEST_CASE("ham_rs values and cosh identity") {
    RealVector ph(1), qh(1);
    ph << 0.0;
    qh << 0.3;
    CHECK(model::ham_rs({ph, qh}, Coupling(1, 1.0)) ==
          doctest::Approx(std::cosh(0.6)).epsilon(1e-14));
    CHECK(model::ham_rs({ph, qh}, Coupling(1, 1.0)) ==
          doctest::Approx(1.1854652).epsilon(1e-7));

    CHECK(model::ham_rs(golden_rs(), Coupling(2, 1.0)) ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-13));

    // Sum form with doubled rapidity: sum_k cosh(2 q_hat_k) *
    // prod_{j != k} sqrt(1 + 4 kappa^2/(p_hat_k - p_hat_j)^2).
    Rng rng(59);
    for (int n : {2, 3, 5}) {
        const Coupling c(n, 0.9);
        const RSState s = sampling::rs(rng, c, sampling::battery_box());
        double sum = 0.0;
        for (int k = 0; k < n; ++k)
            sum += std::cosh(2.0 * s.q_hat(k)) *
                   std::exp(2.0 * model::log_u_product(s.p_hat, c.kappa, k));
        const double tr = model::ham_rs(s, c);
        CHECK(std::abs(sum - tr) <= 1e-9 * std::abs(tr));
    }
}

TEST_CASE("reduced_hamiltonian closed forms") {
    Matrix l1(1, 1);
    l1(0, 0) = 0.7;
    CHECK(model::reduced_hamiltonian(l1, {Family::H, 1}) ==
          doctest::Approx(0.7).epsilon(1e-15));

    Matrix lx(2, 2);
    lx << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    CHECK(model::reduced_hamiltonian(lx, {Family::H, 2}) ==
          doctest::Approx(1.0).epsilon(1e-14));

    Matrix l2(1, 1);
    l2(0, 0) = std::exp(-2.0 * 0.5);
    CHECK(model::reduced_hamiltonian(l2, {Family::Hhat, -1}) ==
          doctest::Approx(-std::exp(1.0) / 2.0).epsilon(1e-14));
    CHECK(model::reduced_hamiltonian(l2, {Family::Hhat, -1}) ==
          doctest::Approx(-1.3591409).epsilon(1e-7));

    // Any positive power evaluates (powers beyond n are dependent but
    // well defined); only nonpositive H indices are rejected here.
    CHECK(model::reduced_hamiltonian(lx, {Family::H, 3}) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(model::reduced_hamiltonian(lx, {Family::H, 0}),
                    IndexOutOfRange);
    CHECK_THROWS_AS(model::reduced_hamiltonian(lx, {Family::Hhat, 0}),
                    IndexOutOfRange);
    // Family Hhat requires positive definiteness; lx has eigenvalue -1.
    CHECK_THROWS_AS(model::reduced_hamiltonian(lx, {Family::Hhat, 1}),
                    NotPositiveDefinite);
}
