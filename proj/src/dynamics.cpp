#include "dualax/dynamics.hpp"

#include <cmath>
#include <string>

#include "dualax/linalg.hpp"

namespace dualax::dynamics {

using reduction::embed_s1;
using reduction::embed_s2;
using reduction::gauge_fix_s1;
using reduction::gauge_fix_s2;

// ---------------------------------------------------------------------------
// Unreduced flows
// ---------------------------------------------------------------------------

UnreducedPoint flow_unreduced_H(const UnreducedPoint& pt, int j, double t) {
    const int n = static_cast<int>(pt.g.rows());
    // Any positive power generates a flow; only j <= n gives independent
    // Hamiltonians, which is enforced where HamiltonianId is validated.
    if (j < 1) throw IndexOutOfRange("flow_unreduced_H: need j >= 1");
    if (!std::isfinite(t)) throw ConfigError("flow_unreduced_H: t not finite");
    // g(t) = g exp(t J^{j-1}); one spectral decomposition serves both the
    // power and the exponential.
    const linalg::EigenDecomposition e = linalg::eigh_desc(pt.J);
    RealVector ex(n);
    for (int i = 0; i < n; ++i)
        ex(i) = std::exp(t * std::pow(e.values(i), j - 1));
    const Matrix flow = e.basis * ex.asDiagonal() * e.basis.adjoint();
    return {pt.g * flow, pt.J, pt.v};
}

UnreducedPoint flow_unreduced_Hhat(const UnreducedPoint& pt, int k, double t) {
    if (k == 0) throw IndexOutOfRange("flow_unreduced_Hhat: need k != 0");
    if (!std::isfinite(t)) throw ConfigError("flow_unreduced_Hhat: t not finite");
    const Matrix gram = herm_part(pt.g.adjoint() * pt.g);
    return {pt.g, pt.J - t * linalg::power_herm(gram, k), pt.v};
}

// ---------------------------------------------------------------------------
// Reduced flows
// ---------------------------------------------------------------------------

SutherlandState flow_suth(const SutherlandState& s, const Coupling& c, int j,
                          double t) {
    return gauge_fix_s1(flow_unreduced_H(embed_s1(s, c), j, t), c).state;
}

RSState flow_rs(const RSState& s, const Coupling& c, int k, double t) {
    return gauge_fix_s2(flow_unreduced_Hhat(embed_s2(s, c), k, t), c).state;
}

// ---------------------------------------------------------------------------
// RK4 oracle
// ---------------------------------------------------------------------------

namespace {

constexpr double kGradStep = 1e-6;

// Central-difference gradient of f over a 2n-dimensional coordinate vector.
template <typename F>
RealVector fd_gradient(const F& f, const RealVector& x) {
    RealVector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        RealVector xp = x, xm = x;
        xp(i) += kGradStep;
        xm(i) -= kGradStep;
        g(i) = (f(xp) - f(xm)) / (xp(i) - xm(i));
    }
    return g;
}

// One RK4 trajectory for dx/dt = rhs(x).
template <typename R>
RealVector rk4_integrate(const R& rhs, RealVector x, double t, int steps) {
    if (steps < 1) throw ConfigError("rk4_oracle: steps must be >= 1");
    if (!std::isfinite(t)) throw ConfigError("rk4_oracle: t not finite");
    const double dt = t / steps;
    for (int i = 0; i < steps; ++i) {
        const RealVector k1 = rhs(x);
        const RealVector k2 = rhs(RealVector(x + 0.5 * dt * k1));
        const RealVector k3 = rhs(RealVector(x + 0.5 * dt * k2));
        const RealVector k4 = rhs(RealVector(x + dt * k3));
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

}  // namespace

SutherlandState rk4_oracle(const SutherlandState& s, const Coupling& c,
                           const HamiltonianId& id, double t, int steps) {
    if (id.family != Family::H)
        throw IndexOutOfRange("rk4_oracle: Sutherland states flow under family H");
    const int n = c.n;
    const auto ham = [&](const RealVector& x) {
        return model::reduced_hamiltonian(
            model::lax_suth({x.head(n), x.tail(n)}, c), id);
    };
    // Darboux pair (q, p): dq/dt = +dH/dp, dp/dt = -dH/dq (calibrated
    // against the scalar unreduced flow).
    const auto rhs = [&](const RealVector& x) {
        const RealVector grad = fd_gradient(ham, x);
        RealVector out(2 * n);
        out.head(n) = grad.tail(n);
        out.tail(n) = -grad.head(n);
        return out;
    };
    RealVector x(2 * n);
    x.head(n) = s.q;
    x.tail(n) = s.p;
    x = rk4_integrate(rhs, x, t, steps);
    return {x.head(n), x.tail(n)};
}

RSState rk4_oracle(const RSState& s, const Coupling& c, const HamiltonianId& id,
                   double t, int steps) {
    if (id.family != Family::Hhat)
        throw IndexOutOfRange("rk4_oracle: RS states flow under family Hhat");
    const int n = c.n;
    const auto ham = [&](const RealVector& x) {
        return model::reduced_hamiltonian(
            model::lax_rs({x.head(n), x.tail(n)}, c), id);
    };
    // Darboux pair (p_hat, q_hat): dp_hat/dt = +dH/dq_hat,
    // dq_hat/dt = -dH/dp_hat (same calibration).
    const auto rhs = [&](const RealVector& x) {
        const RealVector grad = fd_gradient(ham, x);
        RealVector out(2 * n);
        out.head(n) = grad.tail(n);
        out.tail(n) = -grad.head(n);
        return out;
    };
    RealVector x(2 * n);
    x.head(n) = s.p_hat;
    x.tail(n) = s.q_hat;
    x = rk4_integrate(rhs, x, t, steps);
    return {x.head(n), x.tail(n)};
}

// ---------------------------------------------------------------------------
// Trajectory sampling
// ---------------------------------------------------------------------------

namespace {

template <typename State, typename Flow, typename Conserved>
Trajectory<State> sample_impl(const State& s, const FlowSpec& spec,
                              const Flow& flow, const Conserved& conserved) {
    if (spec.steps < 1)
        throw ConfigError("sample_trajectory: steps must be >= 1");
    if (!std::isfinite(spec.t))
        throw ConfigError("sample_trajectory: t not finite");
    Trajectory<State> tr;
    for (int i = 0; i <= spec.steps; ++i) {
        const double ti = spec.t * i / spec.steps;
        try {
            State si = (i == 0) ? s : flow(ti);
            tr.conserved.push_back(conserved(si));
            tr.times.push_back(ti);
            tr.states.push_back(std::move(si));
        } catch (const CollidingEigenvalues&) {
            tr.skipped.push_back(ti);
        } catch (const PhaseDegeneracy&) {
            tr.skipped.push_back(ti);
        }
    }
    return tr;
}

}  // namespace

Trajectory<SutherlandState> sample_trajectory(const SutherlandState& s,
                                              const Coupling& c,
                                              const FlowSpec& spec) {
    if (spec.hamiltonian.family != Family::H)
        throw IndexOutOfRange(
            "sample_trajectory: Sutherland states flow under family H");
    model::validate_id(spec.hamiltonian, c.n);
    model::require_chamber(s.q, "sample_trajectory");
    const auto flow = [&](double t) {
        return flow_suth(s, c, spec.hamiltonian.index, t);
    };
    const auto cons = [&](const SutherlandState& st) {
        const Matrix l = model::lax_suth(st, c);
        RealVector h(c.n);
        for (int j = 1; j <= c.n; ++j)
            h(j - 1) = model::reduced_hamiltonian(l, {Family::H, j});
        return h;
    };
    return sample_impl(s, spec, flow, cons);
}

Trajectory<RSState> sample_trajectory(const RSState& s, const Coupling& c,
                                      const FlowSpec& spec) {
    if (spec.hamiltonian.family != Family::Hhat)
        throw IndexOutOfRange(
            "sample_trajectory: RS states flow under family Hhat");
    model::validate_id(spec.hamiltonian, c.n);
    model::require_chamber(s.p_hat, "sample_trajectory");
    const auto flow = [&](double t) {
        return flow_rs(s, c, spec.hamiltonian.index, t);
    };
    const auto cons = [&](const RSState& st) {
        const Matrix l = model::lax_rs(st, c);
        RealVector h(c.n);
        for (int k = 1; k <= c.n; ++k)
            h(k - 1) = model::reduced_hamiltonian(l, {Family::Hhat, k});
        return h;
    };
    return sample_impl(s, spec, flow, cons);
}

}  // namespace dualax::dynamics
