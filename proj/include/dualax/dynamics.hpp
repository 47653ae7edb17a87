#pragma once

#include <vector>

#include "dualax/reduction.hpp"

// Exact flows of both commuting Hamiltonian families, on the unreduced space
// and projected to the slices, plus an RK4 integrator used only as a
// cross-validation oracle.

namespace dualax::dynamics {

using model::Coupling;
using model::Family;
using model::HamiltonianId;
using model::RSState;
using model::SutherlandState;
using reduction::UnreducedPoint;

// ---------------------------------------------------------------------------
// Flow specification and sampled trajectories
// ---------------------------------------------------------------------------

struct FlowSpec {
    HamiltonianId hamiltonian;
    double t;
    int steps;  // output sampling count, >= 1
};

template <typename State>
struct Trajectory {
    std::vector<double> times;  // strictly increasing
    std::vector<State> states;
    // Per sample: the n conserved Hamiltonians of the state's own family
    // (indices 1..n).
    std::vector<RealVector> conserved;
    // Sample times dropped because gauge fixing hit an eigenvalue collision.
    std::vector<double> skipped;
};

// ---------------------------------------------------------------------------
// Unreduced flows
// ---------------------------------------------------------------------------

// g -> g exp(t J^{j-1}), J and v unchanged; 1 <= j <= n and J Hermitian.
UnreducedPoint flow_unreduced_H(const UnreducedPoint& pt, int j, double t);

// J -> J - t (g^dag g)^k, g and v unchanged; k in {+-1, ..., +-n}.  Negative
// powers are evaluated spectrally and fail on near-singular g.
UnreducedPoint flow_unreduced_Hhat(const UnreducedPoint& pt, int k, double t);

// ---------------------------------------------------------------------------
// Reduced flows (exact solvers)
// ---------------------------------------------------------------------------

// gauge_fix_s1(flow_unreduced_H(embed_s1(s), j, t)).  Spectral invariants of
// lax_suth are exactly conserved; throws CollidingEigenvalues at exceptional
// times.
SutherlandState flow_suth(const SutherlandState& s, const Coupling& c, int j,
                          double t);

// gauge_fix_s2(flow_unreduced_Hhat(embed_s2(s), k, t)).
RSState flow_rs(const RSState& s, const Coupling& c, int k, double t);

// ---------------------------------------------------------------------------
// Numerical oracle
// ---------------------------------------------------------------------------

// Classic RK4 on Hamilton's equations in the slice Darboux coordinates, with
// central-difference gradients (step 1e-6).  Sign conventions are calibrated
// against the n = 1 unreduced flows and frozen:
//   Sutherland: dq/dt = +dH/dp,      dp/dt = -dH/dq      (H family only)
//   RS:         dp_hat/dt = +dH/dq_hat, dq_hat/dt = -dH/dp_hat  (Hhat only)
SutherlandState rk4_oracle(const SutherlandState& s, const Coupling& c,
                           const HamiltonianId& id, double t, int steps);
RSState rk4_oracle(const RSState& s, const Coupling& c,
                   const HamiltonianId& id, double t, int steps);

// Exact flow evaluated at times i*t/steps, i = 0..steps, with conserved
// columns attached.  Samples hitting an eigenvalue collision are skipped and
// reported in Trajectory::skipped rather than aborting.
Trajectory<SutherlandState> sample_trajectory(const SutherlandState& s,
                                              const Coupling& c,
                                              const FlowSpec& spec);
Trajectory<RSState> sample_trajectory(const RSState& s, const Coupling& c,
                                      const FlowSpec& spec);

}  // namespace dualax::dynamics
