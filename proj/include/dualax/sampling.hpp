#pragma once

#include <algorithm>
#include <cstdint>
#include <random>

#include "dualax/model.hpp"

// Deterministic random chamber states for tests and the verification
// battery.  Draws are reproducible across platforms: mt19937_64 output is
// fixed by the standard and doubles are formed directly from the raw bits.

namespace dualax::sampling {

using model::RSState;
using model::SutherlandState;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform in [lo, hi) with 53-bit resolution.
    double uniform(double lo, double hi) {
        const double unit = (gen_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * unit;
    }

  private:
    std::mt19937_64 gen_;
};

// Coordinate box with a minimum gap for chamber-ordered draws.
struct Box {
    double lo;
    double hi;
    double min_gap;
};

// Battery policy: coordinates in [-1.2, 1.2], gaps >= 0.2.  Tighter gaps make
// the Lax matrices ill conditioned (off-diagonals grow like kappa / gap), and
// none of the checked identities get sharper away from this range.
inline Box battery_box() { return {-1.2, 1.2, 0.2}; }

// Tamer box for finite-difference checks, where wall proximity and large
// coordinates inflate truncation error.
inline Box tame_box() { return {-2.0, 2.0, 0.4}; }

// Wide gaps for exponential-flow tests.  The conjugating factor exp(t J^{j-1})
// has condition number e^{t * spread(spectrum)}, and the spectrum spread grows
// quickly as gaps shrink.
inline Box flow_box() { return {-1.2, 1.2, 0.6}; }

// Rapidity ladder for RS draws.  The slice weights compound factors
// (1 + 4 kappa^2 / gap^2)^{1/4} over every pair, so the p-hat gaps must grow
// with kappa or the positive matrix behind the square root becomes too ill
// conditioned for the constraint identities to survive in double precision.
// The ladder spends the [-3, 3] span on gaps first, jitter second.
inline Box actions_box(int n, double kappa) {
    if (n < 2) return {-3.0, 3.0, 0.0};
    return {-3.0, 3.0, std::min(1.0 + 0.4 * kappa, 5.4 / (n - 1))};
}

// Strictly decreasing n-vector with consecutive gaps >= b.min_gap
// (rejection sampling; throws after too many failures).
RealVector decreasing(Rng& rng, int n, const Box& b);

// Unconstrained n-vector in [b.lo, b.hi).
RealVector plain(Rng& rng, int n, const Box& b);

// q decreasing, p plain.
SutherlandState sutherland(Rng& rng, int n, const Box& b);

// q_hat plain from the given box; p_hat decreasing from actions_box(n, kappa).
RSState rs(Rng& rng, const model::Coupling& c, const Box& positions);

// RS draw with each position offset by the log weight it has to carry, so
// u_j lands in [e^-jitter, e^+jitter].  Keeps trace observables and flow
// velocities order one; finite-difference and integrator checks need that
// scale control where box draws would hand them e^{2|q|}-sized matrices.
RSState rs_equilibrated(Rng& rng, const model::Coupling& c, double jitter);

}  // namespace dualax::sampling
