#pragma once

#include "dualax/reduction.hpp"

// The duality symplectomorphism between the two models, realized as
// embed-then-gauge-fix compositions, plus a numerical canonicity certificate.

namespace dualax::duality {

using model::Coupling;
using model::RSState;
using model::SutherlandState;
using reduction::RSFixResult;
using reduction::SuthFixResult;

// Sutherland -> RS.  p_hat comes out as the descending spectrum of
// lax_suth(s) (the action variables); the n = 1 case reduces to the exact
// scalar map (q, p) -> (p, -q).
RSFixResult suth_to_rs(const SutherlandState& s, const Coupling& c);

// RS -> Sutherland.  exp(2q) is the descending spectrum of lax_rs(s); the
// n = 1 case is (p_hat, q_hat) -> (-q_hat, p_hat).
SuthFixResult rs_to_suth(const RSState& s, const Coupling& c);

// Central-difference Jacobian M of (q, p) -> (p_hat, q_hat) and deviation
// ||M^T A M - A||_inf with A = [[0, -I], [I, 0]].  Differences are divided
// by the actually realized coordinate spread, so affine maps certify
// exactly; n = 1 returns exactly 0.
double symplectic_certificate(const SutherlandState& s, const Coupling& c,
                              double h);

}  // namespace dualax::duality
