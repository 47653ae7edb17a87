#include "dualax/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace dualax::sampling {

RealVector decreasing(Rng& rng, int n, const Box& b) {
    if (n < 1) throw ConfigError("sampling: n must be >= 1");
    if (!(b.hi > b.lo) || b.min_gap < 0.0 ||
        (n - 1) * b.min_gap >= (b.hi - b.lo))
        throw ConfigError("sampling: box cannot hold the requested gaps");
    // Spacing construction: sorting draws from a box shrunk by the total gap
    // budget and then spreading them by i * min_gap is exactly uniform over
    // the gapped region, with no rejection loop to fail.
    const double hi = b.hi - (n - 1) * b.min_gap;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = rng.uniform(b.lo, hi);
    std::sort(y.begin(), y.end(), std::greater<double>());
    RealVector out(n);
    for (int i = 0; i < n; ++i) out(i) = y[i] + (n - 1 - i) * b.min_gap;
    return out;
}

RealVector plain(Rng& rng, int n, const Box& b) {
    if (n < 1) throw ConfigError("sampling: n must be >= 1");
    RealVector out(n);
    for (int i = 0; i < n; ++i) out(i) = rng.uniform(b.lo, b.hi);
    return out;
}

SutherlandState sutherland(Rng& rng, int n, const Box& b) {
    RealVector q = decreasing(rng, n, b);
    RealVector p = plain(rng, n, b);
    return {std::move(q), std::move(p)};
}

RSState rs(Rng& rng, const model::Coupling& c, const Box& positions) {
    RealVector p_hat = decreasing(rng, c.n, actions_box(c.n, c.kappa));
    RealVector q_hat = plain(rng, c.n, positions);
    return {std::move(p_hat), std::move(q_hat)};
}

RSState rs_equilibrated(Rng& rng, const model::Coupling& c, double jitter) {
    if (!(jitter >= 0.0) || !std::isfinite(jitter))
        throw ConfigError("sampling: jitter must be non-negative");
    RealVector p_hat = decreasing(rng, c.n, actions_box(c.n, c.kappa));
    RealVector q_hat(c.n);
    for (int j = 0; j < c.n; ++j)
        q_hat(j) = model::log_u_product(p_hat, c.kappa, j) +
                   rng.uniform(-jitter, jitter);
    return {std::move(p_hat), std::move(q_hat)};
}

}  // namespace dualax::sampling
