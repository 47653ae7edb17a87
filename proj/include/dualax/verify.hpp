#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dualax/model.hpp"

// Verification battery: slice identities, Poisson-bracket tables and batch
// orchestration over randomized states.

namespace dualax::verify {

using model::Coupling;
using model::RSState;
using model::SutherlandState;

// ---------------------------------------------------------------------------
// Pointwise identity checks (each returns a residual, smaller is better)
// ---------------------------------------------------------------------------

// ||[exp(2 diag q), L1] + 2 i kappa ((e^q w)(e^q w)^dag - exp(2 diag q))||_inf.
double check_commutation_s1(const SutherlandState& s, const Coupling& c);

// ||[L2, diag p_hat] + 2 i kappa (u u^T - L2)||_inf.
double check_commutation_s2(const RSState& s, const Coupling& c);

// Relative error between det(lax_rs) and the Cauchy-type product formula
// prod u_m^2 * prod_{j<k} D_jk^2/(D_jk^2 + 4 kappa^2), combined with the
// relative error against exp(-2 sum q_hat).
double check_det_identity(const RSState& s, const Coupling& c);

// ---------------------------------------------------------------------------
// Poisson brackets on the RS slice
// ---------------------------------------------------------------------------

// E^a = (1/a) tr lax_rs^a,  F^a = (1/a) sum p_hat^a.
enum class ObservableKind { E, F };

struct ObservableId {
    ObservableKind kind;
    int a;  // 1 <= a <= n
};

double observable(const ObservableId& id, const RSState& s, const Coupling& c);

// Central-difference canonical bracket
//   {f, g} = sum_k (df/dp_hat_k dg/dq_hat_k - df/dq_hat_k dg/dp_hat_k),
// the sign fixed by requiring {E^1, F^1} = 2 tr L2 > 0 in the scalar case.
double poisson_fd(const ObservableId& f, const ObservableId& g,
                  const RSState& s, const Coupling& c, double h);

// Max deviation over a, b <= min(n, 3) of the bracket table
//   {E^a, E^b} = {F^a, F^b} = 0,   {E^a, F^b} = 2 tr(p_hat^{b-1} L2^a).
// Nonzero targets are compared relatively (floored at 1); zero targets are
// normalized by the gradient mass that had to cancel.
double check_poisson_table(const RSState& s, const Coupling& c,
                           double h = 1e-5);

// ---------------------------------------------------------------------------
// Batch orchestration
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;  // "<family>/n=<n>/kappa=<kappa>"
    int samples;
    double max_residual;
    double tol;
    bool pass;
};

struct RunConfig {
    std::vector<int> n_list{2, 3, 5};
    std::vector<double> kappa_list{0.5, 1.0, 2.0};
    int samples = 50;
    std::uint64_t seed = 42;
    int jobs = 1;
    double tol_scale = 1.0;  // multiplies every tolerance
    std::map<std::string, double> tol_overrides;  // by family name, pre-scale
};

struct VerifyReport {
    std::uint64_t seed = 0;
    RunConfig config;
    std::vector<CheckResult> checks;  // sorted by name
    bool pass = false;
    // Measured global sign of the angle-variable drift along dual flows
    // (+1 or -1); reported, not asserted a priori.
    int linearization_slope_sign = 0;
};

// Family name -> tolerance before scaling/overrides; the valid key set for
// RunConfig::tol_overrides.
const std::map<std::string, double>& default_tolerances();

// Runs every check family over n_list x kappa_list with `samples` random
// states each (heavier families use a reduced count).  Deterministic for a
// fixed config: worker threads (config.jobs) only change execution order,
// not the report.  Failures become report entries, never exceptions.
VerifyReport run_all(const RunConfig& config);

}  // namespace dualax::verify
