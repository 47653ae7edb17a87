#pragma once

#include <string>

#include "dualax/dynamics.hpp"
#include "dualax/verify.hpp"

// Serialization layer.  All numeric output uses 17 significant digits so
// that reload round-trips bit-exactly; key order is fixed so identical
// inputs serialize to identical bytes.

namespace dualax::io {

using dynamics::Trajectory;
using model::Coupling;
using model::RSState;
using model::SutherlandState;
using reduction::KElement;
using reduction::Residuals;
using reduction::UnreducedPoint;
using verify::VerifyReport;

// ---------------------------------------------------------------------------
// Formatting helpers
// ---------------------------------------------------------------------------

// Shortest fixed-width form that reloads exactly (%.17g).
std::string format_g17(double x);

// Writes next to `path` and renames into place; no partial files on error.
void write_file_atomic(const std::string& path, const std::string& text);

// ---------------------------------------------------------------------------
// JSON emitters
// ---------------------------------------------------------------------------

// {"n": n, "re": [[...]], "im": [[...]]}, row-major.
std::string to_json(const Matrix& m);

// {"model": "sutherland", "n": n, "kappa": k, "q": [...], "p": [...]}
std::string to_json(const SutherlandState& s, double kappa);

// {"model": "rs", "n": n, "kappa": k, "p_hat": [...], "q_hat": [...]}
std::string to_json(const RSState& s, double kappa);

// {"g": matrix, "J": matrix, "v": {"re": [...], "im": [...]}}
std::string to_json(const UnreducedPoint& pt);

// {"state": ..., "eta_L": ..., "eta_R": ..., "residuals": {...}}
std::string duality_json(const SutherlandState& state, const KElement& k,
                         const Residuals& r, double kappa);
std::string duality_json(const RSState& state, const KElement& k,
                         const Residuals& r, double kappa);

// {"matrix": ..., "eigenvalues": [...]}
std::string lax_json(const Matrix& lax, const RealVector& values);

// {"model": ..., "values": [...]}
std::string spectrum_json(const std::string& model, const RealVector& values);

std::string to_json(const VerifyReport& report);

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

// Header t,q1..qn,p1..pn,H1..Hn (Sutherland) or
// t,phat1..phatn,qhat1..qhatn,Hhat1..Hhatn (RS), one row per sample.
std::string to_csv(const Trajectory<SutherlandState>& tr);
std::string to_csv(const Trajectory<RSState>& tr);

std::string to_json(const Trajectory<SutherlandState>& tr, double kappa);
std::string to_json(const Trajectory<RSState>& tr, double kappa);

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

// A state file holds exactly one model state; kappa is optional there
// (NaN when absent) because the CLI may supply it per invocation.
struct StateFile {
    bool is_sutherland = true;
    SutherlandState suth;
    RSState rs;
    int n = 0;
    double kappa = 0.0;
};

// Throws ParseError on malformed or schema-violating input and
// ChamberViolation for wall states (load-time validation).
StateFile parse_state(const std::string& text);

Matrix matrix_from_json(const std::string& text);

}  // namespace dualax::io
