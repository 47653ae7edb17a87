#include "dualax/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <utility>

#include "json.hpp"

namespace dualax::io {

namespace {

using nlohmann::json;

void append_real(std::string& out, double x) { out += format_g17(x); }

void append_vector(std::string& out, const RealVector& v) {
    out += '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        append_real(out, v(i));
    }
    out += ']';
}

// Row-major nested array of one component of a complex matrix.
void append_part(std::string& out, const Matrix& m, bool re) {
    out += '[';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r) out += ',';
        out += '[';
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ',';
            append_real(out, re ? m(r, c).real() : m(r, c).imag());
        }
        out += ']';
    }
    out += ']';
}

void append_quoted(std::string& out, const std::string& s) {
    out += '"';
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    out += '"';
}

std::string state_body(const char* model, const char* k1, const RealVector& v1,
                       const char* k2, const RealVector& v2, double kappa) {
    std::string out = "{\"model\":\"";
    out += model;
    out += "\",\"n\":" + std::to_string(v1.size());
    out += ",\"kappa\":";
    append_real(out, kappa);
    out += ",\"";
    out += k1;
    out += "\":";
    append_vector(out, v1);
    out += ",\"";
    out += k2;
    out += "\":";
    append_vector(out, v2);
    out += '}';
    return out;
}

std::string duality_body(const std::string& state_json, const KElement& k,
                         const Residuals& r) {
    std::string out = "{\"state\":" + state_json;
    out += ",\"eta_L\":" + to_json(k.eta_L);
    out += ",\"eta_R\":" + to_json(k.eta_R);
    out += ",\"residuals\":{\"constraint\":";
    append_real(out, r.constraint);
    out += ",\"slice\":";
    append_real(out, r.slice);
    out += "}}";
    return out;
}

// ---- parsing helpers ----

double number_at(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ParseError(std::string("state: missing numeric field '") + key +
                         "'");
    const double x = j.at(key).get<double>();
    if (!std::isfinite(x))
        throw ParseError(std::string("state: field '") + key + "' not finite");
    return x;
}

RealVector vector_at(const json& j, const char* key, int n) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw ParseError(std::string("state: missing array field '") + key +
                         "'");
    const json& arr = j.at(key);
    if (static_cast<int>(arr.size()) != n)
        throw ParseError(std::string("state: field '") + key + "' must have " +
                         std::to_string(n) + " entries");
    RealVector v(n);
    for (int i = 0; i < n; ++i) {
        if (!arr[i].is_number())
            throw ParseError(std::string("state: field '") + key +
                             "' has a non-numeric entry");
        v(i) = arr[i].get<double>();
        if (!std::isfinite(v(i)))
            throw ParseError(std::string("state: field '") + key +
                             "' has a non-finite entry");
    }
    return v;
}

json parse_or_throw(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp + " for writing");
        f << text;
        f.flush();
        if (!f) {
            std::remove(tmp.c_str());
            throw Error("write failed for " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot move " + tmp + " into place");
    }
}

// ---------------------------------------------------------------------------
// Emitters
// ---------------------------------------------------------------------------

std::string to_json(const Matrix& m) {
    std::string out = "{\"n\":" + std::to_string(m.rows());
    out += ",\"re\":";
    append_part(out, m, true);
    out += ",\"im\":";
    append_part(out, m, false);
    out += '}';
    return out;
}

std::string to_json(const SutherlandState& s, double kappa) {
    return state_body("sutherland", "q", s.q, "p", s.p, kappa);
}

std::string to_json(const RSState& s, double kappa) {
    return state_body("rs", "p_hat", s.p_hat, "q_hat", s.q_hat, kappa);
}

std::string to_json(const UnreducedPoint& pt) {
    std::string out = "{\"g\":" + to_json(pt.g);
    out += ",\"J\":" + to_json(pt.J);
    out += ",\"v\":{\"re\":";
    append_vector(out, pt.v.real());
    out += ",\"im\":";
    append_vector(out, pt.v.imag());
    out += "}}";
    return out;
}

std::string duality_json(const SutherlandState& state, const KElement& k,
                         const Residuals& r, double kappa) {
    return duality_body(to_json(state, kappa), k, r);
}

std::string duality_json(const RSState& state, const KElement& k,
                         const Residuals& r, double kappa) {
    return duality_body(to_json(state, kappa), k, r);
}

std::string lax_json(const Matrix& lax, const RealVector& values) {
    std::string out = "{\"matrix\":" + to_json(lax);
    out += ",\"eigenvalues\":";
    append_vector(out, values);
    out += '}';
    return out;
}

std::string spectrum_json(const std::string& model, const RealVector& values) {
    std::string out = "{\"model\":";
    append_quoted(out, model);
    out += ",\"values\":";
    append_vector(out, values);
    out += '}';
    return out;
}

std::string to_json(const VerifyReport& report) {
    std::string out = "{\"seed\":" + std::to_string(report.seed);
    out += ",\"config\":{\"n\":[";
    for (std::size_t i = 0; i < report.config.n_list.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(report.config.n_list[i]);
    }
    out += "],\"kappa\":[";
    for (std::size_t i = 0; i < report.config.kappa_list.size(); ++i) {
        if (i) out += ',';
        append_real(out, report.config.kappa_list[i]);
    }
    out += "],\"samples\":" + std::to_string(report.config.samples);
    out += ",\"jobs\":" + std::to_string(report.config.jobs);
    out += ",\"tol_scale\":";
    append_real(out, report.config.tol_scale);
    out += ",\"tol_overrides\":{";
    bool first = true;
    for (const auto& kv : report.config.tol_overrides) {
        if (!first) out += ',';
        first = false;
        append_quoted(out, kv.first);
        out += ':';
        append_real(out, kv.second);
    }
    out += "}},\"checks\":[";
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
        const verify::CheckResult& ch = report.checks[i];
        if (i) out += ',';
        out += "{\"name\":";
        append_quoted(out, ch.name);
        out += ",\"samples\":" + std::to_string(ch.samples);
        out += ",\"max_residual\":";
        append_real(out, ch.max_residual);
        out += ",\"tol\":";
        append_real(out, ch.tol);
        out += ",\"pass\":";
        out += ch.pass ? "true" : "false";
        out += '}';
    }
    out += "],\"pass\":";
    out += report.pass ? "true" : "false";
    out += ",\"linearization_slope_sign\":" +
           std::to_string(report.linearization_slope_sign);
    out += '}';
    return out;
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

namespace {

template <typename State, typename Coords>
std::string csv_body(const Trajectory<State>& tr, const char* c1,
                     const char* c2, const char* h, const Coords& coords) {
    const int n = tr.states.empty()
                      ? 0
                      : static_cast<int>(tr.conserved.front().size());
    std::string out = "t";
    for (int i = 1; i <= n; ++i) out += "," + std::string(c1) + std::to_string(i);
    for (int i = 1; i <= n; ++i) out += "," + std::string(c2) + std::to_string(i);
    for (int i = 1; i <= n; ++i) out += "," + std::string(h) + std::to_string(i);
    out += '\n';
    for (std::size_t r = 0; r < tr.states.size(); ++r) {
        out += format_g17(tr.times[r]);
        const auto [x, y] = coords(tr.states[r]);
        for (int i = 0; i < n; ++i) out += "," + format_g17(x(i));
        for (int i = 0; i < n; ++i) out += "," + format_g17(y(i));
        for (int i = 0; i < n; ++i) out += "," + format_g17(tr.conserved[r](i));
        out += '\n';
    }
    return out;
}

template <typename State, typename Coords>
std::string trajectory_json_body(const Trajectory<State>& tr, const char* model,
                                 double kappa, const char* k1, const char* k2,
                                 const Coords& coords) {
    std::string out = "{\"model\":\"";
    out += model;
    out += "\",\"kappa\":";
    out += format_g17(kappa);
    out += ",\"times\":[";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        if (i) out += ',';
        out += format_g17(tr.times[i]);
    }
    out += "],\"";
    out += k1;
    out += "\":[";
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        if (i) out += ',';
        append_vector(out, coords(tr.states[i]).first);
    }
    out += "],\"";
    out += k2;
    out += "\":[";
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        if (i) out += ',';
        append_vector(out, coords(tr.states[i]).second);
    }
    out += "],\"conserved\":[";
    for (std::size_t i = 0; i < tr.conserved.size(); ++i) {
        if (i) out += ',';
        append_vector(out, tr.conserved[i]);
    }
    out += "],\"skipped\":[";
    for (std::size_t i = 0; i < tr.skipped.size(); ++i) {
        if (i) out += ',';
        out += format_g17(tr.skipped[i]);
    }
    out += "]}";
    return out;
}

const auto suth_coords = [](const SutherlandState& s) {
    return std::make_pair(s.q, s.p);
};
const auto rs_coords = [](const RSState& s) {
    return std::make_pair(s.p_hat, s.q_hat);
};

}  // namespace

std::string to_csv(const Trajectory<SutherlandState>& tr) {
    return csv_body(tr, "q", "p", "H", suth_coords);
}

std::string to_csv(const Trajectory<RSState>& tr) {
    return csv_body(tr, "phat", "qhat", "Hhat", rs_coords);
}

std::string to_json(const Trajectory<SutherlandState>& tr, double kappa) {
    return trajectory_json_body(tr, "sutherland", kappa, "q", "p", suth_coords);
}

std::string to_json(const Trajectory<RSState>& tr, double kappa) {
    return trajectory_json_body(tr, "rs", kappa, "p_hat", "q_hat", rs_coords);
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

StateFile parse_state(const std::string& text) {
    const json j = parse_or_throw(text);
    if (!j.is_object()) throw ParseError("state: top level must be an object");
    if (!j.contains("model") || !j.at("model").is_string())
        throw ParseError("state: missing string field 'model'");
    const std::string model = j.at("model").get<std::string>();
    if (model != "sutherland" && model != "rs")
        throw ParseError("state: model must be 'sutherland' or 'rs'");
    if (!j.contains("n") || !j.at("n").is_number_integer())
        throw ParseError("state: missing integer field 'n'");
    const int n = j.at("n").get<int>();
    if (n < 1) throw ParseError("state: n must be >= 1");

    StateFile out;
    out.n = n;
    out.kappa = j.contains("kappa")
                    ? number_at(j, "kappa")
                    : std::numeric_limits<double>::quiet_NaN();
    if (model == "sutherland") {
        out.is_sutherland = true;
        out.suth = {vector_at(j, "q", n), vector_at(j, "p", n)};
        model::require_chamber(out.suth.q, "state load");
    } else {
        out.is_sutherland = false;
        out.rs = {vector_at(j, "p_hat", n), vector_at(j, "q_hat", n)};
        model::require_chamber(out.rs.p_hat, "state load");
    }
    return out;
}

Matrix matrix_from_json(const std::string& text) {
    const json j = parse_or_throw(text);
    if (!j.is_object() || !j.contains("n") || !j.at("n").is_number_integer())
        throw ParseError("matrix: missing integer field 'n'");
    const int n = j.at("n").get<int>();
    if (n < 1) throw ParseError("matrix: n must be >= 1");
    const auto part = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_array() ||
            static_cast<int>(j.at(key).size()) != n)
            throw ParseError(std::string("matrix: bad field '") + key + "'");
        RealMatrix m(n, n);
        for (int r = 0; r < n; ++r) {
            const json& row = j.at(key)[r];
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw ParseError(std::string("matrix: bad row in '") + key +
                                 "'");
            for (int c = 0; c < n; ++c) {
                if (!row[c].is_number())
                    throw ParseError(std::string("matrix: non-numeric entry in '") +
                                     key + "'");
                m(r, c) = row[c].get<double>();
            }
        }
        return m;
    };
    const RealMatrix re = part("re");
    const RealMatrix im = part("im");
    Matrix m(n, n);
    m.real() = re;
    m.imag() = im;
    return m;
}

}  // namespace dualax::io
