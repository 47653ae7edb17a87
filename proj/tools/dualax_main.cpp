#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dualax/duality.hpp"
#include "dualax/dynamics.hpp"
#include "dualax/io.hpp"
#include "dualax/linalg.hpp"
#include "dualax/verify.hpp"

namespace {

using namespace dualax;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitDegenerate = 3;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Emits to stdout or atomically to --output.
void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text << "\n";
    } else {
        io::write_file_atomic(output_path, text);
    }
}

struct StateArgs {
    std::string state_path;
    double kappa_flag = std::numeric_limits<double>::quiet_NaN();
    std::string output;
};

void add_state_options(CLI::App* cmd, StateArgs& a) {
    cmd->add_option("--state", a.state_path, "state file (JSON)")->required();
    cmd->add_option("--kappa", a.kappa_flag,
                    "coupling constant; overrides the state file");
    cmd->add_option("--output", a.output, "write here instead of stdout");
}

// Flag wins over the state file; one of the two must provide kappa.
model::Coupling coupling_of(const io::StateFile& sf, const StateArgs& a) {
    const double kappa =
        std::isnan(a.kappa_flag) ? sf.kappa : a.kappa_flag;
    if (std::isnan(kappa))
        throw ConfigError("kappa missing: pass --kappa or store it in the state file");
    return model::Coupling(sf.n, kappa);
}

double tol_scale_from_env() {
    const char* raw = std::getenv("DUALAX_TOL_SCALE");
    if (raw == nullptr || *raw == '\0') return 1.0;
    char* end = nullptr;
    const double x = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !(x > 0.0))
        throw ConfigError("DUALAX_TOL_SCALE must be a positive number");
    return x;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_lax(const StateArgs& a) {
    const io::StateFile sf = io::parse_state(read_file(a.state_path));
    const model::Coupling c = coupling_of(sf, a);
    const Matrix l = sf.is_sutherland ? model::lax_suth(sf.suth, c)
                                      : model::lax_rs(sf.rs, c);
    emit(io::lax_json(l, linalg::eigh_desc(l).values), a.output);
    return kExitOk;
}

int cmd_spectrum(const StateArgs& a) {
    const io::StateFile sf = io::parse_state(read_file(a.state_path));
    const model::Coupling c = coupling_of(sf, a);
    const Matrix l = sf.is_sutherland ? model::lax_suth(sf.suth, c)
                                      : model::lax_rs(sf.rs, c);
    emit(io::spectrum_json(sf.is_sutherland ? "sutherland" : "rs",
                           linalg::eigh_desc(l).values),
         a.output);
    return kExitOk;
}

int cmd_map(const StateArgs& a, const std::string& direction) {
    const io::StateFile sf = io::parse_state(read_file(a.state_path));
    const model::Coupling c = coupling_of(sf, a);
    if (direction == "s1-to-s2") {
        if (!sf.is_sutherland)
            throw ConfigError("direction s1-to-s2 needs a sutherland state");
        const auto res = duality::suth_to_rs(sf.suth, c);
        emit(io::duality_json(res.state, res.transform, res.residuals, c.kappa),
             a.output);
    } else {
        if (sf.is_sutherland)
            throw ConfigError("direction s2-to-s1 needs an rs state");
        const auto res = duality::rs_to_suth(sf.rs, c);
        emit(io::duality_json(res.state, res.transform, res.residuals, c.kappa),
             a.output);
    }
    return kExitOk;
}

int cmd_flow(const StateArgs& a, const std::string& family, int index, double t,
             int steps, const std::string& format) {
    const io::StateFile sf = io::parse_state(read_file(a.state_path));
    const model::Coupling c = coupling_of(sf, a);
    if (steps < 1) throw ConfigError("--steps must be >= 1");
    if (format != "csv" && format != "json")
        throw ConfigError("--format must be csv or json");

    std::string text;
    std::vector<double> skipped;
    if (family == "H") {
        if (!sf.is_sutherland)
            throw ConfigError("family H flows act on sutherland states");
        const auto tr = dynamics::sample_trajectory(
            sf.suth, c, {{model::Family::H, index}, t, steps});
        skipped = tr.skipped;
        text = format == "csv" ? io::to_csv(tr) : io::to_json(tr, c.kappa);
    } else if (family == "Hhat") {
        if (sf.is_sutherland)
            throw ConfigError("family Hhat flows act on rs states");
        const auto tr = dynamics::sample_trajectory(
            sf.rs, c, {{model::Family::Hhat, index}, t, steps});
        skipped = tr.skipped;
        text = format == "csv" ? io::to_csv(tr) : io::to_json(tr, c.kappa);
    } else {
        throw ConfigError("--family must be H or Hhat");
    }

    emit(text, a.output);
    if (!skipped.empty()) {
        for (double ts : skipped)
            std::cerr << "skipped degenerate sample at t=" << io::format_g17(ts)
                      << "\n";
        return kExitDegenerate;
    }
    return kExitOk;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

int cmd_verify(const std::string& n_csv, const std::string& kappa_csv,
               int samples, std::uint64_t seed, int jobs,
               const std::vector<std::string>& tol_specs,
               const std::string& output) {
    verify::RunConfig cfg;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.jobs = jobs;
    cfg.tol_scale = tol_scale_from_env();
    if (!n_csv.empty()) {
        cfg.n_list.clear();
        for (const std::string& tok : split_csv(n_csv)) {
            try {
                cfg.n_list.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw ConfigError("--n: bad entry '" + tok + "'");
            }
        }
    }
    if (!kappa_csv.empty()) {
        cfg.kappa_list.clear();
        for (const std::string& tok : split_csv(kappa_csv)) {
            try {
                cfg.kappa_list.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("--kappa: bad entry '" + tok + "'");
            }
        }
    }
    for (const std::string& spec : tol_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--tol expects NAME=VALUE, got '" + spec + "'");
        const std::string name = spec.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(spec.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--tol: bad value in '" + spec + "'");
        }
        if (verify::default_tolerances().count(name) == 0)
            throw ConfigError("--tol: unknown check family '" + name + "'");
        if (!(value > 0.0)) throw ConfigError("--tol: value must be positive");
        cfg.tol_overrides[name] = value;
    }

    const verify::VerifyReport report = verify::run_all(cfg);
    emit(io::to_json(report), output);
    return report.pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"action-angle duality toolkit for the hyperbolic Sutherland "
                 "and rational Ruijsenaars-Schneider models"};
    app.require_subcommand(1);

    StateArgs lax_args;
    CLI::App* lax = app.add_subcommand("lax", "Lax matrix and its spectrum");
    add_state_options(lax, lax_args);

    StateArgs spec_args;
    CLI::App* spectrum =
        app.add_subcommand("spectrum", "action variables (Lax eigenvalues)");
    add_state_options(spectrum, spec_args);

    StateArgs map_args;
    std::string direction;
    CLI::App* map = app.add_subcommand("map", "duality map between the models");
    add_state_options(map, map_args);
    map->add_option("--direction", direction, "s1-to-s2 or s2-to-s1")
        ->required()
        ->check(CLI::IsMember({"s1-to-s2", "s2-to-s1"}));

    StateArgs flow_args;
    std::string family;
    int index = 1;
    double t = 0.0;
    int steps = 100;
    std::string format = "csv";
    CLI::App* flow = app.add_subcommand("flow", "exact flow trajectory");
    add_state_options(flow, flow_args);
    flow->add_option("--family", family, "H or Hhat")->required();
    flow->add_option("--index", index, "Hamiltonian index")->required();
    flow->add_option("--t", t, "flow time")->required();
    flow->add_option("--steps", steps, "number of output intervals");
    flow->add_option("--format", format, "csv (default) or json");

    std::string n_csv, kappa_csv;
    int samples = 50;
    std::uint64_t seed = 42;
    int jobs = 1;
    std::vector<std::string> tol_specs;
    std::string verify_output;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the verification battery");
    verify_cmd->add_option("--n", n_csv, "comma-separated particle numbers");
    verify_cmd->add_option("--kappa", kappa_csv, "comma-separated couplings");
    verify_cmd->add_option("--samples", samples, "random states per check");
    verify_cmd->add_option("--seed", seed, "RNG seed");
    verify_cmd->add_option("--jobs", jobs, "worker threads");
    verify_cmd->add_option("--tol", tol_specs,
                           "override a check tolerance, NAME=VALUE");
    verify_cmd->add_option("--output", verify_output,
                           "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (lax->parsed()) return cmd_lax(lax_args);
        if (spectrum->parsed()) return cmd_spectrum(spec_args);
        if (map->parsed()) return cmd_map(map_args, direction);
        if (flow->parsed())
            return cmd_flow(flow_args, family, index, t, steps, format);
        if (verify_cmd->parsed())
            return cmd_verify(n_csv, kappa_csv, samples, seed, jobs, tol_specs,
                              verify_output);
        std::cerr << "no subcommand\n";
        return kExitBadInput;
    } catch (const CollidingEigenvalues& e) {
        std::cerr << "degenerate spectrum: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const PhaseDegeneracy& e) {
        std::cerr << "degenerate gauge phase: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const SingularMatrix& e) {
        std::cerr << "singular matrix: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "lost positivity: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const NonHermitianInput& e) {
        std::cerr << "hermiticity violated: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const ConstraintViolated& e) {
        std::cerr << "constraint violated: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const ChamberViolation& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const OrbitViolation& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const IndexOutOfRange& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitBadInput;
    }
}
