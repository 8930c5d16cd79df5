// Command-line front end: spectra, regime labels, stability verdicts,
// simulations and appendix checks as JSON or CSV.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tridiag/error.hpp"
#include "tridiag/oracle.hpp"
#include "tridiag/perturb.hpp"
#include "tridiag/serialize.hpp"
#include "tridiag/simulate.hpp"
#include "tridiag/spectrum.hpp"
#include "tridiag/stability.hpp"

using nlohmann::json;
using namespace tridiag;

namespace {

constexpr int kUsageError = 2;
constexpr int kDomainError = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::optional<double> a, c, b, d, e, alpha, beta, dt;
    int n = 100;
    double t_end = 50.0;
    std::string format = "json";
    std::string output;
    std::string config;
    std::string kind = "full";
    std::vector<int> n_values{20, 40, 80, 160};
    int samples = 200;
    int save_stride = 1;
    std::string init;
};

const char* kCsvHelp =
    "CSV columns:\n"
    "  spectrum      re,im,label (label: leader, bulk, special_plus, special_minus,\n"
    "                closed_form, real_scan, oracle)\n"
    "  classify      theorem,case,on_boundary\n"
    "  stability     re,im,zero_mode,resolved (eigenvalues of -L)\n"
    "  simulate      t,x_0..x_n[,v_0..v_n],coherence_error\n"
    "  convergence   n,deviation,sign,status\n"
    "  verify        n,max_pairing_error,method_agreement\n"
    "  monotonicity  branch,sample_count,violations,B\n"
    "Exit status: 0 success, 1 domain error (JSON on stderr), 2 usage error.";

void add_common(CLI::App* sub, Options& o, std::map<std::string, CLI::Option*>& flags) {
    flags["a"] = sub->add_option("--a", o.a, "sub-diagonal coupling a > 0");
    flags["c"] = sub->add_option("--c", o.c, "super-diagonal coupling c > 0");
    flags["b"] = sub->add_option("--b", o.b, "leader entry b (default a + c)");
    flags["d"] = sub->add_option("--d", o.d, "last diagonal entry d");
    flags["e"] = sub->add_option("--e", o.e, "last-row coupling offset e");
    flags["n"] = sub->add_option("--n", o.n, "size of the reduced matrix (default 100)");
    flags["format"] = sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    flags["output"] = sub->add_option("--output", o.output, "output path (default stdout)");
    sub->add_option("--config", o.config, "JSON file whose keys mirror the flags");
}

template <class T>
void take(const json& cfg, const char* key, CLI::Option* flag, T& target) {
    if (!cfg.contains(key) || (flag && flag->count() > 0)) return;
    target = cfg.at(key).get<T>();
}

template <class T>
void take(const json& cfg, const char* key, CLI::Option* flag, std::optional<T>& target) {
    if (!cfg.contains(key) || (flag && flag->count() > 0)) return;
    target = cfg.at(key).get<T>();
}

void apply_config(Options& o, std::map<std::string, CLI::Option*>& flags) {
    if (o.config.empty()) return;
    std::ifstream in(o.config);
    if (!in) throw UsageError("cannot open config file " + o.config);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& ex) {
        throw UsageError(std::string("config is not valid JSON: ") + ex.what());
    }
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    static const std::vector<std::string> known = {"a", "c", "b", "d", "e", "n", "alpha", "beta", "t_end", "t-end",
                                                   "dt", "format", "output", "kind", "n_values", "n-values",
                                                   "samples", "save_stride", "save-stride", "init"};
    for (const auto& [key, value] : cfg.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError("unknown config key " + key);
    }
    auto flag = [&](const char* name) -> CLI::Option* {
        auto it = flags.find(name);
        return it == flags.end() ? nullptr : it->second;
    };
    try {
        take(cfg, "a", flag("a"), o.a);
        take(cfg, "c", flag("c"), o.c);
        take(cfg, "b", flag("b"), o.b);
        take(cfg, "d", flag("d"), o.d);
        take(cfg, "e", flag("e"), o.e);
        take(cfg, "n", flag("n"), o.n);
        take(cfg, "alpha", flag("alpha"), o.alpha);
        take(cfg, "beta", flag("beta"), o.beta);
        take(cfg, "t_end", flag("t-end"), o.t_end);
        take(cfg, "t-end", flag("t-end"), o.t_end);
        take(cfg, "dt", flag("dt"), o.dt);
        take(cfg, "format", flag("format"), o.format);
        take(cfg, "output", flag("output"), o.output);
        take(cfg, "kind", flag("kind"), o.kind);
        take(cfg, "n_values", flag("n-values"), o.n_values);
        take(cfg, "n-values", flag("n-values"), o.n_values);
        take(cfg, "samples", flag("samples"), o.samples);
        take(cfg, "save_stride", flag("save-stride"), o.save_stride);
        take(cfg, "save-stride", flag("save-stride"), o.save_stride);
        take(cfg, "init", flag("init"), o.init);
    } catch (const json::exception& ex) {
        throw UsageError(std::string("config value has the wrong type: ") + ex.what());
    }
    if (o.format != "json" && o.format != "csv") throw UsageError("format must be json or csv");
}

SystemParams params_from(const Options& o) {
    for (auto [name, value] : {std::pair{"--a", o.a}, {"--c", o.c}, {"--d", o.d}, {"--e", o.e}}) {
        if (!value) throw UsageError(std::string("missing required parameter ") + name);
    }
    return make_params(*o.a, *o.c, o.b.value_or(*o.a + *o.c), *o.d, *o.e, o.n);
}

MatrixKind kind_from(const std::string& s) {
    if (s == "full") return MatrixKind::Full;
    if (s == "reduced") return MatrixKind::Reduced;
    if (s == "laplacian") return MatrixKind::Laplacian;
    throw UsageError("kind must be full, reduced or laplacian");
}

std::optional<SecondOrderParams> second_order_from(const Options& o) {
    if (!o.alpha && !o.beta) return std::nullopt;
    if (!o.alpha || !o.beta) throw UsageError("--alpha and --beta must be given together");
    return SecondOrderParams{*o.alpha, *o.beta};
}

// h,x0[,v0] columns with a header row.
void read_initial_state(const std::string& path, SimConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open init file " + path);
    std::string line;
    std::getline(in, line);
    const bool has_v = line.find("v0") != std::string::npos;
    std::vector<double> h, x0, v0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < (has_v ? 3u : 2u)) throw UsageError("init row has too few columns: " + line);
        h.push_back(row[0]);
        x0.push_back(row[1]);
        if (has_v) v0.push_back(row[2]);
    }
    cfg.h = std::move(h);
    cfg.x0 = std::move(x0);
    if (has_v) cfg.v0 = std::move(v0);
}

std::string run(const std::string& command, const Options& o) {
    const bool csv = o.format == "csv";
    if (command == "classify") {
        const SystemParams p = params_from(o);
        const RegimeLabel label = classify_regime(p);
        if (csv) {
            return "theorem,case,on_boundary\n" + std::string(to_string(label.theorem)) + "," + label.case_id + "," +
                   (label.on_boundary ? "true" : "false") + "\n";
        }
        json out = to_json(label);
        out["params"] = to_json(p);
        out["threshold"] = (p.a - p.e) * std::sqrt(p.c / p.a);
        return out.dump(2) + "\n";
    }
    if (command == "spectrum") {
        const SystemParams p = params_from(o);
        const Spectrum spec = compute_spectrum(p, kind_from(o.kind));
        if (csv) return spectrum_csv(spec);
        json out = to_json(spec);
        out["params"] = to_json(p);
        return out.dump(2) + "\n";
    }
    if (command == "verify") {
        const SystemParams p = params_from(o);
        const ValidationReport report = cross_validate(p, kind_from(o.kind));
        if (csv) {
            return "n,max_pairing_error,method_agreement\n" + std::to_string(report.n) + "," +
                   format_number(report.max_pairing_error) + "," +
                   (report.method_agreement ? format_number(*report.method_agreement) : "") + "\n";
        }
        json out = to_json(report);
        out["params"] = to_json(p);
        return out.dump(2) + "\n";
    }
    if (command == "stability") {
        const SystemParams p = params_from(o);
        const auto so = second_order_from(o);
        const StabilityVerdict first = first_order_verdict(p);
        if (csv) {
            const LaplacianModes modes = laplacian_modes(p);
            std::string out = "re,im,zero_mode,resolved\n";
            for (std::size_t i = 0; i < modes.values.size(); ++i) {
                out += format_number(modes.values[i].real()) + "," + format_number(modes.values[i].imag()) + "," +
                       (modes.zero[i] ? "true" : "false") + "," + (modes.resolved[i] ? "true" : "false") + "\n";
            }
            return out;
        }
        json out = {{"params", to_json(p)}, {"first_order", to_json(first)}};
        if (so) {
            out["second_order"] = to_json(second_order_verdict(p, *so));
            out["second_order"]["alpha"] = so->alpha;
            out["second_order"]["beta"] = so->beta;
        } else {
            out["second_order"] = nullptr;
        }
        return out.dump(2) + "\n";
    }
    if (command == "simulate") {
        const SystemParams p = params_from(o);
        const auto so = second_order_from(o);
        SimConfig cfg = default_config(p, o.t_end, so);
        if (!o.init.empty()) read_initial_state(o.init, cfg);
        if (so && !cfg.v0) cfg.v0 = std::vector<double>(cfg.x0.size(), 0.0);
        cfg.dt = o.dt.value_or(0.0);
        cfg.save_stride = o.save_stride;
        const Trajectory traj = so ? simulate_second_order(cfg) : simulate_first_order(cfg);
        if (csv) return trajectory_csv(traj);
        json out = to_json(traj);
        out["params"] = to_json(p);
        return out.dump(2) + "\n";
    }
    if (command == "convergence") {
        const SystemParams p = params_from(o);
        const ConvergenceReport report = track_root_convergence(p, o.n_values);
        if (csv) return convergence_csv(report);
        json out = to_json(report);
        out["params"] = to_json(p);
        return out.dump(2) + "\n";
    }
    if (command == "monotonicity") {
        const SystemParams p = params_from(o);
        const auto reports = verify_branch_monotonicity(p, p.n, o.samples);
        if (csv) return monotonicity_csv(reports);
        std::size_t total = 0;
        for (const auto& r : reports) total += r.violations.size();
        json out = {{"params", to_json(p)}, {"branches", to_json(reports)}, {"total_violations", total}};
        return out.dump(2) + "\n";
    }
    throw UsageError("unknown subcommand " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra and stability of boundary-parameterized tridiagonal matrices"};
    app.footer(kCsvHelp);
    app.require_subcommand(1);
    Options o;
    std::map<std::string, CLI::Option*> flags;

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"spectrum", "eigenvalues from the root-finding path"},
        {"classify", "asymptotic regime (theorem, case) and decentralized cell"},
        {"stability", "first- and second-order stability verdicts"},
        {"simulate", "RK4 integration of the consensus or flocking system"},
        {"convergence", "special-root deviation against n"},
        {"verify", "theory path against the QR and polynomial oracles"},
        {"monotonicity", "sampled monotonicity of the cotangent branches"},
    };
    // Every subcommand gets its own copies of the flags; all write into `o`.
    std::map<std::string, std::map<std::string, CLI::Option*>> sub_flags;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        auto& f = sub_flags[s.name];
        add_common(sub, o, f);
        const std::string name = s.name;
        if (name == "spectrum" || name == "verify") {
            f["kind"] = sub->add_option("--kind", o.kind, "full, reduced or laplacian")
                            ->check(CLI::IsMember({"full", "reduced", "laplacian"}));
        }
        if (name == "stability" || name == "simulate") {
            f["alpha"] = sub->add_option("--alpha", o.alpha, "second-order position gain");
            f["beta"] = sub->add_option("--beta", o.beta, "second-order velocity gain");
        }
        if (name == "simulate") {
            f["t-end"] = sub->add_option("--t-end", o.t_end, "final time (default 50)");
            f["dt"] = sub->add_option("--dt", o.dt, "RK4 step (default 0.5 / spectral radius)");
            f["save-stride"] = sub->add_option("--save-stride", o.save_stride, "keep every k-th step");
            f["init"] = sub->add_option("--init", o.init, "CSV with columns h,x0[,v0]");
        }
        if (name == "convergence") {
            f["n-values"] = sub->add_option("--n-values", o.n_values, "increasing sizes (default 20 40 80 160)");
        }
        if (name == "monotonicity") {
            f["samples"] = sub->add_option("--samples", o.samples, "samples per branch (default 200)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        apply_config(o, sub_flags[command]);
        const std::string text = run(command, o);
        if (o.output.empty()) {
            std::fwrite(text.data(), 1, text.size(), stdout);
        } else {
            std::ofstream out(o.output, std::ios::binary);
            if (!out) throw UsageError("cannot write " + o.output);
            out << text;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        std::cerr << to_json(e).dump() << "\n";
        return kDomainError;
    } catch (const std::exception& e) {
        // e.g. malformed numbers in an init file
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsageError;
    }
    return 0;
}
