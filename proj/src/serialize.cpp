#include "tridiag/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace tridiag {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string special_label(const SpecialRoot& s) { return std::string("special_") + to_string(s.side); }

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(std::complex<double> z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

json to_json(const SystemParams& p) {
    return {{"a", p.a}, {"c", p.c}, {"b", p.b}, {"d", p.d}, {"e", p.e}, {"n", p.n}, {"tau", p.tau},
            {"decentralized", is_decentralized(p, kDecentralizedSlack)}};
}

json to_json(const RegimeLabel& label) {
    json special = json::array();
    for (SeedSide s : label.special) special.push_back(to_string(s));
    json out = {{"theorem", to_string(label.theorem)},
                {"case", label.case_id},
                {"special", special},
                {"on_boundary", label.on_boundary}};
    if (label.cell) {
        out["decentralized_cell"] = {{"row", label.cell->row},
                                     {"column", label.cell->column},
                                     {"domain", label.cell->domain},
                                     {"predicted", label.cell->predicted}};
    } else {
        out["decentralized_cell"] = nullptr;
    }
    return out;
}

json to_json(const Spectrum& spec) {
    json out = {{"matrix_kind", to_string(spec.kind)},
                {"n", spec.n},
                {"params", to_json(spec.params)},
                {"regime", to_json(spec.regime)}};
    out["leader"] = spec.leader ? json(*spec.leader) : json(nullptr);
    out["shift"] = spec.shift;
    json bulk = json::array();
    for (const BranchRoot& r : spec.bulk) {
        bulk.push_back({{"ell", r.ell}, {"phi", r.phi}, {"r", r.eigenvalue + spec.shift}});
    }
    json special = json::array();
    for (const SpecialRoot& s : spec.special) {
        json entry = {{"side", to_string(s.side)},
                      {"seed", to_json(s.seed)},
                      {"y", to_json(s.y)},
                      {"r", to_json(s.eigenvalue + spec.shift)}};
        entry["asymptotic"] = s.asymptotic ? to_json(*s.asymptotic + spec.shift) : json(nullptr);
        special.push_back(entry);
    }
    out["bulk"] = bulk;
    out["special"] = special;
    json values = json::array();
    for (const cplx& v : spec.eigenvalues()) values.push_back(to_json(v));
    out["eigenvalues"] = values;
    out["source"] = spec.oracle_values.empty() ? "theory" : "oracle";
    return out;
}

json to_json(const ValidationReport& report) {
    json out = {{"max_pairing_error", number(report.max_pairing_error)},
                {"n", report.n},
                {"matrix_kind", to_string(report.kind)},
                {"regime", to_json(report.regime)}};
    out["method_agreement"] = report.method_agreement ? number(*report.method_agreement) : json(nullptr);
    return out;
}

json to_json(const StabilityVerdict& v) {
    json out = {{"stable", to_string(v.stable)},
                {"rule", v.rule},
                {"zero_multiplicity", v.zero_multiplicity},
                {"spectral_abscissa", number(v.spectral_abscissa)},
                {"asymptotic", to_string(v.asymptotic)}};
    out["witness"] = v.witness ? to_json(*v.witness) : json(nullptr);
    out["finite_n"] = v.finite_n ? json(to_string(*v.finite_n)) : json(nullptr);
    return out;
}

json to_json(const ConvergenceReport& r) {
    json deviations = json::array();
    for (const auto& d : r.deviations) deviations.push_back(d ? number(*d) : json(nullptr));
    return {{"n_values", r.n_values},
            {"deviations", deviations},
            {"status", r.status},
            {"sign_pattern", r.sign_pattern},
            {"fitted_rate", number(r.fitted_rate)},
            {"r_squared", number(r.r_squared)},
            {"r_expected", number(r.r_expected)},
            {"side", to_string(r.side)},
            {"seed", to_json(r.seed)}};
}

json to_json(const std::vector<MonotonicityReport>& reports) {
    json out = json::array();
    for (const MonotonicityReport& r : reports) {
        json violations = json::array();
        for (const auto& [phi, slope] : r.violations) violations.push_back({{"phi", phi}, {"slope", number(slope)}});
        out.push_back({{"branch", r.branch}, {"sample_count", r.sample_count}, {"B", r.B}, {"violations", violations}});
    }
    return out;
}

json to_json(const Error& err) {
    return {{"error", std::string(to_string(err.code()))}, {"message", err.what()}, {"details", err.details()}};
}

json to_json(const Trajectory& traj) {
    json errors = json::array();
    for (double e : traj.coherence_errors) errors.push_back(number(e));
    auto rows = [](const std::vector<std::vector<double>>& states) {
        json out = json::array();
        for (const auto& state : states) {
            json row = json::array();
            for (double x : state) row.push_back(number(x));
            out.push_back(std::move(row));
        }
        return out;
    };
    json result = {{"order", traj.second_order() ? 2 : 1},
            {"dt", traj.dt},
            {"dt_max", number(traj.dt_max)},
            {"times", traj.times},
            {"coherence_errors", errors},
            {"decay_rate", number(fit_decay_rate(traj))},
            {"positions", rows(traj.positions)}};
    if (traj.second_order()) result["velocities"] = rows(traj.velocities);
    return result;
}

std::string spectrum_csv(const Spectrum& spec) {
    std::string out = "re,im,label\n";
    auto row = [&](cplx v, const std::string& label) {
        out += format_number(v.real()) + "," + format_number(v.imag()) + "," + label + "\n";
    };
    if (!spec.oracle_values.empty()) {
        for (const cplx& v : spec.oracle_values) row(v, "oracle");
        return out;
    }
    if (spec.leader) row(*spec.leader, "leader");
    for (const BranchRoot& r : spec.bulk) row(r.eigenvalue + spec.shift, "bulk");
    for (const SpecialRoot& s : spec.special) row(s.eigenvalue + spec.shift, special_label(s));
    return out;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    const std::size_t size = traj.positions.empty() ? 0 : traj.positions.front().size();
    for (std::size_t k = 0; k < size; ++k) out += ",x_" + std::to_string(k);
    if (traj.second_order())
        for (std::size_t k = 0; k < size; ++k) out += ",v_" + std::to_string(k);
    out += ",coherence_error\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        out += format_number(traj.times[s]);
        for (double x : traj.positions[s]) out += "," + format_number(x);
        if (traj.second_order())
            for (double v : traj.velocities[s]) out += "," + format_number(v);
        out += "," + format_number(traj.coherence_errors[s]) + "\n";
    }
    return out;
}

std::string convergence_csv(const ConvergenceReport& r) {
    std::string out = "n,deviation,sign,status\n";
    for (std::size_t i = 0; i < r.n_values.size(); ++i) {
        out += std::to_string(r.n_values[i]) + "," + (r.deviations[i] ? format_number(*r.deviations[i]) : "") + "," +
               std::to_string(r.sign_pattern[i]) + "," + r.status[i] + "\n";
    }
    return out;
}

std::string monotonicity_csv(const std::vector<MonotonicityReport>& reports) {
    std::string out = "branch,sample_count,violations,B\n";
    for (const MonotonicityReport& r : reports) {
        out += std::to_string(r.branch) + "," + std::to_string(r.sample_count) + "," +
               std::to_string(r.violations.size()) + "," + format_number(r.B) + "\n";
    }
    return out;
}

}  // namespace tridiag
