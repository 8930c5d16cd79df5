#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "tridiag/error.hpp"
#include "tridiag/oracle.hpp"
#include "tridiag/perturb.hpp"
#include "tridiag/simulate.hpp"
#include "tridiag/spectrum.hpp"
#include "tridiag/stability.hpp"

namespace tridiag {

/// 17 significant digits, round-trip safe.
std::string format_number(double v);

nlohmann::json to_json(std::complex<double> z);
nlohmann::json to_json(const SystemParams& p);
nlohmann::json to_json(const RegimeLabel& label);
nlohmann::json to_json(const Spectrum& spec);
nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const StabilityVerdict& verdict);
nlohmann::json to_json(const ConvergenceReport& report);
nlohmann::json to_json(const std::vector<MonotonicityReport>& reports);
nlohmann::json to_json(const Error& err);
/// Summary of a run: times, coherence errors and the tail decay rate.
nlohmann::json to_json(const Trajectory& traj);

/// One row per eigenvalue: re,im,label.
std::string spectrum_csv(const Spectrum& spec);
/// t, x_0..x_n[, v_0..v_n], coherence_error.
std::string trajectory_csv(const Trajectory& traj);
/// n, deviation, sign, status.
std::string convergence_csv(const ConvergenceReport& report);
/// branch, sample_count, violations, B.
std::string monotonicity_csv(const std::vector<MonotonicityReport>& reports);

}  // namespace tridiag
