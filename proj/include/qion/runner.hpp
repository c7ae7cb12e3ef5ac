// runner.hpp — scenario configuration, deterministic run artifacts, and
// parameter sweeps.
//
// Config files are flat `key = value` documents with dotted keys and `#`
// comments (grammar in docs/config-grammar.md).  An empty document resolves
// to the canonical scenario: tau = 0.003, epsilon = 0.05, omega_bar = 50,
// delta_bar = -50, alpha = 4, D = 100, route = q_closed.

#pragma once

#include "qion/coupling.hpp"
#include "qion/observables.hpp"
#include "qion/qcore.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qion::runner {

struct TimeGridSpec {
    double t_max = 50.0;
    int points = 2001;
};

struct ScenarioConfig {
    qcore::QParams params = qcore::QParams::from_tau(0.003, 0.05, 50.0, -50.0);
    qcore::Complex alpha{4.0, 0.0};
    int dim = 100;
    coupling::Route route = coupling::Route::q_closed;
    TimeGridSpec time;
    observables::QGridSpec qgrid;
    std::vector<double> snapshot_times; // empty = {0, t_max/2, t_max}
    bool qgrid_flat = false;
    double tail_tol = 1e-9;
    int pad = 20;
    coupling::SeriesOptions series;
};

/// Parses and fully validates a config document.  Unknown keys are rejected
/// in strict mode and reported through `warnings` otherwise.  Every error
/// message carries the offending key.
ScenarioConfig parse_config(const std::string& text, bool strict = true,
                            std::vector<std::string>* warnings = nullptr);

ScenarioConfig load_config_file(const std::filesystem::path& path, bool strict = true,
                                std::vector<std::string>* warnings = nullptr);

/// Resolved-config JSON (the manifest body): every value that influenced the
/// run, so any output number is reproducible from the manifest alone.
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Inverse of config_to_json; rebuilding a run from its manifest reproduces
/// the outputs byte for byte.
ScenarioConfig config_from_json(const nlohmann::json& j);

/// The uniform grid [0, t_max] with `points` samples; {0} when t_max = 0.
std::vector<double> uniform_times(const TimeGridSpec& spec);

struct SnapshotInfo {
    double t = 0.0;
    double mass = 0.0;
    bool coarse = false;
    double peak_re = 0.0, peak_im = 0.0, peak_value = 0.0;
};

struct RunDiagnostics {
    double eff_f2 = 0.0;
    double eps_q = 0.0;
    double tail_mass = 0.0;
    double hermiticity_residual = 0.0;
    double max_norm_drift = 0.0;
    double max_energy_drift_rel = 0.0;
    double final_w = 0.0;
    std::vector<SnapshotInfo> snapshots;
};

/// Executes one scenario and writes manifest.json, diagnostics.json,
/// inversion.csv and qgrid_<k>.csv under out_dir.  Throws ConfigError /
/// NumericalError / IoError (mapped to CLI exit codes 2 / 3 / 4).
RunDiagnostics run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

struct SweepRun {
    double value = 0.0;
    bool ok = false;
    std::string error;
    RunDiagnostics diag;
    std::filesystem::path dir;
};

struct SweepResult {
    std::vector<SweepRun> runs;
    std::filesystem::path summary_csv;
};

/// One run_scenario per value of `axis` (q | tau | epsilon | alpha |
/// delta_bar), each in its own indexed directory under out_root, executed
/// concurrently.  A failing value is marked in the summary without aborting
/// the rest.  Writes sweep_manifest.json and summary.csv.
SweepResult sweep(const ScenarioConfig& base, const std::string& axis,
                  const std::vector<double>& values, const std::filesystem::path& out_root,
                  int jobs = 0);

} // namespace qion::runner
