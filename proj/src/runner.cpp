#include "qion/runner.hpp"
#include "qion/dynamics.hpp"
#include "qion/errors.hpp"
#include "qion/hamiltonian.hpp"
#include "qion/io.hpp"
#include "qion/version.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace qion::runner {

namespace {

using qcore::Complex;
using qcore::QParams;
using qcore::TruncationDim;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(key + ": empty list element");
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "q",        "tau",          "epsilon",      "omega_bar",     "delta_bar",
        "alpha.re", "alpha.im",     "dim",          "route",         "tail_tol",
        "pad",      "series.tol",   "series.max_terms", "time.max",  "time.points",
        "qgrid.re_min", "qgrid.re_max", "qgrid.im_min", "qgrid.im_max",
        "qgrid.points", "qgrid.snapshots", "qgrid.flat",
    };
    return keys;
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.params.epsilon < 0.0) {
        throw ConfigError("epsilon: must be >= 0 (got " + std::to_string(cfg.params.epsilon) + ")");
    }
    if (!(cfg.params.q > 0.0)) {
        throw ConfigError("q: must be > 0 (got " + std::to_string(cfg.params.q) + ")");
    }
    if (cfg.dim < 2) throw ConfigError("dim: must be >= 2 (got " + std::to_string(cfg.dim) + ")");
    if (!(cfg.tail_tol > 0.0)) throw ConfigError("tail_tol: must be > 0");
    if (cfg.pad < 0) throw ConfigError("pad: must be >= 0");
    if (!(cfg.series.tol > 0.0)) throw ConfigError("series.tol: must be > 0");
    if (cfg.series.max_terms < 1) throw ConfigError("series.max_terms: must be >= 1");
    if (cfg.time.t_max < 0.0) throw ConfigError("time.max: must be >= 0");
    if (cfg.time.points < 1) throw ConfigError("time.points: must be >= 1");
    if (cfg.qgrid.re_points < 2 || cfg.qgrid.im_points < 2) {
        throw ConfigError("qgrid.points: must be >= 2");
    }
    if (!(cfg.qgrid.re_max > cfg.qgrid.re_min) || !(cfg.qgrid.im_max > cfg.qgrid.im_min)) {
        throw ConfigError("qgrid.re_min/re_max, qgrid.im_min/im_max: extent must be positive");
    }
    for (double t : cfg.snapshot_times) {
        if (t < 0.0 || t > cfg.time.t_max) {
            throw ConfigError("qgrid.snapshots: time " + std::to_string(t) +
                              " outside [0, time.max]");
        }
    }
}

std::vector<double> resolved_snapshots(const ScenarioConfig& cfg) {
    if (!cfg.snapshot_times.empty()) return cfg.snapshot_times;
    if (cfg.time.t_max == 0.0) return {0.0};
    return {0.0, 0.5 * cfg.time.t_max, cfg.time.t_max};
}

} // namespace

ScenarioConfig parse_config(const std::string& text, bool strict,
                            std::vector<std::string>* warnings) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" +
                              line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (value.empty()) throw ConfigError(key + ": empty value");
        if (kv.count(key)) throw ConfigError(key + ": duplicate key");
        if (!known_keys().count(key)) {
            if (strict) throw ConfigError(key + ": unknown key (strict mode)");
            if (warnings) warnings->push_back(key + ": unknown key ignored");
            continue;
        }
        kv[key] = value;
    }

    ScenarioConfig cfg;

    // Deformation: q and tau are one dial.  Both may only appear when they
    // agree exactly (q = exp(tau)); otherwise the pair is inconsistent.
    const bool has_q = kv.count("q") > 0;
    const bool has_tau = kv.count("tau") > 0;
    double tau = cfg.params.tau;
    double q = cfg.params.q;
    if (has_tau) {
        tau = parse_double("tau", kv["tau"]);
        q = tau == 0.0 ? 1.0 : std::exp(tau);
    }
    if (has_q) {
        const double q_given = parse_double("q", kv["q"]);
        if (!(q_given > 0.0)) throw ConfigError("q: must be > 0");
        if (has_tau) {
            const double rel = std::abs(q_given - std::exp(tau)) / q_given;
            if (rel > 1e-15) {
                throw ConfigError("q, tau: inconsistent pair (q = " + kv["q"] + " but exp(tau) = " +
                                  io::format_g17(std::exp(tau)) + "); set only one");
            }
        } else {
            q = q_given;
            tau = q_given == 1.0 ? 0.0 : std::log(q_given);
        }
    }

    const double epsilon =
        kv.count("epsilon") ? parse_double("epsilon", kv["epsilon"]) : cfg.params.epsilon;
    const double omega_bar =
        kv.count("omega_bar") ? parse_double("omega_bar", kv["omega_bar"]) : cfg.params.omega_bar;
    const double delta_bar =
        kv.count("delta_bar") ? parse_double("delta_bar", kv["delta_bar"]) : cfg.params.delta_bar;
    if (epsilon < 0.0) throw ConfigError("epsilon: must be >= 0 (got " + kv["epsilon"] + ")");
    try {
        cfg.params = has_q && !has_tau ? QParams::from_q(q, epsilon, omega_bar, delta_bar)
                                       : QParams::from_tau(tau, epsilon, omega_bar, delta_bar);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }

    if (kv.count("alpha.re")) cfg.alpha.real(parse_double("alpha.re", kv["alpha.re"]));
    if (kv.count("alpha.im")) cfg.alpha.imag(parse_double("alpha.im", kv["alpha.im"]));
    if (kv.count("dim")) cfg.dim = parse_int("dim", kv["dim"]);
    if (kv.count("route")) {
        try {
            cfg.route = coupling::route_from_name(kv["route"]);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("route: ") + e.what());
        }
    }
    if (kv.count("tail_tol")) cfg.tail_tol = parse_double("tail_tol", kv["tail_tol"]);
    if (kv.count("pad")) cfg.pad = parse_int("pad", kv["pad"]);
    if (kv.count("series.tol")) cfg.series.tol = parse_double("series.tol", kv["series.tol"]);
    if (kv.count("series.max_terms")) {
        cfg.series.max_terms = parse_int("series.max_terms", kv["series.max_terms"]);
    }
    if (kv.count("time.max")) cfg.time.t_max = parse_double("time.max", kv["time.max"]);
    if (kv.count("time.points")) cfg.time.points = parse_int("time.points", kv["time.points"]);
    if (kv.count("qgrid.re_min")) cfg.qgrid.re_min = parse_double("qgrid.re_min", kv["qgrid.re_min"]);
    if (kv.count("qgrid.re_max")) cfg.qgrid.re_max = parse_double("qgrid.re_max", kv["qgrid.re_max"]);
    if (kv.count("qgrid.im_min")) cfg.qgrid.im_min = parse_double("qgrid.im_min", kv["qgrid.im_min"]);
    if (kv.count("qgrid.im_max")) cfg.qgrid.im_max = parse_double("qgrid.im_max", kv["qgrid.im_max"]);
    if (kv.count("qgrid.points")) {
        const int p = parse_int("qgrid.points", kv["qgrid.points"]);
        cfg.qgrid.re_points = p;
        cfg.qgrid.im_points = p;
    }
    if (kv.count("qgrid.snapshots")) {
        cfg.snapshot_times = parse_double_list("qgrid.snapshots", kv["qgrid.snapshots"]);
    }
    if (kv.count("qgrid.flat")) cfg.qgrid_flat = parse_bool("qgrid.flat", kv["qgrid.flat"]);

    validate(cfg);
    return cfg;
}

ScenarioConfig load_config_file(const std::filesystem::path& path, bool strict,
                                std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), strict, warnings);
}

nlohmann::json config_to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["tau"] = cfg.params.tau;
    j["q"] = cfg.params.q;
    j["epsilon"] = cfg.params.epsilon;
    j["omega_bar"] = cfg.params.omega_bar;
    j["delta_bar"] = cfg.params.delta_bar;
    j["alpha.re"] = cfg.alpha.real();
    j["alpha.im"] = cfg.alpha.imag();
    j["dim"] = cfg.dim;
    j["route"] = coupling::route_name(cfg.route);
    j["tail_tol"] = cfg.tail_tol;
    j["pad"] = cfg.pad;
    j["series.tol"] = cfg.series.tol;
    j["series.max_terms"] = cfg.series.max_terms;
    j["time.max"] = cfg.time.t_max;
    j["time.points"] = cfg.time.points;
    j["qgrid.re_min"] = cfg.qgrid.re_min;
    j["qgrid.re_max"] = cfg.qgrid.re_max;
    j["qgrid.im_min"] = cfg.qgrid.im_min;
    j["qgrid.im_max"] = cfg.qgrid.im_max;
    j["qgrid.re_points"] = cfg.qgrid.re_points;
    j["qgrid.im_points"] = cfg.qgrid.im_points;
    j["qgrid.snapshots"] = resolved_snapshots(cfg);
    j["qgrid.flat"] = cfg.qgrid_flat;
    return j;
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
    ScenarioConfig cfg;
    cfg.params = QParams::from_tau(j.at("tau").get<double>(), j.at("epsilon").get<double>(),
                                   j.at("omega_bar").get<double>(), j.at("delta_bar").get<double>());
    // restore the exact q the run used (from_q keeps the caller's q bit-exact
    // and derives tau, so re-deriving here could drift by one ulp)
    cfg.params.q = j.at("q").get<double>();
    cfg.alpha = Complex(j.at("alpha.re").get<double>(), j.at("alpha.im").get<double>());
    cfg.dim = j.at("dim").get<int>();
    cfg.route = coupling::route_from_name(j.at("route").get<std::string>());
    cfg.tail_tol = j.at("tail_tol").get<double>();
    cfg.pad = j.at("pad").get<int>();
    cfg.series.tol = j.at("series.tol").get<double>();
    cfg.series.max_terms = j.at("series.max_terms").get<int>();
    cfg.time.t_max = j.at("time.max").get<double>();
    cfg.time.points = j.at("time.points").get<int>();
    cfg.qgrid.re_min = j.at("qgrid.re_min").get<double>();
    cfg.qgrid.re_max = j.at("qgrid.re_max").get<double>();
    cfg.qgrid.im_min = j.at("qgrid.im_min").get<double>();
    cfg.qgrid.im_max = j.at("qgrid.im_max").get<double>();
    cfg.qgrid.re_points = j.at("qgrid.re_points").get<int>();
    cfg.qgrid.im_points = j.at("qgrid.im_points").get<int>();
    cfg.snapshot_times = j.at("qgrid.snapshots").get<std::vector<double>>();
    cfg.qgrid_flat = j.at("qgrid.flat").get<bool>();
    validate(cfg);
    return cfg;
}

std::vector<double> uniform_times(const TimeGridSpec& spec) {
    if (spec.t_max == 0.0 || spec.points == 1) return {0.0};
    std::vector<double> times(static_cast<std::size_t>(spec.points));
    for (int k = 0; k < spec.points; ++k) {
        times[static_cast<std::size_t>(k)] = spec.t_max * k / (spec.points - 1);
    }
    return times;
}

RunDiagnostics run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
    validate(cfg);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "'");

    const TruncationDim dim(cfg.dim);
    const auto motional = qstates::q_coherent_state(cfg.alpha, cfg.params.q, dim, cfg.tail_tol);
    const auto psi0 = qstates::joint_state(qstates::InternalLevel::ground, motional);

    RunDiagnostics diag;
    diag.eff_f2 = qstates::expectation_f2(motional, cfg.params.q);
    diag.eps_q = coupling::effective_lamb_dicke(cfg.params.epsilon, motional, cfg.params.q);
    diag.tail_mass = motional.meta.tail_mass;

    hamiltonian::HqOptions hq_opts;
    hq_opts.pad = cfg.pad;
    hq_opts.series = cfg.series;
    hq_opts.effective_state = &motional;
    const auto h = hamiltonian::build_hq(cfg.params, dim, cfg.route, hq_opts);
    diag.hermiticity_residual = hamiltonian::hermiticity_residual(h);

    const auto prop = dynamics::spectral_propagator(h);
    const auto times = uniform_times(cfg.time);
    const auto traj = dynamics::evolve(prop, psi0, times);

    for (const auto& psi : traj.states) {
        diag.max_norm_drift = std::max(diag.max_norm_drift, std::abs(psi.norm() - 1.0));
    }
    if (diag.max_norm_drift > 1e-9) {
        throw NumericalError("run_scenario: norm drift " + std::to_string(diag.max_norm_drift) +
                             " exceeds 1e-9");
    }

    // Energy conservation spot-check along the trajectory (every 50th point).
    const double e0 = (psi0.amps.adjoint() * h.mat * psi0.amps)(0).real();
    const double e_scale = std::max(std::abs(e0), 1.0);
    for (std::size_t k = 0; k < traj.states.size(); k += 50) {
        const auto& psi = traj.states[k];
        const double e = (psi.adjoint() * h.mat * psi)(0).real();
        diag.max_energy_drift_rel =
            std::max(diag.max_energy_drift_rel, std::abs(e - e0) / e_scale);
    }
    if (diag.max_energy_drift_rel > 1e-9) {
        throw NumericalError("run_scenario: energy drift " +
                             std::to_string(diag.max_energy_drift_rel) + " exceeds 1e-9 relative");
    }

    const auto inversion = observables::population_inversion(traj);
    diag.final_w = inversion.w.back();
    io::write_inversion_csv(out_dir / "inversion.csv", inversion);

    const auto snapshots = resolved_snapshots(cfg);
    nlohmann::json snap_json = nlohmann::json::array();
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        const auto psi_t = dynamics::apply(prop, psi0.amps, snapshots[k]);
        qstates::JointState js;
        js.amps = psi_t;
        js.motional_dim = cfg.dim;
        const auto rho = observables::reduced_motional_density(js);
        const auto grid = observables::husimi_q(rho, cfg.qgrid);

        SnapshotInfo info;
        info.t = snapshots[k];
        info.mass = grid.mass;
        info.coarse = grid.coarse_flag;
        Eigen::Index pi = 0, pj = 0;
        info.peak_value = grid.values.maxCoeff(&pi, &pj);
        info.peak_re = grid.re_axis(pj);
        info.peak_im = grid.im_axis(pi);
        diag.snapshots.push_back(info);

        const std::string stem = "qgrid_" + std::to_string(k);
        io::write_qgrid_csv(out_dir / (stem + ".csv"), grid);
        if (cfg.qgrid_flat) io::write_qgrid_flat_csv(out_dir / (stem + "_flat.csv"), grid);

        snap_json.push_back({{"index", k},
                             {"t", info.t},
                             {"file", stem + ".csv"},
                             {"mass", info.mass},
                             {"coarse_flag", info.coarse},
                             {"peak_re", info.peak_re},
                             {"peak_im", info.peak_im},
                             {"peak_value", info.peak_value}});
    }

    nlohmann::json manifest;
    manifest["tool"] = "qion";
    manifest["version"] = kVersion;
    manifest["csv_format_version"] = kCsvFormatVersion;
    manifest["config"] = config_to_json(cfg);
    manifest["hamiltonian_fingerprint"] = dynamics::fingerprint(h);
    manifest["outputs"] = {{"inversion", "inversion.csv"}, {"qgrids", snap_json}};
    io::write_json(out_dir / "manifest.json", manifest);

    nlohmann::json dj;
    dj["eff_f2"] = diag.eff_f2;
    dj["eps_q"] = diag.eps_q;
    dj["tail_mass"] = diag.tail_mass;
    dj["hermiticity_residual"] = diag.hermiticity_residual;
    dj["max_norm_drift"] = diag.max_norm_drift;
    dj["max_energy_drift_rel"] = diag.max_energy_drift_rel;
    dj["final_w"] = diag.final_w;
    dj["snapshots"] = snap_json;
    io::write_json(out_dir / "diagnostics.json", dj);

    return diag;
}

namespace {

void validate_axis(const std::string& axis) {
    for (const char* known : {"q", "tau", "epsilon", "alpha", "delta_bar"}) {
        if (axis == known) return;
    }
    throw ConfigError("sweep axis must be one of q, tau, epsilon, alpha, delta_bar (got '" + axis +
                      "')");
}

ScenarioConfig apply_axis(const ScenarioConfig& base, const std::string& axis, double value) {
    ScenarioConfig cfg = base;
    const auto& p = base.params;
    if (axis == "q") {
        cfg.params = QParams::from_q(value, p.epsilon, p.omega_bar, p.delta_bar);
    } else if (axis == "tau") {
        cfg.params = QParams::from_tau(value, p.epsilon, p.omega_bar, p.delta_bar);
    } else if (axis == "epsilon") {
        cfg.params = QParams::from_tau(p.tau, value, p.omega_bar, p.delta_bar);
    } else if (axis == "alpha") {
        cfg.alpha = Complex(value, 0.0);
    } else if (axis == "delta_bar") {
        cfg.params = QParams::from_tau(p.tau, p.epsilon, p.omega_bar, value);
    }
    return cfg;
}

} // namespace

SweepResult sweep(const ScenarioConfig& base, const std::string& axis,
                  const std::vector<double>& values, const std::filesystem::path& out_root,
                  int jobs) {
    if (values.empty()) throw ConfigError("sweep: empty value list");
    validate_axis(axis);

    std::error_code ec;
    std::filesystem::create_directories(out_root, ec);
    if (ec) throw IoError("cannot create sweep directory '" + out_root.string() + "'");

    SweepResult result;
    result.runs.resize(values.size());

    if (jobs <= 0) {
        jobs = static_cast<int>(std::min<std::size_t>(
            values.size(), std::max(1u, std::thread::hardware_concurrency())));
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            SweepRun& run = result.runs[i];
            run.value = values[i];
            char name[32];
            std::snprintf(name, sizeof(name), "%03zu", i);
            run.dir = out_root / name;
            try {
                run.diag = run_scenario(apply_axis(base, axis, values[i]), run.dir);
                run.ok = true;
            } catch (const std::exception& e) {
                run.ok = false;
                run.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    nlohmann::json manifest;
    manifest["tool"] = "qion";
    manifest["version"] = kVersion;
    manifest["axis"] = axis;
    manifest["values"] = values;
    manifest["base_config"] = config_to_json(base);
    io::write_json(out_root / "sweep_manifest.json", manifest);

    result.summary_csv = out_root / "summary.csv";
    std::ofstream out(result.summary_csv);
    if (!out) throw IoError("cannot write '" + result.summary_csv.string() + "'");
    out << "value,eff_f2,eps_q,final_w,status\n";
    for (const auto& run : result.runs) {
        out << io::format_g17(run.value) << ',';
        if (run.ok) {
            out << io::format_g17(run.diag.eff_f2) << ',' << io::format_g17(run.diag.eps_q) << ','
                << io::format_g17(run.diag.final_w) << ",ok\n";
        } else {
            out << ",,,error\n";
        }
    }
    out.flush();
    if (!out) throw IoError("write failed for '" + result.summary_csv.string() + "'");
    return result;
}

} // namespace qion::runner
