// qion — q-deformed trapped-ion dynamics CLI.
//
// Verbs: run (one scenario), sweep (one axis, many values), verify (built-in
// invariant suite), export-matrix (dump F, F_q and H for a config).
// Exit codes: 0 ok, 1 check failures, 2 config, 3 numerical, 4 I/O.

#include "qion/errors.hpp"
#include "qion/hamiltonian.hpp"
#include "qion/io.hpp"
#include "qion/runner.hpp"
#include "qion/verify.hpp"
#include "qion/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::string route;
    bool lenient = false;
};

qion::runner::ScenarioConfig load(const CommonOpts& opts) {
    std::vector<std::string> warnings;
    qion::runner::ScenarioConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = qion::runner::load_config_file(opts.config_path, !opts.lenient, &warnings);
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    if (!opts.route.empty()) cfg.route = qion::coupling::route_from_name(opts.route);
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_out) {
    cmd->add_option("--config", opts.config_path, "Config file (empty = canonical scenario)");
    if (with_out) cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--route", opts.route,
                    "Coupling route override (q_closed | q_factored_series | "
                    "q_dressed_series | harmonic_effective)");
    auto* strict = cmd->add_flag("--strict", "Reject unknown config keys (default)");
    cmd->add_flag("--lenient", opts.lenient, "Warn about unknown config keys instead")
        ->excludes(strict);
}

int cmd_run(const CommonOpts& opts) {
    const auto cfg = load(opts);
    const auto diag = qion::runner::run_scenario(cfg, opts.out_dir);
    std::printf("run complete: %s\n", opts.out_dir.c_str());
    std::printf("  eff_f2 = %.6f  eps_q = %.6f  tail = %.3e\n", diag.eff_f2, diag.eps_q,
                diag.tail_mass);
    std::printf("  hermiticity = %.3e  norm drift = %.3e  final w = %.6f\n",
                diag.hermiticity_residual, diag.max_norm_drift, diag.final_w);
    for (const auto& s : diag.snapshots) {
        std::printf("  qgrid t = %-8g mass = %.6f peak (%.3f, %.3f)%s\n", s.t, s.mass, s.peak_re,
                    s.peak_im, s.coarse ? "  [coarse]" : "");
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& axis, const std::vector<double>& values,
              int jobs) {
    const auto cfg = load(opts);
    const auto result = qion::runner::sweep(cfg, axis, values, opts.out_dir, jobs);
    int failures = 0;
    for (const auto& run : result.runs) {
        if (run.ok) {
            std::printf("  %s = %-12g eff_f2 = %.6f  eps_q = %.6f  final w = %.6f\n", axis.c_str(),
                        run.value, run.diag.eff_f2, run.diag.eps_q, run.diag.final_w);
        } else {
            ++failures;
            std::printf("  %s = %-12g FAILED: %s\n", axis.c_str(), run.value, run.error.c_str());
        }
    }
    std::printf("summary: %s\n", result.summary_csv.string().c_str());
    return failures == 0 ? 0 : 1;
}

int cmd_verify() {
    const auto results = qion::verify::run_verification();
    const int failures = qion::verify::print_report(results);
    return failures == 0 ? 0 : 1;
}

int cmd_export(const CommonOpts& opts) {
    const auto cfg = load(opts);
    const std::filesystem::path out(opts.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw qion::IoError("cannot create '" + out.string() + "'");

    const qion::qcore::TruncationDim dim(cfg.dim);
    const auto state =
        qion::qstates::q_coherent_state(cfg.alpha, cfg.params.q, dim, cfg.tail_tol);

    const auto f_harm = qion::coupling::f_harmonic(cfg.params.epsilon, dim);
    qion::io::write_json(out / "f_harmonic.json", qion::io::coupling_to_json(f_harm));
    qion::io::write_matrix_raw(out / "f_harmonic.raw", f_harm);

    qion::coupling::CouplingMatrix fq;
    switch (cfg.route) {
        case qion::coupling::Route::q_factored_series:
            fq = qion::coupling::fq_factored(cfg.params.epsilon, cfg.params.q, dim, cfg.pad,
                                             cfg.series);
            break;
        case qion::coupling::Route::q_dressed_series:
            fq = qion::coupling::fq_dressed(cfg.params.epsilon, cfg.params.q, dim, cfg.pad,
                                            cfg.series);
            break;
        case qion::coupling::Route::harmonic_effective:
            fq = qion::coupling::f_effective(cfg.params.epsilon, state, cfg.params.q, dim);
            break;
        default:
            fq = qion::coupling::fq_closed(cfg.params.epsilon, cfg.params.q, dim);
            break;
    }
    qion::io::write_json(out / "f_q.json", qion::io::coupling_to_json(fq));
    qion::io::write_matrix_raw(out / "f_q.raw", fq);

    qion::hamiltonian::HqOptions hq_opts;
    hq_opts.pad = cfg.pad;
    hq_opts.series = cfg.series;
    hq_opts.effective_state = &state;
    const auto h = qion::hamiltonian::build_hq(cfg.params, dim, cfg.route, hq_opts);
    qion::io::write_json(out / "hamiltonian.json",
                         qion::io::matrix_to_json(h.mat, "joint_hamiltonian"));
    qion::io::write_json(out / "initial_state.json", qion::io::state_to_json(state));

    std::printf("exported f_harmonic, f_q (%s) and hamiltonian to %s\n",
                qion::coupling::route_name(fq.route), out.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-deformed trapped-ion dynamics"};
    app.set_version_flag("--version", qion::kVersion);
    app.require_subcommand(1);

    CommonOpts run_opts, sweep_opts, export_opts;
    std::string axis;
    std::vector<double> values;
    int jobs = 0;

    auto* run = app.add_subcommand("run", "Run one scenario and write its artifacts");
    add_common(run, run_opts, true);

    auto* sw = app.add_subcommand("sweep", "Run one scenario per value of a parameter axis");
    add_common(sw, sweep_opts, true);
    sw->add_option("--axis", axis, "Parameter axis: q | tau | epsilon | alpha | delta_bar")
        ->required();
    sw->add_option("--values", values, "Comma-separated axis values")
        ->required()
        ->delimiter(',');
    sw->add_option("--jobs", jobs, "Concurrent runs (default: hardware)");

    auto* verify = app.add_subcommand("verify", "Run the invariant suite and print a table");
    (void)verify;

    auto* exp = app.add_subcommand("export-matrix", "Dump F, F_q and H for a config");
    add_common(exp, export_opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_opts);
        if (sw->parsed()) return cmd_sweep(sweep_opts, axis, values, jobs);
        if (verify->parsed()) return cmd_verify();
        if (exp->parsed()) return cmd_export(export_opts);
    } catch (const qion::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qion::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const qion::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
