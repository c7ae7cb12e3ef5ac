#include "qion/verify.hpp"

#include "qion/coupling.hpp"
#include "qion/dynamics.hpp"
#include "qion/hamiltonian.hpp"
#include "qion/observables.hpp"
#include "qion/qcore.hpp"
#include "qion/qstates.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

namespace qion::verify {

namespace {

using qcore::Complex;
using qcore::QParams;
using qcore::TruncationDim;

constexpr double kTauCanonical = 0.003;

QParams canonical() { return QParams::from_tau(kTauCanonical, 0.05, 50.0, -50.0); }

// Registers one check; exceptions become failures instead of aborting the run.
void add(std::vector<CheckResult>& out, const std::string& name, double bound, bool must_exceed,
         const std::string& note, const std::function<double()>& measure) {
    CheckResult r;
    r.name = name;
    r.bound = bound;
    r.must_exceed = must_exceed;
    r.note = note;
    try {
        r.measured = measure();
        r.pass = must_exceed ? r.measured > bound : r.measured <= bound;
    } catch (const std::exception& e) {
        r.pass = false;
        r.measured = std::nan("");
        r.note = std::string("threw: ") + e.what();
    }
    out.push_back(r);
}

double max_interior_abs(const Eigen::MatrixXcd& m, int interior) {
    return m.topLeftCorner(interior, interior).cwiseAbs().maxCoeff();
}

} // namespace

std::vector<CheckResult> run_verification() {
    std::vector<CheckResult> out;
    const std::vector<double> q_grid{0.5, 0.9, 0.95, 1.0, 1.05, 2.0};

    add(out, "q-number symmetry [x]_q = [x]_{1/q}", 1e-14, false, "max relative difference", [&] {
        double worst = 0.0;
        for (double q : q_grid) {
            for (double x : {0.5, 1.0, 2.5, 7.0, 31.5, 100.0}) {
                const double a = qcore::q_number(x, q);
                const double b = qcore::q_number(x, 1.0 / q);
                worst = std::max(worst, std::abs(a - b) / std::abs(a));
            }
        }
        return worst;
    });

    add(out, "ladder identity [n+1]_q - q[n]_q = q^-n", 1e-13, false,
        "residual / max(1, q[n]_q), n <= 100", [&] {
            double worst = 0.0;
            for (double q : {0.95, 1.0, 1.05}) {
                for (int n = 0; n <= 100; ++n) {
                    const double lhs = qcore::q_number(n + 1.0, q) - q * qcore::q_number(n, q);
                    const double rhs = std::pow(q, -n);
                    const double scale = std::max(1.0, q * qcore::q_number(n, q));
                    worst = std::max(worst, std::abs(lhs - rhs) / scale);
                }
            }
            return worst;
        });

    add(out, "q-commutation AA+ - qA+A = q^-N (interior)", 1e-12, false,
        "max-abs residual, D = 60", [&] {
            double worst = 0.0;
            for (double q : {0.95, 1.0, 1.05}) {
                const auto ops = qcore::build_operators(TruncationDim(60), q);
                Eigen::MatrixXd lhs = ops.a_lower * ops.a_raise - q * ops.a_raise * ops.a_lower;
                for (int n = 0; n < 60; ++n) lhs(n, n) -= std::pow(q, -n);
                worst = std::max(worst, lhs.topLeftCorner(59, 59).cwiseAbs().maxCoeff());
            }
            return worst;
        });

    add(out, "number commutators [N,A+] = A+, [N,A] = -A", 1e-12, false,
        "max-abs residual on interior block, D = 60", [&] {
            double worst = 0.0;
            for (double q : {0.95, 1.0, 1.05}) {
                const auto ops = qcore::build_operators(TruncationDim(60), q);
                const Eigen::MatrixXd r1 =
                    ops.num * ops.a_raise - ops.a_raise * ops.num - ops.a_raise;
                const Eigen::MatrixXd r2 = ops.num * ops.a_lower - ops.a_lower * ops.num + ops.a_lower;
                worst = std::max({worst, r1.topLeftCorner(59, 59).cwiseAbs().maxCoeff(),
                                  r2.topLeftCorner(59, 59).cwiseAbs().maxCoeff()});
            }
            return worst;
        });

    add(out, "A+A |n> = [n]_q |n> and N != A+A for q != 1", 1e-12, false,
        "eigen-action residual; N-A+A distinctness checked inside", [&] {
            const auto ops = qcore::build_operators(TruncationDim(40), 1.05);
            const Eigen::MatrixXd prod = ops.a_raise * ops.a_lower;
            double worst = 0.0;
            for (int n = 0; n < 40; ++n) {
                worst = std::max(worst, std::abs(prod(n, n) - qcore::q_number(n, 1.05)));
            }
            const double distinct = (prod - ops.num).cwiseAbs().maxCoeff();
            if (distinct < 1e-6) return 1.0; // force failure: N should differ from A+A
            return worst;
        });

    add(out, "harmonic limit: q-routes at q = 1 vs Laguerre form", 1e-10, false,
        "max-abs over {closed, factored, dressed}, D = 30, eps = 0.05", [&] {
            const TruncationDim d(30);
            const auto ref = coupling::f_harmonic(0.05, d).mat;
            double worst = (coupling::fq_closed(0.05, 1.0, d).mat - ref).cwiseAbs().maxCoeff();
            worst = std::max(worst,
                             (coupling::fq_factored(0.05, 1.0, d).mat - ref).cwiseAbs().maxCoeff());
            worst = std::max(worst,
                             (coupling::fq_dressed(0.05, 1.0, d).mat - ref).cwiseAbs().maxCoeff());
            return worst;
        });

    add(out, "route equivalence: closed vs factored", 1e-8, false,
        "max-abs, D = 30, pad = 20, q in {1, e^0.003, 1.05}, eps in {0.05, 0.2}", [&] {
            const TruncationDim d(30);
            double worst = 0.0;
            for (double q : {1.0, std::exp(kTauCanonical), 1.05}) {
                for (double eps : {0.05, 0.2}) {
                    const auto a = coupling::fq_closed(eps, q, d);
                    const auto b = coupling::fq_factored(eps, q, d, 20);
                    worst = std::max(worst, (a.mat - b.mat).cwiseAbs().maxCoeff());
                }
            }
            return worst;
        });

    add(out, "route equivalence: dressed vs factored", 1e-12, false,
        "max-abs over the same grid (identical generators)", [&] {
            const TruncationDim d(30);
            double worst = 0.0;
            for (double q : {1.0, std::exp(kTauCanonical), 1.05}) {
                for (double eps : {0.05, 0.2}) {
                    const auto a = coupling::fq_dressed(eps, q, d, 20);
                    const auto b = coupling::fq_factored(eps, q, d, 20);
                    worst = std::max(worst, (a.mat - b.mat).cwiseAbs().maxCoeff());
                }
            }
            return worst;
        });

    add(out, "ordering witness differs for q != 1", 1e-12, true,
        "max-abs difference of the two operator orderings, q = 1.05, eps = 0.1", [&] {
            const TruncationDim d(30);
            const auto fwd = coupling::fq_factored(0.1, 1.05, d, 20).mat;
            const auto rev = coupling::fq_factored_reversed(0.1, 1.05, d, 20);
            return max_interior_abs(fwd - rev, 30);
        });

    add(out, "ordering witness agrees at q = 1", 1e-10, false, "max-abs, interior block", [&] {
        const TruncationDim d(30);
        const auto fwd = coupling::fq_factored(0.1, 1.0, d, 20).mat;
        const auto rev = coupling::fq_factored_reversed(0.1, 1.0, d, 20);
        return max_interior_abs(fwd - rev, 30);
    });

    add(out, "first off-diagonal <0|F_q|1> = i eps e^{-eps^2/2}", 1e-15, false,
        "max-abs deviation over q grid, eps = 0.05", [&] {
            const Complex expect = Complex(0.0, 0.05) * std::exp(-0.5 * 0.05 * 0.05);
            double worst = 0.0;
            for (double q : q_grid) {
                const auto f = coupling::fq_closed(0.05, q, TruncationDim(8));
                worst = std::max(worst, std::abs(f.mat(0, 1) - expect));
            }
            return worst;
        });

    add(out, "column norms at q = 1 stay <= 1", 1e-9, false,
        "max(column norm - 1), harmonic routes, D = 40", [&] {
            const TruncationDim d(40);
            double worst = -1.0;
            for (const auto& f :
                 {coupling::f_harmonic(0.1, d), coupling::f_harmonic_factored(0.1, d, 20)}) {
                for (int n = 0; n < 40; ++n) {
                    worst = std::max(worst, f.mat.col(n).norm() - 1.0);
                }
            }
            return worst;
        });

    add(out, "Hamiltonian Hermiticity (all routes)", 1e-12, false,
        "max-abs H - H^dag, canonical params, D = 60", [&] {
            const auto params = canonical();
            const TruncationDim d(60);
            const auto state = qstates::q_coherent_state({4.0, 0.0}, params.q, d, 1e-9);
            hamiltonian::HqOptions opts;
            opts.effective_state = &state;
            double worst = 0.0;
            for (auto route :
                 {coupling::Route::q_closed, coupling::Route::q_factored_series,
                  coupling::Route::q_dressed_series, coupling::Route::harmonic_effective}) {
                const auto h = hamiltonian::build_hq(params, d, route, opts);
                worst = std::max(worst, hamiltonian::hermiticity_residual(h));
            }
            return worst;
        });

    add(out, "trace identity tr H = 2 sum E_n", 1e-10, false, "relative, canonical, D = 60", [&] {
        const auto params = canonical();
        const TruncationDim d(60);
        const auto h = hamiltonian::build_hq(params, d, coupling::Route::q_closed);
        const double expected = 2.0 * hamiltonian::trap_spectrum(params.q, params.omega_bar, d).sum();
        return std::abs(h.mat.trace().real() - expected) / std::abs(expected);
    });

    add(out, "eps = 0, delta = 0 spectrum: trap levels +- 1/2", 1e-12, false,
        "residual / spectrum scale; diagonal part doubly degenerate; q = 1, D = 20", [&] {
            const auto params = QParams::from_tau(0.0, 0.0, 50.0, 0.0);
            const TruncationDim d(20);
            const auto h = hamiltonian::build_h_harmonic(params, d);
            // The trap + detuning diagonal carries each level twice...
            double worst = 0.0;
            for (int n = 0; n < 20; ++n) {
                worst = std::max(worst, std::abs(h.diag_part(n) - h.diag_part(20 + n)));
            }
            // ...while the full spectrum splits by +-1/2 per Fock level
            // (F = identity at eps = 0, so each level is a bare Rabi doublet).
            const auto prop = dynamics::spectral_propagator(h);
            std::vector<double> expected;
            const auto trap = hamiltonian::trap_spectrum(1.0, 50.0, d);
            for (int n = 0; n < 20; ++n) {
                expected.push_back(trap(n) - 0.5);
                expected.push_back(trap(n) + 0.5);
            }
            std::sort(expected.begin(), expected.end());
            const double scale = std::max(1.0, std::abs(expected.back()));
            for (int k = 0; k < prop.dim; ++k) {
                worst = std::max(
                    worst, std::abs(prop.eigenvalues(k) - expected[static_cast<size_t>(k)]) / scale);
            }
            return worst;
        });

    add(out, "unitarity + energy conservation (canonical)", 1e-9, false,
        "max(norm drift, relative energy drift), D = 60, t <= 50", [&] {
            const auto params = canonical();
            const TruncationDim d(60);
            const auto state = qstates::q_coherent_state({4.0, 0.0}, params.q, d, 1e-9);
            const auto psi0 = qstates::joint_state(qstates::InternalLevel::ground, state);
            const auto h = hamiltonian::build_hq(params, d, coupling::Route::q_closed);
            const auto prop = dynamics::spectral_propagator(h);
            std::vector<double> times;
            for (int k = 0; k <= 500; ++k) times.push_back(50.0 * k / 500.0);
            const auto traj = dynamics::evolve(prop, psi0, times);
            const double e0 = (psi0.amps.adjoint() * h.mat * psi0.amps)(0).real();
            double worst = 0.0;
            for (const auto& psi : traj.states) {
                worst = std::max(worst, std::abs(psi.norm() - 1.0));
                const double e = (psi.adjoint() * h.mat * psi)(0).real();
                worst = std::max(worst, std::abs(e - e0) / std::abs(e0));
            }
            return worst;
        });

    add(out, "propagator composition U(t1)U(t2) = U(t1+t2)", 1e-9, false,
        "max-abs on state, canonical D = 40", [&] {
            const auto params = canonical();
            const TruncationDim d(40);
            const auto state = qstates::q_coherent_state({2.0, 0.0}, params.q, d, 1e-9);
            const auto psi0 = qstates::joint_state(qstates::InternalLevel::ground, state);
            const auto h = hamiltonian::build_hq(params, d, coupling::Route::q_closed);
            const auto prop = dynamics::spectral_propagator(h);
            double worst = 0.0;
            for (auto [t1, t2] : {std::pair{0.37, 1.93}, {2.5, 2.5}, {11.0, 0.003}}) {
                const auto a = dynamics::apply(prop, dynamics::apply(prop, psi0.amps, t1), t2);
                const auto b = dynamics::apply(prop, psi0.amps, t1 + t2);
                worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
            }
            return worst;
        });

    add(out, "spectral vs RK4 cross-oracle (|H| dt < 0.1)", 1e-6, false,
        "max-abs state deviation; omega=2, delta=-2, alpha=1, D=16, dt=5e-4, t<=10", [&] {
            const auto params = QParams::from_tau(kTauCanonical, 0.05, 2.0, -2.0);
            const TruncationDim d(16);
            const auto state = qstates::q_coherent_state({1.0, 0.0}, params.q, d, 1e-9);
            const auto psi0 = qstates::joint_state(qstates::InternalLevel::ground, state);
            const auto h = hamiltonian::build_hq(params, d, coupling::Route::q_closed);
            const auto prop = dynamics::spectral_propagator(h);
            const auto rk = dynamics::rk4_reference(h, psi0, 10.0, 5e-4, 200);
            double worst = 0.0;
            for (std::size_t k = 0; k < rk.times.size(); ++k) {
                const auto ref = dynamics::apply(prop, psi0.amps, rk.times[k]);
                worst = std::max(worst, (rk.states[k] - ref).cwiseAbs().maxCoeff());
            }
            return worst;
        });

    add(out, "analytic Rabi flopping w(t) = -cos t", 1e-8, false,
        "eps = 0, delta = 0, |g,0>, t <= 20", [&] {
            const auto params = QParams::from_tau(0.0, 0.0, 50.0, 0.0);
            const TruncationDim d(8);
            const auto psi0 =
                qstates::joint_state(qstates::InternalLevel::ground, qstates::fock_state(0, d));
            const auto h = hamiltonian::build_h_harmonic(params, d);
            const auto prop = dynamics::spectral_propagator(h);
            std::vector<double> times;
            for (int k = 0; k <= 400; ++k) times.push_back(20.0 * k / 400.0);
            const auto traj = dynamics::evolve(prop, psi0, times);
            const auto series = observables::population_inversion(traj);
            double worst = 0.0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                worst = std::max(worst, std::abs(series.w[k] + std::cos(times[k])));
            }
            return worst;
        });

    add(out, "vacuum Husimi Q = e^{-|b|^2}/pi", 1e-10, false, "pointwise on default grid", [&] {
        const auto psi0 =
            qstates::joint_state(qstates::InternalLevel::ground, qstates::fock_state(0, TruncationDim(30)));
        const auto rho = observables::reduced_motional_density(psi0);
        const auto grid = observables::husimi_q(rho, observables::QGridSpec{});
        double worst = 0.0;
        for (Eigen::Index i = 0; i < grid.im_axis.size(); ++i) {
            for (Eigen::Index j = 0; j < grid.re_axis.size(); ++j) {
                const double b2 = grid.re_axis(j) * grid.re_axis(j) +
                                  grid.im_axis(i) * grid.im_axis(i);
                worst = std::max(worst,
                                 std::abs(grid.values(i, j) - std::exp(-b2) / std::numbers::pi));
            }
        }
        return worst;
    });

    add(out, "Husimi grid normalization", 1e-3, false,
        "|1 - mass|: vacuum on default grid; canonical state on 5-sigma grid", [&] {
            const auto vac =
                qstates::joint_state(qstates::InternalLevel::ground, qstates::fock_state(0, TruncationDim(30)));
            const auto g1 =
                observables::husimi_q(observables::reduced_motional_density(vac), observables::QGridSpec{});
            const auto params = canonical();
            const auto state = qstates::q_coherent_state({4.0, 0.0}, params.q, TruncationDim(100), 1e-9);
            const auto psi = qstates::joint_state(qstates::InternalLevel::ground, state);
            observables::QGridSpec wide;
            wide.re_min = -8.0;
            wide.re_max = 8.0;
            wide.im_min = -8.0;
            wide.im_max = 8.0;
            wide.re_points = 215;
            wide.im_points = 215;
            const auto g2 =
                observables::husimi_q(observables::reduced_motional_density(psi), wide);
            return std::max(std::abs(1.0 - g1.mass), std::abs(1.0 - g2.mass));
        });

    add(out, "Husimi peak within one cell of beta = 4", 0.075 + 1e-12, false,
        "distance of argmax from (4, 0) on the default grid", [&] {
            const auto params = canonical();
            const auto state = qstates::q_coherent_state({4.0, 0.0}, params.q, TruncationDim(100), 1e-9);
            const auto psi = qstates::joint_state(qstates::InternalLevel::ground, state);
            const auto grid =
                observables::husimi_q(observables::reduced_motional_density(psi), observables::QGridSpec{});
            Eigen::Index pi = 0, pj = 0;
            grid.values.maxCoeff(&pi, &pj);
            return std::hypot(grid.re_axis(pj) - 4.0, grid.im_axis(pi) - 0.0);
        });

    add(out, "canonical scenario value <f^2(N)> = 1.0004", 2e-4, false,
        "|measured - 1.0004|, alpha = 4, tau = 0.003, D = 100", [&] {
            const auto params = canonical();
            const auto state = qstates::q_coherent_state({4.0, 0.0}, params.q, TruncationDim(100), 1e-9);
            return std::abs(qstates::expectation_f2(state, params.q) - 1.0004);
        });

    add(out, "canonical scenario value eps_q = 0.05001", 1e-5, false, "|measured - 0.05001|", [&] {
        const auto params = canonical();
        const auto state = qstates::q_coherent_state({4.0, 0.0}, params.q, TruncationDim(100), 1e-9);
        return std::abs(coupling::effective_lamb_dicke(0.05, state, params.q) - 0.05001);
    });

    add(out, "<f^2> strictly increasing in q", 0.0, true,
        "min adjacent increase over q in {1, e^0.003, 1.05}", [&] {
            double prev = -1.0;
            double min_step = 1e300;
            for (double q : {1.0, std::exp(kTauCanonical), 1.05}) {
                const auto state = qstates::q_coherent_state({4.0, 0.0}, q, TruncationDim(100), 1e-9);
                const double f2 = qstates::expectation_f2(state, q);
                if (prev >= 0.0) min_step = std::min(min_step, f2 - prev);
                prev = f2;
            }
            return min_step;
        });

    add(out, "effective coupling tracks F_q (regression)", 1e-3, false,
        "max-abs on interior n <= 40, canonical params, D = 60", [&] {
            const auto params = canonical();
            const TruncationDim d(60);
            const auto state = qstates::q_coherent_state({4.0, 0.0}, params.q, d, 1e-9);
            const auto eff = coupling::f_effective(params.epsilon, state, params.q, d);
            const auto ref = coupling::fq_closed(params.epsilon, params.q, d);
            return max_interior_abs(eff.mat - ref.mat, 41);
        });

    return out;
}

int print_report(const std::vector<CheckResult>& results) {
    int failures = 0;
    for (const auto& r : results) {
        if (!r.pass) ++failures;
        std::printf("%-4s %-52s measured %.3e %s %.3e  (%s)\n", r.pass ? "ok" : "FAIL",
                    r.name.c_str(), r.measured, r.must_exceed ? ">" : "<=", r.bound,
                    r.note.c_str());
    }
    std::printf("%zu checks, %d failed\n", results.size(), failures);
    return failures;
}

} // namespace qion::verify
