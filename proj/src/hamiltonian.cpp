#include "qion/hamiltonian.hpp"
#include "qion/errors.hpp"

#include <stdexcept>
#include <string>

namespace qion::hamiltonian {

namespace {

JointHamiltonian assemble(const QParams& params, const coupling::CouplingMatrix& f,
                          coupling::Route route) {
    const int d = f.dim;
    JointHamiltonian h;
    h.params = params;
    h.motional_dim = d;
    h.route = route;

    const Eigen::VectorXd trap = trap_spectrum(params.q, params.omega_bar, TruncationDim(d));
    h.diag_part = Eigen::VectorXd::Zero(2 * d);
    h.diag_part.head(d) = trap.array() - 0.5 * params.delta_bar; // g-block
    h.diag_part.tail(d) = trap.array() + 0.5 * params.delta_bar; // e-block

    h.coupling_part = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    h.coupling_part.block(d, 0, d, d) = 0.5 * f.mat;           // F sigma+ : g -> e
    h.coupling_part.block(0, d, d, d) = 0.5 * f.mat.adjoint(); // F^dag sigma- : e -> g

    h.mat = h.coupling_part;
    h.mat += h.diag_part.cast<qcore::Complex>().asDiagonal();
    return h;
}

} // namespace

Eigen::VectorXd trap_spectrum(double q, double omega_bar, TruncationDim D) {
    const int d = D.value();
    Eigen::VectorXd e(d);
    double qn = 0.0; // [0]_q
    for (int n = 0; n < d; ++n) {
        const double qn1 = qcore::q_number(static_cast<double>(n + 1), q);
        e(n) = 0.5 * omega_bar * (qn + qn1);
        qn = qn1;
    }
    return e;
}

JointHamiltonian build_h_harmonic(const QParams& params, TruncationDim D) {
    if (params.q != 1.0) {
        throw std::invalid_argument("build_h_harmonic requires q = 1 (got q = " +
                                    std::to_string(params.q) + "); use build_hq");
    }
    return assemble(params, coupling::f_harmonic(params.epsilon, D),
                    coupling::Route::harmonic_closed);
}

JointHamiltonian build_hq(const QParams& params, TruncationDim D, coupling::Route route,
                          const HqOptions& opts) {
    switch (route) {
        case coupling::Route::q_closed:
            return assemble(params, coupling::fq_closed(params.epsilon, params.q, D), route);
        case coupling::Route::q_factored_series:
            return assemble(params,
                            coupling::fq_factored(params.epsilon, params.q, D, opts.pad, opts.series),
                            route);
        case coupling::Route::q_dressed_series:
            return assemble(params,
                            coupling::fq_dressed(params.epsilon, params.q, D, opts.pad, opts.series),
                            route);
        case coupling::Route::harmonic_effective: {
            if (opts.effective_state == nullptr) {
                throw std::invalid_argument(
                    "build_hq: harmonic_effective route needs the reference state "
                    "whose <f^2(N)> sets eps_q");
            }
            return assemble(
                params, coupling::f_effective(params.epsilon, *opts.effective_state, params.q, D),
                route);
        }
        default:
            throw std::invalid_argument(std::string("build_hq: route '") + route_name(route) +
                                        "' is not a Hamiltonian route");
    }
}

double hermiticity_residual(const JointHamiltonian& h) {
    return (h.mat - h.mat.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace qion::hamiltonian
