// hamiltonian.hpp — joint 2D x 2D Hamiltonians for the harmonic and
// q-analog traps, in units of hbar*Omega (time in 1/Omega).
//
// Sign conventions, fixed across the library:
//   sigma_z |e> = +|e>,  sigma_z |g> = -|g>,  sigma+ |g> = |e>.
// Basis layout follows JointState: g-block first, index = s*D + n.

#pragma once

#include "qion/coupling.hpp"
#include "qion/qcore.hpp"
#include "qion/qstates.hpp"

#include <Eigen/Dense>

namespace qion::hamiltonian {

using qcore::QParams;
using qcore::TruncationDim;

/// H/(hbar Omega) = diag[trap -+ delta_bar/2] + (1/2)(F sigma+ + F^dag sigma-).
/// The diagonal (trap + detuning) and off-diagonal (coupling) parts are kept
/// separately for diagnostics; mat is their sum and is Hermitian by
/// construction.
struct JointHamiltonian {
    Eigen::MatrixXcd mat;           // 2D x 2D
    Eigen::VectorXd diag_part;      // trap -+ detuning, length 2D
    Eigen::MatrixXcd coupling_part; // off-diagonal internal blocks only
    QParams params;
    int motional_dim = 0;
    coupling::Route route = coupling::Route::harmonic_closed;

    int dim() const { return 2 * motional_dim; }
};

/// Trap level energies E_n = (omega_bar/2)([n]_q + [n+1]_q), n = 0..D-1;
/// reduces to omega_bar (n + 1/2) at q = 1.
Eigen::VectorXd trap_spectrum(double q, double omega_bar, TruncationDim D);

/// Harmonic-trap Hamiltonian (requires q = 1); coupling via f_harmonic.
JointHamiltonian build_h_harmonic(const QParams& params, TruncationDim D);

struct HqOptions {
    int pad = 20;
    coupling::SeriesOptions series{};
    // Required for Route::harmonic_effective: the state whose <f^2> sets eps_q.
    const qstates::MotionalState* effective_state = nullptr;
};

/// q-analog Hamiltonian with F_q from the selected route.  Valid routes:
/// q_closed, q_factored_series, q_dressed_series, harmonic_effective.
/// At q = 1 coincides with build_h_harmonic.
JointHamiltonian build_hq(const QParams& params, TruncationDim D, coupling::Route route,
                          const HqOptions& opts = {});

/// max-abs of H - H^dag, the Hermiticity residual.
double hermiticity_residual(const JointHamiltonian& h);

} // namespace qion::hamiltonian
