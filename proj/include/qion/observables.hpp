// observables.hpp — population inversion, reduced motional density matrix,
// mean quanta, and Husimi Q-function grids.

#pragma once

#include "qion/dynamics.hpp"
#include "qion/qstates.hpp"

#include <Eigen/Dense>

namespace qion::observables {

/// w(t) = P_e(t) - P_g(t), each value in [-1, 1].
struct InversionSeries {
    std::vector<double> times;
    std::vector<double> w;
};

/// Uniform rectangular grid in the complex beta plane.
struct QGridSpec {
    double re_min = -6.0, re_max = 6.0;
    double im_min = -6.0, im_max = 6.0;
    int re_points = 161;
    int im_points = 161;
};

/// Husimi values on the grid; values(i, j) = Q(re_axis[j] + i*im_axis[i]).
/// mass is the Riemann sum times the cell area; coarse_flag is set when the
/// normalization deficit |1 - mass| exceeds 2% (grid too coarse or small).
struct QGrid {
    Eigen::VectorXd re_axis;
    Eigen::VectorXd im_axis;
    Eigen::MatrixXd values;
    double mass = 0.0;
    bool coarse_flag = false;
};

/// Projector used to evaluate Q.  `coherent` (ordinary coherent states) is
/// the Husimi definition proper: positive, normalized, q-independent.
/// `q_coherent` is a diagnostic overlap against q-deformed coherent states.
enum class Projector { coherent, q_coherent };

InversionSeries population_inversion(const dynamics::Trajectory& traj);

/// rho_m[n,n'] = sum_s amps[s,n] conj(amps[s,n']): trace 1, Hermitian, PSD.
Eigen::MatrixXcd reduced_motional_density(const qstates::JointState& state);

/// Q(beta) = <beta| rho |beta> / pi evaluated on the grid via truncated
/// coherent overlap vectors.  rho must be Hermitian with unit trace.
QGrid husimi_q(const Eigen::MatrixXcd& rho, const QGridSpec& spec,
               Projector projector = Projector::coherent, double q = 1.0);

/// <N> over both internal blocks.
double mean_quanta(const qstates::JointState& state);
/// <N> = sum_n n rho[n,n].
double mean_quanta(const Eigen::MatrixXcd& rho);

} // namespace qion::observables
