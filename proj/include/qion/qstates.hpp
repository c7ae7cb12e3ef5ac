// qstates.hpp — Fock and q-coherent states on the truncated space, joint
// internal (x) motional state assembly, and state-level expectations.

#pragma once

#include "qion/qcore.hpp"

#include <Eigen/Dense>

namespace qion::qstates {

using qcore::Complex;
using qcore::TruncationDim;

/// Construction record kept with every motional state.
struct StateMeta {
    enum class Kind { fock, q_coherent };
    Kind kind = Kind::fock;
    int fock_n = 0;       // valid for Kind::fock
    Complex alpha{0.0, 0.0};
    double q = 1.0;
    int dim = 0;
    double tail_mass = 0.0; // analytic mass beyond the truncation, relative
    double tail_tol = 0.0;
};

/// Length-D complex amplitude vector over |0>..|D-1>, unit norm.
struct MotionalState {
    Eigen::VectorXcd amps;
    StateMeta meta;

    int dim() const { return static_cast<int>(amps.size()); }
};

enum class InternalLevel { ground, excited };

/// Length-2D amplitude vector over {|g,n>, |e,n>}.  Layout is fixed across
/// the whole library: index i = s*D + n with s = 0 for g, s = 1 for e
/// (g-block first).
struct JointState {
    Eigen::VectorXcd amps;
    int motional_dim = 0;

    int dim() const { return static_cast<int>(amps.size()); }
};

MotionalState fock_state(int n, TruncationDim D);

/// q-coherent state: amps[n] proportional to alpha^n / sqrt([n]_q!),
/// normalized first by 1/sqrt(exp_q(|alpha|^2)) and then re-normalized on the
/// truncated support.  The analytic tail mass beyond D (relative to
/// exp_q(|alpha|^2)) is recorded in meta; if it exceeds tail_tol the
/// construction fails, naming the smallest adequate D.
MotionalState q_coherent_state(Complex alpha, double q, TruncationDim D, double tail_tol);

/// <f^2(N)> = sum_n |amps[n]|^2 f(n)^2, with f(0)^2 = 1.
double expectation_f2(const MotionalState& state, double q);

/// Tensor embedding of a motional state with a definite internal level.
JointState joint_state(InternalLevel level, const MotionalState& motional);

} // namespace qion::qstates
