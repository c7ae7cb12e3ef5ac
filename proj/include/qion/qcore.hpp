// qcore.hpp — symmetric q-numbers, q-factorials, q-exponential sums, the f(N)
// dressing function and truncated-space ladder operator matrices.
//
// Everything here is a pure function of its arguments; all returned objects
// are immutable values and safe to share across threads.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace qion::qcore {

using Complex = std::complex<double>;

/// Model dials: deformation q (with tau = ln q), Lamb-Dicke epsilon, and the
/// trap frequency / detuning in Rabi units (omega/Omega, Delta/Omega).
/// q and tau are kept exactly consistent: one is always derived from the
/// other, never stored independently.  q = 1 (tau = 0) is the harmonic limit.
struct QParams {
    double q = 1.0;
    double tau = 0.0;
    double epsilon = 0.0;
    double omega_bar = 0.0;
    double delta_bar = 0.0;

    static QParams from_tau(double tau, double epsilon, double omega_bar, double delta_bar);
    static QParams from_q(double q, double epsilon, double omega_bar, double delta_bar);

    bool harmonic() const { return tau == 0.0; }
};

/// Number of retained Fock states |0>..|D-1>.  D >= 2 enforced at
/// construction; the coherent-state tail criterion lives in qstates.
class TruncationDim {
public:
    explicit TruncationDim(int d);
    int value() const { return d_; }

private:
    int d_;
};

/// Dense matrices for the deformed ladder operators on the truncated space.
///   a_lower(n-1, n) = sqrt([n]_q),  a_raise = a_lower^T,
///   num = diag(0..D-1),  f_diag[n] = sqrt([n]_q / n) with f_diag[0] = 1.
struct OperatorSet {
    Eigen::MatrixXd a_lower;
    Eigen::MatrixXd a_raise;
    Eigen::MatrixXd num;
    Eigen::VectorXd f_diag;
    double q = 1.0;
    int dim = 0;
};

/// Symmetric q-number [x]_q = (q^x - q^-x)/(q - q^-1), with the q = 1 limit
/// ([x]_1 = x) taken on an explicit branch.  Invariant under q <-> 1/q.
double q_number(double x, double q);

/// log [x]_q for x > 0; stable for arguments where [x]_q itself overflows.
double log_q_number(double x, double q);

/// [n]_q! = [n]_q [n-1]_q ... [1]_q with [0]_q! = [1]_q! = 1.
/// Throws NumericalError once the running product leaves the representable
/// range; use log_q_factorial for large n.
double q_factorial(int n, double q);

/// log of [n]_q!, accumulated in the log domain.
double log_q_factorial(int n, double q);

struct QExpSum {
    double value = 0.0;
    int terms = 0; // number of series terms actually summed
};

/// q-exponential sum_{n>=0} x^n/[n]_q!, truncated once the running term
/// drops below tol * partial_sum.  Reports the number of terms used.
QExpSum q_exponential(double x, double q, double tol, int max_terms = 1000);

/// Dressing function f(n) = sqrt([n]_q / n) for n >= 1; f(0) = 1 by
/// convention (the 0/0 at n = 0 never enters a physical matrix element
/// because the lowering operator annihilates the vacuum).
double f_of_n(int n, double q);

/// Ladder/number/dressing matrices on the D-dimensional truncated space.
/// The q = 1 instance coincides with the standard harmonic ladder matrices.
OperatorSet build_operators(TruncationDim D, double q);

} // namespace qion::qcore
