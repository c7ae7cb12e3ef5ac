// coupling.hpp — ion-laser coupling operators on the truncated Fock space.
//
// The harmonic displacement F = e^{-eps^2/2} e^{i eps a+} e^{i eps a} comes
// in a closed (associated-Laguerre) form and a factored operator-exponential
// form.  The deformed F_q is built by three independent routes that must
// agree: closed-form matrix elements, factored exponentials of the q-ladder
// matrices, and the same exponentials assembled from f(N)-dressed ordinary
// ladder matrices.  Route equivalence is the library's main self-check.

#pragma once

#include "qion/qcore.hpp"
#include "qion/qstates.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace qion::coupling {

using qcore::TruncationDim;

enum class Route {
    harmonic_closed,
    harmonic_factored,
    q_closed,
    q_factored_series,
    q_dressed_series,
    harmonic_effective,
};

const char* route_name(Route r);
Route route_from_name(std::string_view name);

/// Termination policy for matrix power series.
struct SeriesOptions {
    double tol = 1e-16; // stop when term max-abs <= tol * partial max-abs
    int max_terms = 200;
};

/// D x D coupling matrix with provenance.
struct CouplingMatrix {
    Eigen::MatrixXcd mat;
    Route route = Route::harmonic_closed;
    double epsilon = 0.0;
    double q = 1.0;
    int dim = 0;
    int pad = 0;            // extra levels used internally by series routes
    SeriesOptions series{}; // termination policy the series routes ran with
};

/// exp(G) by its power series, term-recursive, fixed summation order.
/// Throws NumericalError if the term cap is hit before the tolerance.
Eigen::MatrixXcd exp_series(const Eigen::MatrixXcd& g, const SeriesOptions& opts = {});

/// Harmonic coupling, closed form:
///   <m|F|n> = e^{-eps^2/2} (i eps)^{n-m} sqrt(m!/n!) L_m^{(n-m)}(eps^2)
/// for m <= n, mirrored for m > n.  Equals exp[i eps (a+ + a)].
CouplingMatrix f_harmonic(double epsilon, TruncationDim D);

/// Harmonic coupling via the factored exponentials on a padded space,
/// cropped back to D x D.  Oracle for the Laguerre form.
CouplingMatrix f_harmonic_factored(double epsilon, TruncationDim D, int pad = 20,
                                   const SeriesOptions& opts = {});

/// Deformed coupling, closed-form matrix elements (the primary route):
///   <m|F_q|n> = e^{-eps^2/2} (i eps)^{n-m} sqrt([m]_q!/[n]_q!)
///               * sum_{k=0}^{m} eps^{2k} (-1)^k [n]_q! / (k! (n-m+k)! [m-k]_q!)
/// for m <= n; the m > n block is the transpose of the same expression
/// (derived from the double series and validated against fq_factored).
/// Ordinary factorials k! and (n-m+k)! are deliberately undeformed.
CouplingMatrix fq_closed(double epsilon, double q, TruncationDim D);

/// F_q = e^{-eps^2/2} exp(i eps A+) exp(i eps A) assembled by matrix power
/// series on a (D+pad)-dimensional space and cropped; the brute-force oracle
/// for fq_closed.
CouplingMatrix fq_factored(double epsilon, double q, TruncationDim D, int pad = 20,
                           const SeriesOptions& opts = {});

/// Same operator with the generators written as i*eps*f(N)a+ and
/// i*eps*a f(N); identical to fq_factored since A = a f(N) holds
/// elementwise on the truncated matrices.
CouplingMatrix fq_dressed(double epsilon, double q, TruncationDim D, int pad = 20,
                          const SeriesOptions& opts = {});

/// The opposite operator ordering e^{+eps^2/2} exp(i eps A) exp(i eps A+),
/// cropped from the padded space.  Differs from fq_factored for q != 1;
/// used as the non-commutativity witness.
Eigen::MatrixXcd fq_factored_reversed(double epsilon, double q, TruncationDim D, int pad = 20,
                                      const SeriesOptions& opts = {});

/// eps_q = eps * sqrt(<f^2(N)>) on the given state.
double effective_lamb_dicke(double epsilon, const qstates::MotionalState& state, double q);

/// Effective interaction e^{(eps_q^2 - eps^2)/2} exp[i eps_q (a+ + a)]:
/// the deformed coupling approximated by a rescaled harmonic displacement,
/// prefactor kept exactly as defined.
CouplingMatrix f_effective(double epsilon, const qstates::MotionalState& state, double q,
                           TruncationDim D);

} // namespace qion::coupling
