#include "qion/coupling.hpp"
#include "qion/errors.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qion::coupling {

namespace {

using qcore::Complex;

constexpr Complex kImag{0.0, 1.0};

// i^k for k >= 0.
Complex i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

void require_epsilon(double epsilon) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("epsilon must be finite and >= 0");
    }
}

void require_pad(int pad) {
    if (pad < 0) throw std::invalid_argument("pad must be >= 0");
}

// Shared assembly of c * exp(raise) * exp(lower) on a padded space, cropped.
Eigen::MatrixXcd factored_product(const Eigen::MatrixXd& a_raise, const Eigen::MatrixXd& a_lower,
                                  double epsilon, double prefactor_sign, int d,
                                  const SeriesOptions& opts, bool reversed) {
    const Complex ie = kImag * epsilon;
    const Eigen::MatrixXcd e_raise = exp_series(ie * a_raise.cast<Complex>(), opts);
    const Eigen::MatrixXcd e_lower = exp_series(ie * a_lower.cast<Complex>(), opts);
    const double c = std::exp(prefactor_sign * 0.5 * epsilon * epsilon);
    Eigen::MatrixXcd product = reversed ? Eigen::MatrixXcd(e_lower * e_raise)
                                        : Eigen::MatrixXcd(e_raise * e_lower);
    return c * product.topLeftCorner(d, d);
}

} // namespace

const char* route_name(Route r) {
    switch (r) {
        case Route::harmonic_closed: return "harmonic_closed";
        case Route::harmonic_factored: return "harmonic_factored";
        case Route::q_closed: return "q_closed";
        case Route::q_factored_series: return "q_factored_series";
        case Route::q_dressed_series: return "q_dressed_series";
        case Route::harmonic_effective: return "harmonic_effective";
    }
    return "unknown";
}

Route route_from_name(std::string_view name) {
    for (Route r : {Route::harmonic_closed, Route::harmonic_factored, Route::q_closed,
                    Route::q_factored_series, Route::q_dressed_series, Route::harmonic_effective}) {
        if (name == route_name(r)) return r;
    }
    throw std::invalid_argument("unknown coupling route '" + std::string(name) + "'");
}

Eigen::MatrixXcd exp_series(const Eigen::MatrixXcd& g, const SeriesOptions& opts) {
    if (g.rows() != g.cols()) throw std::invalid_argument("exp_series: matrix must be square");
    const auto n = g.rows();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    double prev_mag = 1.0;
    for (int k = 1; k <= opts.max_terms; ++k) {
        term = (term * g) / static_cast<double>(k);
        sum += term;
        const double mag = term.cwiseAbs().maxCoeff();
        if (mag <= opts.tol * sum.cwiseAbs().maxCoeff()) return sum;
        prev_mag = mag;
    }
    throw NumericalError("exp_series: no convergence within " + std::to_string(opts.max_terms) +
                         " terms (last term max-abs " + std::to_string(prev_mag) + ")");
}

CouplingMatrix f_harmonic(double epsilon, TruncationDim D) {
    require_epsilon(epsilon);
    const int d = D.value();
    CouplingMatrix out;
    out.route = Route::harmonic_closed;
    out.epsilon = epsilon;
    out.q = 1.0;
    out.dim = d;
    out.mat = Eigen::MatrixXcd::Identity(d, d);
    if (epsilon == 0.0) return out;

    const double e2 = epsilon * epsilon;
    const double log_eps = std::log(epsilon);
    const double pref = -0.5 * e2;
    for (int m = 0; m < d; ++m) {
        for (int n = m; n < d; ++n) {
            const int s = n - m;
            // sqrt(m!/n!) eps^s, assembled in the log domain to survive large n.
            const double mag = std::exp(pref + s * log_eps +
                                        0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)));
            const double lag = std::assoc_laguerre(static_cast<unsigned>(m),
                                                   static_cast<unsigned>(s), e2);
            const Complex value = i_pow(s) * (mag * lag);
            out.mat(m, n) = value;
            out.mat(n, m) = value; // F is complex symmetric
        }
    }
    return out;
}

CouplingMatrix f_harmonic_factored(double epsilon, TruncationDim D, int pad,
                                   const SeriesOptions& opts) {
    CouplingMatrix out = fq_factored(epsilon, 1.0, D, pad, opts);
    out.route = Route::harmonic_factored;
    return out;
}

CouplingMatrix fq_closed(double epsilon, double q, TruncationDim D) {
    require_epsilon(epsilon);
    const int d = D.value();
    CouplingMatrix out;
    out.route = Route::q_closed;
    out.epsilon = epsilon;
    out.q = q;
    out.dim = d;
    out.mat = Eigen::MatrixXcd::Identity(d, d);
    if (epsilon == 0.0) {
        (void)qcore::q_number(1.0, q); // still validate q
        return out;
    }

    // Log tables: lqf[j] = log([j]_q!), lf[j] = log(j!).
    std::vector<double> lqf(static_cast<size_t>(d)), lf(static_cast<size_t>(d));
    lqf[0] = 0.0;
    lf[0] = 0.0;
    for (int j = 1; j < d; ++j) {
        lqf[static_cast<size_t>(j)] =
            lqf[static_cast<size_t>(j - 1)] + qcore::log_q_number(static_cast<double>(j), q);
        lf[static_cast<size_t>(j)] = std::lgamma(j + 1.0);
    }

    const double e2 = epsilon * epsilon;
    const double log_eps = std::log(epsilon);
    const double pref = -0.5 * e2;
    for (int m = 0; m < d; ++m) {
        for (int n = m; n < d; ++n) {
            const int s = n - m;
            // sum_{k} (-1)^k exp[(s+2k) ln eps + (log [m]! + log [n]!)/2
            //                    - log k! - log (s+k)! - log [m-k]!]
            double sum = 0.0;
            const double base = 0.5 * (lqf[static_cast<size_t>(m)] + lqf[static_cast<size_t>(n)]);
            for (int k = 0; k <= m; ++k) {
                const double lg = (s + 2 * k) * log_eps + base - lf[static_cast<size_t>(k)] -
                                  std::lgamma(s + k + 1.0) - lqf[static_cast<size_t>(m - k)];
                const double t = std::exp(lg);
                sum += (k % 2 == 0) ? t : -t;
            }
            const Complex value = i_pow(s) * (std::exp(pref) * sum);
            out.mat(m, n) = value;
            out.mat(n, m) = value; // mirror block: same expression with m, n swapped
        }
    }
    return out;
}

CouplingMatrix fq_factored(double epsilon, double q, TruncationDim D, int pad,
                           const SeriesOptions& opts) {
    require_epsilon(epsilon);
    require_pad(pad);
    const int d = D.value();
    const auto ops = qcore::build_operators(TruncationDim(d + pad), q);

    CouplingMatrix out;
    out.route = Route::q_factored_series;
    out.epsilon = epsilon;
    out.q = q;
    out.dim = d;
    out.pad = pad;
    out.series = opts;
    out.mat = factored_product(ops.a_raise, ops.a_lower, epsilon, -1.0, d, opts, false);
    return out;
}

CouplingMatrix fq_dressed(double epsilon, double q, TruncationDim D, int pad,
                          const SeriesOptions& opts) {
    require_epsilon(epsilon);
    require_pad(pad);
    const int d = D.value();
    const auto harmonic = qcore::build_operators(TruncationDim(d + pad), 1.0);
    const auto deformed = qcore::build_operators(TruncationDim(d + pad), q);

    // A+ = f(N) a+,  A = a f(N): dressed generators built from the ordinary
    // ladder matrices and the diagonal dressing, not from the q-ladder.
    const Eigen::MatrixXd raise_dressed = deformed.f_diag.asDiagonal() * harmonic.a_raise;
    const Eigen::MatrixXd lower_dressed = harmonic.a_lower * deformed.f_diag.asDiagonal();

    CouplingMatrix out;
    out.route = Route::q_dressed_series;
    out.epsilon = epsilon;
    out.q = q;
    out.dim = d;
    out.pad = pad;
    out.series = opts;
    out.mat = factored_product(raise_dressed, lower_dressed, epsilon, -1.0, d, opts, false);
    return out;
}

Eigen::MatrixXcd fq_factored_reversed(double epsilon, double q, TruncationDim D, int pad,
                                      const SeriesOptions& opts) {
    require_epsilon(epsilon);
    require_pad(pad);
    const int d = D.value();
    const auto ops = qcore::build_operators(TruncationDim(d + pad), q);
    return factored_product(ops.a_raise, ops.a_lower, epsilon, +1.0, d, opts, true);
}

double effective_lamb_dicke(double epsilon, const qstates::MotionalState& state, double q) {
    require_epsilon(epsilon);
    return epsilon * std::sqrt(qstates::expectation_f2(state, q));
}

CouplingMatrix f_effective(double epsilon, const qstates::MotionalState& state, double q,
                           TruncationDim D) {
    const double eps_q = effective_lamb_dicke(epsilon, state, q);
    CouplingMatrix out = f_harmonic(eps_q, D);
    out.mat *= std::exp(0.5 * (eps_q * eps_q - epsilon * epsilon));
    out.route = Route::harmonic_effective;
    out.epsilon = epsilon;
    out.q = q;
    return out;
}

} // namespace qion::coupling
