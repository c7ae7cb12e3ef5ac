#include "qion/qcore.hpp"
#include "qion/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qion::qcore {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

void require_q(double q) {
    require_finite(q, "q");
    if (q <= 0.0) throw std::invalid_argument("q must be > 0");
}

// log(sinh(y)) for y > 0 without overflowing sinh.
double log_sinh(double y) {
    if (y > 350.0) return y - std::log(2.0) + std::log1p(-std::exp(-2.0 * y));
    return std::log(std::sinh(y));
}

} // namespace

QParams QParams::from_tau(double tau, double epsilon, double omega_bar, double delta_bar) {
    require_finite(tau, "tau");
    require_finite(epsilon, "epsilon");
    require_finite(omega_bar, "omega_bar");
    require_finite(delta_bar, "delta_bar");
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
    QParams p;
    p.tau = tau;
    p.q = tau == 0.0 ? 1.0 : std::exp(tau);
    p.epsilon = epsilon;
    p.omega_bar = omega_bar;
    p.delta_bar = delta_bar;
    return p;
}

QParams QParams::from_q(double q, double epsilon, double omega_bar, double delta_bar) {
    require_q(q);
    QParams p = from_tau(q == 1.0 ? 0.0 : std::log(q), epsilon, omega_bar, delta_bar);
    p.q = q; // keep the caller's q bit-exact; tau is the derived one here
    return p;
}

TruncationDim::TruncationDim(int d) : d_(d) {
    if (d < 2) throw std::invalid_argument("truncation dimension must be >= 2, got " + std::to_string(d));
}

double q_number(double x, double q) {
    require_finite(x, "x");
    require_q(q);
    if (q == 1.0) return x;
    // (q^x - q^-x)/(q - q^-1) = sinh(x tau)/sinh(tau); the sinh form keeps
    // precision near q = 1 where the plain quotient cancels catastrophically.
    const double tau = std::log(q);
    return std::sinh(tau * x) / std::sinh(tau);
}

double log_q_number(double x, double q) {
    require_finite(x, "x");
    require_q(q);
    if (x <= 0.0) throw std::invalid_argument("log_q_number requires x > 0");
    if (q == 1.0) return std::log(x);
    // [x]_q = [x]_{1/q}, so work with |tau|.
    const double tau = std::abs(std::log(q));
    return log_sinh(tau * x) - log_sinh(tau);
}

double q_factorial(int n, double q) {
    if (n < 0) throw std::invalid_argument("q_factorial requires n >= 0");
    require_q(q);
    double acc = 1.0;
    for (int k = 2; k <= n; ++k) {
        acc *= q_number(static_cast<double>(k), q);
        if (std::isinf(acc)) {
            throw NumericalError("q_factorial overflow at n = " + std::to_string(k) +
                                 "; use log_q_factorial");
        }
    }
    return acc;
}

double log_q_factorial(int n, double q) {
    if (n < 0) throw std::invalid_argument("log_q_factorial requires n >= 0");
    require_q(q);
    double acc = 0.0;
    for (int k = 2; k <= n; ++k) acc += log_q_number(static_cast<double>(k), q);
    return acc;
}

QExpSum q_exponential(double x, double q, double tol, int max_terms) {
    require_finite(x, "x");
    require_q(q);
    if (x < 0.0) throw std::invalid_argument("q_exponential requires x >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("q_exponential requires tol > 0");
    if (max_terms < 1) throw std::invalid_argument("q_exponential requires max_terms >= 1");

    double sum = 1.0; // n = 0 term
    double term = 1.0;
    int n = 0;
    while (n < max_terms) {
        ++n;
        term *= x / q_number(static_cast<double>(n), q);
        sum += term;
        if (term <= tol * sum) return {sum, n + 1};
    }
    if (term > tol * sum) {
        throw NumericalError("q_exponential did not converge within " +
                             std::to_string(max_terms) + " terms (x = " + std::to_string(x) + ")");
    }
    return {sum, n + 1};
}

double f_of_n(int n, double q) {
    if (n < 0) throw std::invalid_argument("f_of_n requires n >= 0");
    require_q(q);
    if (n == 0) return 1.0;
    return std::sqrt(q_number(static_cast<double>(n), q) / static_cast<double>(n));
}

OperatorSet build_operators(TruncationDim D, double q) {
    require_q(q);
    const int d = D.value();

    OperatorSet ops;
    ops.q = q;
    ops.dim = d;
    ops.a_lower = Eigen::MatrixXd::Zero(d, d);
    ops.num = Eigen::MatrixXd::Zero(d, d);
    ops.f_diag = Eigen::VectorXd::Zero(d);

    ops.f_diag(0) = 1.0;
    for (int n = 1; n < d; ++n) {
        ops.a_lower(n - 1, n) = std::sqrt(q_number(static_cast<double>(n), q));
        ops.f_diag(n) = f_of_n(n, q);
    }
    for (int n = 0; n < d; ++n) ops.num(n, n) = static_cast<double>(n);
    ops.a_raise = ops.a_lower.transpose();
    return ops;
}

} // namespace qion::qcore
