#include "qion/qstates.hpp"
#include "qion/errors.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace qion::qstates {

namespace {

constexpr double kNormTol = 1e-12;
// How far past D the analytic tail is followed before declaring convergence.
constexpr int kTailScanLimit = 100000;

std::string short_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

} // namespace

MotionalState fock_state(int n, TruncationDim D) {
    const int d = D.value();
    if (n < 0 || n >= d) {
        throw std::invalid_argument("fock_state: n = " + std::to_string(n) +
                                    " out of range for D = " + std::to_string(d));
    }
    MotionalState s;
    s.amps = Eigen::VectorXcd::Zero(d);
    s.amps(n) = 1.0;
    s.meta.kind = StateMeta::Kind::fock;
    s.meta.fock_n = n;
    s.meta.dim = d;
    return s;
}

MotionalState q_coherent_state(Complex alpha, double q, TruncationDim D, double tail_tol) {
    if (!(tail_tol > 0.0)) throw std::invalid_argument("q_coherent_state: tail_tol must be > 0");
    const int d = D.value();
    const double a2 = std::norm(alpha);

    // Unnormalized weights w_n = |alpha|^{2n} / [n]_q!, built by recursion so
    // nothing overflows even when [n]_q! itself would.
    Eigen::VectorXcd amps(d);
    std::vector<double> w(static_cast<size_t>(d));
    Complex amp(1.0, 0.0);
    double weight = 1.0;
    double head = 0.0;
    for (int n = 0; n < d; ++n) {
        if (n > 0) {
            const double qn = qcore::q_number(static_cast<double>(n), q);
            amp *= alpha / std::sqrt(qn);
            weight *= a2 / qn;
        }
        amps(n) = amp;
        w[static_cast<size_t>(n)] = weight;
        head += weight;
    }

    // Analytic tail sum_{n>=D} |alpha|^{2n}/[n]_q!, relative to the full
    // q-exponential.  The terms decay strictly (|alpha|^2/[n]_q < 1 once n is
    // large enough), so we can also locate the minimal adequate D.
    double tail = 0.0;
    double term = weight;
    int n = d;
    double partial = head;
    int minimal_d = -1;
    std::vector<double> terms;
    while (n < d + kTailScanLimit) {
        term *= a2 / qcore::q_number(static_cast<double>(n), q);
        terms.push_back(term);
        tail += term;
        partial += term;
        ++n;
        if (term <= 1e-18 * partial && term < tail_tol * 1e-6) break;
    }
    const double total = head + tail;
    const double tail_rel = tail / total;

    if (tail_rel > tail_tol) {
        // Walk the recorded terms to find the smallest D' whose tail passes.
        double remaining = tail;
        minimal_d = d + static_cast<int>(terms.size());
        for (size_t k = 0; k < terms.size(); ++k) {
            if (remaining / total <= tail_tol) {
                minimal_d = d + static_cast<int>(k);
                break;
            }
            remaining -= terms[k];
        }
        throw NumericalError("q_coherent_state: truncation too small, tail mass " +
                             short_g(tail_rel) + " > " + short_g(tail_tol) +
                             " at D = " + std::to_string(d) +
                             "; minimal adequate D = " + std::to_string(minimal_d));
    }

    // Normalize by the q-exponential, then re-normalize exactly on the
    // truncated support so downstream unitarity checks see a unit vector.
    amps /= std::sqrt(total);
    const double norm = amps.norm();
    amps /= norm;

    MotionalState s;
    s.amps = std::move(amps);
    s.meta.kind = StateMeta::Kind::q_coherent;
    s.meta.alpha = alpha;
    s.meta.q = q;
    s.meta.dim = d;
    s.meta.tail_mass = tail_rel;
    s.meta.tail_tol = tail_tol;

    if (std::abs(s.amps.norm() - 1.0) > kNormTol) {
        throw NumericalError("q_coherent_state: normalization failed");
    }
    return s;
}

double expectation_f2(const MotionalState& state, double q) {
    if (std::abs(state.amps.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("expectation_f2: state is not normalized");
    }
    double acc = std::norm(state.amps(0)); // f(0)^2 = 1
    for (int n = 1; n < state.dim(); ++n) {
        const double f = qcore::f_of_n(n, q);
        acc += std::norm(state.amps(n)) * f * f;
    }
    return acc;
}

JointState joint_state(InternalLevel level, const MotionalState& motional) {
    if (std::abs(motional.amps.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("joint_state: motional state is not normalized");
    }
    const int d = motional.dim();
    JointState js;
    js.motional_dim = d;
    js.amps = Eigen::VectorXcd::Zero(2 * d);
    const int offset = level == InternalLevel::ground ? 0 : d;
    js.amps.segment(offset, d) = motional.amps;
    return js;
}

} // namespace qion::qstates
