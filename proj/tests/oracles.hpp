// oracles.hpp — test-only reference implementations in extended precision.
//
// Everything here is deliberately independent of the library: plain long
// double recursions evaluated straight from the defining formulas, used to
// freeze expected values and to cross-check the double-precision paths.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

inline long double q_number(long double x, long double q) {
    if (q == 1.0L) return x;
    const long double tau = std::log(q);
    return std::sinh(tau * x) / std::sinh(tau);
}

inline long double q_factorial(int n, long double q) {
    long double acc = 1.0L;
    for (int k = 2; k <= n; ++k) acc *= q_number(static_cast<long double>(k), q);
    return acc;
}

// Brute-force q-exponential, fixed term count.
inline long double q_exponential(long double x, long double q, int terms = 200) {
    long double sum = 1.0L, term = 1.0L;
    for (int n = 1; n <= terms; ++n) {
        term *= x / q_number(static_cast<long double>(n), q);
        sum += term;
    }
    return sum;
}

// Unnormalized q-coherent amplitudes alpha^n / sqrt([n]_q!) for real alpha,
// plus the normalization sum over `total_terms` terms (>= dim).
struct CoherentReference {
    std::vector<long double> amps; // length dim, unnormalized
    long double norm_sum = 0.0L;   // sum over total_terms of |amp|^2
    long double head_sum = 0.0L;   // sum over the first dim terms
};

inline CoherentReference coherent_reference(long double alpha, long double q, int dim,
                                            int total_terms = 600) {
    CoherentReference ref;
    ref.amps.resize(static_cast<std::size_t>(dim));
    long double amp = 1.0L;
    for (int n = 0; n < total_terms; ++n) {
        if (n > 0) amp *= alpha / std::sqrt(q_number(static_cast<long double>(n), q));
        if (n < dim) {
            ref.amps[static_cast<std::size_t>(n)] = amp;
            ref.head_sum += amp * amp;
        }
        ref.norm_sum += amp * amp;
    }
    return ref;
}

// <f^2(N)> and <N> on the truncated, renormalized q-coherent state.
inline long double coherent_f2(long double alpha, long double q, int dim) {
    const auto ref = coherent_reference(alpha, q, dim);
    long double acc = ref.amps[0] * ref.amps[0];
    for (int n = 1; n < dim; ++n) {
        acc += ref.amps[static_cast<std::size_t>(n)] * ref.amps[static_cast<std::size_t>(n)] *
               q_number(static_cast<long double>(n), q) / n;
    }
    return acc / ref.head_sum;
}

inline long double coherent_mean_n(long double alpha, long double q, int dim) {
    const auto ref = coherent_reference(alpha, q, dim);
    long double acc = 0.0L;
    for (int n = 1; n < dim; ++n) {
        acc += static_cast<long double>(n) * ref.amps[static_cast<std::size_t>(n)] *
               ref.amps[static_cast<std::size_t>(n)];
    }
    return acc / ref.head_sum;
}

} // namespace oracles
