#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qion/errors.hpp"
#include "qion/qcore.hpp"

#include <cmath>
#include <limits>

using namespace qion;
using qcore::TruncationDim;

namespace {
const double kTau = 0.003;
const double kQ = std::exp(kTau);
} // namespace

TEST_CASE("q_number basics") {
    CHECK(qcore::q_number(0.0, 2.0) == 0.0);
    CHECK(qcore::q_number(0.0, 0.7) == 0.0);
    CHECK(qcore::q_number(5.0, 1.0) == 5.0);
    CHECK(qcore::q_number(1.0, 3.0) == doctest::Approx(1.0).epsilon(1e-15));

    // [2]_q = q + 1/q = 2 cosh(tau)
    CHECK(qcore::q_number(2.0, kQ) == doctest::Approx(2.0 * std::cosh(kTau)).epsilon(1e-15));
    // hand value from the oracle
    CHECK(qcore::q_number(2.0, kQ) == doctest::Approx(2.0000090000067502).epsilon(1e-13));
    // [3]_q = q^2 + 1 + q^-2 = 1 + 2 cosh(2 tau)
    CHECK(qcore::q_number(3.0, kQ) ==
          doctest::Approx(1.0 + 2.0 * std::cosh(2.0 * kTau)).epsilon(1e-15));

    // non-integer arguments are allowed
    CHECK(qcore::q_number(2.5, 2.0) ==
          doctest::Approx(static_cast<double>(oracles::q_number(2.5L, 2.0L))).epsilon(1e-14));
}

TEST_CASE("q_number rejects bad input") {
    CHECK_THROWS_AS(qcore::q_number(std::numeric_limits<double>::quiet_NaN(), 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(qcore::q_number(std::numeric_limits<double>::infinity(), 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(qcore::q_number(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(qcore::q_number(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("q_number symmetry under q <-> 1/q") {
    for (double q : {0.5, 0.9, 1.05, 2.0, 5.0}) {
        for (double x : {0.5, 1.0, 2.0, 7.5, 31.0, 100.0}) {
            const double a = qcore::q_number(x, q);
            const double b = qcore::q_number(x, 1.0 / q);
            CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
        }
    }
}

TEST_CASE("q_number continuity at the harmonic limit") {
    for (double q : {1.0 + 1e-9, 1.0 - 1e-9}) {
        for (double x : {1.0, 3.0, 10.0, 50.0, 100.0}) {
            CHECK(std::abs(qcore::q_number(x, q) - x) <= 1e-8 * x);
        }
    }
}

TEST_CASE("ladder identity [n+1] - q[n] = q^-n") {
    for (double q : {0.5, 0.95, 1.0, 1.05, 2.0}) {
        for (int n = 0; n <= 100; ++n) {
            const double lhs = qcore::q_number(n + 1.0, q) - q * qcore::q_number(n, q);
            const double rhs = std::pow(q, -n);
            const double scale = std::max(1.0, q * qcore::q_number(n, q));
            CHECK(std::abs(lhs - rhs) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("q_factorial values") {
    CHECK(qcore::q_factorial(0, 2.0) == 1.0);
    CHECK(qcore::q_factorial(1, 0.3) == 1.0);
    CHECK(qcore::q_factorial(3, 1.0) == 6.0);
    // [1] = 1, [2] = 2.5, [3] = 5.25 at q = 2
    CHECK(qcore::q_factorial(3, 2.0) == doctest::Approx(13.125).epsilon(1e-14));
    CHECK(qcore::q_factorial(10, kQ) ==
          doctest::Approx(static_cast<double>(oracles::q_factorial(10, kQ))).epsilon(1e-13));
    CHECK_THROWS_AS(qcore::q_factorial(-1, 2.0), std::invalid_argument);
}

TEST_CASE("q_factorial overflow reporting and log-domain variant") {
    CHECK_THROWS_AS(qcore::q_factorial(400, 1.5), NumericalError);

    // log variant agrees with the plain product where both are representable
    // (the plain product at q = 1.1 already overflows near n = 103)
    for (int n : {5, 40, 90}) {
        for (double q : {0.9, 1.0, 1.1}) {
            const double direct = std::log(qcore::q_factorial(n, q));
            CHECK(qcore::log_q_factorial(n, q) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
    // and stays finite far past the overflow point
    const double big = qcore::log_q_factorial(400, 1.5);
    CHECK(std::isfinite(big));
    CHECK(big > 700.0); // e^700 is unrepresentable, so the plain product had to throw
}

TEST_CASE("q_exponential") {
    const auto at_zero = qcore::q_exponential(0.0, 2.0, 1e-15);
    CHECK(at_zero.value == 1.0);
    CHECK(at_zero.terms >= 1);

    const auto e1 = qcore::q_exponential(1.0, 1.0, 1e-16);
    CHECK(e1.value == doctest::Approx(std::exp(1.0)).epsilon(1e-14));

    // canonical normalization sum against the 200-term extended oracle
    const auto big = qcore::q_exponential(16.0, kQ, 1e-16);
    CHECK(big.value ==
          doctest::Approx(static_cast<double>(oracles::q_exponential(16.0L, kQ, 200))).epsilon(1e-12));
    CHECK(big.value == doctest::Approx(8862841.8765682187).epsilon(1e-12));
    CHECK(big.terms > 20);
    CHECK(big.terms < 200);

    CHECK_THROWS_AS(qcore::q_exponential(-1.0, 2.0, 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(qcore::q_exponential(1.0, 2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(qcore::q_exponential(50.0, 1.0, 1e-16, 10), NumericalError);
}

TEST_CASE("f_of_n") {
    CHECK(qcore::f_of_n(0, 2.0) == 1.0);
    CHECK(qcore::f_of_n(1, 0.5) == 1.0);
    CHECK(qcore::f_of_n(1, 3.0) == 1.0);
    for (int n : {1, 2, 7, 40}) CHECK(qcore::f_of_n(n, 1.0) == 1.0);
    CHECK(qcore::f_of_n(2, 2.0) == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
    CHECK_THROWS_AS(qcore::f_of_n(-1, 2.0), std::invalid_argument);
}

TEST_CASE("QParams keeps q and tau consistent") {
    const auto a = qcore::QParams::from_tau(kTau, 0.05, 50.0, -50.0);
    CHECK(a.q == doctest::Approx(std::exp(kTau)).epsilon(1e-16));
    CHECK(a.tau == kTau);
    CHECK_FALSE(a.harmonic());

    const auto b = qcore::QParams::from_q(1.0, 0.0, 1.0, 0.0);
    CHECK(b.tau == 0.0);
    CHECK(b.harmonic());

    const auto c = qcore::QParams::from_tau(0.0, 0.0, 1.0, 0.0);
    CHECK(c.q == 1.0);

    CHECK_THROWS_AS(qcore::QParams::from_q(-1.0, 0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(qcore::QParams::from_tau(0.0, -0.5, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("build_operators matrix elements") {
    CHECK_THROWS_AS(TruncationDim(1), std::invalid_argument);
    CHECK_THROWS_AS(TruncationDim(0), std::invalid_argument);

    const auto tiny = qcore::build_operators(TruncationDim(2), 1.0);
    CHECK(tiny.a_lower(0, 1) == 1.0);
    CHECK(tiny.a_lower.cwiseAbs().sum() == 1.0); // single nonzero entry

    const auto harm = qcore::build_operators(TruncationDim(4), 1.0);
    CHECK(harm.a_lower(2, 3) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-16));
    CHECK(harm.num(2, 2) == 2.0);
    CHECK((harm.a_raise - harm.a_lower.transpose()).cwiseAbs().maxCoeff() == 0.0);

    const auto def = qcore::build_operators(TruncationDim(4), kQ);
    const double three_q = 1.0 + 2.0 * std::cosh(2.0 * kTau);
    CHECK(def.a_lower(2, 3) == doctest::Approx(std::sqrt(three_q)).epsilon(1e-14));
    CHECK(def.a_lower(2, 3) == doctest::Approx(std::sqrt(3.000036000108)).epsilon(1e-12));
    CHECK(def.f_diag(0) == 1.0);
    for (int n = 1; n < 4; ++n) {
        CHECK(def.f_diag(n) ==
              doctest::Approx(std::sqrt(qcore::q_number(n, kQ) / n)).epsilon(1e-15));
    }
}

TEST_CASE("truncated q-commutation relations hold on the interior") {
    for (double q : {0.95, 1.0, 1.05}) {
        const auto ops = qcore::build_operators(TruncationDim(60), q);

        Eigen::MatrixXd comm = ops.a_lower * ops.a_raise - q * ops.a_raise * ops.a_lower;
        for (int n = 0; n < 60; ++n) comm(n, n) -= std::pow(q, -n);
        CHECK(comm.topLeftCorner(59, 59).cwiseAbs().maxCoeff() <= 1e-12);

        const Eigen::MatrixXd r1 = ops.num * ops.a_raise - ops.a_raise * ops.num - ops.a_raise;
        const Eigen::MatrixXd r2 = ops.num * ops.a_lower - ops.a_lower * ops.num + ops.a_lower;
        CHECK(r1.topLeftCorner(59, 59).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(r2.topLeftCorner(59, 59).cwiseAbs().maxCoeff() <= 1e-12);

        // boundary row of AA+ is a pure truncation artifact and is excluded
        CHECK(std::abs(comm(59, 59)) > 0.1);
    }
}

TEST_CASE("A+A acts as [n] while N stays undeformed") {
    const double q = 1.05;
    const auto ops = qcore::build_operators(TruncationDim(40), q);
    const Eigen::MatrixXd prod = ops.a_raise * ops.a_lower;
    for (int n = 0; n < 40; ++n) {
        CHECK(prod(n, n) == doctest::Approx(qcore::q_number(n, q)).epsilon(1e-14));
    }
    // N != A+A away from the harmonic point
    CHECK((prod - ops.num).cwiseAbs().maxCoeff() > 1e-3);
    // ...and equals it exactly at q = 1
    const auto h = qcore::build_operators(TruncationDim(40), 1.0);
    CHECK(((h.a_raise * h.a_lower) - h.num).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("q-quantities at q = 1 +- 1e-9 stay near harmonic values") {
    for (double q : {1.0 - 1e-9, 1.0 + 1e-9}) {
        const auto ops = qcore::build_operators(TruncationDim(30), q);
        const auto harm = qcore::build_operators(TruncationDim(30), 1.0);
        CHECK((ops.a_lower - harm.a_lower).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK((ops.f_diag - harm.f_diag).cwiseAbs().maxCoeff() <= 1e-8);
    }
}
