#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qion/errors.hpp"
#include "qion/io.hpp"
#include "qion/qstates.hpp"

#include <cmath>
#include <regex>
#include <string>

using namespace qion;
using qcore::Complex;
using qcore::TruncationDim;
using qstates::InternalLevel;

namespace {
const double kTau = 0.003;
const double kQ = std::exp(kTau);
} // namespace

TEST_CASE("fock_state") {
    const auto s0 = qstates::fock_state(0, TruncationDim(4));
    CHECK(s0.amps(0) == Complex(1.0, 0.0));
    CHECK(s0.amps.tail(3).cwiseAbs().maxCoeff() == 0.0);

    const auto s3 = qstates::fock_state(3, TruncationDim(4));
    CHECK(s3.amps(3) == Complex(1.0, 0.0));
    CHECK(s3.amps.norm() == 1.0);

    CHECK_THROWS_AS(qstates::fock_state(4, TruncationDim(4)), std::invalid_argument);
    CHECK_THROWS_AS(qstates::fock_state(-1, TruncationDim(4)), std::invalid_argument);
}

TEST_CASE("q_coherent_state at alpha = 0 is the vacuum") {
    const auto s = qstates::q_coherent_state({0.0, 0.0}, 1.3, TruncationDim(8), 1e-9);
    CHECK(s.amps(0) == Complex(1.0, 0.0));
    CHECK(s.amps.tail(7).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.meta.tail_mass == 0.0);
}

TEST_CASE("q = 1 reduction to the ordinary coherent state") {
    const int d = 80;
    const auto s = qstates::q_coherent_state({4.0, 0.0}, 1.0, TruncationDim(d), 1e-9);
    CHECK(std::abs(s.amps.norm() - 1.0) <= 1e-12);

    // reference amplitudes e^{-8} 4^n / sqrt(n!), renormalized on the support
    Eigen::VectorXd ref(d);
    double amp = std::exp(-8.0);
    for (int n = 0; n < d; ++n) {
        if (n > 0) amp *= 4.0 / std::sqrt(static_cast<double>(n));
        ref(n) = amp;
    }
    ref /= ref.norm();
    for (int n = 0; n < d; ++n) {
        CHECK(std::abs(s.amps(n).real() - ref(n)) <= 1e-12);
        CHECK(s.amps(n).imag() == 0.0);
    }

    // mean occupancy |alpha|^2
    double mean = 0.0;
    for (int n = 0; n < d; ++n) mean += n * std::norm(s.amps(n));
    CHECK(mean == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("canonical q-coherent amplitudes match the extended-precision oracle") {
    const int d = 100;
    const auto s = qstates::q_coherent_state({4.0, 0.0}, kQ, TruncationDim(d), 1e-9);
    const auto ref = oracles::coherent_reference(4.0L, kQ, d);
    const long double norm = std::sqrt(ref.head_sum);
    for (int n = 0; n < d; ++n) {
        const double expected = static_cast<double>(ref.amps[static_cast<std::size_t>(n)] / norm);
        CHECK(std::abs(s.amps(n).real() - expected) <= 1e-12 * std::max(std::abs(expected), 1e-30));
    }
    CHECK(s.meta.tail_mass < 1e-40);
    CHECK(s.meta.tail_mass >= 0.0);
}

TEST_CASE("complex alpha phases the amplitudes") {
    const Complex alpha(1.0, 1.0);
    const auto s = qstates::q_coherent_state(alpha, kQ, TruncationDim(40), 1e-9);
    // amps[n] proportional to alpha^n: check the phase of n = 2 against n = 0
    const Complex ratio = s.amps(2) / s.amps(0);
    const Complex expected = alpha * alpha / std::sqrt(qcore::q_number(1.0, kQ) * qcore::q_number(2.0, kQ));
    CHECK(std::abs(ratio - expected) <= 1e-12);
    CHECK(std::abs(s.amps.norm() - 1.0) <= 1e-12);
}

TEST_CASE("truncation-too-small error names the minimal adequate D") {
    try {
        (void)qstates::q_coherent_state({4.0, 0.0}, 1.0, TruncationDim(30), 1e-9);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        const std::string msg = e.what();
        std::smatch m;
        REQUIRE(std::regex_search(msg, m, std::regex("minimal adequate D = (\\d+)")));
        const int minimal = std::stoi(m[1]);
        CHECK(minimal > 30);
        // the reported D passes, one below it does not
        CHECK_NOTHROW(qstates::q_coherent_state({4.0, 0.0}, 1.0, TruncationDim(minimal), 1e-9));
        CHECK_THROWS_AS(
            qstates::q_coherent_state({4.0, 0.0}, 1.0, TruncationDim(minimal - 1), 1e-9),
            NumericalError);
    }
}

TEST_CASE("recorded tail mass is non-increasing in D") {
    double prev = 1.0;
    for (int d : {60, 80, 100, 120}) {
        const auto s = qstates::q_coherent_state({4.0, 0.0}, kQ, TruncationDim(d), 1e-6);
        CHECK(s.meta.tail_mass <= prev);
        prev = s.meta.tail_mass;
    }
}

TEST_CASE("expectation_f2") {
    // q = 1: identically one
    const auto harm = qstates::q_coherent_state({4.0, 0.0}, 1.0, TruncationDim(80), 1e-9);
    CHECK(qstates::expectation_f2(harm, 1.0) == doctest::Approx(1.0).epsilon(1e-13));

    // f(1) = 1 regardless of q
    const auto one = qstates::fock_state(1, TruncationDim(8));
    CHECK(qstates::expectation_f2(one, 2.0) == 1.0);
    CHECK(qstates::expectation_f2(one, 0.5) == 1.0);

    // the reported scalar: 1.0004 for alpha = 4, tau = 0.003
    const auto canon = qstates::q_coherent_state({4.0, 0.0}, kQ, TruncationDim(100), 1e-9);
    const double f2 = qstates::expectation_f2(canon, kQ);
    CHECK(std::abs(f2 - 1.0004) <= 2e-4);
    CHECK(f2 == doctest::Approx(static_cast<double>(oracles::coherent_f2(4.0L, kQ, 100)))
                    .epsilon(1e-12));
    CHECK(f2 >= 1.0);

    // nonnegative for every constructed state
    for (int n = 0; n < 5; ++n) {
        CHECK(qstates::expectation_f2(qstates::fock_state(n, TruncationDim(8)), 1.4) >= 0.0);
    }
}

TEST_CASE("joint_state embedding and layout") {
    const auto g0 = qstates::joint_state(InternalLevel::ground, qstates::fock_state(0, TruncationDim(2)));
    CHECK(g0.amps.size() == 4);
    CHECK(g0.amps(0) == Complex(1.0, 0.0));
    CHECK(g0.amps.tail(3).cwiseAbs().maxCoeff() == 0.0);

    const auto e0 = qstates::joint_state(InternalLevel::excited, qstates::fock_state(0, TruncationDim(2)));
    CHECK(e0.amps(2) == Complex(1.0, 0.0));
    CHECK(std::abs(e0.amps.norm() - 1.0) <= 1e-15);

    const auto coherent = qstates::q_coherent_state({4.0, 0.0}, kQ, TruncationDim(90), 1e-9);
    const auto joint = qstates::joint_state(InternalLevel::ground, coherent);
    CHECK((joint.amps.head(90) - coherent.amps).cwiseAbs().maxCoeff() == 0.0);
    CHECK(joint.amps.tail(90).cwiseAbs().maxCoeff() == 0.0);
    CHECK(joint.motional_dim == 90);
}

TEST_CASE("state JSON layout") {
    const auto s = qstates::q_coherent_state({4.0, 0.0}, kQ, TruncationDim(64), 1e-9);
    const auto j = io::state_to_json(s);
    CHECK(j["kind"] == "motional_state");
    CHECK(j["dim"] == 64);
    CHECK(j["entries"].size() == 64);
    CHECK(j["entries"][3].size() == 3); // (index, re, im)
    CHECK(j["entries"][3][0] == 3);
    CHECK(j["meta"]["construction"] == "q_coherent");
    CHECK(j["meta"]["q"].get<double>() == doctest::Approx(kQ));

    const auto joint = qstates::joint_state(InternalLevel::excited, qstates::fock_state(1, TruncationDim(3)));
    const auto jj = io::state_to_json(joint);
    CHECK(jj["kind"] == "joint_state");
    CHECK(jj["layout"] == "g_block_first");
    CHECK(jj["entries"][4][1] == 1.0); // |e,1> lives at index 3 + 1
}
