#include <doctest.h>

#include <cmath>

#include "anyon/statistics.hpp"
#include "support.hpp"

using namespace anyon;
using namespace anyon::stats;

namespace {

// Direct sum of the thermal distribution (1 - z) z^n weighted by e^{i theta n}.
cplx series_phase_average(double theta, double z) {
    cplx acc = 0.0;
    double w = 1.0 - z;
    for (int n = 0; n < 100000 && w > 1e-20; ++n) {
        acc += w * std::polar(1.0, theta * n);
        w *= z;
    }
    return acc;
}

} // namespace

TEST_CASE("q-number special values") {
    CHECK(std::abs(q_number(5, 0.0) - 5.0) == 0.0);
    CHECK(std::abs(q_number(2, kPi / 2) - cplx(1.0, 1.0)) < 1e-15);
    CHECK(std::abs(q_number(1, kPi) - 1.0) < 1e-15);
    CHECK(std::abs(q_number(2, kPi)) < 1e-15);
    for (int n = 0; n < 8; ++n) {
        // [n+1]_q = 1 + e^{i theta}[n]_q
        const double th = 0.7;
        CHECK(std::abs(q_number(n + 1, th) - (1.0 + std::polar(1.0, th) * q_number(n, th))) < 1e-13);
    }
}

TEST_CASE("deformed commutator eigenvalue") {
    CHECK(std::abs(deformed_commutator_eigenvalue(0, 1.3) - 1.0) < 1e-15);
    CHECK(std::abs(deformed_commutator_eigenvalue(1, kPi) + 1.0) < 1e-15);
    CHECK(std::abs(deformed_commutator_eigenvalue(3, kPi / 3) + 1.0) < 1e-15);
    for (double th : {0.3, 1.1, 2.9})
        for (int n = 0; n < 6; ++n) // Phi = 1 + (e^{i theta} - 1)[n]_q
            CHECK(std::abs(deformed_commutator_eigenvalue(n, th) - (1.0 + (std::polar(1.0, th) - 1.0) * q_number(n, th))) < 1e-14);
    CHECK_THROWS_AS(deformed_commutator_eigenvalue(-1, 0.1), ValidationError);
}

TEST_CASE("thermal occupation") {
    const double e = std::exp(1.0);
    CHECK(std::abs(thermal_occupation(0.0, 1.0, 1.0) - 1.0 / (e - 1.0)) < 1e-15);
    CHECK(std::abs(thermal_occupation(kPi, 1.0, 1.0) - 1.0 / (e + 1.0)) < 1e-15);
    const cplx n = thermal_occupation(kPi / 2, 1.0, 1.0);
    CHECK(std::abs(n - 1.0 / cplx(e, -1.0)) < 1e-15);
    CHECK_THROWS_AS(thermal_occupation(0.0, 1e-12, 1.0), ValidationError);
    CHECK_THROWS_AS(thermal_occupation(0.0, 0.0, 1.0), ValidationError);
}

TEST_CASE("phase average matches truncated series on a grid") {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i)
        for (int k = 0; k < 50; ++k) {
            const double th = kPi * i / 49.0;
            const double z = 0.01 + 0.97 * k / 49.0;
            worst = std::max(worst, std::abs(phase_average(th, z) - series_phase_average(th, z)));
        }
    CHECK(worst < 1e-10);
    CHECK(std::abs(phase_average(0.0, 0.4) - 1.0) < 1e-15);
}

TEST_CASE("gamma_stat closed forms") {
    const double g = 0.1;
    CHECK(gamma_stat(0.0, std::exp(-1.0), g) == 0.0);
    for (double bw : {0.5, 1.0, 2.0}) {
        const double nf = 1.0 / (std::exp(bw) + 1.0);
        CHECK(std::abs(gamma_stat(kPi, std::exp(-bw), g) - g * nf) < 1e-12 * g);
    }
    // Agreement with the naive (gamma/2)(1 - Re<e^{i theta N}>) where it does not cancel.
    for (int i = 0; i < 200; ++i) {
        const double th = testing_support::uniform(0.3, kPi), z = testing_support::uniform(0.05, 0.9);
        const double naive = 0.5 * g * (1.0 - phase_average(th, z).real());
        CHECK(std::abs(gamma_stat(th, z, g) - naive) < 1e-13);
    }
    // Small-angle behaviour stays relatively accurate: ~ (gamma/4) z (1 + z) theta^2 / (1 - z)^2.
    const double z = std::exp(-1.0), th = 1e-7;
    const double leading = 0.25 * g * z * (1 + z) * th * th / ((1 - z) * (1 - z));
    CHECK(std::abs(gamma_stat(th, z, g) - leading) < 1e-6 * leading);
}

TEST_CASE("gamma_stat is non-negative and monotone in theta") {
    for (int trial = 0; trial < 20; ++trial) {
        const double z = testing_support::uniform(0.01, 0.99);
        double prev = -1.0;
        for (int i = 0; i <= 400; ++i) {
            const double v = gamma_stat(kPi * i / 400.0, z, 0.1);
            CHECK(v >= 0.0);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("full single-oscillator rate") {
    AnyonParams p;
    const double boson = 0.05 * (2.0 / (std::exp(1.0) - 1.0) + 1.0);
    CHECK(std::abs(gamma_full_single(p).decay() - boson) < 1e-12);
    CHECK(gamma_full_single(p).shift() == 0.0);
    p.theta = kPi;
    const double nf = 1.0 / (std::exp(1.0) + 1.0);
    CHECK(std::abs(gamma_full_single(p).decay() - (0.05 * (2 * nf + 1) + 0.1 * nf)) < 1e-12);
    p.theta = 1.0;
    const cplx n = thermal_occupation(1.0, 1.0, 1.0);
    const cplx expect = 0.05 * (2.0 * n + 1.0) + gamma_stat(1.0, p.z(), 0.1);
    CHECK(std::abs(gamma_full_single(p).value - expect) < 1e-15);
}
