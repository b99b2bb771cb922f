#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "anyon/dimer.hpp"
#include "anyon/statistics.hpp"
#include "support.hpp"

using namespace anyon;
using namespace anyon::dimer;
using testing_support::uniform;

namespace {

AnyonParams random_params() {
    AnyonParams p;
    p.theta = uniform(0.0, kPi);
    p.xi = uniform(-1.0, 1.0);
    p.beta = uniform(0.2, 4.0);
    p.gamma = uniform(0.01, 0.3);
    p.coupling_j = uniform(0.0, 0.5);
    return p;
}

// Multiset distance between two eigenvalue pairs.
double pair_distance(const std::array<cplx, 2>& a, const std::array<cplx, 2>& b) {
    return std::min(std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1])),
                    std::max(std::abs(a[0] - b[1]), std::abs(a[1] - b[0])));
}

} // namespace

TEST_CASE("normal-mode frequencies under both conventions") {
    AnyonParams p;
    p.theta = kPi / 2;
    auto [wp, wm] = normal_mode_frequencies(p, FrequencyConvention::AppendixHalfAngle);
    CHECK(std::abs(wp - (1.0 + 0.2 * std::cos(kPi / 4))) < 1e-15);
    CHECK(std::abs(wm - (1.0 - 0.2 * std::cos(kPi / 4))) < 1e-15);
    std::tie(wp, wm) = normal_mode_frequencies(p, FrequencyConvention::MainTextFullAngle);
    CHECK(std::abs(wp - 1.0) < 1e-15);
    CHECK(std::abs(wm - 1.0) < 1e-15);
    p.theta = 0.0;
    std::tie(wp, wm) = normal_mode_frequencies(p);
    CHECK(wp == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(wm == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("channel coefficients") {
    AnyonParams p;
    p.xi = 0.3;
    p.theta = 1.0;
    const auto set = lindblad_coefficients(p);
    const cplx n = stats::thermal_occupation(1.0, 1.0, 1.0);
    // |lambda_+|^2 + |lambda_-|^2 over both emission channels = gamma |n + 1| (1 + xi)/4 + ... = gamma |n+1| / 2
    double em = 0.0;
    for (int k = 0; k < 2; ++k)
        em += std::norm(set.channels[k].lambda_plus()) + std::norm(set.channels[k].lambda_minus());
    CHECK(std::abs(em - 0.1 * std::abs(n + 1.0)) < 1e-15);
    CHECK(set.channels[0].emission);
    CHECK_FALSE(set.channels[3].emission);
    // Analytic conjugation leaves the amplitude unconjugated.
    const auto& ch = set.channels[2];
    CHECK(std::abs(ch.lambda_plus_conj(Conjugation::Analytic) - ch.amplitude * ch.weight_plus) < 1e-16);
    CHECK(std::abs(ch.lambda_plus_conj(Conjugation::Modulus) - std::conj(ch.lambda_plus())) < 1e-16);
}

TEST_CASE("xi structure of W_eff") {
    for (int trial = 0; trial < 200; ++trial) {
        AnyonParams p = random_params();
        for (auto conj : {Conjugation::Modulus, Conjugation::Analytic}) {
            WeffOptions o;
            o.conjugation = conj;
            p.xi = 0.0;
            const auto m0 = build_weff(p, o);
            CHECK(std::abs(m0.b) <= 1e-14);
            CHECK(std::abs(m0.c) <= 1e-14);
            const double xi = uniform(-1.0, 1.0);
            p.xi = xi;
            const auto mp = build_weff(p, o);
            p.xi = -xi;
            const auto mm = build_weff(p, o);
            CHECK(std::abs(mp.a.real() - m0.a.real()) <= 1e-12);
            CHECK(std::abs(mp.d.real() - m0.d.real()) <= 1e-12);
            CHECK(pair_distance(mp.eigenvalues, mm.eigenvalues) <= 1e-12);
        }
    }
}

TEST_CASE("closed-form eigen-analysis against a general eigensolver") {
    for (int trial = 0; trial < 1000; ++trial) {
        const AnyonParams p = random_params();
        WeffOptions o;
        o.conjugation = trial % 2 ? Conjugation::Analytic : Conjugation::Modulus;
        o.stat_dephasing = trial % 3 == 0;
        const auto m = build_weff(p, o);
        Eigen::Matrix2cd w;
        w << m.a, m.b, m.c, m.d;
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(w);
        const std::array<cplx, 2> ref{es.eigenvalues()(0), es.eigenvalues()(1)};
        const double scale = w.norm();
        if (m.eigenvector_condition < 1e6) {
            CHECK(pair_distance(m.eigenvalues, ref) <= 1e-12 * scale);
            for (int k = 0; k < 2; ++k) {
                const auto& v = m.right_eigenvectors[k];
                Eigen::Vector2cd vv(v[0], v[1]);
                CHECK(std::abs(vv.norm() - 1.0) < 1e-14);
                CHECK((w * vv - m.eigenvalues[k] * vv).norm() <= 1e-12 * scale);
            }
        }
        CHECK(std::abs(m.trace() - (m.eigenvalues[0] + m.eigenvalues[1])) <= 1e-14 * scale);
        for (int k = 0; k < 2; ++k)
            if (m.eigenvalues[k].real() < 0) CHECK(m.lifetimes[k] == doctest::Approx(-1.0 / m.eigenvalues[k].real()));
    }
}

TEST_CASE("statistical dephasing shifts both decay rates equally") {
    AnyonParams p;
    p.theta = 1.2;
    p.xi = 0.4;
    WeffOptions o;
    const auto m0 = build_weff(p, o);
    o.stat_dephasing = true;
    const auto m1 = build_weff(p, o);
    const double gs = stats::gamma_stat(p.theta, p.z(), p.gamma);
    CHECK(std::abs((m0.a - m1.a) - gs) < 1e-15);
    CHECK(std::abs((m0.d - m1.d) - gs) < 1e-15);
    for (int k = 0; k < 2; ++k) CHECK(std::abs(m0.eigenvalues[k] - m1.eigenvalues[k] - gs) < 1e-14);
}

TEST_CASE("exceptional point at full bath correlation") {
    AnyonParams p;
    p.xi = 1.0;
    const auto ep = find_exceptional_point(p, {0.0, kPi});
    CHECK(ep.found);
    CHECK(ep.theta_star > 2.0);
    CHECK(ep.theta_star < kPi);
    CHECK(ep.gap < 1e-6 * p.gamma);
    p.theta = ep.theta_star;
    const auto m = build_weff(p);
    CHECK(m.eigenvector_condition > 1e3);

    // Rates bifurcate past the EP: equal below, split above.
    p.theta = ep.theta_star - 0.2;
    const auto below = build_weff(p);
    CHECK(std::abs(below.eigenvalues[0].real() - below.eigenvalues[1].real()) < 1e-12);
    p.theta = std::min(kPi, ep.theta_star + 0.3);
    const auto above = build_weff(p);
    CHECK(std::abs(above.eigenvalues[0].real() - above.eigenvalues[1].real()) > 1e-3);

    p.xi = 0.0;
    CHECK_FALSE(find_exceptional_point(p, {0.0, kPi}).found);
    CHECK_THROWS_AS(find_exceptional_point(p, {1.0, 0.5}), ValidationError);
}

TEST_CASE("analytic conjugation has no exact coalescence") {
    AnyonParams p;
    p.xi = 1.0;
    WeffOptions o;
    o.conjugation = Conjugation::Analytic;
    const auto ep = find_exceptional_point(p, {0.0, kPi}, o);
    CHECK_FALSE(ep.found);
    CHECK(ep.gap > 1e-3);
}

TEST_CASE("branch tracking keeps continuity") {
    std::vector<std::array<cplx, 2>> raw = {{cplx(0, 1), cplx(0, -1)}, {cplx(0, -0.9), cplx(0, 0.9)}, {cplx(0, 0.8), cplx(0, -0.8)}};
    const auto t = track_branches(raw);
    for (const auto& e : t) CHECK(e[0].imag() > 0);
}

TEST_CASE("bright mode") {
    AnyonParams p;
    const auto m = build_weff(p);
    // At theta = 0 the antisymmetric mode is dark.
    const auto w = dipole_brightness(m, 0.0);
    const int bright = bright_branch(m, 0.0);
    CHECK(w[std::size_t(1 - bright)] < 1e-14);
    CHECK(w[std::size_t(bright)] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    // and it is the upper-frequency mode omega + J
    CHECK(-m.eigenvalues[std::size_t(bright)].imag() == doctest::Approx(1.2).epsilon(1e-14));
}
