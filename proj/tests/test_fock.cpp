#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "anyon/dimer.hpp"
#include "anyon/fock.hpp"
#include "anyon/statistics.hpp"
#include "support.hpp"

using namespace anyon;
using namespace anyon::fock;
using testing_support::uniform;

namespace {

// Max |entry| of a a^dag - e^{i theta} a^dag a - I over basis states whose mode occupation < cutoff.
double deformed_defect(const Matrix& a, const Matrix& a_dag, const Matrix& n, int cutoff, double theta) {
    const Matrix d = a * a_dag - std::polar(1.0, theta) * a_dag * a - Matrix::Identity(a.rows(), a.cols());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (Eigen::Index j = 0; j < d.cols(); ++j)
            if (n(i, i).real() < cutoff && n(j, j).real() < cutoff) worst = std::max(worst, std::abs(d(i, j)));
    return worst;
}

GeneratorOptions options(JumpBasis basis, Conjugation conj = Conjugation::Modulus) {
    GeneratorOptions o;
    o.jump_basis = basis;
    o.conjugation = conj;
    return o;
}

// Samples of <a>(t) = Tr(a rho(t)) for the single-mode boson from (|0> + |1>)/sqrt 2.
std::vector<cplx> boson_coherence_series(int cutoff, double dt, int steps) {
    AnyonParams p;
    FockSystem s = make_fock_system(cutoff, 0.0, 1);
    const Matrix l = build_liouvillian(s, p, options(JumpBasis::Site));
    Vector psi = Vector::Zero(s.dimension);
    psi(0) = psi(1) = std::sqrt(0.5);
    Vector v = vec(psi * psi.adjoint());
    const Matrix step = dense::expm(l * dt);
    const Vector probe = vec(s.a1.transpose());
    std::vector<cplx> out;
    for (int k = 0; k < steps; ++k) {
        out.push_back(probe.dot(v) == 0.0 ? cplx(0.0) : (probe.transpose() * v)(0));
        v = step * v;
    }
    return out;
}

} // namespace

TEST_CASE("ladder matrix examples") {
    const Matrix b = anyon_ladder_matrix(4, 0.0);
    for (int n = 1; n <= 4; ++n) CHECK(std::abs(b(n - 1, n) - std::sqrt(double(n))) < 1e-15);
    const Matrix f = anyon_ladder_matrix(1, kPi);
    CHECK(f.rows() == 2);
    CHECK(std::abs(f(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(f(0, 0)) + std::abs(f(1, 0)) + std::abs(f(1, 1)) == 0.0);
    const Matrix h = anyon_ladder_matrix(3, kPi / 2);
    CHECK(std::abs(h(1, 2) - std::sqrt(cplx(1.0, 1.0))) < 1e-15);
    // [2]_q = 0 at theta = pi kills the second rung.
    CHECK(anyon_ladder_matrix(2, kPi)(1, 2) == cplx(0.0));
    CHECK_THROWS_AS(anyon_ladder_matrix(0, 0.0), ValidationError);
}

TEST_CASE("deformed commutation relation and braiding") {
    for (double theta : {0.0, 0.4, kPi / 2, 2.3355, kPi}) {
        for (int cutoff : {2, 4}) {
            const FockSystem s = make_fock_system(cutoff, theta, 2);
            CHECK(deformed_defect(s.a1, s.a1_dag, s.n1, cutoff, theta) <= 1e-13);
            CHECK(deformed_defect(s.a2, s.a2_dag, s.n2, cutoff, theta) <= 1e-13);
            const cplx q = std::polar(1.0, theta);
            CHECK((s.a1 * s.a2 - q * s.a2 * s.a1).cwiseAbs().maxCoeff() <= 1e-13);
            CHECK((s.a1 * s.a2_dag - std::conj(q) * s.a2_dag * s.a1).cwiseAbs().maxCoeff() <= 1e-13);
            // Phi = [a, a^dag] has eigenvalue e^{i theta n} below the cutoff.
            const Matrix phi = s.a1 * s.a1_dag - s.a1_dag * s.a1;
            for (Eigen::Index k = 0; k < s.dimension; ++k) {
                const int n = int(s.n1(k, k).real());
                if (n < cutoff) CHECK(std::abs(phi(k, k) - stats::deformed_commutator_eigenvalue(n, theta)) < 1e-13);
            }
        }
        const FockSystem single = make_fock_system(3, theta, 1);
        CHECK(deformed_defect(single.a1, single.a1_dag, single.n1, 3, theta) <= 1e-13);
    }
    const FockSystem plain = make_fock_system(3, 0.0, 2);
    CHECK((plain.a1 * plain.a2 - plain.a2 * plain.a1).cwiseAbs().maxCoeff() == 0.0);
    const FockSystem fermi = make_fock_system(2, kPi, 2);
    for (Eigen::Index k = 0; k < fermi.dimension; ++k)
        CHECK(std::abs(fermi.phase_string(k, k) - (int(fermi.n1(k, k).real()) % 2 ? -1.0 : 1.0)) < 1e-15);
    CHECK_THROWS_AS(make_fock_system(2, 0.0, 3), ValidationError);
}

TEST_CASE("Hamiltonian forms") {
    AnyonParams p;
    p.coupling_j = 0.0;
    const FockSystem s = make_fock_system(2, 0.8, 2);
    const Matrix h0 = build_hamiltonian(s, p);
    CHECK((h0 - Matrix(p.omega * (s.n1 + s.n2))).norm() == 0.0);

    p.coupling_j = 0.2;
    // One-excitation block: basis |1,0> and |0,1>.
    auto block = [](const Matrix& h, int cutoff) {
        const Eigen::Index i10 = cutoff + 1, i01 = 1;
        Eigen::Matrix2cd b;
        b << h(i10, i10), h(i10, i01), h(i01, i10), h(i01, i01);
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(b);
        std::array<double, 2> ev{es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
        std::sort(ev.begin(), ev.end());
        return ev;
    };
    for (auto form : {HamiltonianForm::NormalMode, HamiltonianForm::NormalModeDeformed, HamiltonianForm::Site}) {
        GeneratorOptions o;
        o.hamiltonian = form;
        const auto ev = block(build_hamiltonian(make_fock_system(2, 0.0, 2), p, o), 2);
        CHECK(ev[0] == doctest::Approx(0.8).epsilon(1e-14));
        CHECK(ev[1] == doctest::Approx(1.2).epsilon(1e-14));
    }
    p.theta = kPi / 2;
    const FockSystem h = make_fock_system(2, p.theta, 2);
    for (auto conv : {FrequencyConvention::AppendixHalfAngle, FrequencyConvention::MainTextFullAngle}) {
        GeneratorOptions o;
        o.frequency = conv;
        const auto ev = block(build_hamiltonian(h, p, o), 2);
        const auto [wp, wm] = dimer::normal_mode_frequencies(p, conv);
        CHECK(ev[0] == doctest::Approx(wm).epsilon(1e-14));
        CHECK(ev[1] == doctest::Approx(wp).epsilon(1e-14));
    }
    GeneratorOptions site;
    site.hamiltonian = HamiltonianForm::Site;
    const auto ev = block(build_hamiltonian(h, p, site), 2);
    CHECK(ev[1] == doctest::Approx(1.2).epsilon(1e-14)); // the single-quantum hop carries no phase
    GeneratorOptions rot;
    rot.rotating_frame = true;
    CHECK(std::abs(build_hamiltonian(h, p, rot)(0, 0)) == 0.0);
    CHECK(std::abs(build_hamiltonian(h, p, rot)(4, 4)) < 1e-15);
}

TEST_CASE("Liouvillian preserves trace") {
    for (int trial = 0; trial < 12; ++trial) {
        AnyonParams p;
        p.theta = uniform(0.0, kPi);
        p.xi = uniform(-1.0, 1.0);
        p.beta = uniform(0.3, 3.0);
        const FockSystem s = make_fock_system(2, p.theta, 2);
        GeneratorOptions o = options(trial % 2 ? JumpBasis::Site : JumpBasis::Deformed,
                                     trial % 3 ? Conjugation::Modulus : Conjugation::Analytic);
        o.absorption = trial % 4 == 0 ? AbsorptionOperator::Raising : AbsorptionOperator::Lowering;
        o.hamiltonian = static_cast<HamiltonianForm>(trial % 3);
        const Matrix l = build_liouvillian(s, p, o);
        const Vector t = trace_functional(s.dimension);
        const Vector rho = vec(testing_support::random_hermitian(s.dimension));
        CHECK(std::abs((t.transpose() * (l * rho)).value()) <= 1e-12);
        CHECK((l.transpose() * t).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("generators conserve the ket-bra excitation difference") {
    for (int trial = 0; trial < 8; ++trial) {
        AnyonParams p;
        p.theta = uniform(0.0, kPi);
        p.xi = uniform(-1.0, 1.0);
        FockSystem s = make_fock_system(2, p.theta, 2);
        GeneratorOptions o = options(trial % 2 ? JumpBasis::Site : JumpBasis::Deformed);
        o.absorption = trial % 4 < 2 ? AbsorptionOperator::Raising : AbsorptionOperator::Lowering;
        o.hamiltonian = static_cast<HamiltonianForm>(trial % 3);
        const Matrix l = build_liouvillian(s, p, o);
        for (int delta = -2; delta <= 2; ++delta) {
            const auto inside = sector_indices(s, {delta});
            std::vector<Eigen::Index> outside;
            for (Eigen::Index k = 0; k < l.rows(); ++k)
                if (!std::binary_search(inside.begin(), inside.end(), k)) outside.push_back(k);
            double leak = 0.0;
            for (Eigen::Index r : outside)
                for (Eigen::Index c : inside) leak = std::max(leak, std::abs(l(r, c)));
            CHECK(leak == 0.0);
        }
    }
    const FockSystem s = make_fock_system(2, 0.0, 2);
    CHECK(sector_indices(s, {-1, 0, 1}).size() + 2 * sector_indices(s, {2}).size() +
              2 * sector_indices(s, {3}).size() + 2 * sector_indices(s, {4}).size() == 81);
    const Vector v = testing_support::random_vector(81);
    const auto idx = sector_indices(s, {1});
    CHECK(gather(scatter(gather(v, idx), idx, 81), idx) == gather(v, idx));
}

TEST_CASE("unitary generator has a purely imaginary spectrum") {
    AnyonParams p;
    p.gamma = 0.0;
    p.theta = 0.7;
    FockSystem s = make_fock_system(2, p.theta, 2);
    const Matrix l = build_liouvillian(s, p, options(JumpBasis::Site));
    Eigen::ComplexEigenSolver<Matrix> es(l, false);
    CHECK(es.eigenvalues().real().cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("single-mode boson coherence eigenvalue") {
    AnyonParams p;
    const double expect = -0.05 * (2.0 / (std::exp(1.0) - 1.0) + 1.0);
    for (int cutoff : {8, 10}) {
        FockSystem s = make_fock_system(cutoff, 0.0, 1);
        const auto ev = coherence_eigenvalues(s, build_liouvillian(s, p, options(JumpBasis::Site)), 1);
        CHECK(ev.front().real() == doctest::Approx(expect).epsilon(1e-6));
        CHECK(ev.front().imag() == doctest::Approx(-1.0).epsilon(1e-6));
    }
}

TEST_CASE("two-mode sector eigenvalues reproduce W_eff at theta = 0") {
    for (double xi : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        AnyonParams p;
        p.xi = xi;
        FockSystem s = make_fock_system(4, 0.0, 2);
        const auto ev = coherence_eigenvalues(s, build_liouvillian(s, p, options(JumpBasis::Deformed)), 1);
        const auto w = dimer::build_weff(p);
        for (const cplx lam : w.eigenvalues) {
            double best = 1e9;
            for (std::size_t k = 0; k < 2; ++k) best = std::min(best, std::abs(ev[k] - lam));
            CHECK(best < 1e-10);
        }
    }
}

TEST_CASE("propagation") {
    AnyonParams p;
    FockSystem s = make_fock_system(6, 0.0, 1);
    const Matrix l = build_liouvillian(s, p, options(JumpBasis::Site));
    const DensityState vac = vacuum_state(s.dimension);
    CHECK((propagate(l, vac, 0.0).matrix - vac.matrix).norm() == 0.0);
    CHECK_THROWS_AS(propagate(l, vac, -1.0), ValidationError);

    const DensityState ss = steady_state(l, s.dimension);
    CHECK(ss.trace_defect() < 1e-12);
    CHECK((propagate(l, ss, 7.5).matrix - ss.matrix).cwiseAbs().maxCoeff() < 1e-8);
    // Both channels lower the occupation, so everything relaxes to the vacuum.
    CHECK(std::abs(ss.matrix(0, 0) - 1.0) < 1e-12);

    GeneratorOptions raising = options(JumpBasis::Site);
    raising.absorption = AbsorptionOperator::Raising;
    const Matrix lr = build_liouvillian(s, p, raising);
    const DensityState th = steady_state(lr, s.dimension);
    CHECK((propagate(lr, th, 7.5).matrix - th.matrix).cwiseAbs().maxCoeff() < 1e-8);
    // detailed balance between neighbouring levels survives the truncation
    const double z = std::exp(-1.0);
    for (int n = 0; n < 6; ++n)
        CHECK(std::abs(th.matrix(n + 1, n + 1).real() / th.matrix(n, n).real() - z) < 1e-10);
}

TEST_CASE("Hermiticity and trace preservation in the boson and fermion limits") {
    for (double theta : {0.0, kPi}) {
        AnyonParams p;
        p.theta = theta;
        p.xi = 0.4;
        FockSystem s = make_fock_system(2, theta, 2);
        const Matrix l = build_liouvillian(s, p, options(JumpBasis::Site));
        Vector psi = testing_support::random_vector(s.dimension);
        psi.normalize();
        DensityState rho{psi * psi.adjoint()};
        for (double t : {1.0, 10.0, 50.0, 100.0}) {
            const DensityState r = propagate(l, rho, t);
            CHECK(r.hermiticity_defect() <= 1e-11);
            CHECK(r.trace_defect() <= 1e-12);
            CHECK(r.min_eigenvalue() >= -1e-10);
        }
    }
}

TEST_CASE("resolvent contract") {
    AnyonParams p;
    p.theta = 1.1;
    p.xi = 0.3;
    FockSystem s = make_fock_system(2, p.theta, 2);
    const Matrix l = build_liouvillian(s, p, options(JumpBasis::Deformed));
    const Vector v = testing_support::random_vector(l.rows());
    for (double w : {-1.3, 0.4, 0.8, 1.2})
        for (int sign : {-1, 1}) {
            const auto r = resolvent_apply(l, w, sign, v);
            CHECK(r.residual <= 1e-10);
            CHECK(r.rcond > 0.0);
        }
    CHECK_THROWS_AS(Resolvent(l, 0.5, 0), ValidationError);

    // 1x1 generator -i w0 - G: Lorentzian magnitude.
    const double w0 = 0.7, g = 0.05;
    Matrix one(1, 1);
    one(0, 0) = cplx(-g, -w0);
    Vector unit = Vector::Ones(1);
    for (double w : {0.5, 0.7, 0.9}) {
        const auto r = resolvent_apply(one, w, 1, unit);
        CHECK(std::abs(r.x(0)) == doctest::Approx(1.0 / std::hypot(w - w0, g)).epsilon(1e-14));
    }
}

TEST_CASE("resolvent against time-domain quadrature") {
    AnyonParams p;
    p.theta = 0.9;
    p.xi = 0.5;
    FockSystem s = make_fock_system(2, p.theta, 2);
    const Matrix l = build_liouvillian(s, p, options(JumpBasis::Deformed));
    Matrix ket = Matrix::Zero(s.dimension, s.dimension);
    ket(3, 0) = 1.0; // |1,0><0,0|
    const Vector v = vec(ket);
    const double T = 20.0 / p.gamma, dt = 0.01;
    const int n = int(std::lround(T / dt)); // even
    const Matrix step = (l * dt).exp();
    for (double w : {0.9, 1.05, 1.3}) {
        Vector acc = Vector::Zero(v.size());
        Vector x = v;
        const cplx rot = std::polar(1.0, w * dt);
        cplx phase = 1.0;
        for (int k = 0; k <= n; ++k) {
            const double weight = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            acc += (weight * dt / 3.0) * phase * x;
            x = step * x;
            phase *= rot;
        }
        const auto r = resolvent_apply(l, w, 1, v);
        CHECK((r.x - acc).norm() <= 1e-4 * acc.norm());
    }
}

TEST_CASE("decay fit") {
    std::vector<cplx> exact;
    const cplx a(0.7, -0.2);
    for (int k = 0; k < 120; ++k) exact.push_back(a * std::exp(cplx(-0.13, -0.9) * (0.1 * k + 0.5)));
    const auto f = fit_decay_rate(exact, 0.1, 0.5);
    CHECK(std::abs(f.rate - 0.13) <= 1e-8);
    CHECK(std::abs(f.frequency - 0.9) <= 1e-8);
    CHECK(std::abs(f.amplitude - a) <= 1e-8);
    CHECK(f.converged);
    CHECK_THROWS_AS(fit_decay_rate({1.0, 0.5}, 0.1), ValidationError);
}

TEST_CASE("boson coherence decay matches the closed-form rate") {
    const double expect = 0.05 * (2.0 / (std::exp(1.0) - 1.0) + 1.0);
    const double dt = 0.25;
    const int steps = int(5.0 / 0.1 / dt) + 1;
    const auto f8 = fit_decay_rate(boson_coherence_series(8, dt, steps), dt);
    const auto f12 = fit_decay_rate(boson_coherence_series(12, dt, steps), dt);
    CHECK(f8.converged);
    CHECK(std::abs(f8.rate - expect) <= 1e-3 * expect);
    CHECK(std::abs(f8.frequency - 1.0) <= 1e-6);
    CHECK(std::abs(f12.rate - f8.rate) <= 1e-4 * f8.rate);
}

TEST_CASE("fit flags a non-exponential series near the exceptional point") {
    AnyonParams p;
    p.xi = 1.0;
    const auto ep = dimer::find_exceptional_point(p, {0.0, kPi});
    REQUIRE(ep.found);
    p.theta = ep.theta_star;
    const auto m = dimer::build_weff(p);
    Eigen::Matrix2cd w;
    w << m.a, m.b, m.c, m.d;
    std::vector<cplx> series;
    const double dt = 0.25;
    for (int k = 0; k < 200; ++k) {
        const Eigen::Vector2cd x = (w * (dt * k)).exp() * Eigen::Vector2cd(1.0, 0.0);
        series.push_back(x(0));
    }
    const auto f = fit_decay_rate(series, dt);
    CHECK_FALSE(f.converged);
    CHECK(f.residual > kFitResidualLimit);
}

TEST_CASE("spectra need the two-excitation manifold") {
    AnyonParams p;
    FockSystem s = make_fock_system(1, 0.0, 2);
    GeneratorOptions o;
    o.require_two_excitations = true;
    CHECK_THROWS_AS(assemble(s, p, o), ValidationError);
    FockSystem ok = make_fock_system(2, 0.0, 2);
    assemble(ok, p, o);
    CHECK(ok.liouvillian.rows() == 81);
}
