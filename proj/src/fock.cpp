#include "anyon/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "anyon/dimer.hpp"
#include "anyon/statistics.hpp"

namespace anyon::fock {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix number_matrix(int cutoff) {
    Matrix n = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int k = 0; k <= cutoff; ++k) n(k, k) = double(k);
    return n;
}

Matrix phase_matrix(int cutoff, double theta) {
    Matrix p = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int k = 0; k <= cutoff; ++k) p(k, k) = std::polar(1.0, theta * k);
    return p;
}

// out += alpha * (X -> A X B)
void add_sandwich(Matrix& out, cplx alpha, const Matrix& left, const Matrix& right) {
    const Eigen::Index d = left.rows();
    for (Eigen::Index l = 0; l < d; ++l)
        for (Eigen::Index j = 0; j < d; ++j) {
            const cplx bl = right(l, j);
            if (bl == 0.0) continue;
            const cplx s = alpha * bl;
            for (Eigen::Index k = 0; k < d; ++k)
                for (Eigen::Index i = 0; i < d; ++i) {
                    const cplx ak = left(i, k);
                    if (ak != 0.0) out(i + d * j, k + d * l) += s * ak;
                }
        }
}

// out += alpha * (A X) or alpha * (X A), skipping the identity factor.
void add_left(Matrix& out, cplx alpha, const Matrix& a) {
    const Eigen::Index d = a.rows();
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k)
            for (Eigen::Index i = 0; i < d; ++i)
                if (a(i, k) != 0.0) out(i + d * j, k + d * j) += alpha * a(i, k);
}

void add_right(Matrix& out, cplx alpha, const Matrix& b) {
    const Eigen::Index d = b.rows();
    for (Eigen::Index l = 0; l < d; ++l)
        for (Eigen::Index j = 0; j < d; ++j) {
            if (b(l, j) == 0.0) continue;
            const cplx s = alpha * b(l, j);
            for (Eigen::Index i = 0; i < d; ++i) out(i + d * j, i + d * l) += s;
        }
}

cplx conj_amplitude(cplx amp, Conjugation c) { return c == Conjugation::Modulus ? std::conj(amp) : amp; }

// Excitation count of each basis state.
std::vector<int> excitations(const FockSystem& sys) {
    std::vector<int> n(static_cast<std::size_t>(sys.dimension));
    for (Eigen::Index k = 0; k < sys.dimension; ++k) {
        double v = sys.n1(k, k).real();
        if (sys.modes == 2) v += sys.n2(k, k).real();
        n[static_cast<std::size_t>(k)] = static_cast<int>(std::lround(v));
    }
    return n;
}

} // namespace

Matrix anyon_ladder_matrix(int cutoff, double theta) {
    if (cutoff < 1) throw ValidationError("cutoff must be >= 1");
    Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) {
        const cplx qn = stats::q_number(n, theta);
        // roots of [n]_q land at roundoff, whose sqrt would carry a random 1e-8 phase
        if (std::abs(qn) > 64.0 * std::numeric_limits<double>::epsilon() * n) a(n - 1, n) = std::sqrt(qn);
    }
    return a;
}

std::pair<Matrix, Matrix> braided_embedding(int cutoff, double theta) {
    const Matrix a = anyon_ladder_matrix(cutoff, theta);
    const Matrix id = Matrix::Identity(cutoff + 1, cutoff + 1);
    return {kron(a, id), kron(phase_matrix(cutoff, theta), a)};
}

FockSystem make_fock_system(int cutoff, double theta, int modes) {
    if (modes != 1 && modes != 2) throw ValidationError("modes must be 1 or 2");
    if (cutoff < 1) throw ValidationError("cutoff must be >= 1");
    if (!std::isfinite(theta)) throw ValidationError("theta must be finite");
    FockSystem s;
    s.cutoff = cutoff;
    s.modes = modes;
    s.theta = theta;
    const Matrix a = anyon_ladder_matrix(cutoff, theta);
    if (modes == 1) {
        s.dimension = cutoff + 1;
        s.a1 = a;
        s.a1_dag = a.transpose();
        s.n1 = number_matrix(cutoff);
        s.phase_string = phase_matrix(cutoff, theta);
        return s;
    }
    const Matrix id = Matrix::Identity(cutoff + 1, cutoff + 1);
    s.dimension = (cutoff + 1) * (cutoff + 1);
    std::tie(s.a1, s.a2) = braided_embedding(cutoff, theta);
    s.a1_dag = s.a1.transpose();
    // The string is a genuine unitary; only the q-ladder takes the formal adjoint.
    s.a2_dag = kron(phase_matrix(cutoff, -theta), a.transpose());
    s.n1 = kron(number_matrix(cutoff), id);
    s.n2 = kron(id, number_matrix(cutoff));
    s.phase_string = kron(phase_matrix(cutoff, theta), id);
    s.site2 = kron(id, a);
    s.site2_dag = s.site2.transpose();
    return s;
}

Matrix build_hamiltonian(const FockSystem& sys, const AnyonParams& p, const GeneratorOptions& opts) {
    p.validate();
    Matrix h = opts.rotating_frame ? Matrix::Zero(sys.dimension, sys.dimension) : Matrix(p.omega * sys.total_number());
    if (sys.modes == 1) return h;

    const double jc = dimer::effective_coupling(p, opts.frequency);
    const cplx fwd = std::polar(1.0, 0.5 * sys.theta);
    switch (opts.hamiltonian) {
    case HamiltonianForm::Site:
        h += p.coupling_j * (sys.a1_dag * sys.a2 + sys.a2_dag * sys.a1);
        break;
    case HamiltonianForm::NormalModeDeformed:
        h += jc * (fwd * sys.a1_dag * sys.a2 + std::conj(fwd) * sys.a2_dag * sys.a1);
        break;
    case HamiltonianForm::NormalMode: {
        const Eigen::Index m = sys.cutoff + 1;
        const Matrix b = anyon_ladder_matrix(sys.cutoff, 0.0);
        const Matrix id = Matrix::Identity(m, m);
        const Matrix b1 = kron(b, id), b2 = kron(id, b);
        h += jc * (fwd * b1.transpose() * b2 + std::conj(fwd) * b2.transpose() * b1);
        break;
    }
    }
    return h;
}

std::vector<JumpOperator> jump_operators(const FockSystem& sys, const AnyonParams& p, const GeneratorOptions& opts) {
    p.validate();
    const cplx n = stats::thermal_occupation(p.theta, p.beta, p.omega);
    const cplx em = std::sqrt(p.gamma * (n + 1.0));
    const cplx ab = std::sqrt(p.gamma * n);
    const bool raising = opts.absorption == AbsorptionOperator::Raising;
    std::vector<JumpOperator> jumps;

    if (sys.modes == 1) {
        jumps.push_back({"emission", em * sys.a1, conj_amplitude(em, opts.conjugation) * sys.a1_dag});
        const Matrix& op = raising ? sys.a1_dag : sys.a1;
        const Matrix& op_dag = raising ? sys.a1 : sys.a1_dag;
        jumps.push_back({"absorption", ab * op, conj_amplitude(ab, opts.conjugation) * op_dag});
        return jumps;
    }

    const double r2 = std::sqrt(0.5);
    if (opts.jump_basis == JumpBasis::Site) {
        for (const bool emission : {true, false}) {
            const cplx amp = emission ? em : ab;
            const bool up = !emission && raising;
            for (const int sg : {1, -1}) {
                const double w = std::sqrt(std::max(0.0, 1.0 + sg * p.xi)) * r2;
                const Matrix low = sys.a1 + double(sg) * sys.a2;
                const Matrix high = sys.a1_dag + double(sg) * sys.a2_dag;
                JumpOperator j;
                j.label = std::string(emission ? "emission" : "absorption") + (sg > 0 ? "+" : "-");
                j.op = amp * w * (up ? high : low);
                j.op_dag = conj_amplitude(amp, opts.conjugation) * w * (up ? low : high);
                jumps.push_back(std::move(j));
            }
        }
        return jumps;
    }

    const cplx e = std::polar(1.0, 0.5 * sys.theta);
    const Matrix bp = r2 * (sys.a1 + e * sys.a2), bm = r2 * (sys.a1 - e * sys.a2);
    const Matrix bpd = r2 * (sys.a1_dag + std::conj(e) * sys.a2_dag), bmd = r2 * (sys.a1_dag - std::conj(e) * sys.a2_dag);
    // W_eff sums lambda lambda^* without the dissipator's 1/2; sqrt 2 makes the two agree.
    const double s2 = std::sqrt(2.0);
    for (const auto& ch : dimer::lindblad_coefficients(p).channels) {
        const bool up = !ch.emission && raising;
        const cplx lp = s2 * ch.lambda_plus(), lm = s2 * ch.lambda_minus();
        const cplx lpc = s2 * ch.lambda_plus_conj(opts.conjugation), lmc = s2 * ch.lambda_minus_conj(opts.conjugation);
        JumpOperator j;
        j.label = std::string(ch.label);
        j.op = up ? Matrix(lp * bpd + lm * bmd) : Matrix(lp * bp + lm * bm);
        j.op_dag = up ? Matrix(lpc * bp + lmc * bm) : Matrix(lpc * bpd + lmc * bmd);
        jumps.push_back(std::move(j));
    }
    return jumps;
}

Matrix sandwich_superop(const Matrix& left, const Matrix& right) {
    const Eigen::Index d = left.rows();
    Matrix out = Matrix::Zero(d * d, d * d);
    add_sandwich(out, 1.0, left, right);
    return out;
}

Matrix build_liouvillian(const FockSystem& sys, const Matrix& hamiltonian, const std::vector<JumpOperator>& jumps) {
    const Eigen::Index d = sys.dimension;
    Matrix out = Matrix::Zero(d * d, d * d);
    const cplx i(0.0, 1.0);
    add_left(out, -i, hamiltonian);
    add_right(out, i, hamiltonian);
    for (const auto& j : jumps) {
        const Matrix ml = j.op_dag * j.op;
        add_sandwich(out, 1.0, j.op, j.op_dag);
        add_left(out, -0.5, ml);
        add_right(out, -0.5, ml);
    }
    return out;
}

Matrix build_liouvillian(const FockSystem& sys, const AnyonParams& p, const GeneratorOptions& opts) {
    return build_liouvillian(sys, build_hamiltonian(sys, p, opts), jump_operators(sys, p, opts));
}

void assemble(FockSystem& sys, const AnyonParams& p, const GeneratorOptions& opts) {
    if (opts.require_two_excitations && sys.cutoff < 2)
        throw ValidationError("cutoff must be >= 2 to hold the two-excitation manifold");
    sys.hamiltonian = build_hamiltonian(sys, p, opts);
    sys.liouvillian = build_liouvillian(sys, sys.hamiltonian, jump_operators(sys, p, opts));
    sys.rotating_frame = opts.rotating_frame;
}

Vector vec(const Matrix& rho) { return Eigen::Map<const Vector>(rho.data(), rho.size()); }

Matrix unvec(const Vector& v, Eigen::Index dimension) {
    if (v.size() != dimension * dimension) throw ValidationError("vector length does not match dimension^2");
    return Eigen::Map<const Matrix>(v.data(), dimension, dimension);
}

Vector trace_functional(Eigen::Index dimension) { return vec(Matrix::Identity(dimension, dimension)); }

double DensityState::trace_defect() const { return std::abs(matrix.trace() - 1.0); }

double DensityState::hermiticity_defect() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }

double DensityState::min_eigenvalue() const {
    const Matrix h = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DensityState vacuum_state(Eigen::Index dimension) {
    DensityState s{Matrix::Zero(dimension, dimension)};
    s.matrix(0, 0) = 1.0;
    return s;
}

DensityState propagate(const Matrix& liouvillian, const DensityState& state, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("propagation time must be finite and >= 0");
    const Eigen::Index d = state.matrix.rows();
    if (t == 0.0) return state;
    const Matrix e = dense::expm(liouvillian * t);
    return {unvec(dense::apply(e, vec(state.matrix)), d)};
}

DensityState steady_state(const Matrix& liouvillian, Eigen::Index dimension) {
    Matrix m = liouvillian;
    m.row(0) = trace_functional(dimension).transpose();
    Vector rhs = Vector::Zero(m.rows());
    rhs(0) = 1.0;
    dense::LuFactorization lu(std::move(m));
    if (lu.rcond() < 1e-14) throw ComputeError("steady state is not unique (singular constrained generator)");
    return {unvec(lu.solve(rhs), dimension)};
}

ResolventResult resolvent_apply(const Matrix& liouvillian, double omega, int sign, const Vector& v) {
    const Resolvent g(liouvillian, omega, sign);
    ResolventResult r;
    r.x = g.apply(v);
    r.rcond = g.rcond();
    const Vector res = dense::apply(liouvillian, r.x) + cplx(0.0, sign * omega) * r.x + v;
    const double vn = v.norm();
    r.residual = vn > 0.0 ? res.norm() / vn : res.norm();
    return r;
}

Resolvent::Resolvent(const Matrix& liouvillian, double omega, int sign)
    : omega_(omega), sign_(sign) {
    if (sign != 1 && sign != -1) throw ValidationError("resolvent sign must be +1 or -1");
    if (!std::isfinite(omega)) throw ValidationError("resolvent frequency must be finite");
    Matrix m = liouvillian;
    m.diagonal().array() += cplx(0.0, sign * omega);
    lu_ = dense::LuFactorization(std::move(m));
}

Vector Resolvent::apply(const Vector& v) const { return -lu_.solve(v); }

Vector Resolvent::apply_transpose(const Vector& v) const { return -lu_.solve_transpose(v); }

DecayFit fit_decay_rate(const std::vector<cplx>& samples, double dt, double t0) {
    const std::size_t n = samples.size();
    if (n < 3) throw ValidationError("decay fit needs at least 3 samples");
    if (!(dt > 0.0)) throw ValidationError("sample spacing must be positive");

    std::vector<double> t(n), logmag(n), phase(n);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = t0 + dt * double(k);
        const double m = std::abs(samples[k]);
        if (!(m > 0.0)) throw ComputeError("decay fit: zero sample magnitude");
        logmag[k] = std::log(m);
        phase[k] = std::arg(samples[k]);
        if (k > 0) {
            double step = phase[k] - phase[k - 1];
            step -= 2.0 * kPi * std::round(step / (2.0 * kPi));
            phase[k] = phase[k - 1] + step;
        }
    }
    auto slope = [&](const std::vector<double>& y, double& intercept) {
        const double tm = std::accumulate(t.begin(), t.end(), 0.0) / double(n);
        const double ym = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            sxy += (t[k] - tm) * (y[k] - ym);
            sxx += (t[k] - tm) * (t[k] - tm);
        }
        const double s = sxy / sxx;
        intercept = ym - s * tm;
        return s;
    };
    double lm0 = 0.0, ph0 = 0.0;
    cplx s = cplx(slope(logmag, lm0), slope(phase, ph0)); // exponent -Gamma - i Omega
    cplx amp = std::polar(std::exp(lm0), ph0);

    auto residual_norm = [&](cplx a, cplx e) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += std::norm(samples[k] - a * std::exp(e * t[k]));
        return std::sqrt(acc);
    };

    // Levenberg-Marquardt on the complex-analytic model A e^{s t}.
    double mu = 1e-3;
    double current = residual_norm(amp, s);
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::Matrix2cd jtj = Eigen::Matrix2cd::Zero();
        Eigen::Vector2cd jtr = Eigen::Vector2cd::Zero();
        for (std::size_t k = 0; k < n; ++k) {
            const cplx e = std::exp(s * t[k]);
            const cplx r = samples[k] - amp * e;
            const Eigen::Vector2cd g(e, amp * t[k] * e);
            jtj += g.conjugate() * g.transpose();
            jtr += g.conjugate() * r;
        }
        Eigen::Matrix2cd damped = jtj;
        damped.diagonal() *= (1.0 + mu);
        const Eigen::Vector2cd delta = damped.partialPivLu().solve(jtr);
        const cplx amp_new = amp + delta(0), s_new = s + delta(1);
        const double trial = residual_norm(amp_new, s_new);
        if (std::isfinite(trial) && trial <= current) {
            const double gain = current - trial;
            amp = amp_new;
            s = s_new;
            current = trial;
            mu = std::max(mu * 0.3, 1e-12);
            if (gain <= 1e-15 * (1.0 + current) && std::abs(delta(1)) <= 1e-14 * (1.0 + std::abs(s))) break;
        } else {
            mu *= 10.0;
            if (mu > 1e12) break;
        }
    }

    double ynorm = 0.0;
    for (const auto& y : samples) ynorm += std::norm(y);
    DecayFit fit;
    fit.rate = -s.real();
    fit.frequency = -s.imag();
    fit.amplitude = amp;
    fit.residual = current / std::sqrt(ynorm);
    fit.converged = fit.residual <= kFitResidualLimit;
    return fit;
}

std::vector<Eigen::Index> sector_indices(const FockSystem& sys, std::initializer_list<int> differences) {
    const Eigen::Index d = sys.dimension;
    const std::vector<int> nex = excitations(sys);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) {
            const int delta = nex[std::size_t(i)] - nex[std::size_t(j)];
            if (std::find(differences.begin(), differences.end(), delta) != differences.end()) idx.push_back(i + d * j);
        }
    return idx;
}

Matrix sector_block(const Matrix& liouvillian, const std::vector<Eigen::Index>& idx) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    Matrix block(m, m);
    for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index r = 0; r < m; ++r) block(r, c) = liouvillian(idx[std::size_t(r)], idx[std::size_t(c)]);
    return block;
}

Vector gather(const Vector& v, const std::vector<Eigen::Index>& idx) {
    Vector out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out(Eigen::Index(k)) = v(idx[k]);
    return out;
}

Vector scatter(const Vector& v, const std::vector<Eigen::Index>& idx, Eigen::Index full_size) {
    Vector out = Vector::Zero(full_size);
    for (std::size_t k = 0; k < idx.size(); ++k) out(idx[k]) = v(Eigen::Index(k));
    return out;
}

std::vector<cplx> coherence_eigenvalues(const FockSystem& sys, const Matrix& liouvillian, int excitation_difference) {
    const Eigen::Index d = sys.dimension;
    if (liouvillian.rows() != d * d) throw ValidationError("Liouvillian does not match the Fock system");
    const std::vector<Eigen::Index> idx = sector_indices(sys, {excitation_difference});
    if (idx.empty()) return {};
    const auto m = static_cast<Eigen::Index>(idx.size());
    const Matrix block = sector_block(liouvillian, idx);
    Eigen::ComplexEigenSolver<Matrix> es(block, false);
    if (es.info() != Eigen::Success) throw ComputeError("eigen-decomposition of the coherence sector failed");
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + m);
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

} // namespace anyon::fock
