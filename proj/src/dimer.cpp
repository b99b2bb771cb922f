#include "anyon/dimer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anyon/statistics.hpp"

namespace anyon::dimer {

double effective_coupling(const AnyonParams& p, FrequencyConvention convention) {
    const double angle = convention == FrequencyConvention::AppendixHalfAngle ? 0.5 * p.theta : p.theta;
    return p.coupling_j * std::cos(angle);
}

std::pair<double, double> normal_mode_frequencies(const AnyonParams& p, FrequencyConvention convention) {
    const double jc = effective_coupling(p, convention);
    return {p.omega + jc, p.omega - jc};
}

cplx Channel::lambda_plus_conj(Conjugation c) const {
    if (c == Conjugation::Modulus) return std::conj(lambda_plus());
    return amplitude * weight_plus;
}

cplx Channel::lambda_minus_conj(Conjugation c) const {
    if (c == Conjugation::Modulus) return std::conj(lambda_minus());
    return amplitude * weight_minus * std::conj(phase);
}

ChannelSet lindblad_coefficients(const AnyonParams& p) {
    p.validate();
    const cplx n = stats::thermal_occupation(p.theta, p.beta, p.omega);
    const cplx em = std::sqrt(p.gamma * (n + 1.0));
    const cplx ab = std::sqrt(p.gamma * n);
    const double wp = 0.5 * std::sqrt(std::max(0.0, 1.0 + p.xi));
    const double wm = 0.5 * std::sqrt(std::max(0.0, 1.0 - p.xi));
    const cplx phase = std::polar(1.0, -0.5 * p.theta);
    ChannelSet set{{{
        {"emission+", true, em, wp, wp, phase},
        {"emission-", true, em, wm, -wm, phase},
        {"absorption+", false, ab, wp, wp, phase},
        {"absorption-", false, ab, wm, -wm, phase},
    }}};
    return set;
}

EffectiveMatrix build_weff(const AnyonParams& p, const WeffOptions& options) {
    const ChannelSet set = lindblad_coefficients(p);
    EffectiveMatrix m;
    std::tie(m.omega_plus, m.omega_minus) = normal_mode_frequencies(p, options.frequency);
    cplx gpp = 0.0, gmm = 0.0, gpm = 0.0, gmp = 0.0;
    for (const auto& ch : set.channels) {
        const cplx lp = ch.lambda_plus(), lm = ch.lambda_minus();
        gpp += lp * ch.lambda_plus_conj(options.conjugation);
        gmm += lm * ch.lambda_minus_conj(options.conjugation);
        gpm += lp * ch.lambda_minus_conj(options.conjugation);
        gmp += lm * ch.lambda_plus_conj(options.conjugation);
    }
    if (options.stat_dephasing) {
        const double gs = stats::gamma_stat(p.theta, p.z(), p.gamma);
        gpp += gs;
        gmm += gs;
    }
    m.a = cplx(0.0, -m.omega_plus) - gpp;
    m.d = cplx(0.0, -m.omega_minus) - gmm;
    m.b = -gpm;
    m.c = -gmp;
    return eigen_analysis(m);
}

namespace {

// Null vector of [[p, q], [r, s]] (assumed rank <= 1) from its dominant row.
std::array<cplx, 2> null_vector(cplx p, cplx q, cplx r, cplx s, int preferred) {
    const double n1 = std::norm(p) + std::norm(q);
    const double n2 = std::norm(r) + std::norm(s);
    std::array<cplx, 2> v;
    if (std::max(n1, n2) == 0.0) {
        v = preferred == 0 ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
        return v;
    }
    if (n1 >= n2)
        v = {q, -p};
    else
        v = {s, -r};
    const double norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    v[0] /= norm;
    v[1] /= norm;
    return v;
}

// 2-norm condition number of the column matrix [u v].
double condition_2x2(const std::array<cplx, 2>& u, const std::array<cplx, 2>& v) {
    const cplx m00 = u[0], m10 = u[1], m01 = v[0], m11 = v[1];
    const double fro2 = std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11);
    const double det = std::abs(m00 * m11 - m01 * m10);
    if (det == 0.0) return std::numeric_limits<double>::infinity();
    // sigma_max^2 + sigma_min^2 = fro2, sigma_max sigma_min = det
    const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
    const double smax2 = 0.5 * (fro2 + disc);
    const double smin2 = det * det / smax2;
    return std::sqrt(smax2 / smin2);
}

} // namespace

EffectiveMatrix eigen_analysis(EffectiveMatrix m) {
    const cplx root = std::sqrt(m.discriminant());
    const cplx tr = m.trace();
    m.eigenvalues = {0.5 * (tr + root), 0.5 * (tr - root)};
    for (int k = 0; k < 2; ++k) {
        const cplx lam = m.eigenvalues[k];
        m.right_eigenvectors[k] = null_vector(m.a - lam, m.b, m.c, m.d - lam, k);
        const double re = m.eigenvalues[k].real();
        m.lifetimes[k] = re < 0.0 ? -1.0 / re : std::numeric_limits<double>::infinity();
    }
    m.eigenvector_condition = condition_2x2(m.right_eigenvectors[0], m.right_eigenvectors[1]);
    m.near_defective = !(m.eigenvector_condition <= kEpConditionMarker);
    return m;
}

ExceptionalPoint find_exceptional_point(const AnyonParams& base, std::pair<double, double> bracket,
                                        const WeffOptions& options) {
    auto [lo, hi] = bracket;
    if (!(lo >= 0.0 && hi <= kPi + 1e-12 && lo < hi))
        throw ValidationError("find_exceptional_point: bracket must be an increasing sub-interval of [0, pi]");
    hi = std::min(hi, kPi);
    auto weff_at = [&](double theta) {
        AnyonParams p = base;
        p.theta = theta;
        return build_weff(p, options);
    };
    auto gap_at = [&](double theta) {
        const auto m = weff_at(theta);
        return std::abs(m.eigenvalues[0] - m.eigenvalues[1]);
    };

    constexpr int kScan = 512;
    int best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    std::vector<double> grid(kScan);
    for (int i = 0; i < kScan; ++i) {
        grid[i] = lo + (hi - lo) * i / (kScan - 1);
        const double g = gap_at(grid[i]);
        if (g < best_gap) {
            best_gap = g;
            best = i;
        }
    }
    double a = grid[std::max(0, best - 1)];
    double b = grid[std::min(kScan - 1, best + 1)];
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = gap_at(x1), f2 = gap_at(x2);
    for (int it = 0; it < 200 && (b - a) > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, b); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = gap_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = gap_at(x2);
        }
    }
    ExceptionalPoint ep;
    ep.theta_star = f1 < f2 ? x1 : x2;
    ep.gap = std::min(f1, f2);
    if (best_gap < ep.gap) {
        ep.theta_star = grid[best];
        ep.gap = best_gap;
    }
    const auto m = weff_at(ep.theta_star);
    const double coupling = std::sqrt(std::abs(m.b * m.c));
    const double scale = std::abs(m.a) + std::abs(m.d);
    ep.found = ep.gap < kEpGapFactor * base.gamma && coupling > 1e-12 * scale;
    return ep;
}

std::vector<std::array<cplx, 2>> track_branches(const std::vector<std::array<cplx, 2>>& raw) {
    std::vector<std::array<cplx, 2>> out = raw;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const auto& prev = out[i - 1];
        auto& cur = out[i];
        const double keep = std::abs(cur[0] - prev[0]) + std::abs(cur[1] - prev[1]);
        const double swap = std::abs(cur[1] - prev[0]) + std::abs(cur[0] - prev[1]);
        if (swap < keep) std::swap(cur[0], cur[1]);
    }
    return out;
}

std::array<double, 2> dipole_brightness(const EffectiveMatrix& m, double theta) {
    const cplx e = std::polar(1.0, 0.5 * theta);
    const double inv = 1.0 / std::sqrt(2.0);
    const cplx dp = (1.0 + e) * inv, dm = (1.0 - e) * inv;
    std::array<double, 2> out{};
    for (int k = 0; k < 2; ++k) {
        const auto& v = m.right_eigenvectors[k];
        out[k] = std::abs(std::conj(dp) * v[0] + std::conj(dm) * v[1]);
    }
    return out;
}

int bright_branch(const EffectiveMatrix& m, double theta) {
    const auto w = dipole_brightness(m, theta);
    return w[1] > w[0] ? 1 : 0;
}

} // namespace anyon::dimer
