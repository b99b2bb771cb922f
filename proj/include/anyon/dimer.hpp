// dimer.hpp — Deformed normal modes, correlated-bath channels and the effective matrix W_eff

#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "anyon/params.hpp"

namespace anyon::dimer {

// omega_+/- = omega +/- J cos(theta/2) (appendix) or omega +/- J cos(theta) (main text).
std::pair<double, double> normal_mode_frequencies(const AnyonParams& p,
                                                  FrequencyConvention convention = FrequencyConvention::AppendixHalfAngle);

// Effective hopping J_c such that omega_+/- = omega +/- J_c.
double effective_coupling(const AnyonParams& p, FrequencyConvention convention);

// One Lindblad channel L = lambda_plus b~+ + lambda_minus b~-, kept in factored form
//   lambda_plus  = amplitude * weight_plus
//   lambda_minus = amplitude * weight_minus * phase
// so that the analytic conjugation can act on the phase alone.
struct Channel {
    std::string_view label;
    bool emission{true};
    cplx amplitude;     // sqrt(gamma (n_theta + 1)) or sqrt(gamma n_theta), principal branch
    double weight_plus; // sqrt(1 +/- xi) / 2
    double weight_minus;
    cplx phase;         // e^{-i theta/2}

    cplx lambda_plus() const { return amplitude * weight_plus; }
    cplx lambda_minus() const { return amplitude * weight_minus * phase; }
    cplx lambda_plus_conj(Conjugation c) const;
    cplx lambda_minus_conj(Conjugation c) const;
};

// Emission +, emission -, absorption +, absorption -.
struct ChannelSet {
    std::array<Channel, 4> channels;
};

ChannelSet lindblad_coefficients(const AnyonParams& p);

struct WeffOptions {
    FrequencyConvention frequency{FrequencyConvention::AppendixHalfAngle};
    Conjugation conjugation{Conjugation::Modulus};
    bool stat_dephasing{false};
};

inline WeffOptions weff_options(const Conventions& c) { return {c.frequency, c.conjugation, c.stat_dephasing}; }

inline constexpr double kEpConditionMarker = 1e8;
inline constexpr double kEpGapFactor = 1e-6;

struct EffectiveMatrix {
    // [[a, b], [c, d]] acting on (<b~+>, <b~->)
    cplx a, b, c, d;
    double omega_plus{0.0}, omega_minus{0.0};

    // Populated by eigen_analysis.
    std::array<cplx, 2> eigenvalues{};
    std::array<std::array<cplx, 2>, 2> right_eigenvectors{}; // unit norm
    std::array<double, 2> lifetimes{};                       // 1 / (-Re lambda)
    double eigenvector_condition{1.0};
    bool near_defective{false};

    cplx trace() const { return a + d; }
    cplx discriminant() const { return (a - d) * (a - d) + 4.0 * b * c; }
};

EffectiveMatrix build_weff(const AnyonParams& p, const WeffOptions& options = {});

// Closed-form 2x2 eigen-decomposition, lambda_+/- = (A + D +/- sqrt((A - D)^2 + 4BC)) / 2.
EffectiveMatrix eigen_analysis(EffectiveMatrix m);

struct ExceptionalPoint {
    bool found{false};
    double theta_star{0.0};
    double gap{0.0}; // |lambda_+ - lambda_-| at theta_star
};

// Minimises |lambda_+ - lambda_-| over theta in the bracket (512-point scan, then
// golden-section refinement). An EP needs gap < 1e-6 gamma with non-vanishing
// mode coupling B C; degeneracies of a diagonal W_eff are not exceptional.
ExceptionalPoint find_exceptional_point(const AnyonParams& p, std::pair<double, double> theta_bracket,
                                        const WeffOptions& options = {});

// Reorders each consecutive eigenvalue pair to minimise the jump from its predecessor.
std::vector<std::array<cplx, 2>> track_branches(const std::vector<std::array<cplx, 2>>& raw);

// Amplitude of each eigenmode excited from the ground state by the braided dipole,
// |<d, v_k>| with d = ((1 + e^{i theta/2}), (1 - e^{i theta/2})) / sqrt 2.
std::array<double, 2> dipole_brightness(const EffectiveMatrix& m, double theta);

// Index (0 or 1) of the brighter eigenmode.
int bright_branch(const EffectiveMatrix& m, double theta);

} // namespace anyon::dimer
