// statistics.hpp — Closed-form single-oscillator quantities for the deformed algebra

#pragma once

#include "anyon/params.hpp"

namespace anyon::stats {

inline constexpr double kBetaOmegaFloor = 1e-9;

// Complex-valued rate: real part is decay (units of gamma), imaginary part a frequency shift.
struct ComplexRate {
    cplx value{0.0, 0.0};
    double decay() const { return value.real(); }
    double shift() const { return value.imag(); }
};

// Eigenvalue of Phi(N) = 1 + (e^{i theta} - 1) N on the n-quantum state, with N -> [n]_q.
cplx deformed_commutator_eigenvalue(int n, double theta);

// q-number [n]_q = (1 - e^{i theta n}) / (1 - e^{i theta}); equals n at theta = 0.
cplx q_number(int n, double theta);

// n_theta = 1 / (e^{beta omega} - e^{i theta}). Throws ValidationError if beta*omega is below floor.
cplx thermal_occupation(double theta, double beta, double omega, double floor = kBetaOmegaFloor);

// <e^{i theta N}> = (1 - z) / (1 - z e^{i theta}) over the thermal distribution (1 - z) z^n.
cplx phase_average(double theta, double z);

// Statistical part of the coherence relaxation rate, (gamma/2) (1 - Re<e^{i theta N}>).
double gamma_stat(double theta, double z, double gamma);

// (gamma/2) [2 n_theta + 1 + (1 - Re<e^{i theta N}>)]
ComplexRate gamma_full_single(const AnyonParams& p);

} // namespace anyon::stats
