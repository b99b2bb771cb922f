// params.hpp — Physical parameter set, convention flags and error types

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace anyon {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Invalid user input (exit code 1 at the CLI).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure on valid input (exit code 2 at the CLI).
class ComputeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AnyonParams {
    double theta{0.0};      // statistical angle in [0, pi]
    double omega{1.0};      // mode frequency, sets the unit
    double coupling_j{0.2}; // hopping J
    double gamma{0.1};      // bath coupling rate
    double beta{1.0};       // inverse temperature; beta*omega is dimensionless
    double xi{0.0};         // bath correlation in [-1, 1]

    double beta_omega() const { return beta * omega; }
    double z() const;       // exp(-beta*omega)

    // Throws ValidationError on violated invariants.
    void validate() const;
};

// Normal-mode splitting: cos(theta/2) (Appendix B) or cos(theta) (main text).
enum class FrequencyConvention { AppendixHalfAngle, MainTextFullAngle };

// How lambda° is formed in the W_eff products and in Lindblad L^dagger prefactors.
//   Modulus:  full complex conjugation.
//   Analytic: conjugate only the explicit e^{-i theta/2} phase, n_theta left as is.
enum class Conjugation { Modulus, Analytic };

enum class JumpBasis { Site, Deformed };

// Operator carried by the absorption channels.
//   Lowering: (a1 +/- a2) as printed for the dimer channels.
//   Raising:  a^dagger, the conventional thermal absorption operator.
enum class AbsorptionOperator { Lowering, Raising };

// Coherent part of the Fock-space generator.
//   NormalMode:         harmonic normal modes at omega_+/-, undeformed hopping elements.
//   NormalModeDeformed: omega N + J_c (e^{i theta/2} a1^dag a2 + e^{-i theta/2} a2^dag a1), braided ops.
//   Site:               omega N + J (a1^dag a2 + a2^dag a1), braided ops.
enum class HamiltonianForm { NormalMode, NormalModeDeformed, Site };

struct Conventions {
    FrequencyConvention frequency{FrequencyConvention::AppendixHalfAngle};
    Conjugation conjugation{Conjugation::Modulus};
    JumpBasis jump_basis{JumpBasis::Deformed};
    AbsorptionOperator absorption{AbsorptionOperator::Lowering};
    HamiltonianForm hamiltonian{HamiltonianForm::NormalMode};
    bool stat_dephasing{false};
};

std::string_view to_string(FrequencyConvention c);
std::string_view to_string(Conjugation c);
std::string_view to_string(JumpBasis c);
std::string_view to_string(AbsorptionOperator c);
std::string_view to_string(HamiltonianForm c);

// Inverse of to_string; throws ValidationError on unknown names.
FrequencyConvention parse_frequency_convention(std::string_view s);
Conjugation parse_conjugation(std::string_view s);
JumpBasis parse_jump_basis(std::string_view s);
AbsorptionOperator parse_absorption(std::string_view s);
HamiltonianForm parse_hamiltonian(std::string_view s);

} // namespace anyon
