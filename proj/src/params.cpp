#include "anyon/params.hpp"

#include <cmath>

namespace anyon {

double AnyonParams::z() const { return std::exp(-beta * omega); }

void AnyonParams::validate() const {
    auto fail = [](const std::string& what) { throw ValidationError("invalid parameters: " + what); };
    if (!std::isfinite(theta) || theta < 0.0 || theta > kPi + 1e-12) fail("theta must lie in [0, pi]");
    if (!std::isfinite(xi) || xi < -1.0 || xi > 1.0) fail("xi must lie in [-1, 1]");
    if (!std::isfinite(omega) || omega <= 0.0) fail("omega must be > 0");
    if (!std::isfinite(gamma) || gamma < 0.0) fail("gamma must be >= 0");
    if (!std::isfinite(beta) || beta <= 0.0) fail("beta must be > 0");
    if (!std::isfinite(coupling_j)) fail("coupling must be finite");
    const double zz = z();
    if (!(zz > 0.0 && zz < 1.0)) fail("exp(-beta*omega) must lie in (0, 1)");
}

namespace {

template <class E>
struct Name {
    E value;
    std::string_view name;
};

constexpr Name<FrequencyConvention> kFrequencyNames[] = {
    {FrequencyConvention::AppendixHalfAngle, "appendix"},
    {FrequencyConvention::MainTextFullAngle, "maintext"},
};
constexpr Name<Conjugation> kConjugationNames[] = {
    {Conjugation::Modulus, "modulus"},
    {Conjugation::Analytic, "analytic"},
};
constexpr Name<JumpBasis> kJumpNames[] = {
    {JumpBasis::Site, "site"},
    {JumpBasis::Deformed, "deformed"},
};
constexpr Name<AbsorptionOperator> kAbsorptionNames[] = {
    {AbsorptionOperator::Lowering, "lowering"},
    {AbsorptionOperator::Raising, "raising"},
};
constexpr Name<HamiltonianForm> kHamiltonianNames[] = {
    {HamiltonianForm::NormalMode, "normal-mode"},
    {HamiltonianForm::NormalModeDeformed, "normal-mode-deformed"},
    {HamiltonianForm::Site, "site"},
};

template <class E, std::size_t N>
std::string_view lookup(const Name<E> (&table)[N], E v) {
    for (const auto& entry : table)
        if (entry.value == v) return entry.name;
    return "?";
}

template <class E, std::size_t N>
E parse(const Name<E> (&table)[N], std::string_view s, std::string_view what) {
    for (const auto& entry : table)
        if (entry.name == s) return entry.value;
    std::string msg = "unknown ";
    msg += what;
    msg += " '";
    msg += s;
    msg += "' (expected one of:";
    for (const auto& entry : table) {
        msg += ' ';
        msg += entry.name;
    }
    msg += ')';
    throw ValidationError(msg);
}

} // namespace

std::string_view to_string(FrequencyConvention c) { return lookup(kFrequencyNames, c); }
std::string_view to_string(Conjugation c) { return lookup(kConjugationNames, c); }
std::string_view to_string(JumpBasis c) { return lookup(kJumpNames, c); }
std::string_view to_string(AbsorptionOperator c) { return lookup(kAbsorptionNames, c); }
std::string_view to_string(HamiltonianForm c) { return lookup(kHamiltonianNames, c); }

FrequencyConvention parse_frequency_convention(std::string_view s) {
    return parse(kFrequencyNames, s, "frequency convention");
}
Conjugation parse_conjugation(std::string_view s) { return parse(kConjugationNames, s, "conjugation"); }
JumpBasis parse_jump_basis(std::string_view s) { return parse(kJumpNames, s, "jump basis"); }
AbsorptionOperator parse_absorption(std::string_view s) { return parse(kAbsorptionNames, s, "absorption operator"); }
HamiltonianForm parse_hamiltonian(std::string_view s) { return parse(kHamiltonianNames, s, "hamiltonian form"); }

} // namespace anyon
