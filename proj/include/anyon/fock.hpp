// fock.hpp — Truncated Fock representation of the braided anyon algebra and its Lindblad generator
//
// Conventions:
//   * a|n> = sqrt([n]_q)|n-1>, principal branch; a^dag is the *formal* adjoint a^T, which is
//     what makes a a^dag - e^{i theta} a^dag a = 1 hold below the cutoff for complex [n]_q.
//   * Two modes: a1 = a (x) I, a2 = P (x) a with the phase string P = e^{i theta N};
//     a2^dag = P^* (x) a^T.
//   * Density matrices are vectorised column-major, vec(A X B) = (B^T (x) A) vec(X).

#pragma once

#include <string>
#include <utility>
#include <initializer_list>
#include <vector>

#include "anyon/dense.hpp"
#include "anyon/params.hpp"

namespace anyon::fock {

using dense::Matrix;
using dense::Vector;

struct FockSystem {
    int cutoff{2};
    int modes{2};
    double theta{0.0};
    Eigen::Index dimension{0};

    Matrix a1, a2, a1_dag, a2_dag; // braided ladder operators (a2 empty for one mode)
    Matrix n1, n2;                 // undeformed number operators
    Matrix phase_string;           // e^{i theta N1} on the full space
    Matrix site2, site2_dag;       // unbraided I (x) a, I (x) a^T

    // Populated by assemble().
    Matrix hamiltonian;
    Matrix liouvillian;
    bool rotating_frame{false};

    Matrix total_number() const { return modes == 2 ? Matrix(n1 + n2) : n1; }
};

Matrix anyon_ladder_matrix(int cutoff, double theta);

// Returns (a1, a2) with a1 a2 = e^{i theta} a2 a1.
std::pair<Matrix, Matrix> braided_embedding(int cutoff, double theta);

// modes in {1, 2}
FockSystem make_fock_system(int cutoff, double theta, int modes = 2);

struct GeneratorOptions {
    HamiltonianForm hamiltonian{HamiltonianForm::NormalMode};
    FrequencyConvention frequency{FrequencyConvention::AppendixHalfAngle};
    Conjugation conjugation{Conjugation::Modulus};
    JumpBasis jump_basis{JumpBasis::Deformed};
    AbsorptionOperator absorption{AbsorptionOperator::Lowering};
    bool rotating_frame{false}; // subtract omega * N_total from H
    bool require_two_excitations{false};
};

inline GeneratorOptions generator_options(const Conventions& c) {
    GeneratorOptions o;
    o.hamiltonian = c.hamiltonian;
    o.frequency = c.frequency;
    o.conjugation = c.conjugation;
    o.jump_basis = c.jump_basis;
    o.absorption = c.absorption;
    return o;
}

Matrix build_hamiltonian(const FockSystem& sys, const AnyonParams& p, const GeneratorOptions& opts = {});

// A jump operator together with the matrix that plays L^dagger in the dissipator.
struct JumpOperator {
    std::string label;
    Matrix op;
    Matrix op_dag;
};

std::vector<JumpOperator> jump_operators(const FockSystem& sys, const AnyonParams& p, const GeneratorOptions& opts);

// Superoperator of d rho/dt = -i[H, rho] + sum_k (L rho L^dag - {L^dag L, rho}/2).
Matrix build_liouvillian(const FockSystem& sys, const Matrix& hamiltonian, const std::vector<JumpOperator>& jumps);
Matrix build_liouvillian(const FockSystem& sys, const AnyonParams& p, const GeneratorOptions& opts);

// Builds and stores hamiltonian + liouvillian on the system.
void assemble(FockSystem& sys, const AnyonParams& p, const GeneratorOptions& opts);

// X -> A X B as a superoperator.
Matrix sandwich_superop(const Matrix& left, const Matrix& right);

Vector vec(const Matrix& rho);
Matrix unvec(const Vector& v, Eigen::Index dimension);
Vector trace_functional(Eigen::Index dimension); // t^T vec(X) = Tr X

struct DensityState {
    Matrix matrix;

    double trace_defect() const;     // |Tr rho - 1|
    double hermiticity_defect() const; // max |rho - rho^dag|
    double min_eigenvalue() const;   // of the Hermitian part
};

DensityState vacuum_state(Eigen::Index dimension);

// exp(L t) vec(rho) by scaling and squaring.
DensityState propagate(const Matrix& liouvillian, const DensityState& state, double t);

// Normalised null vector of L with unit trace.
DensityState steady_state(const Matrix& liouvillian, Eigen::Index dimension);

struct ResolventResult {
    Vector x;
    double rcond{0.0};
    double residual{0.0}; // ||(L + s i w) x + v|| / ||v||
};

// x = int_0^inf e^{sign i omega t} e^{L t} v dt, i.e. (L + sign i omega) x = -v.
ResolventResult resolvent_apply(const Matrix& liouvillian, double omega, int sign, const Vector& v);

// Factorisation of (L + sign i omega) reused across right-hand sides.
class Resolvent {
public:
    Resolvent(const Matrix& liouvillian, double omega, int sign);
    Vector apply(const Vector& v) const;              // G(omega) v
    Vector apply_transpose(const Vector& v) const;    // G(omega)^T v
    double rcond() const { return lu_.rcond(); }
    double omega() const { return omega_; }
    int sign() const { return sign_; }

private:
    dense::LuFactorization lu_;
    double omega_;
    int sign_;
};

struct DecayFit {
    double rate{0.0};      // Gamma
    double frequency{0.0}; // Omega
    cplx amplitude{0.0};
    double residual{0.0};  // ||y - fit|| / ||y||
    bool converged{false}; // residual <= 1e-2
};

inline constexpr double kFitResidualLimit = 1e-2;

// Least-squares fit of A exp((-Gamma - i Omega) t) to uniformly sampled data t_k = t0 + k dt.
DecayFit fit_decay_rate(const std::vector<cplx>& samples, double dt, double t0 = 0.0);

// Positions in vec(X) whose ket excitation minus bra excitation is one of `differences`.
// Every generator built here conserves that difference, so these index sets are invariant.
std::vector<Eigen::Index> sector_indices(const FockSystem& sys, std::initializer_list<int> differences);
Matrix sector_block(const Matrix& liouvillian, const std::vector<Eigen::Index>& idx);
Vector gather(const Vector& v, const std::vector<Eigen::Index>& idx);
Vector scatter(const Vector& v, const std::vector<Eigen::Index>& idx, Eigen::Index full_size);

// Eigenvalues of L restricted to the sector where ket excitation exceeds bra excitation
// by `excitation_difference`, ordered slowest-decaying first.
std::vector<cplx> coherence_eigenvalues(const FockSystem& sys, const Matrix& liouvillian, int excitation_difference = 1);

} // namespace anyon::fock
