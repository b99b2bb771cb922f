// spectra.hpp — Rephasing third-order response on the braided dimer, diagonal slices, lineshape metrics

#pragma once

#include <array>
#include <string>
#include <vector>

#include "anyon/dimer.hpp"
#include "anyon/fock.hpp"
#include "anyon/params.hpp"

namespace anyon::spectra {

using dense::Matrix;
using dense::Vector;

struct DipoleSet {
    Matrix mu;       // a1^dag + a1 + e^{i theta N1} c2^dag + e^{-i theta N1} c2
    Matrix mu_up;    // raising part
    Matrix mu_left;  // X -> mu X
    Matrix mu_right; // X -> X mu
};

// Single-mode systems get mu = a + a^dag.
DipoleSet build_dipole(const fock::FockSystem& sys);

// Diagram keeps only the raising half of the third interaction (ground-state bleach and
// stimulated emission); Full applies the whole dipole there.
enum class PathwaySelection { Diagram, Full };
enum class EquilibriumState { Vacuum, SteadyState };

std::string to_string(PathwaySelection p);
std::string to_string(EquilibriumState e);
PathwaySelection parse_pathway(const std::string& s);
EquilibriumState parse_equilibrium(const std::string& s);

struct GridSpec {
    double lo{-0.5};
    double hi{0.5};
    int count{256};
    double t2{0.0};
    PathwaySelection pathway{PathwaySelection::Diagram};
    EquilibriumState equilibrium{EquilibriumState::Vacuum};
    int threads{0}; // 0 = hardware concurrency

    void validate() const;
};

// lo + (hi - lo) k / (count - 1), endpoints exact.
std::vector<double> uniform_axis(double lo, double hi, int count);

struct SpectrumMetadata {
    AnyonParams params;
    Conventions conventions;
    int cutoff{2};
    double t2{0.0};
    PathwaySelection pathway{PathwaySelection::Diagram};
    EquilibriumState equilibrium{EquilibriumState::Vacuum};
    std::string row_axis{"omega_tau"};    // conjugate interval, resolvent sign -1
    std::string column_axis{"omega_t"};   // ket interval, resolvent sign +1
};

struct SpectrumGrid {
    std::vector<double> omega_tau;
    std::vector<double> omega_t;
    double t2{0.0};
    Matrix values; // raw R(omega_tau, omega_t), rows indexed by omega_tau
    SpectrumMetadata metadata;

    double max_abs() const;
    Matrix normalized() const; // values / max|R|
};

// Fock system in the rotating frame with the Liouvillian assembled; rejects cutoff < 2.
fock::FockSystem spectrum_system(const AnyonParams& p, const Conventions& c, int cutoff = 2);

// R on an arbitrary (omega_tau x omega_t) list. Each entry is a pure function of its two
// frequencies, so permuting either list permutes the output exactly.
Matrix response_values(const fock::FockSystem& sys, const DipoleSet& dipole, const std::vector<double>& omega_tau,
                       const std::vector<double>& omega_t, const GridSpec& spec);

SpectrumGrid rephasing_response(const fock::FockSystem& sys, const DipoleSet& dipole, const AnyonParams& p,
                                const Conventions& c, const GridSpec& spec);

// Builds the system and dipole, then evaluates the grid.
SpectrumGrid compute_spectrum(const AnyonParams& p, const Conventions& c, const GridSpec& spec, int cutoff = 2);

struct SlicePoint {
    double detuning{0.0};
    cplx value;
};

// Signal = i R, the emitted field; Response = R as stored.
enum class SlicePhase { Signal, Response };

// Values along omega_t = omega_tau; the axes must be identical.
std::vector<SlicePoint> diagonal_slice(const SpectrumGrid& grid, SlicePhase phase = SlicePhase::Signal);

struct LineshapeMetrics {
    double peak_detuning{0.0};
    double asymmetry{0.0};       // sum (x - x_peak) Re v / (sum |Re v| * half-width), in [-1, 1]
    double dispersiveness{0.0};  // 1 - |Re v(peak)| / max |Re v|
    std::size_t peak_index{0};
};

LineshapeMetrics lineshape_metrics(const std::vector<SlicePoint>& slice);

struct OverlayPoint {
    double theta{0.0};
    std::array<double, 2> detuning{};  // -Im lambda - omega, branch-tracked
    std::array<double, 2> decay{};     // -Re lambda
    int bright{0};
    double gap{0.0};
};

OverlayPoint overlay_point(const AnyonParams& p, const dimer::WeffOptions& options = {});

std::vector<OverlayPoint> bright_mode_overlay(const std::vector<double>& theta_grid, const AnyonParams& p,
                                              const dimer::WeffOptions& options = {});

} // namespace anyon::spectra
