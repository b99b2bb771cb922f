#include "anyon/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "anyon/kernels.hpp"
#include "anyon/parallel.hpp"

namespace anyon::spectra {

namespace {

template <class E>
struct NamedValue {
    E value;
    const char* name;
};

constexpr NamedValue<PathwaySelection> kPathways[] = {{PathwaySelection::Diagram, "diagram"},
                                                     {PathwaySelection::Full, "full"}};
constexpr NamedValue<EquilibriumState> kEquilibria[] = {{EquilibriumState::Vacuum, "vacuum"},
                                                       {EquilibriumState::SteadyState, "steady-state"}};

template <class E, std::size_t N>
E parse_named(const NamedValue<E> (&table)[N], const std::string& s, const char* what) {
    std::string valid;
    for (const auto& e : table) {
        if (s == e.name) return e.value;
        valid += valid.empty() ? "" : ", ";
        valid += e.name;
    }
    throw ValidationError(std::string("unknown ") + what + " '" + s + "' (expected one of: " + valid + ")");
}

template <class E, std::size_t N>
std::string name_of(const NamedValue<E> (&table)[N], E v) {
    for (const auto& e : table)
        if (e.value == v) return e.name;
    return "?";
}

} // namespace

std::string to_string(PathwaySelection p) { return name_of(kPathways, p); }
std::string to_string(EquilibriumState e) { return name_of(kEquilibria, e); }
PathwaySelection parse_pathway(const std::string& s) { return parse_named(kPathways, s, "pathway"); }
EquilibriumState parse_equilibrium(const std::string& s) { return parse_named(kEquilibria, s, "equilibrium state"); }

DipoleSet build_dipole(const fock::FockSystem& sys) {
    DipoleSet d;
    if (sys.modes == 1) {
        d.mu_up = sys.a1_dag;
        d.mu = sys.a1 + sys.a1_dag;
    } else {
        const Matrix s = sys.phase_string;
        d.mu_up = sys.a1_dag + s * sys.site2_dag;
        d.mu = d.mu_up + sys.a1 + s.conjugate() * sys.site2;
    }
    const Matrix id = Matrix::Identity(sys.dimension, sys.dimension);
    d.mu_left = fock::sandwich_superop(d.mu, id);
    d.mu_right = fock::sandwich_superop(id, d.mu);
    return d;
}

void GridSpec::validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) throw ValidationError("grid range must satisfy lo < hi");
    if (count < 2) throw ValidationError("grid count must be >= 2");
    if (!std::isfinite(t2) || t2 < 0.0) throw ValidationError("t2 must be finite and >= 0");
}

std::vector<double> uniform_axis(double lo, double hi, int count) {
    if (count < 2) throw ValidationError("axis count must be >= 2");
    std::vector<double> axis(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) axis[std::size_t(k)] = lo + (hi - lo) * double(k) / double(count - 1);
    axis.back() = hi;
    return axis;
}

double SpectrumGrid::max_abs() const { return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff(); }

Matrix SpectrumGrid::normalized() const {
    const double m = max_abs();
    return m > 0.0 ? Matrix(values / m) : values;
}

fock::FockSystem spectrum_system(const AnyonParams& p, const Conventions& c, int cutoff) {
    if (cutoff < 2) throw ValidationError("spectra need cutoff >= 2 (two-excitation manifold)");
    p.validate();
    fock::FockSystem sys = fock::make_fock_system(cutoff, p.theta, 2);
    fock::GeneratorOptions opts = fock::generator_options(c);
    opts.rotating_frame = true;
    opts.require_two_excitations = true;
    fock::assemble(sys, p, opts);
    return sys;
}

Matrix response_values(const fock::FockSystem& sys, const DipoleSet& dipole, const std::vector<double>& omega_tau,
                       const std::vector<double>& omega_t, const GridSpec& spec) {
    if (sys.cutoff < 2) throw ValidationError("spectra need cutoff >= 2 (two-excitation manifold)");
    if (sys.liouvillian.size() == 0) throw ValidationError("Fock system has no assembled Liouvillian");
    const Eigen::Index d = sys.dimension;
    const Matrix& lv = sys.liouvillian;

    const Matrix rho_eq = spec.equilibrium == EquilibriumState::Vacuum ? fock::vacuum_state(d).matrix
                                                                        : fock::steady_state(lv, d).matrix;
    const Vector v1 = fock::vec(rho_eq * dipole.mu);
    const Matrix& mu3 = spec.pathway == PathwaySelection::Diagram ? dipole.mu_up : dipole.mu;
    const Matrix waiting = spec.t2 > 0.0 ? dense::expm(lv * spec.t2) : Matrix();
    const Vector trace_mu = fock::vec(dipole.mu.transpose()); // t^T vec(X) = Tr(mu X)

    // The populations carry the stationary zero mode, which sits at omega = 0 in the rotating
    // frame. Both resolvents only see single-quantum coherences, so solve there.
    const bool thermal = spec.equilibrium == EquilibriumState::SteadyState;
    const auto first_idx = thermal ? fock::sector_indices(sys, {-1, 1}) : fock::sector_indices(sys, {-1});
    const auto third_idx = fock::sector_indices(sys, {-1, 1});
    const Matrix first_block = fock::sector_block(lv, first_idx);
    const Matrix third_block = fock::sector_block(lv, third_idx);
    const Vector v1_sector = fock::gather(v1, first_idx);
    const Vector trace_sector = fock::gather(trace_mu, third_idx);

    const std::size_t nt = omega_tau.size(), nw = omega_t.size();
    const auto m3 = static_cast<Eigen::Index>(third_idx.size());
    Matrix ket(m3, static_cast<Eigen::Index>(nt));   // mu3 G(t2) mu G~(-w_tau) mu rho_eq, per column
    Matrix probe(m3, static_cast<Eigen::Index>(nw)); // G~(w_t)^T vec(mu^T), per column

    parallel_for(nt, spec.threads, [&](std::size_t k) {
        const fock::Resolvent g(first_block, omega_tau[k], -1);
        Matrix x = dipole.mu * fock::unvec(fock::scatter(g.apply(v1_sector), first_idx, d * d), d);
        if (spec.t2 > 0.0) x = fock::unvec(dense::apply(waiting, fock::vec(x)), d);
        ket.col(Eigen::Index(k)) = fock::gather(fock::vec(mu3 * x), third_idx);
    });
    parallel_for(nw, spec.threads, [&](std::size_t k) {
        const fock::Resolvent g(third_block, omega_t[k], +1);
        probe.col(Eigen::Index(k)) = g.apply_transpose(trace_sector);
    });

    // (i)^3 Tr(mu G~(w_t) y) = -i probe^T y
    Matrix out(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nw));
    const auto n = static_cast<std::size_t>(m3);
    parallel_for(nt, spec.threads, [&](std::size_t r) {
        const cplx* y = ket.col(Eigen::Index(r)).data();
        for (std::size_t c = 0; c < nw; ++c) {
            const cplx* w = probe.col(Eigen::Index(c)).data();
            out(Eigen::Index(r), Eigen::Index(c)) = cplx(0.0, -1.0) * kernels::active().dotu(n, w, y);
        }
    });
    return out;
}

SpectrumGrid rephasing_response(const fock::FockSystem& sys, const DipoleSet& dipole, const AnyonParams& p,
                                const Conventions& c, const GridSpec& spec) {
    spec.validate();
    p.validate();
    if (!(p.gamma > 0.0)) throw ValidationError("spectra need gamma > 0");
    SpectrumGrid grid;
    grid.omega_tau = uniform_axis(spec.lo, spec.hi, spec.count);
    grid.omega_t = grid.omega_tau;
    grid.t2 = spec.t2;
    grid.values = response_values(sys, dipole, grid.omega_tau, grid.omega_t, spec);
    if (!grid.values.allFinite()) throw ComputeError("non-finite response values");
    grid.metadata.params = p;
    grid.metadata.conventions = c;
    grid.metadata.cutoff = sys.cutoff;
    grid.metadata.t2 = spec.t2;
    grid.metadata.pathway = spec.pathway;
    grid.metadata.equilibrium = spec.equilibrium;
    return grid;
}

SpectrumGrid compute_spectrum(const AnyonParams& p, const Conventions& c, const GridSpec& spec, int cutoff) {
    spec.validate();
    if (!(p.gamma > 0.0)) throw ValidationError("spectra need gamma > 0");
    const fock::FockSystem sys = spectrum_system(p, c, cutoff);
    return rephasing_response(sys, build_dipole(sys), p, c, spec);
}

std::vector<SlicePoint> diagonal_slice(const SpectrumGrid& grid, SlicePhase phase) {
    if (grid.omega_tau != grid.omega_t) throw ValidationError("diagonal slice needs identical frequency axes");
    if (grid.values.rows() != Eigen::Index(grid.omega_tau.size()) || grid.values.cols() != grid.values.rows())
        throw ValidationError("grid values do not match the axes");
    const cplx factor = phase == SlicePhase::Signal ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
    std::vector<SlicePoint> slice(grid.omega_tau.size());
    for (std::size_t k = 0; k < slice.size(); ++k)
        slice[k] = {grid.omega_tau[k], factor * grid.values(Eigen::Index(k), Eigen::Index(k))};
    return slice;
}

LineshapeMetrics lineshape_metrics(const std::vector<SlicePoint>& slice) {
    if (slice.empty()) throw ValidationError("empty slice");
    LineshapeMetrics m;
    double best = -1.0, max_re = 0.0, sum_abs_re = 0.0;
    for (std::size_t k = 0; k < slice.size(); ++k) {
        const double a = std::abs(slice[k].value);
        if (a > best) {
            best = a;
            m.peak_index = k;
        }
        max_re = std::max(max_re, std::abs(slice[k].value.real()));
        sum_abs_re += std::abs(slice[k].value.real());
    }
    m.peak_detuning = slice[m.peak_index].detuning;
    m.dispersiveness = max_re > 0.0 ? 1.0 - std::abs(slice[m.peak_index].value.real()) / max_re : 0.0;
    const double half_width = 0.5 * (slice.back().detuning - slice.front().detuning);
    if (sum_abs_re > 0.0 && half_width > 0.0) {
        double moment = 0.0;
        for (const auto& s : slice) moment += (s.detuning - m.peak_detuning) * s.value.real();
        m.asymmetry = moment / (sum_abs_re * half_width);
    }
    return m;
}

OverlayPoint overlay_point(const AnyonParams& p, const dimer::WeffOptions& options) {
    const dimer::EffectiveMatrix m = dimer::build_weff(p, options);
    OverlayPoint o;
    o.theta = p.theta;
    for (int k = 0; k < 2; ++k) {
        o.detuning[std::size_t(k)] = -m.eigenvalues[std::size_t(k)].imag() - p.omega;
        o.decay[std::size_t(k)] = -m.eigenvalues[std::size_t(k)].real();
    }
    o.bright = dimer::bright_branch(m, p.theta);
    o.gap = std::abs(m.eigenvalues[0] - m.eigenvalues[1]);
    return o;
}

std::vector<OverlayPoint> bright_mode_overlay(const std::vector<double>& theta_grid, const AnyonParams& p,
                                              const dimer::WeffOptions& options) {
    std::vector<OverlayPoint> out;
    out.reserve(theta_grid.size());
    for (const double th : theta_grid) {
        if (!(th >= 0.0 && th <= kPi)) throw ValidationError("overlay theta must lie in [0, pi]");
        AnyonParams q = p;
        q.theta = th;
        OverlayPoint o = overlay_point(q, options);
        if (!out.empty()) {
            const OverlayPoint& prev = out.back();
            auto dist = [&](int a, int b) {
                return std::hypot(o.detuning[std::size_t(a)] - prev.detuning[0], o.decay[std::size_t(a)] - prev.decay[0]) +
                       std::hypot(o.detuning[std::size_t(b)] - prev.detuning[1], o.decay[std::size_t(b)] - prev.decay[1]);
            };
            if (dist(1, 0) < dist(0, 1)) {
                std::swap(o.detuning[0], o.detuning[1]);
                std::swap(o.decay[0], o.decay[1]);
                o.bright = 1 - o.bright;
            }
        }
        out.push_back(o);
    }
    return out;
}

} // namespace anyon::spectra
