#include "anyon/sweep.hpp"

#include <algorithm>

#include <cmath>

#include "anyon/dimer.hpp"
#include "anyon/parallel.hpp"
#include "anyon/statistics.hpp"

namespace anyon::io {

namespace {

const std::string kRate = "omega";
const std::string kAngle = "rad";

std::string unit_of(const std::string& param) {
    if (param == "theta") return kAngle;
    if (param == "omega" || param == "coupling" || param == "gamma") return kRate;
    if (param == "beta") return "1/omega";
    return "";
}

nlohmann::ordered_json base_metadata(const RunConfig& config, const std::string& label) {
    nlohmann::ordered_json m;
    m["label"] = label;
    m["conventions"] = conventions_to_json(config.conventions);
    m["config"] = config_to_json(config);
    return m;
}

// Mixed-radix decode, last axis fastest.
std::vector<double> axis_point(const std::vector<std::vector<double>>& values, std::size_t index) {
    std::vector<double> point(values.size());
    for (std::size_t a = values.size(); a-- > 0;) {
        const std::size_t n = values[a].size();
        point[a] = values[a][index % n];
        index /= n;
    }
    return point;
}

bool exceptional(const dimer::EffectiveMatrix& m, double gamma) {
    const double coupling = std::sqrt(std::abs(m.b * m.c));
    const double gap = std::abs(m.eigenvalues[0] - m.eigenvalues[1]);
    return m.near_defective || (gap < dimer::kEpGapFactor * gamma && coupling > 1e-12 * (std::abs(m.a) + std::abs(m.d)));
}

std::vector<double> single_row(const AnyonParams& p) {
    const cplx n = stats::thermal_occupation(p.theta, p.beta, p.omega);
    const cplx avg = stats::phase_average(p.theta, p.z());
    const cplx full = stats::gamma_full_single(p).value;
    return {n.real(), n.imag(), avg.real(), avg.imag(), stats::gamma_stat(p.theta, p.z(), p.gamma), full.real(), full.imag()};
}

} // namespace

void SweepResult::check() const {
    for (const auto& r : rows) {
        if (r.size() != columns.size()) throw ComputeError(label + ": ragged result row");
        for (double v : r)
            if (!std::isfinite(v)) throw ComputeError(label + ": non-finite value in result");
    }
}

SweepResult run_fig1(const RunConfig& config) {
    config.validate();
    SweepResult r;
    r.label = "fig1";
    r.columns = {{"theta", kAngle}, {"gamma_stat", kRate}, {"re_gamma_full", kRate}, {"im_gamma_full", kRate}};
    const auto thetas = config.axes.at(0).values();
    r.rows.resize(thetas.size());
    parallel_for(thetas.size(), config.threads, [&](std::size_t k) {
        AnyonParams p = config.params;
        p.theta = thetas[k];
        p.validate();
        const cplx full = stats::gamma_full_single(p).value;
        r.rows[k] = {thetas[k], stats::gamma_stat(p.theta, p.z(), p.gamma), full.real(), full.imag()};
    });
    r.metadata = base_metadata(config, r.label);
    r.check();
    return r;
}

SweepResult run_fig2(const RunConfig& config) {
    config.validate();
    SweepResult r;
    r.label = "fig2";
    r.columns = {{"theta", kAngle},         {"xi", ""},
                 {"re_lambda_plus", kRate}, {"re_lambda_minus", kRate},
                 {"im_lambda_plus", kRate}, {"im_lambda_minus", kRate},
                 {"gap", kRate},            {"ep_flag", ""}};
    AnyonParams base = config.params;
    if (config.regime == TemperatureRegime::High) base.beta = kHighTemperatureBetaOmega / base.omega;
    const auto thetas = config.axes.at(0).values();
    const auto& xis = config.xi_values;
    const std::size_t nt = thetas.size();
    const dimer::WeffOptions opts = dimer::weff_options(config.conventions);

    std::vector<dimer::EffectiveMatrix> mats(nt * xis.size());
    parallel_for(mats.size(), config.threads, [&](std::size_t k) {
        AnyonParams p = base;
        p.xi = xis[k / nt];
        p.theta = thetas[k % nt];
        mats[k] = dimer::build_weff(p, opts);
    });

    // The grid rarely lands on the EP itself; flag the row closest to the located theta*.
    const double lo = *std::min_element(thetas.begin(), thetas.end());
    const double hi = *std::max_element(thetas.begin(), thetas.end());
    const bool searchable = lo >= 0.0 && hi <= kPi && lo < hi;
    std::vector<dimer::ExceptionalPoint> eps(xis.size());
    parallel_for(xis.size(), config.threads, [&](std::size_t x) {
        if (!searchable) return;
        AnyonParams p = base;
        p.xi = xis[x];
        eps[x] = dimer::find_exceptional_point(p, {lo, hi}, opts);
    });

    nlohmann::ordered_json theta_star = nlohmann::ordered_json::array();
    r.rows.reserve(mats.size());
    for (std::size_t x = 0; x < xis.size(); ++x) {
        std::vector<std::array<cplx, 2>> raw(nt);
        for (std::size_t t = 0; t < nt; ++t) raw[t] = mats[x * nt + t].eigenvalues;
        const auto tracked = dimer::track_branches(raw);
        std::size_t nearest = nt;
        if (eps[x].found) {
            nearest = 0;
            for (std::size_t t = 1; t < nt; ++t)
                if (std::abs(thetas[t] - eps[x].theta_star) < std::abs(thetas[nearest] - eps[x].theta_star)) nearest = t;
            theta_star.push_back(eps[x].theta_star);
        } else {
            theta_star.push_back(nullptr);
        }
        for (std::size_t t = 0; t < nt; ++t) {
            const auto& m = mats[x * nt + t];
            const auto& ev = tracked[t];
            const bool flag = t == nearest || exceptional(m, base.gamma);
            r.rows.push_back({thetas[t], xis[x], ev[0].real(), ev[1].real(), ev[0].imag(), ev[1].imag(),
                              std::abs(ev[0] - ev[1]), flag ? 1.0 : 0.0});
        }
    }
    RunConfig echo = config;
    echo.params.beta = base.beta;
    r.metadata = base_metadata(echo, r.label);
    r.metadata["theta_star"] = theta_star;
    r.check();
    return r;
}

SweepResult run_sweep(const RunConfig& config) {
    config.validate();
    if (config.kind != RunKind::Dimer && config.kind != RunKind::Single)
        throw ValidationError("run_sweep handles the dimer and single kinds");
    SweepResult r;
    r.label = to_string(config.kind);
    std::vector<std::vector<double>> values;
    std::size_t total = 1;
    for (const auto& a : config.axes) {
        values.push_back(a.values());
        r.columns.push_back({a.name, unit_of(a.name)});
        total *= values.back().size();
    }
    if (config.kind == RunKind::Dimer) {
        for (const char* c : {"re_lambda_plus", "re_lambda_minus", "im_lambda_plus", "im_lambda_minus", "gap"})
            r.columns.push_back({c, kRate});
        r.columns.push_back({"ep_flag", ""});
    } else {
        r.columns.insert(r.columns.end(), {{"re_n_theta", ""},
                                           {"im_n_theta", ""},
                                           {"re_phase_average", ""},
                                           {"im_phase_average", ""},
                                           {"gamma_stat", kRate},
                                           {"re_gamma_full", kRate},
                                           {"im_gamma_full", kRate}});
    }
    const dimer::WeffOptions opts = dimer::weff_options(config.conventions);
    r.rows.resize(total);
    parallel_for(total, config.threads, [&](std::size_t k) {
        std::vector<double> row = axis_point(values, k);
        AnyonParams p = config.params;
        for (std::size_t a = 0; a < row.size(); ++a) set_parameter(p, config.axes[a].name, row[a]);
        p.validate();
        if (config.kind == RunKind::Dimer) {
            const auto m = dimer::build_weff(p, opts);
            const auto& ev = m.eigenvalues;
            row.insert(row.end(), {ev[0].real(), ev[1].real(), ev[0].imag(), ev[1].imag(), std::abs(ev[0] - ev[1]),
                                   exceptional(m, p.gamma) ? 1.0 : 0.0});
        } else {
            const auto s = single_row(p);
            row.insert(row.end(), s.begin(), s.end());
        }
        r.rows[k] = std::move(row);
    });
    r.metadata = base_metadata(config, r.label);
    r.check();
    return r;
}

SweepResult grid_table(const spectra::SpectrumGrid& grid) {
    SweepResult r;
    r.label = "spectrum";
    r.columns = {{"omega_tau", kRate}, {"omega_t", kRate}, {"re_response", ""},
                 {"im_response", ""},  {"re_normalized", ""}, {"im_normalized", ""}};
    const double norm = grid.max_abs();
    const double scale = norm > 0.0 ? 1.0 / norm : 1.0;
    r.rows.reserve(grid.omega_tau.size() * grid.omega_t.size());
    for (std::size_t i = 0; i < grid.omega_tau.size(); ++i)
        for (std::size_t j = 0; j < grid.omega_t.size(); ++j) {
            const cplx v = grid.values(Eigen::Index(i), Eigen::Index(j));
            r.rows.push_back({grid.omega_tau[i], grid.omega_t[j], v.real(), v.imag(), v.real() * scale, v.imag() * scale});
        }
    const auto& md = grid.metadata;
    r.metadata["label"] = r.label;
    r.metadata["params"] = params_to_json(md.params);
    r.metadata["conventions"] = conventions_to_json(md.conventions);
    r.metadata["cutoff"] = md.cutoff;
    r.metadata["t2"] = md.t2;
    r.metadata["pathway"] = spectra::to_string(md.pathway);
    r.metadata["equilibrium"] = spectra::to_string(md.equilibrium);
    r.metadata["rows"] = md.row_axis + " (conjugate interval, resolvent sign -1)";
    r.metadata["columns"] = md.column_axis + " (ket interval, resolvent sign +1)";
    r.metadata["max_abs_response"] = norm;
    r.check();
    return r;
}

SweepResult spectrum_metrics_table(const std::vector<spectra::SpectrumGrid>& grids, const dimer::WeffOptions& options) {
    SweepResult r;
    r.label = "spectrum-metrics";
    r.columns = {{"theta", kAngle},          {"xi", ""},
                 {"peak_detuning", kRate},   {"asymmetry", ""},
                 {"dispersiveness", ""},     {"bright_detuning", kRate},
                 {"branch0_detuning", kRate}, {"branch1_detuning", kRate},
                 {"branch0_decay", kRate},   {"branch1_decay", kRate},
                 {"bright_branch", ""}};
    // Overlay branches are tracked along theta within each xi run.
    std::vector<spectra::OverlayPoint> overlay;
    for (std::size_t g = 0; g < grids.size(); ++g) {
        const auto& md = grids[g].metadata;
        auto point = spectra::overlay_point(md.params, options);
        const bool continues = g > 0 && grids[g - 1].metadata.params.xi == md.params.xi;
        if (continues) {
            const auto& prev = overlay.back();
            const double keep = std::hypot(point.detuning[0] - prev.detuning[0], point.decay[0] - prev.decay[0]) +
                                std::hypot(point.detuning[1] - prev.detuning[1], point.decay[1] - prev.decay[1]);
            const double swap = std::hypot(point.detuning[1] - prev.detuning[0], point.decay[1] - prev.decay[0]) +
                                std::hypot(point.detuning[0] - prev.detuning[1], point.decay[0] - prev.decay[1]);
            if (swap < keep) {
                std::swap(point.detuning[0], point.detuning[1]);
                std::swap(point.decay[0], point.decay[1]);
                point.bright = 1 - point.bright;
            }
        }
        overlay.push_back(point);
        const auto m = spectra::lineshape_metrics(spectra::diagonal_slice(grids[g]));
        r.rows.push_back({md.params.theta, md.params.xi, m.peak_detuning, m.asymmetry, m.dispersiveness,
                          point.detuning[std::size_t(point.bright)], point.detuning[0], point.detuning[1],
                          point.decay[0], point.decay[1], double(point.bright)});
    }
    r.check();
    return r;
}

Fig3Result run_fig3(const RunConfig& config) {
    config.validate();
    Fig3Result out;
    out.theta_values = config.theta_values;
    out.xi_values = config.xi_values;
    spectra::GridSpec spec = config.grid;
    spec.threads = config.threads;
    for (const double xi : config.xi_values)
        for (const double th : config.theta_values) {
            AnyonParams p = config.params;
            p.theta = th;
            p.xi = xi;
            out.grids.push_back(spectra::compute_spectrum(p, config.conventions, spec, config.cutoff));
        }

    out.slices.label = "fig3-slices";
    out.slices.columns = {{"xi", ""}, {"theta", kAngle}, {"detuning", kRate}, {"re_signal", ""}, {"im_signal", ""}, {"abs_signal", ""}};
    for (const auto& g : out.grids) {
        const double norm = g.max_abs();
        for (const auto& s : spectra::diagonal_slice(g)) {
            const cplx v = norm > 0.0 ? s.value / norm : s.value;
            out.slices.rows.push_back({g.metadata.params.xi, g.metadata.params.theta, s.detuning, v.real(), v.imag(), std::abs(v)});
        }
    }
    out.slices.metadata = base_metadata(config, out.slices.label);
    out.slices.metadata["normalization"] = "signal i*R divided by max|R| of its own grid";
    out.slices.check();

    out.metrics = spectrum_metrics_table(out.grids, dimer::weff_options(config.conventions));
    out.metrics.label = "fig3-metrics";
    out.metrics.metadata = base_metadata(config, out.metrics.label);
    return out;
}

} // namespace anyon::io
