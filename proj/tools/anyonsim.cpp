// anyonsim — command-line front end: closed-form rates, W_eff analysis, spectra, figure data, sweeps

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "anyon/config.hpp"
#include "anyon/dimer.hpp"
#include "anyon/io.hpp"
#include "anyon/kernels.hpp"
#include "anyon/spectra.hpp"
#include "anyon/statistics.hpp"
#include "anyon/sweep.hpp"

using namespace anyon;

namespace {

struct Flags {
    std::optional<std::string> theta, xi, beta, gamma, coupling, omega, t2; // numbers; pi shorthands allowed
    std::optional<int> cutoff, grid, threads;
    std::optional<std::string> range, convention, conjugation, jump_basis, stat_dephasing, absorption, hamiltonian,
        pathway, equilibrium, out;
    bool svg{false};
    bool grids{false};

    // subcommand specific
    std::optional<std::string> thetas, xis, regime, config;
};

void add_common(CLI::App& app, Flags& f) {
    app.add_option("--theta", f.theta, "statistical angle in [0, pi]");
    app.add_option("--xi", f.xi, "bath correlation in [-1, 1]");
    app.add_option("--beta", f.beta, "inverse temperature (units 1/omega)");
    app.add_option("--gamma", f.gamma, "bath coupling rate");
    app.add_option("--coupling", f.coupling, "hopping J");
    app.add_option("--omega", f.omega, "mode frequency");
    app.add_option("--cutoff", f.cutoff, "Fock cutoff per mode");
    app.add_option("--grid", f.grid, "spectrum grid points per axis");
    app.add_option("--range", f.range, "lo:hi detuning range (ep-locate: theta bracket)");
    app.add_option("--t2", f.t2, "waiting time");
    app.add_option("--convention", f.convention, "appendix|maintext");
    app.add_option("--conjugation", f.conjugation, "modulus|analytic");
    app.add_option("--jump-basis", f.jump_basis, "site|deformed");
    app.add_option("--stat-dephasing", f.stat_dephasing, "on|off");
    app.add_option("--absorption", f.absorption, "lowering|raising");
    app.add_option("--hamiltonian", f.hamiltonian, "normal-mode|normal-mode-deformed|site");
    app.add_option("--pathway", f.pathway, "diagram|full");
    app.add_option("--equilibrium", f.equilibrium, "vacuum|steady-state");
    app.add_option("--threads", f.threads, "worker threads (0 = all cores)");
    app.add_option("--out", f.out, "output path prefix");
    app.add_flag("--svg", f.svg, "also write SVG heatmaps");
}

AnyonParams params_from(const Flags& f, AnyonParams p = {}) {
    if (f.theta) p.theta = io::parse_number(*f.theta, "--theta");
    if (f.xi) p.xi = io::parse_number(*f.xi, "--xi");
    if (f.beta) p.beta = io::parse_number(*f.beta, "--beta");
    if (f.gamma) p.gamma = io::parse_number(*f.gamma, "--gamma");
    if (f.coupling) p.coupling_j = io::parse_number(*f.coupling, "--coupling");
    if (f.omega) p.omega = io::parse_number(*f.omega, "--omega");
    p.validate();
    return p;
}

Conventions conventions_from(const Flags& f, Conventions c = {}) {
    if (f.convention) c.frequency = parse_frequency_convention(*f.convention);
    if (f.conjugation) c.conjugation = parse_conjugation(*f.conjugation);
    if (f.jump_basis) c.jump_basis = parse_jump_basis(*f.jump_basis);
    if (f.absorption) c.absorption = parse_absorption(*f.absorption);
    if (f.hamiltonian) c.hamiltonian = parse_hamiltonian(*f.hamiltonian);
    if (f.stat_dephasing) {
        if (*f.stat_dephasing == "on") c.stat_dephasing = true;
        else if (*f.stat_dephasing == "off") c.stat_dephasing = false;
        else throw ValidationError("--stat-dephasing expects on|off");
    }
    return c;
}

spectra::GridSpec grid_from(const Flags& f, spectra::GridSpec g = {}) {
    if (f.grid) g.count = *f.grid;
    if (f.range) std::tie(g.lo, g.hi) = io::parse_interval(*f.range);
    if (f.t2) g.t2 = io::parse_number(*f.t2, "--t2");
    if (f.pathway) g.pathway = spectra::parse_pathway(*f.pathway);
    if (f.equilibrium) g.equilibrium = spectra::parse_equilibrium(*f.equilibrium);
    if (f.threads) g.threads = *f.threads;
    g.validate();
    return g;
}

io::RunConfig run_config_from(const Flags& f, io::RunKind kind) {
    io::RunConfig c = io::default_config(kind);
    c.params = params_from(f, c.params);
    c.conventions = conventions_from(f, c.conventions);
    c.grid = grid_from(f, c.grid);
    if (f.cutoff) c.cutoff = *f.cutoff;
    if (f.threads) c.threads = *f.threads;
    c.output = f.out.value_or(io::to_string(kind));
    c.svg = f.svg;
    c.grids = f.grids;
    if (f.thetas) {
        if (kind == io::RunKind::Fig3) c.theta_values = io::parse_value_list(*f.thetas);
        else c.axes = {io::parse_axis("theta", *f.thetas)};
    }
    if (f.xis) c.xi_values = io::parse_value_list(*f.xis);
    if (f.regime) {
        if (*f.regime == "low") c.regime = io::TemperatureRegime::Low;
        else if (*f.regime == "high") c.regime = io::TemperatureRegime::High;
        else throw ValidationError("--regime expects low|high");
    }
    c.validate();
    return c;
}

// Small tables go to stdout unless --out is given.
void emit(const io::SweepResult& r, const Flags& f) {
    if (f.out) {
        for (const auto& path : io::write_outputs(r, *f.out)) std::cerr << "wrote " << path << '\n';
    } else {
        io::write_csv(std::cout, r);
    }
}

nlohmann::ordered_json metadata_for(const AnyonParams& p, const Conventions& c, const std::string& label) {
    nlohmann::ordered_json m;
    m["label"] = label;
    m["conventions"] = io::conventions_to_json(c);
    m["params"] = io::params_to_json(p);
    return m;
}

void single_rates(const Flags& f) {
    const AnyonParams p = params_from(f);
    const Conventions c = conventions_from(f);
    io::SweepResult r;
    r.label = "single-rates";
    r.columns = {{"theta", "rad"},         {"re_n_theta", ""},     {"im_n_theta", ""},
                 {"re_phase_average", ""}, {"im_phase_average", ""}, {"gamma_stat", "omega"},
                 {"re_gamma_full", "omega"}, {"im_gamma_full", "omega"}};
    const cplx n = stats::thermal_occupation(p.theta, p.beta, p.omega);
    const cplx avg = stats::phase_average(p.theta, p.z());
    const cplx full = stats::gamma_full_single(p).value;
    r.rows = {{p.theta, n.real(), n.imag(), avg.real(), avg.imag(), stats::gamma_stat(p.theta, p.z(), p.gamma), full.real(), full.imag()}};
    r.metadata = metadata_for(p, c, r.label);
    emit(r, f);
}

void dimer_rates(const Flags& f) {
    const AnyonParams p = params_from(f);
    const Conventions c = conventions_from(f);
    const auto m = dimer::build_weff(p, dimer::weff_options(c));
    io::SweepResult r;
    r.label = "dimer-rates";
    r.columns = {{"theta", "rad"},          {"xi", ""},
                 {"re_lambda_plus", "omega"}, {"im_lambda_plus", "omega"},
                 {"re_lambda_minus", "omega"}, {"im_lambda_minus", "omega"},
                 {"lifetime_plus", "1/omega"}, {"lifetime_minus", "1/omega"},
                 {"gap", "omega"},          {"near_defective", ""},
                 {"bright_branch", ""}};
    const auto& ev = m.eigenvalues;
    const auto life = [](double t) { return std::isfinite(t) ? t : 0.0; };
    r.rows = {{p.theta, p.xi, ev[0].real(), ev[0].imag(), ev[1].real(), ev[1].imag(), life(m.lifetimes[0]),
               life(m.lifetimes[1]), std::abs(ev[0] - ev[1]), m.near_defective ? 1.0 : 0.0,
               double(dimer::bright_branch(m, p.theta))}};
    r.metadata = metadata_for(p, c, r.label);
    r.metadata["lifetime_note"] = "0 marks an undamped mode";
    emit(r, f);
}

void ep_locate(const Flags& f) {
    AnyonParams p = params_from(f);
    const Conventions c = conventions_from(f);
    std::pair<double, double> bracket{0.0, kPi};
    if (f.range) bracket = io::parse_interval(*f.range);
    const auto ep = dimer::find_exceptional_point(p, bracket, dimer::weff_options(c));
    io::SweepResult r;
    r.label = "ep-locate";
    r.columns = {{"xi", ""}, {"found", ""}, {"theta_star", "rad"}, {"gap", "omega"}};
    r.rows = {{p.xi, ep.found ? 1.0 : 0.0, ep.theta_star, ep.gap}};
    r.metadata = metadata_for(p, c, r.label);
    emit(r, f);
}

void spectrum(const Flags& f) {
    const AnyonParams p = params_from(f);
    const Conventions c = conventions_from(f);
    const spectra::GridSpec g = grid_from(f);
    const auto grid = spectra::compute_spectrum(p, c, g, f.cutoff.value_or(2));
    const std::string prefix = f.out.value_or("spectrum");
    for (const auto& path : io::write_spectrum_outputs(grid, prefix, f.svg)) std::cerr << "wrote " << path << '\n';
    const auto m = spectra::lineshape_metrics(spectra::diagonal_slice(grid));
    const auto o = spectra::overlay_point(p, dimer::weff_options(c));
    std::printf("peak_detuning=%.17g\nasymmetry=%.17g\ndispersiveness=%.17g\nbright_detuning=%.17g\n", m.peak_detuning,
                m.asymmetry, m.dispersiveness, o.detuning[std::size_t(o.bright)]);
}

void run(const io::RunConfig& c) {
    std::vector<std::string> files;
    switch (c.kind) {
    case io::RunKind::Fig1: files = io::write_outputs(io::run_fig1(c), c.output); break;
    case io::RunKind::Fig2: files = io::write_outputs(io::run_fig2(c), c.output); break;
    case io::RunKind::Fig3: files = io::write_fig3_outputs(io::run_fig3(c), c.output, c.svg, c.grids); break;
    case io::RunKind::Dimer:
    case io::RunKind::Single: files = io::write_outputs(io::run_sweep(c), c.output); break;
    }
    for (const auto& path : files) std::cerr << "wrote " << path << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anyonic oscillator relaxation and 2D spectra"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    add_common(app, f);
    std::optional<std::string> isa;
    app.add_option("--isa", isa, "force kernel set: scalar|avx2");

    auto* s_single = app.add_subcommand("single-rates", "closed-form single-oscillator rates");
    auto* s_dimer = app.add_subcommand("dimer-rates", "W_eff eigenvalues for one (theta, xi)");
    auto* s_ep = app.add_subcommand("ep-locate", "locate the exceptional point in theta");
    auto* s_spec = app.add_subcommand("spectrum", "one 2D rephasing spectrum");
    auto* s_fig1 = app.add_subcommand("fig1", "statistical relaxation rate vs theta");
    auto* s_fig2 = app.add_subcommand("fig2", "dimer mode rates vs theta for a set of xi");
    auto* s_fig3 = app.add_subcommand("fig3", "2D spectra over theta and xi with diagonal slices");
    auto* s_sweep = app.add_subcommand("sweep", "run a JSON-configured sweep");

    for (auto* s : {s_fig1, s_fig2}) s->add_option("--thetas", f.thetas, "theta axis start:stop:count");
    s_fig3->add_option("--thetas", f.thetas, "theta list or start:stop:count");
    for (auto* s : {s_fig2, s_fig3}) s->add_option("--xis", f.xis, "xi list or start:stop:count");
    s_fig2->add_option("--regime", f.regime, "low|high temperature preset (high uses beta*omega = 0.1)");
    s_fig3->add_flag("--grids", f.grids, "also write every 2D grid");
    s_sweep->add_option("--config", f.config, "JSON run configuration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (isa) kernels::set_active_isa(*isa == "scalar" ? kernels::Isa::Scalar
                                         : *isa == "avx2" ? kernels::Isa::Avx2
                                                          : throw ValidationError("--isa expects scalar|avx2"));
        if (*s_single) single_rates(f);
        else if (*s_dimer) dimer_rates(f);
        else if (*s_ep) ep_locate(f);
        else if (*s_spec) spectrum(f);
        else if (*s_fig1) run(run_config_from(f, io::RunKind::Fig1));
        else if (*s_fig2) run(run_config_from(f, io::RunKind::Fig2));
        else if (*s_fig3) run(run_config_from(f, io::RunKind::Fig3));
        else if (*s_sweep) {
            io::RunConfig c = io::load_config(*f.config);
            if (f.threads) c.threads = *f.threads;
            if (f.out) c.output = *f.out;
            if (f.svg) c.svg = true;
            run(c);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ComputeError& e) {
        std::cerr << "compute error: " << e.what() << '\n';
        return 2;
    } catch (const io::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
