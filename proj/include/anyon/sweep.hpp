// sweep.hpp — Figure data generation and generic parameter sweeps

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "anyon/config.hpp"
#include "anyon/spectra.hpp"

namespace anyon::io {

struct Column {
    std::string name;
    std::string unit; // empty for dimensionless
    std::string header() const { return unit.empty() ? name : name + " [" + unit + "]"; }
};

struct SweepResult {
    std::string label;
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::ordered_json metadata; // conventions, config echo, provenance

    void check() const; // rectangular, finite
};

SweepResult run_fig1(const RunConfig& config);
SweepResult run_fig2(const RunConfig& config);

// theta x xi product of W_eff quantities (kind Dimer) or single-oscillator rates (kind Single),
// over every configured axis.
SweepResult run_sweep(const RunConfig& config);

struct Fig3Result {
    std::vector<spectra::SpectrumGrid> grids;   // xi-major, theta-minor
    SweepResult slices;                         // (xi, theta, detuning) stack of the signal diagonal
    SweepResult metrics;                        // per grid: lineshape metrics + overlay columns
    std::vector<double> theta_values, xi_values;
};

Fig3Result run_fig3(const RunConfig& config);

SweepResult grid_table(const spectra::SpectrumGrid& grid);
SweepResult spectrum_metrics_table(const std::vector<spectra::SpectrumGrid>& grids,
                                   const dimer::WeffOptions& options);

} // namespace anyon::io
