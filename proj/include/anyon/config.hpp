// config.hpp — Run configuration, range grammar, strict JSON loading

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "anyon/params.hpp"
#include "anyon/spectra.hpp"

namespace anyon::io {

// start:stop:count with inclusive endpoints; count >= 2 (count 1 allowed only when start == stop).
struct AxisSpec {
    std::string name; // theta, xi, beta, gamma, coupling, omega
    double start{0.0};
    double stop{0.0};
    int count{2};

    std::vector<double> values() const;
};

// Decimal number, or pi in the forms pi, k*pi, pi/k.
double parse_number(const std::string& text, const std::string& what = "number");

AxisSpec parse_axis(const std::string& name, const std::string& text);
std::pair<double, double> parse_interval(const std::string& text); // lo:hi
// Either a range "a:b:n" or a comma-separated list "0,0.5,1".
std::vector<double> parse_value_list(const std::string& text);

bool is_parameter_name(const std::string& name);
void set_parameter(AnyonParams& p, const std::string& name, double value);

enum class RunKind { Fig1, Fig2, Fig3, Dimer, Single };
std::string to_string(RunKind k);
RunKind parse_run_kind(const std::string& s);

enum class TemperatureRegime { Low, High };
inline constexpr double kHighTemperatureBetaOmega = 0.1;

struct RunConfig {
    RunKind kind{RunKind::Dimer};
    AnyonParams params;
    Conventions conventions;
    std::vector<AxisSpec> axes;

    // fig2
    TemperatureRegime regime{TemperatureRegime::Low};
    std::vector<double> xi_values{0.0, 0.5, 1.0};
    // fig3
    std::vector<double> theta_values;

    spectra::GridSpec grid;
    int cutoff{2};
    int threads{0}; // execution detail; not echoed into outputs

    std::string output{"anyonsim"}; // path prefix
    bool svg{false};
    bool grids{false}; // fig3: also write every 2D grid

    void validate() const;
};

// fig1/fig2: theta axis 0:pi:200; fig3: theta 0:pi:13, xi {0, 1}.
RunConfig default_config(RunKind kind);

// Unknown keys anywhere are ValidationErrors.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Echo without execution details, stable key order.
nlohmann::ordered_json config_to_json(const RunConfig& c);
nlohmann::ordered_json conventions_to_json(const Conventions& c);
nlohmann::ordered_json params_to_json(const AnyonParams& p);

} // namespace anyon::io
