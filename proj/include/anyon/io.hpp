// io.hpp — CSV / JSON sidecar / SVG heatmap writers and the CSV reader

#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anyon/sweep.hpp"

namespace anyon::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string artifact_version();
// UTC, seconds resolution; honours SOURCE_DATE_EPOCH.
std::string iso8601_timestamp();

std::string format_double(double v); // %.17g, round-trips bit-exactly
std::string csv_field(const std::string& s); // RFC-4180 quoting when needed

// "# key=value" comment lines, then header, then rows; LF line endings.
void write_csv(std::ostream& out, const SweepResult& r);
void write_csv_file(const std::string& path, const SweepResult& r);

struct CsvTable {
    std::map<std::string, std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

inline constexpr const char* kMetadataSchema = "anyonsim-metadata/1";

nlohmann::ordered_json metadata_sidecar(const SweepResult& r, const std::vector<std::string>& files);
void write_json_file(const std::string& path, const nlohmann::ordered_json& j);
// Throws ValidationError describing the first schema violation.
void validate_metadata(const nlohmann::json& j);

struct Polyline {
    std::vector<std::pair<double, double>> points; // data coordinates (x, y)
    std::string color{"#000000"};
    bool dashed{true};
    std::string label;
};

struct Heatmap {
    std::vector<double> x; // column coordinates, increasing
    std::vector<double> y; // row coordinates, increasing
    std::vector<std::vector<double>> values; // values[row][col]
    std::string title, x_label, y_label;
    std::vector<Polyline> overlays;
    int color_levels{64};
};

// Diverging linear map symmetric about zero; cells of equal quantised colour share one path.
std::string render_svg(const Heatmap& h);
void write_svg_file(const std::string& path, const Heatmap& h);

Heatmap spectrum_heatmap(const spectra::SpectrumGrid& grid);
Heatmap slice_stack_heatmap(const Fig3Result& fig3, double xi);

// Writes <prefix>.csv and <prefix>.json; returns the paths written.
std::vector<std::string> write_outputs(const SweepResult& r, const std::string& prefix);
std::vector<std::string> write_fig3_outputs(const Fig3Result& f, const std::string& prefix, bool svg, bool grids);
std::vector<std::string> write_spectrum_outputs(const spectra::SpectrumGrid& g, const std::string& prefix, bool svg);

} // namespace anyon::io
