#include "anyon/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numeric>
#include <sstream>

#ifndef ANYON_VERSION
#define ANYON_VERSION "0.1.0"
#endif

namespace anyon::io {

namespace {

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::string scalar_text(const nlohmann::ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    return v.dump();
}

std::string fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> split_record(std::istream& in, bool& ok) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false, any = false;
    int ch;
    while ((ch = in.get()) != EOF) {
        any = true;
        const char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    cur.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (quoted) throw ValidationError("CSV: unterminated quoted field");
    ok = any;
    if (any) fields.push_back(std::move(cur));
    return fields;
}

double parse_field(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ValidationError("CSV: cannot parse '" + s + "' as a number");
    return v;
}

std::string hex_color(int level, int levels) {
    // blue (59, 76, 192) -> white -> red (180, 4, 38)
    const double t = levels > 1 ? double(level) / double(levels - 1) * 2.0 - 1.0 : 0.0;
    const double lo[3] = {59, 76, 192}, hi[3] = {180, 4, 38};
    int rgb[3];
    for (int k = 0; k < 3; ++k) {
        const double end = t < 0 ? lo[k] : hi[k];
        rgb[k] = int(std::lround(255.0 + (end - 255.0) * std::abs(t)));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string fmt(double v, const char* f = "%.4g") {
    char buf[32];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Fractional index of v in an increasing array, for mapping overlays onto cells.
double fractional_index(const std::vector<double>& axis, double v) {
    if (axis.size() < 2) return 0.0;
    if (v <= axis.front()) return (v - axis.front()) / (axis[1] - axis[0]);
    if (v >= axis.back()) return double(axis.size() - 1) + (v - axis.back()) / (axis.back() - axis[axis.size() - 2]);
    const auto it = std::upper_bound(axis.begin(), axis.end(), v);
    const std::size_t k = std::size_t(it - axis.begin()) - 1;
    return double(k) + (v - axis[k]) / (axis[k + 1] - axis[k]);
}

std::string join_path(const std::string& prefix, const std::string& suffix) { return prefix + suffix; }

} // namespace

std::string artifact_version() { return ANYON_VERSION; }

std::string iso8601_timestamp() {
    std::time_t t;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
        long long v = 0;
        const auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), v);
        if (ec != std::errc() || *ptr != '\0') throw ValidationError("SOURCE_DATE_EPOCH must be an integer");
        t = static_cast<std::time_t>(v);
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv(std::ostream& out, const SweepResult& r) {
    r.check();
    auto comment = [&](const std::string& k, const std::string& v) {
        std::string line = k + "=" + v;
        std::replace(line.begin(), line.end(), '\n', ' ');
        out << "# " << line << '\n';
    };
    comment("label", r.label);
    if (r.metadata.contains("conventions"))
        for (const auto& [k, v] : r.metadata.at("conventions").items()) comment(k, scalar_text(v));
    for (const auto& [k, v] : r.metadata.items())
        if (k != "label" && v.is_primitive()) comment(k, scalar_text(v));
    if (r.metadata.contains("params"))
        for (const auto& [k, v] : r.metadata.at("params").items()) comment(k, scalar_text(v));
    if (r.metadata.contains("config") && r.metadata.at("config").contains("params"))
        for (const auto& [k, v] : r.metadata.at("config").at("params").items()) comment(k, scalar_text(v));

    for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << csv_field(r.columns[c].header());
    out << '\n';
    std::string line;
    for (const auto& row : r.rows) {
        line.clear();
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line.push_back(',');
            line += format_double(row[c]);
        }
        line.push_back('\n');
        out << line;
    }
}

void write_csv_file(const std::string& path, const SweepResult& r) {
    auto out = open_for_write(path);
    write_csv(out, r);
    finish(out, path);
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    bool have_header = false;
    while (in.peek() != EOF) {
        if (in.peek() == '#') {
            std::string line;
            std::getline(in, line);
            const auto body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            const auto eq = body.find('=');
            if (eq != std::string::npos) t.comments[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        bool ok = false;
        auto fields = split_record(in, ok);
        if (!ok || (fields.size() == 1 && fields[0].empty())) continue;
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size()) throw ValidationError("CSV: row width does not match header");
        std::vector<double> row(fields.size());
        for (std::size_t k = 0; k < fields.size(); ++k) row[k] = parse_field(fields[k]);
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw ValidationError("CSV: missing header row");
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_csv(in);
}

nlohmann::ordered_json metadata_sidecar(const SweepResult& r, const std::vector<std::string>& files) {
    nlohmann::ordered_json j;
    j["schema"] = kMetadataSchema;
    j["artifact"] = "anyonsim";
    j["version"] = artifact_version();
    j["timestamp"] = iso8601_timestamp();
    j["label"] = r.label;
    j["conventions"] = r.metadata.contains("conventions") ? r.metadata.at("conventions") : nlohmann::ordered_json::object();
    j["config_hash"] = "fnv1a64:" + fnv1a64(r.metadata.dump());
    j["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : r.columns) j["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
    j["row_count"] = r.rows.size();
    j["files"] = files;
    j["metadata"] = r.metadata;
    return j;
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
    finish(out, path);
}

void validate_metadata(const nlohmann::json& j) {
    auto need = [&](const nlohmann::json& obj, const char* key, auto pred, const char* type, const std::string& where) {
        if (!obj.contains(key)) throw ValidationError("metadata: missing " + where + key);
        if (!pred(obj.at(key))) throw ValidationError("metadata: " + where + key + " must be " + type);
    };
    const auto is_string = [](const nlohmann::json& v) { return v.is_string(); };
    const auto is_object = [](const nlohmann::json& v) { return v.is_object(); };
    const auto is_array = [](const nlohmann::json& v) { return v.is_array(); };
    const auto is_bool = [](const nlohmann::json& v) { return v.is_boolean(); };
    const auto is_count = [](const nlohmann::json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); };
    if (!j.is_object()) throw ValidationError("metadata: top level must be an object");
    need(j, "schema", is_string, "a string", "");
    if (j.at("schema") != kMetadataSchema) throw ValidationError("metadata: unexpected schema id");
    need(j, "artifact", is_string, "a string", "");
    need(j, "version", is_string, "a string", "");
    need(j, "timestamp", is_string, "a string", "");
    const std::string ts = j.at("timestamp");
    if (ts.size() != 20 || ts[4] != '-' || ts[7] != '-' || ts[10] != 'T' || ts[13] != ':' || ts[16] != ':' || ts[19] != 'Z')
        throw ValidationError("metadata: timestamp must be ISO-8601 UTC (YYYY-MM-DDTHH:MM:SSZ)");
    need(j, "label", is_string, "a string", "");
    need(j, "conventions", is_object, "an object", "");
    const auto& c = j.at("conventions");
    need(c, "frequency", is_string, "a string", "conventions.");
    need(c, "conjugation", is_string, "a string", "conventions.");
    need(c, "jump_basis", is_string, "a string", "conventions.");
    need(c, "stat_dephasing", is_bool, "a boolean", "conventions.");
    need(j, "config_hash", is_string, "a string", "");
    need(j, "columns", is_array, "an array", "");
    for (const auto& col : j.at("columns")) {
        if (!col.is_object()) throw ValidationError("metadata: columns[] must be objects");
        need(col, "name", is_string, "a string", "columns[].");
        need(col, "unit", is_string, "a string", "columns[].");
    }
    need(j, "row_count", is_count, "a non-negative integer", "");
    need(j, "files", is_array, "an array", "");
    need(j, "metadata", is_object, "an object", "");
}

std::string render_svg(const Heatmap& h) {
    const std::size_t rows = h.y.size(), cols = h.x.size();
    if (rows == 0 || cols == 0 || h.values.size() != rows) throw ValidationError("heatmap: shape does not match axes");
    for (const auto& r : h.values)
        if (r.size() != cols) throw ValidationError("heatmap: ragged values");
    const int levels = std::max(2, h.color_levels);

    double vmax = 0.0;
    for (const auto& r : h.values)
        for (double v : r)
            if (std::isfinite(v)) vmax = std::max(vmax, std::abs(v));
    if (vmax == 0.0) vmax = 1.0;

    const double left = 70, top = 40, plot_w = 512, plot_h = 512, bar_w = 16;
    const double sx = plot_w / double(cols), sy = plot_h / double(rows);
    const double width = left + plot_w + 90, height = top + plot_h + 60;

    std::vector<std::string> paths(static_cast<std::size_t>(levels));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t yy = rows - 1 - r; // row 0 at the bottom
        std::size_t c = 0;
        while (c < cols) {
            const double v = std::isfinite(h.values[r][c]) ? h.values[r][c] : 0.0;
            const int level = int(std::lround((v / vmax + 1.0) * 0.5 * (levels - 1)));
            std::size_t e = c + 1;
            while (e < cols) {
                const double w = std::isfinite(h.values[r][e]) ? h.values[r][e] : 0.0;
                if (int(std::lround((w / vmax + 1.0) * 0.5 * (levels - 1))) != level) break;
                ++e;
            }
            auto& p = paths[std::size_t(level)];
            p += "M" + std::to_string(c) + " " + std::to_string(yy) + "h" + std::to_string(e - c) + "v1h-" +
                 std::to_string(e - c) + "z";
            c = e;
        }
    }

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
      << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    if (!h.title.empty()) s << "<text x=\"" << left + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << h.title << "</text>\n";
    s << "<g transform=\"translate(" << left << ' ' << top << ") scale(" << fmt(sx, "%.9g") << ' ' << fmt(sy, "%.9g")
      << ")\" shape-rendering=\"crispEdges\">\n";
    for (int l = 0; l < levels; ++l)
        if (!paths[std::size_t(l)].empty())
            s << "<path fill=\"" << hex_color(l, levels) << "\" d=\"" << paths[std::size_t(l)] << "\"/>\n";
    s << "</g>\n";

    // Overlays in cell coordinates, clipped to the plot.
    s << "<defs><clipPath id=\"plot\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\"/></clipPath>";
    s << "<linearGradient id=\"bar\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">";
    for (int k = 0; k <= 10; ++k)
        s << "<stop offset=\"" << fmt(k / 10.0) << "\" stop-color=\"" << hex_color(int(std::lround(k / 10.0 * (levels - 1))), levels) << "\"/>";
    s << "</linearGradient></defs>\n";
    s << "<g clip-path=\"url(#plot)\" fill=\"none\" stroke-width=\"1.5\">\n";
    for (const auto& o : h.overlays) {
        if (o.points.empty()) continue;
        s << "<polyline stroke=\"" << o.color << "\"" << (o.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
        for (const auto& [x, y] : o.points) {
            const double px = left + (fractional_index(h.x, x) + 0.5) * sx;
            const double py = top + plot_h - (fractional_index(h.y, y) + 0.5) * sy;
            s << fmt(px, "%.2f") << ',' << fmt(py, "%.2f") << ' ';
        }
        s << "\">";
        if (!o.label.empty()) s << "<title>" << o.label << "</title>";
        s << "</polyline>\n";
    }
    s << "</g>\n";

    s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = k / 4.0;
        const double xv = h.x.front() + fx * (h.x.back() - h.x.front());
        const double px = left + (fractional_index(h.x, xv) + 0.5) * sx;
        s << "<line x1=\"" << fmt(px, "%.2f") << "\" y1=\"" << top + plot_h << "\" x2=\"" << fmt(px, "%.2f") << "\" y2=\""
          << top + plot_h + 5 << "\" stroke=\"#000\"/>";
        s << "<text x=\"" << fmt(px, "%.2f") << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        const double yv = h.y.front() + fx * (h.y.back() - h.y.front());
        const double py = top + plot_h - (fractional_index(h.y, yv) + 0.5) * sy;
        s << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt(py, "%.2f") << "\" x2=\"" << left << "\" y2=\"" << fmt(py, "%.2f")
          << "\" stroke=\"#000\"/>";
        s << "<text x=\"" << left - 8 << "\" y=\"" << fmt(py + 4, "%.2f") << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    s << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 40 << "\" text-anchor=\"middle\">" << h.x_label << "</text>\n";
    s << "<text transform=\"translate(18 " << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << h.y_label << "</text>\n";
    const double bx = left + plot_w + 20;
    s << "<rect x=\"" << bx << "\" y=\"" << top << "\" width=\"" << bar_w << "\" height=\"" << plot_h
      << "\" fill=\"url(#bar)\" stroke=\"#000\"/>\n";
    s << "<text x=\"" << bx + bar_w + 4 << "\" y=\"" << top + 10 << "\">" << fmt(vmax) << "</text>";
    s << "<text x=\"" << bx + bar_w + 4 << "\" y=\"" << top + plot_h / 2 + 4 << "\">0</text>";
    s << "<text x=\"" << bx + bar_w + 4 << "\" y=\"" << top + plot_h << "\">" << fmt(-vmax) << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

void write_svg_file(const std::string& path, const Heatmap& h) {
    auto out = open_for_write(path);
    out << render_svg(h);
    finish(out, path);
}

Heatmap spectrum_heatmap(const spectra::SpectrumGrid& grid) {
    Heatmap h;
    h.x = grid.omega_t;
    h.y = grid.omega_tau;
    const double norm = grid.max_abs() > 0.0 ? grid.max_abs() : 1.0;
    h.values.assign(h.y.size(), std::vector<double>(h.x.size()));
    for (std::size_t r = 0; r < h.y.size(); ++r)
        for (std::size_t c = 0; c < h.x.size(); ++c)
            h.values[r][c] = (cplx(0.0, 1.0) * grid.values(Eigen::Index(r), Eigen::Index(c))).real() / norm;
    const auto& p = grid.metadata.params;
    h.title = "Re signal, theta=" + fmt(p.theta) + " xi=" + fmt(p.xi);
    h.x_label = "omega_t detuning [omega]";
    h.y_label = "omega_tau detuning [omega]";
    h.overlays.push_back({{{h.x.front(), h.y.front()}, {h.x.back(), h.y.back()}}, "#555555", true, "diagonal"});
    const auto o = spectra::overlay_point(p, dimer::weff_options(grid.metadata.conventions));
    for (int k = 0; k < 2; ++k) {
        const double d = o.detuning[std::size_t(k)];
        h.overlays.push_back({{{d, h.y.front()}, {d, h.y.back()}}, k == o.bright ? "#000000" : "#777777", true,
                              k == o.bright ? "bright mode" : "dark mode"});
    }
    return h;
}

Heatmap slice_stack_heatmap(const Fig3Result& fig3, double xi) {
    std::vector<std::size_t> idx;
    for (std::size_t g = 0; g < fig3.grids.size(); ++g)
        if (fig3.grids[g].metadata.params.xi == xi) idx.push_back(g);
    if (idx.empty()) throw ValidationError("no fig3 grids at the requested xi");
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return fig3.grids[a].metadata.params.theta < fig3.grids[b].metadata.params.theta;
    });
    Heatmap h;
    h.x = fig3.grids[idx[0]].omega_tau;
    for (std::size_t g : idx) {
        const auto& grid = fig3.grids[g];
        h.y.push_back(grid.metadata.params.theta);
        const double norm = grid.max_abs() > 0.0 ? grid.max_abs() : 1.0;
        std::vector<double> row;
        for (const auto& s : spectra::diagonal_slice(grid)) row.push_back(s.value.real() / norm);
        h.values.push_back(std::move(row));
    }
    h.title = "Diagonal slices, xi=" + fmt(xi);
    h.x_label = "detuning [omega]";
    h.y_label = "theta [rad]";
    Polyline b0{{}, "#000000", true, "branch 0"}, b1{{}, "#444444", true, "branch 1"};
    for (const auto& row : fig3.metrics.rows)
        if (row[1] == xi) {
            b0.points.push_back({row[6], row[0]});
            b1.points.push_back({row[7], row[0]});
        }
    auto by_theta = [](const auto& a, const auto& b) { return a.second < b.second; };
    std::sort(b0.points.begin(), b0.points.end(), by_theta);
    std::sort(b1.points.begin(), b1.points.end(), by_theta);
    h.overlays = {b0, b1};
    return h;
}

std::vector<std::string> write_outputs(const SweepResult& r, const std::string& prefix) {
    const std::string csv = join_path(prefix, ".csv"), js = join_path(prefix, ".json");
    write_csv_file(csv, r);
    write_json_file(js, metadata_sidecar(r, {csv}));
    return {csv, js};
}

std::vector<std::string> write_spectrum_outputs(const spectra::SpectrumGrid& g, const std::string& prefix, bool svg) {
    const SweepResult table = grid_table(g);
    const std::string csv = join_path(prefix, ".csv"), js = join_path(prefix, ".json");
    std::vector<std::string> files = {csv};
    write_csv_file(csv, table);
    if (svg) {
        const std::string path = join_path(prefix, ".svg");
        write_svg_file(path, spectrum_heatmap(g));
        files.push_back(path);
    }
    write_json_file(js, metadata_sidecar(table, files));
    files.push_back(js);
    return files;
}

std::vector<std::string> write_fig3_outputs(const Fig3Result& f, const std::string& prefix, bool svg, bool grids) {
    std::vector<std::string> files;
    auto add = [&](const std::vector<std::string>& v) { files.insert(files.end(), v.begin(), v.end()); };
    add(write_outputs(f.slices, prefix + "-slices"));
    add(write_outputs(f.metrics, prefix + "-metrics"));
    if (svg)
        for (std::size_t x = 0; x < f.xi_values.size(); ++x) {
            const std::string path = prefix + "-slices-xi" + std::to_string(x) + ".svg";
            write_svg_file(path, slice_stack_heatmap(f, f.xi_values[x]));
            files.push_back(path);
        }
    if (grids)
        for (std::size_t g = 0; g < f.grids.size(); ++g) {
            const std::size_t nt = f.theta_values.size();
            add(write_spectrum_outputs(f.grids[g], prefix + "-grid-xi" + std::to_string(g / nt) + "-theta" + std::to_string(g % nt), svg));
        }
    return files;
}

} // namespace anyon::io
