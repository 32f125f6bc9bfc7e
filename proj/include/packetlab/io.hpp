#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "packetlab/analysis.hpp"
#include "packetlab/error.hpp"
#include "packetlab/grid.hpp"

#ifndef PACKETLAB_VERSION
#define PACKETLAB_VERSION "0.0.0"
#endif

namespace packetlab {

inline constexpr const char* version = PACKETLAB_VERSION;

/// Provenance stamped into every output file.
struct RunMetadata {
    std::string scenario_id;
    double h = 0.0;
    std::size_t M = 0;
    double gamma = 0.0;
    int k = 0;
    std::string projection = "none";
    std::string sign = "+";

    nlohmann::json to_json() const {
        return {{"scenario_id", scenario_id}, {"h", h},       {"M", M},
                {"gamma", gamma},             {"k", k},       {"projection", projection},
                {"sign", sign},               {"tool_version", version}};
    }
};

/// Shortest decimal that round-trips a double (17 significant digits).
inline std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

inline void write_metadata_comment(std::ostream& os, const RunMetadata& meta) {
    os << "# scenario_id=" << meta.scenario_id << " h=" << format_double(meta.h) << " M=" << meta.M
       << " gamma=" << format_double(meta.gamma) << " k=" << meta.k << " projection=" << meta.projection
       << " sign=" << meta.sign << " tool_version=" << version << "\n";
}

/// Physical snapshot: `index,x,re,im`, one row per node.
inline void write_field_csv(std::ostream& os, const PhysicalField& f, const RunMetadata* meta = nullptr) {
    if (meta) write_metadata_comment(os, *meta);
    os << "index,x,re,im\n";
    const Grid& g = f.grid();
    for (std::size_t i = 0; i < g.size(); ++i)
        os << g.index(i) << ',' << format_double(g.node(i)) << ',' << format_double(f[i].real()) << ','
           << format_double(f[i].imag()) << '\n';
}

/// Spectral snapshot: `m,xi,re,im`, one row per wavenumber bin.
inline void write_field_csv(std::ostream& os, const SpectralField& F, const RunMetadata* meta = nullptr) {
    if (meta) write_metadata_comment(os, *meta);
    os << "m,xi,re,im\n";
    const Grid& g = F.grid();
    for (std::size_t m = 0; m < g.size(); ++m)
        os << m << ',' << format_double(g.wavenumber(m)) << ',' << format_double(F[m].real()) << ','
           << format_double(F[m].imag()) << '\n';
}

namespace detail {

inline std::vector<std::vector<std::string>> read_csv_rows(std::istream& in, const std::string& header) {
    std::string line;
    bool seen_header = false;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!seen_header) {
            if (line != header) throw validation_error("csv: expected header '" + header + "', got '" + line + "'");
            seen_header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 4) throw validation_error("csv: expected 4 columns in '" + line + "'");
        rows.push_back(std::move(cells));
    }
    if (!seen_header) throw validation_error("csv: missing header '" + header + "'");
    return rows;
}

}  // namespace detail

/// Reads a physical snapshot back; the grid is rebuilt from the node column.
inline PhysicalField read_physical_csv(std::istream& in) {
    const auto rows = detail::read_csv_rows(in, "index,x,re,im");
    if (rows.size() < 2) throw validation_error("csv: need at least two nodes");
    const long origin = std::stol(rows[0][0]);
    const double h = std::stod(rows[1][1]) - std::stod(rows[0][1]);
    Grid g = Grid::with_origin(h, rows.size(), origin);
    std::vector<complex> values;
    values.reserve(rows.size());
    for (const auto& r : rows) values.emplace_back(std::stod(r[2]), std::stod(r[3]));
    return PhysicalField(g, std::move(values));
}

/// Time-series CSV: `t,centroid,width,peak_amp,l2norm`.
struct SeriesRow {
    double t;
    PacketMetrics metrics;
};

inline void write_timeseries_csv(std::ostream& os, const std::vector<SeriesRow>& rows,
                                 const RunMetadata* meta = nullptr) {
    if (meta) write_metadata_comment(os, *meta);
    os << "t,centroid,width,peak_amp,l2norm\n";
    for (const auto& r : rows)
        os << format_double(r.t) << ',' << format_double(r.metrics.centroid) << ','
           << format_double(r.metrics.width) << ',' << format_double(r.metrics.peak_amp) << ','
           << format_double(std::sqrt(r.metrics.mass)) << '\n';
}

inline nlohmann::json exponent_json(double v) {
    if (std::isinf(v)) return "inf";
    return v;
}

/// NormReport record with keys {p, q, T, n_samples, value, ratio, radii, smoothing_value, h, gamma, scenario_id}.
inline nlohmann::json to_json(const NormReport& r) {
    return {{"p", exponent_json(r.p)},
            {"q", exponent_json(r.q)},
            {"T", r.T},
            {"n_samples", r.n_samples},
            {"value", r.value},
            {"ratio", r.ratio},
            {"radii", r.radii},
            {"smoothing_value", r.smoothing_value},
            {"smoothing_ratio", r.smoothing_ratio},
            {"h", r.h},
            {"gamma", r.gamma},
            {"scenario_id", r.scenario_id}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

}  // namespace packetlab
