#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "packetlab/analysis.hpp"
#include "packetlab/bigrid.hpp"
#include "packetlab/dispersion.hpp"
#include "packetlab/error.hpp"
#include "packetlab/evolution.hpp"
#include "packetlab/expression.hpp"
#include "packetlab/grid.hpp"
#include "packetlab/wavepacket.hpp"

namespace packetlab {

enum class Output { timeseries, snapshots, norms, prediction, comparison };

inline std::string to_string(Output o) {
    switch (o) {
        case Output::timeseries: return "timeseries";
        case Output::snapshots: return "snapshots";
        case Output::norms: return "norms";
        case Output::prediction: return "prediction";
        case Output::comparison: return "comparison";
    }
    return "timeseries";
}

/// Aggregated configuration diagnostics; `what()` lists every violation, one per line.
class config_error : public validation_error {
public:
    explicit config_error(std::vector<std::string> problems)
        : validation_error(join(problems)), problems_(std::move(problems)) {}
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid scenario:";
        for (const auto& p : v) out += "\n  - " + p;
        return out;
    }
    std::vector<std::string> problems_;
};

struct CompareTolerances {
    double amplitude = 0.07;  // relative
    double velocity = 0.05;   // relative, or displacement / width for resting packets
    double width = 0.10;      // relative error of the growth factor
};

struct Scenario {
    std::string id = "scenario";
    double h = 2.0 * std::numbers::pi / 256.0;
    std::size_t M = 2048;
    std::string gamma_expr = "h^(-1/4)";
    bool pi_split = false;
    double eta0 = 0.0;
    double band_lo = -std::numbers::pi;
    double band_hi = std::numbers::pi;
    SymbolKind symbol = SymbolKind::semidiscrete;
    std::vector<int> k_levels{0};
    Projection projection = Projection::none;
    TimeWindow time{1.0, 64};
    PhaseSign sign = PhaseSign::plus;
    double norm_p = 6.0;
    std::vector<double> radii;  // empty: {L/16, L/8, L/4}
    std::set<Output> outputs{Output::timeseries, Output::snapshots, Output::norms,
                             Output::prediction, Output::comparison};
    std::string output_dir = "packetlab_out";
    CompareTolerances tolerances;
    double survival_threshold = 1e-3;

    double gamma() const { return gamma_at(h); }
    double gamma_at(double hh) const { return evaluate(gamma_expr, {{"h", hh}}); }
    Grid grid() const { return make_grid(h, M, true); }
    Symbol make_symbol() const {
        return symbol == SymbolKind::continuous ? Symbol::continuous(h) : Symbol::semidiscrete(h);
    }
    PacketSpec packet() const { return {eta0, band_lo, band_hi, gamma()}; }

    /// Initial datum on the fine grid, before any filtering.
    SpectralField initial_spectrum() const {
        const Grid g = grid();
        if (pi_split) return make_special_data(SpecialDatum::pi_split(), gamma(), g);
        return make_packet(packet(), g);
    }

    /// Carrier used for classification: pi for the split datum.
    double carrier() const { return pi_split ? std::numbers::pi : eta0; }

    /// Every precondition the pipeline relies on; empty when the scenario can run.
    std::vector<std::string> problems() const {
        std::vector<std::string> out;
        if (id.empty()) out.push_back("scenario_id must not be empty");
        if (!(h > 0.0) || !std::isfinite(h)) out.push_back("h must be positive");
        if (M < 2 || !is_power_of_two(M)) out.push_back("M must be a power of two >= 2");
        double g = 0.0;
        try {
            g = gamma();
            if (!(g > 0.0) || !std::isfinite(g)) out.push_back("gamma must evaluate to a positive number");
        } catch (const std::exception& e) {
            out.push_back(std::string("gamma: ") + e.what());
        }
        if (!pi_split) {
            try {
                PacketSpec{eta0, band_lo, band_hi, g > 0.0 ? g : 1.0}.validate();
            } catch (const std::exception& e) {
                out.push_back(e.what());
            }
            if (!(eta0 > -std::numbers::pi && eta0 <= std::numbers::pi))
                out.push_back("eta0 must lie in (-pi, pi]");
        }
        if (k_levels.empty()) out.push_back("bigrid.k needs at least one level");
        for (int k : k_levels) {
            if (k < 0) out.push_back("bigrid.k must be >= 0, got " + std::to_string(k));
            if (k > 0 && projection == Projection::none)
                out.push_back("bigrid.k = " + std::to_string(k) + " requires a projection");
            if (k > 0 && M >= 2 && is_power_of_two(M) && (M >> k) < 4)
                out.push_back("bigrid.k = " + std::to_string(k) + " leaves fewer than 4 coarse nodes for M = " +
                              std::to_string(M));
        }
        if (!(time.T > 0.0)) out.push_back("time.T must be positive");
        if (time.n_samples < 16) out.push_back("time.n_samples must be >= 16");
        if (!(norm_p >= 2.0)) out.push_back("norms.p must be >= 2");
        const double L = static_cast<double>(M) * h;
        for (double R : radii)
            if (!(R > 0.0) || R > 0.5 * L + 1e-12) out.push_back("norms.radii must lie in (0, L/2]");
        if (!(survival_threshold >= 0.0)) out.push_back("predict.threshold must be >= 0");
        return out;
    }

    void validate() const {
        if (auto p = problems(); !p.empty()) throw config_error(std::move(p));
    }
};

namespace detail {

inline std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

inline void flatten_json(const nlohmann::json& j, const std::string& prefix,
                         std::map<std::string, std::string>& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten_json(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        std::string joined;
        for (const auto& v : j) {
            if (!joined.empty()) joined += ", ";
            joined += v.is_string() ? v.get<std::string>() : v.dump();
        }
        out[prefix] = joined;
    } else if (j.is_string()) {
        out[prefix] = j.get<std::string>();
    } else {
        out[prefix] = j.dump();
    }
}

}  // namespace detail

/// Reads `key = value` lines (dotted keys, '#' comments) or an equivalent JSON object.
inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    const std::string head = detail::trim(text);
    if (!head.empty() && head.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const std::exception& e) {
            throw config_error({std::string("config JSON: ") + e.what()});
        }
        detail::flatten_json(j, "", kv);
        return kv;
    }
    std::vector<std::string> problems;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        if (key.empty()) {
            problems.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (kv.contains(key)) problems.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = detail::trim(line.substr(eq + 1));
    }
    if (!problems.empty()) throw config_error(std::move(problems));
    return kv;
}

/// Builds and validates a scenario, collecting every problem before failing.
inline Scenario scenario_from_map(const std::map<std::string, std::string>& kv, Scenario s = {}) {
    // std::map iterates keys in byte order, so "M" and "h" are applied before
    // "norms.radii", which may reference L = M h.
    std::vector<std::string> problems;
    auto number = [&](const std::string& key, const std::string& v, const std::map<std::string, double>& vars = {}) {
        try {
            return evaluate(v, vars);
        } catch (const std::exception& e) {
            problems.push_back(key + ": " + e.what());
            return std::nan("");
        }
    };

    for (const auto& [key, value] : kv) {
        if (key == "scenario_id" || key == "id") {
            s.id = value;
        } else if (key == "h") {
            s.h = number(key, value);
        } else if (key == "M") {
            const double m = number(key, value);
            if (m >= 1.0 && m == std::floor(m) && m < 1e12) s.M = static_cast<std::size_t>(m);
            else problems.push_back("M: expected a positive integer, got '" + value + "'");
        } else if (key == "gamma") {
            s.gamma_expr = value;
        } else if (key == "eta0") {
            if (value == "pi-split") {
                s.pi_split = true;
            } else {
                s.pi_split = false;
                s.eta0 = number(key, value);
            }
        } else if (key == "band") {
            const auto parts = detail::split_list(value);
            if (parts.size() != 2) {
                problems.push_back("band: expected 'eta1, eta2'");
            } else {
                s.band_lo = number(key, parts[0]);
                s.band_hi = number(key, parts[1]);
            }
        } else if (key == "band.lo" || key == "band.eta1") {
            s.band_lo = number(key, value);
        } else if (key == "band.hi" || key == "band.eta2") {
            s.band_hi = number(key, value);
        } else if (key == "symbol") {
            if (value == "continuous") s.symbol = SymbolKind::continuous;
            else if (value == "semidiscrete") s.symbol = SymbolKind::semidiscrete;
            else problems.push_back("symbol: expected continuous or semidiscrete, got '" + value + "'");
        } else if (key == "bigrid.k") {
            s.k_levels.clear();
            for (const auto& part : detail::split_list(value)) {
                const double k = number(key, part);
                if (k == std::floor(k) && std::abs(k) < 64) s.k_levels.push_back(static_cast<int>(k));
                else problems.push_back("bigrid.k: expected integers, got '" + part + "'");
            }
        } else if (key == "bigrid.projection") {
            if (value == "none") s.projection = Projection::none;
            else if (value == "restrict") s.projection = Projection::restrict;
            else if (value == "average") s.projection = Projection::average;
            else problems.push_back("bigrid.projection: expected none, restrict or average, got '" + value + "'");
        } else if (key == "time.T") {
            s.time.T = number(key, value);
        } else if (key == "time.n_samples") {
            const double n = number(key, value);
            if (n == std::floor(n) && n > 0 && n < 1e7) s.time.n_samples = static_cast<int>(n);
            else problems.push_back("time.n_samples: expected a positive integer");
        } else if (key == "sign") {
            if (value == "+" || value == "plus") s.sign = PhaseSign::plus;
            else if (value == "-" || value == "minus") s.sign = PhaseSign::minus;
            else problems.push_back("sign: expected + or -, got '" + value + "'");
        } else if (key == "outputs") {
            s.outputs.clear();
            for (const auto& o : detail::split_list(value)) {
                if (o == "timeseries") s.outputs.insert(Output::timeseries);
                else if (o == "snapshots") s.outputs.insert(Output::snapshots);
                else if (o == "norms") s.outputs.insert(Output::norms);
                else if (o == "prediction") s.outputs.insert(Output::prediction);
                else if (o == "comparison") s.outputs.insert(Output::comparison);
                else problems.push_back("outputs: unknown output '" + o + "'");
            }
        } else if (key == "norms.p") {
            s.norm_p = value == "inf" ? std::numeric_limits<double>::infinity() : number(key, value);
        } else if (key == "norms.radii") {
            s.radii.clear();
            const double L = static_cast<double>(s.M) * s.h;
            for (const auto& part : detail::split_list(value)) s.radii.push_back(number(key, part, {{"L", L}}));
        } else if (key == "output.dir" || key == "output_dir") {
            s.output_dir = value;
        } else if (key == "compare.tol.amplitude") {
            s.tolerances.amplitude = number(key, value);
        } else if (key == "compare.tol.velocity") {
            s.tolerances.velocity = number(key, value);
        } else if (key == "compare.tol.width") {
            s.tolerances.width = number(key, value);
        } else if (key == "predict.threshold") {
            s.survival_threshold = number(key, value);
        } else {
            problems.push_back("unknown key '" + key + "'");
        }
    }
    for (auto& p : s.problems()) problems.push_back(std::move(p));
    if (!problems.empty()) throw config_error(std::move(problems));
    return s;
}

inline Scenario parse_scenario(const std::string& text) { return scenario_from_map(parse_config_text(text)); }

/// The figure configurations shipped with the tool.
inline std::vector<std::string> preset_names() {
    return {"fig1", "fig2", "fig3a", "fig3b", "fig3c", "fig3d"};
}

inline Scenario preset(const std::string& name) {
    Scenario s;
    s.id = name;
    s.k_levels = {0, 1, 2};
    if (name == "fig1" || name == "fig2") {
        // Projection comparisons of the three data: only the filtered data matter.
        s.pi_split = true;
        s.projection = name == "fig1" ? Projection::restrict : Projection::average;
        s.outputs = {Output::snapshots, Output::prediction};
    } else if (name == "fig3a") {
        s.eta0 = std::numbers::pi / 2.0;
        s.projection = Projection::restrict;
    } else if (name == "fig3b") {
        s.eta0 = std::numbers::pi / 2.0;
        s.projection = Projection::average;
    } else if (name == "fig3c") {
        s.pi_split = true;
        s.projection = Projection::restrict;
    } else if (name == "fig3d") {
        s.eta0 = 2.0 * std::numbers::pi / 3.0;
        s.projection = Projection::restrict;
    } else {
        std::string known;
        for (const auto& n : preset_names()) known += " " + n;
        throw config_error({"unknown preset '" + name + "' (known:" + known + ")"});
    }
    s.validate();
    return s;
}

/// `preset:<name>` selects a built-in scenario; anything else is a config file path.
inline Scenario load_scenario(const std::string& source) {
    if (source.rfind("preset:", 0) == 0) return preset(source.substr(7));
    std::ifstream in(source);
    if (!in) throw config_error({"cannot open config file '" + source + "'"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

}  // namespace packetlab
