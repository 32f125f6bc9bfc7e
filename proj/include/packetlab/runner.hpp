#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "packetlab/analysis.hpp"
#include "packetlab/bigrid.hpp"
#include "packetlab/dispersion.hpp"
#include "packetlab/evolution.hpp"
#include "packetlab/io.hpp"
#include "packetlab/predictor.hpp"
#include "packetlab/scenario.hpp"
#include "packetlab/wavepacket.hpp"

namespace packetlab {

enum class Mode { simulate, project, predict, norms, compare };

inline std::string to_string(Mode m) {
    switch (m) {
        case Mode::simulate: return "simulate";
        case Mode::project: return "project";
        case Mode::predict: return "predict";
        case Mode::norms: return "norms";
        case Mode::compare: return "compare";
    }
    return "simulate";
}

/// Predicted versus measured values for one packet at one sampled time.
struct ComparisonRow {
    double t = 0.0;
    double predicted_centroid = 0.0;
    double measured_centroid = 0.0;
    double predicted_velocity = 0.0;
    double measured_velocity = 0.0;  // mean velocity over [0, t]
    double velocity_error = 0.0;
    double predicted_width_growth = 1.0;
    double measured_width_growth = 1.0;
    double width_error = 0.0;
    double predicted_amplitude = 0.0;
    double measured_amplitude = 0.0;
    double amplitude_error = 0.0;
};

struct PacketComparison {
    PacketPrediction prediction;
    std::vector<SeriesRow> series;
    std::vector<ComparisonRow> rows;
    double max_amplitude_error = 0.0;
    double velocity_error = 0.0;  // at the final time
    double max_width_error = 0.0;
    bool width_checked = true;    // false for packets cut at their center
    bool within_tolerance = true;
};

struct VariantResult {
    int k = 0;
    Prediction prediction;
    std::optional<PhysicalField> coarse;  // projected datum, k > 0
    PhysicalField datum;                  // filtered datum on the fine grid
    SpectralField spectrum;               // its transform
    PhysicalField final_field;            // solution at T (simulate and compare)
    double filtered_sup_ratio = 1.0;      // sup |filtered| / sup |unfiltered|
    double conservation_error = 0.0;      // max relative l2 drift over the time samples
    std::vector<PacketComparison> packets;
    std::optional<NormReport> norms;
};

struct VariantDistance {
    int k_a;
    int k_b;
    double relative_l2;  // ||u_a(T) - u_b(T)|| / max(||u_a(T)||, ||u_b(T)||)
};

struct RunReport {
    Scenario scenario;
    Mode mode = Mode::simulate;
    double gamma = 0.0;
    ScaleRegime regime;
    std::vector<VariantResult> variants;
    std::vector<VariantDistance> distances;
    std::vector<std::string> files;
    bool tolerance_breach = false;

    nlohmann::json summary() const;
};

namespace detail {

inline RunMetadata metadata(const Scenario& s, double gamma, int k) {
    return {s.id, s.h, s.M, gamma, k, to_string(s.projection), to_string(s.sign)};
}

inline nlohmann::json to_json(const PacketPrediction& p, const CaseLabel& label) {
    return {{"pick_eta", p.pick_eta},           {"velocity", p.velocity},
            {"amplitude_factor", p.amplitude_factor}, {"q2", p.q2},
            {"gamma_eff", p.gamma_eff},         {"decay_constant", p.decay_constant},
            {"alias_index", p.alias_index},     {"case", label.name()}};
}

inline nlohmann::json to_json(const CaseLabel& c) {
    return {{"label", c.name()}, {"kind", to_string(c.kind)}, {"averaged", c.averaged}, {"k", c.k},
            {"eta0", c.eta0},    {"eta0_star", c.eta0_star},  {"l_star", c.l_star},   {"s", c.s}};
}

inline nlohmann::json regime_json(const ScaleRegime& r) {
    return {{"gamma_h23", r.gamma_h23}, {"inv_gamma", r.inv_gamma}, {"max_gamma_h23", r.max_gamma_h23},
            {"min_gamma", r.min_gamma}, {"in_regime", r.in_regime}};
}

// Predictions adapted to the scenario's symbol. The predictor encodes the
// semi-discrete laws; the continuous symbol has q' = 2 eta and q'' = 2.
inline Prediction scenario_prediction(const Scenario& s, int k) {
    const double gamma = s.gamma();
    Prediction pred = predict_packets(s.carrier(), k, s.projection, gamma, s.h,
                                      s.pi_split ? -std::numbers::pi : s.band_lo,
                                      s.pi_split ? std::numbers::pi : s.band_hi);
    // The two halves of the split datum join into one full packet around pi.
    if (s.pi_split)
        for (auto& p : pred.packets) p.decay_constant = 1.0;
    if (s.symbol == SymbolKind::continuous) {
        if (s.pi_split && k == 0) {
            // The split datum is two half picks that travel apart.
            PacketPrediction left = pred.packets.front();
            left.pick_eta = -std::numbers::pi;
            left.alias_index = -1;
            left.decay_constant = 0.5;
            PacketPrediction right = left;
            right.pick_eta = std::numbers::pi;
            right.alias_index = 1;
            pred.packets = {left, right};
        }
        for (auto& p : pred.packets) {
            p.velocity = -2.0 * p.pick_eta / s.h;
            p.q2 = 2.0;
        }
    }
    return pred;
}

// Initial spectra of the packets listed in `pred`, in the same order.
inline std::vector<SpectralField> packet_components(const Scenario& s, int k, const Prediction& pred,
                                                    const SpectralField& F) {
    std::vector<SpectralField> out;
    if (s.symbol == SymbolKind::continuous && s.pi_split && k == 0) {
        const Grid g = s.grid();
        const double gamma = s.gamma();
        out.push_back(make_packet({-std::numbers::pi, -std::numbers::pi, 0.0, gamma}, g));
        out.push_back(make_packet({std::numbers::pi, 0.0, std::numbers::pi, gamma}, g));
        return out;
    }
    std::vector<double> picks;
    for (const auto& p : pred.packets) picks.push_back(p.pick_eta);
    const double half_width = k == 0 ? std::numbers::pi : std::numbers::pi / std::ldexp(1.0, k);
    for (auto& c : band_decompose(F, picks, half_width)) out.push_back(std::move(c.spectrum));
    return out;
}

inline PacketComparison compare_packet(const Scenario& s, const Symbol& symbol, const PacketPrediction& pred,
                                       const SpectralField& component) {
    PacketComparison pc;
    pc.prediction = pred;
    pc.width_checked = pred.decay_constant == 1.0;
    const Grid& g = component.grid();
    const double L = g.length();
    const int n = s.time.n_samples;

    double unwrapped = 0.0, previous = 0.0, x_star = 0.0, width0 = 0.0;
    const double law0 = predict_trajectory(pred, 0.0, 0.0).width;
    for (int i = 0; i <= n; ++i) {
        const double t = s.time.T * static_cast<double>(i) / static_cast<double>(n);
        const auto m = packet_metrics(snapshot(component, symbol, t, s.sign));
        pc.series.push_back({t, m});
        if (i == 0) {
            x_star = unwrapped = previous = m.centroid;
            width0 = m.width;
        } else {
            unwrapped += periodic_displacement(previous, m.centroid, L);
            previous = m.centroid;
        }
        const Trajectory tr = predict_trajectory(pred, t, x_star);

        ComparisonRow row;
        row.t = t;
        row.predicted_centroid = tr.centroid;
        row.measured_centroid = unwrapped;
        row.predicted_velocity = pred.velocity;
        row.predicted_width_growth = tr.width / law0;
        row.measured_width_growth = width0 > 0.0 ? m.width / width0 : 1.0;
        row.width_error = std::abs(row.measured_width_growth - row.predicted_width_growth) / row.predicted_width_growth;
        row.predicted_amplitude = tr.amplitude;
        row.measured_amplitude = m.peak_amp;
        row.amplitude_error = tr.amplitude > 0.0 ? std::abs(m.peak_amp - tr.amplitude) / tr.amplitude : m.peak_amp;
        if (t > 0.0) {
            const double predicted = pred.velocity * t;
            const double measured = unwrapped - x_star;
            row.measured_velocity = measured / t;
            // Resting packets are judged by displacement in units of the initial width.
            row.velocity_error = std::abs(predicted) >= width0 && predicted != 0.0
                                     ? std::abs(measured - predicted) / std::abs(predicted)
                                     : std::abs(measured - predicted) / width0;
        }
        pc.max_amplitude_error = std::max(pc.max_amplitude_error, row.amplitude_error);
        if (pc.width_checked) pc.max_width_error = std::max(pc.max_width_error, row.width_error);
        pc.rows.push_back(row);
    }
    pc.velocity_error = pc.rows.back().velocity_error;
    pc.within_tolerance = pc.max_amplitude_error <= s.tolerances.amplitude &&
                          pc.velocity_error <= s.tolerances.velocity &&
                          (!pc.width_checked || pc.max_width_error <= s.tolerances.width);
    return pc;
}

inline std::string comparison_csv(const RunReport& report) {
    std::ostringstream os;
    write_metadata_comment(os, metadata(report.scenario, report.gamma, -1));
    os << "k,packet,pick_eta,amplitude_factor,t,predicted_centroid,measured_centroid,predicted_velocity,"
          "measured_velocity,velocity_error,predicted_width_growth,measured_width_growth,width_error,"
          "predicted_amplitude,measured_amplitude,amplitude_error\n";
    for (const auto& v : report.variants)
        for (std::size_t p = 0; p < v.packets.size(); ++p) {
            const auto& pc = v.packets[p];
            for (const auto& r : pc.rows)
                os << v.k << ',' << p << ',' << format_double(pc.prediction.pick_eta) << ','
                   << format_double(pc.prediction.amplitude_factor) << ',' << format_double(r.t) << ','
                   << format_double(r.predicted_centroid) << ',' << format_double(r.measured_centroid) << ','
                   << format_double(r.predicted_velocity) << ',' << format_double(r.measured_velocity) << ','
                   << format_double(r.velocity_error) << ',' << format_double(r.predicted_width_growth) << ','
                   << format_double(r.measured_width_growth) << ',' << format_double(r.width_error) << ','
                   << format_double(r.predicted_amplitude) << ',' << format_double(r.measured_amplitude) << ','
                   << format_double(r.amplitude_error) << '\n';
        }
    return os.str();
}

template <class Field>
std::string field_csv(const Field& f, const RunMetadata& meta) {
    std::ostringstream os;
    write_field_csv(os, f, &meta);
    return os.str();
}

}  // namespace detail

inline nlohmann::json RunReport::summary() const {
    nlohmann::json j;
    j["meta"] = detail::metadata(scenario, gamma, -1).to_json();
    j["mode"] = to_string(mode);
    j["k_levels"] = scenario.k_levels;
    j["scale_regime"] = detail::regime_json(regime);
    j["tolerance_breach"] = tolerance_breach;
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : variants) {
        nlohmann::json jv;
        jv["k"] = v.k;
        jv["case"] = detail::to_json(v.prediction.label);
        jv["filtered_sup_ratio"] = v.filtered_sup_ratio;
        jv["conservation_error"] = v.conservation_error;
        nlohmann::json packets = nlohmann::json::array();
        for (const auto& pc : v.packets) {
            const auto& last = pc.rows.back();
            packets.push_back({{"pick_eta", pc.prediction.pick_eta},
                               {"predicted_velocity", pc.prediction.velocity},
                               {"measured_velocity", last.measured_velocity},
                               {"velocity_error", pc.velocity_error},
                               {"predicted_amplitude_t0", pc.rows.front().predicted_amplitude},
                               {"measured_amplitude_t0", pc.rows.front().measured_amplitude},
                               {"max_amplitude_error", pc.max_amplitude_error},
                               {"width_checked", pc.width_checked},
                               {"max_width_error", pc.max_width_error},
                               {"within_tolerance", pc.within_tolerance}});
        }
        jv["packets"] = packets;
        if (v.norms) jv["norms"] = to_json(*v.norms);
        vars.push_back(jv);
    }
    j["variants"] = vars;
    nlohmann::json dist = nlohmann::json::array();
    for (const auto& d : distances) dist.push_back({{"k_a", d.k_a}, {"k_b", d.k_b}, {"relative_l2", d.relative_l2}});
    j["variant_distances"] = dist;
    // names relative to the scenario directory, so identical runs give identical summaries
    nlohmann::json names = nlohmann::json::array();
    for (const auto& f : files) names.push_back(std::filesystem::path(f).filename().string());
    j["files"] = names;
    return j;
}

/// Builds data, filters, evolves, measures and writes the outputs the mode asks for.
inline RunReport run(const Scenario& scenario, Mode mode = Mode::simulate, bool write_files = true) {
    scenario.validate();
    RunReport report;
    report.scenario = scenario;
    report.mode = mode;
    report.gamma = scenario.gamma();
    report.regime = scale_regime_check(scenario.h, report.gamma);

    std::set<Output> outputs = scenario.outputs;
    switch (mode) {
        case Mode::simulate: break;
        case Mode::project: outputs = {Output::snapshots}; break;
        case Mode::predict: outputs = {Output::prediction}; break;
        case Mode::norms: outputs = {Output::norms}; break;
        case Mode::compare: outputs = {Output::comparison}; break;
    }
    const bool evolve = mode == Mode::simulate || mode == Mode::compare;
    const bool want_norms = outputs.contains(Output::norms);

    const Grid grid = scenario.grid();
    const Symbol symbol = scenario.make_symbol();
    const SpectralField F0 = scenario.initial_spectrum();
    const PhysicalField f0 = isdft(F0);
    const double sup0 = f0.max_abs();

    for (int k : scenario.k_levels) {
        VariantResult v{k, detail::scenario_prediction(scenario, k), std::nullopt, f0, F0, f0, 1.0, 0.0, {}, std::nullopt};
        if (k > 0) {
            const auto level = BigridLevel::make(grid, k);
            v.coarse = project(level, f0, scenario.projection);
            v.datum = extend(level, *v.coarse);
            v.spectrum = sdft(v.datum);
        }
        v.filtered_sup_ratio = sup0 > 0.0 ? v.datum.max_abs() / sup0 : 0.0;

        if (evolve) {
            const double n0 = l2_norm(v.spectrum);
            for (int i = 0; i <= scenario.time.n_samples; ++i) {
                const double t = scenario.time.T * i / scenario.time.n_samples;
                const double drift = std::abs(l2_norm(snapshot(v.spectrum, symbol, t, scenario.sign)) - n0);
                v.conservation_error = std::max(v.conservation_error, n0 > 0.0 ? drift / n0 : 0.0);
            }
            v.final_field = snapshot(v.spectrum, symbol, scenario.time.T, scenario.sign);
            const auto components = detail::packet_components(scenario, k, v.prediction, v.spectrum);
            for (std::size_t p = 0; p < components.size(); ++p) {
                const auto& pp = v.prediction.packets[p];
                if (!pp.surviving(scenario.survival_threshold)) continue;
                v.packets.push_back(detail::compare_packet(scenario, symbol, pp, components[p]));
                if (!v.packets.back().within_tolerance) report.tolerance_breach = true;
            }
        }
        if (want_norms) {
            const std::vector<double> radii = scenario.radii.empty() ? default_radii(grid) : scenario.radii;
            NormReport nr = strichartz_norm(v.spectrum, symbol, scenario.norm_p, scenario.time, scenario.sign);
            const NormReport sm = local_smoothing(v.spectrum, symbol, radii, scenario.time, scenario.sign);
            nr.radii = sm.radii;
            nr.smoothing_value = sm.smoothing_value;
            nr.smoothing_ratio = sm.smoothing_ratio;
            nr.gamma = report.gamma;
            nr.scenario_id = scenario.id;
            v.norms = nr;
        }
        report.variants.push_back(std::move(v));
    }

    if (evolve)
        for (std::size_t a = 0; a < report.variants.size(); ++a)
            for (std::size_t b = a + 1; b < report.variants.size(); ++b) {
                const auto& ua = report.variants[a].final_field;
                const auto& ub = report.variants[b].final_field;
                const double scale = std::max(l2_norm(ua), l2_norm(ub));
                report.distances.push_back({report.variants[a].k, report.variants[b].k,
                                            scale > 0.0 ? l2_norm(ua - ub) / scale : 0.0});
            }

    if (!write_files) return report;

    namespace fs = std::filesystem;
    const fs::path dir = fs::path(scenario.output_dir) / scenario.id;
    fs::create_directories(dir);
    auto emit = [&](const std::string& name, const std::string& content) {
        const fs::path p = dir / name;
        write_text_file(p.string(), content);
        report.files.push_back(p.string());
    };

    nlohmann::json predictions = nlohmann::json::array();
    for (const auto& v : report.variants) {
        const auto meta = detail::metadata(scenario, report.gamma, v.k);
        const std::string stem = "k" + std::to_string(v.k);
        if (outputs.contains(Output::snapshots)) {
            emit(stem + "_datum.csv", detail::field_csv(v.datum, meta));
            emit(stem + "_spectrum.csv", detail::field_csv(v.spectrum, meta));
            if (v.coarse) emit(stem + "_coarse.csv", detail::field_csv(*v.coarse, meta));
            if (evolve) emit(stem + "_final.csv", detail::field_csv(v.final_field, meta));
        }
        if (outputs.contains(Output::timeseries) && evolve)
            for (std::size_t p = 0; p < v.packets.size(); ++p) {
                std::ostringstream os;
                write_timeseries_csv(os, v.packets[p].series, &meta);
                emit(stem + "_p" + std::to_string(p) + "_timeseries.csv", os.str());
            }
        if (outputs.contains(Output::norms) && v.norms) {
            nlohmann::json j = to_json(*v.norms);
            j["meta"] = meta.to_json();
            j["scale_regime"] = detail::regime_json(report.regime);
            emit(stem + "_norms.json", j.dump(2) + "\n");
        }
        if (outputs.contains(Output::prediction)) {
            nlohmann::json packets = nlohmann::json::array();
            for (const auto& p : v.prediction.packets) packets.push_back(detail::to_json(p, v.prediction.label));
            predictions.push_back({{"meta", meta.to_json()},
                                   {"scale_regime", detail::regime_json(report.regime)},
                                   {"case", detail::to_json(v.prediction.label)},
                                   {"packets", packets}});
        }
    }
    if (outputs.contains(Output::prediction)) emit("prediction.json", predictions.dump(2) + "\n");
    if (outputs.contains(Output::comparison) && evolve) emit("comparison.csv", detail::comparison_csv(report));

    const fs::path summary_path = dir / (to_string(mode) + "_summary.json");
    report.files.push_back(summary_path.string());
    write_text_file(summary_path.string(), report.summary().dump(2) + "\n");
    return report;
}

struct SweepPoint {
    double h = 0.0;
    std::size_t M = 0;
    double gamma = 0.0;
    std::vector<std::pair<int, NormReport>> norms;  // per bigrid level
    std::optional<RemainderSample> remainder;       // at t = T, carrier data only
};

struct SweepReport {
    Scenario base;
    std::vector<SweepPoint> points;

    /// ratio[i + 1] / ratio[i] of the Strichartz ratio for bigrid level index `level`.
    std::vector<double> strichartz_growth(std::size_t level) const {
        std::vector<double> out;
        for (std::size_t i = 1; i < points.size(); ++i)
            out.push_back(points[i].norms[level].second.ratio / points[i - 1].norms[level].second.ratio);
        return out;
    }
    std::vector<double> smoothing_growth(std::size_t level) const {
        std::vector<double> out;
        for (std::size_t i = 1; i < points.size(); ++i)
            out.push_back(points[i].norms[level].second.smoothing_ratio /
                          points[i - 1].norms[level].second.smoothing_ratio);
        return out;
    }
    /// remainder ratio at h[i] over the one at h[i + 1].
    std::vector<double> remainder_drop() const {
        std::vector<double> out;
        for (std::size_t i = 1; i < points.size(); ++i)
            if (points[i].remainder && points[i - 1].remainder)
                out.push_back(points[i - 1].remainder->ratio / points[i].remainder->ratio);
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["meta"] = detail::metadata(base, base.gamma(), -1).to_json();
        j["k_levels"] = base.k_levels;
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : points) {
            nlohmann::json jp{{"h", p.h}, {"M", p.M}, {"gamma", p.gamma}};
            nlohmann::json norms = nlohmann::json::array();
            for (const auto& [k, nr] : p.norms) {
                auto jn = packetlab::to_json(nr);
                jn["k"] = k;
                norms.push_back(jn);
            }
            jp["norms"] = norms;
            if (p.remainder)
                jp["remainder"] = {{"t", p.remainder->t},
                                   {"ratio", p.remainder->ratio},
                                   {"relative_error", p.remainder->relative_error}};
            pts.push_back(jp);
        }
        j["points"] = pts;
        nlohmann::json growth = nlohmann::json::array();
        for (std::size_t l = 0; l < base.k_levels.size(); ++l)
            growth.push_back({{"k", base.k_levels[l]},
                              {"strichartz_ratio_growth", strichartz_growth(l)},
                              {"smoothing_ratio_growth", smoothing_growth(l)}});
        j["growth"] = growth;
        j["remainder_drop"] = remainder_drop();
        return j;
    }
};

/// Refinement sweep at fixed window length L = M h; scenarios run concurrently.
inline SweepReport sweep(const Scenario& base, const std::vector<double>& refinements) {
    std::vector<std::string> problems = base.problems();
    if (refinements.empty()) problems.push_back("sweep: empty h list");
    for (std::size_t i = 1; i < refinements.size(); ++i)
        if (!(refinements[i] < refinements[i - 1])) problems.push_back("sweep: h list must be strictly descending");

    std::vector<Scenario> scenarios;
    const double L = static_cast<double>(base.M) * base.h;
    for (double h : refinements) {
        if (!(h > 0.0)) {
            problems.push_back("sweep: h must be positive");
            continue;
        }
        const double m = L / h;
        const double rounded = std::round(m);
        if (std::abs(m - rounded) > 1e-6 * m || rounded < 2 || !is_power_of_two(static_cast<std::size_t>(rounded))) {
            problems.push_back("sweep: h = " + format_double(h) + " gives M = L/h = " + format_double(m) +
                               ", not a power of two");
            continue;
        }
        Scenario s = base;
        s.h = h;
        s.M = static_cast<std::size_t>(rounded);
        for (auto& p : s.problems()) problems.push_back("h = " + format_double(h) + ": " + p);
        scenarios.push_back(std::move(s));
    }
    if (!problems.empty()) throw config_error(std::move(problems));

    std::vector<std::future<SweepPoint>> jobs;
    for (const auto& s : scenarios)
        jobs.push_back(std::async(std::launch::async, [s] {
            SweepPoint pt;
            const RunReport r = run(s, Mode::norms, false);
            pt.h = s.h;
            pt.M = s.M;
            pt.gamma = r.gamma;
            for (const auto& v : r.variants) pt.norms.emplace_back(v.k, *v.norms);
            if (!s.pi_split && s.symbol == SymbolKind::semidiscrete) {
                const double times[] = {s.time.T};
                pt.remainder = remainder_trace(s.initial_spectrum(), s.eta0, times, s.sign).front();
            }
            return pt;
        }));

    SweepReport report;
    report.base = base;
    for (auto& j : jobs) report.points.push_back(j.get());
    return report;
}

}  // namespace packetlab
