// packetlab command line: runs scenarios from config files or built-in presets.
//
//   packetlab simulate preset:fig3d --out results
//   packetlab compare run.cfg --strict
//   packetlab sweep preset:fig3a --h-list "2pi/128, 2pi/256, 2pi/512"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "packetlab/packetlab.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_breach = 3;

struct Options {
    std::string config;
    std::string out;
    std::vector<std::string> h_list;
    bool strict = false;
    bool quiet = false;
};

packetlab::Scenario load(const Options& opt) {
    packetlab::Scenario s = packetlab::load_scenario(opt.config);
    if (!opt.out.empty()) s.output_dir = opt.out;
    return s;
}

void print_report(const packetlab::RunReport& r) {
    std::printf("scenario %s  h=%.6g  M=%zu  gamma=%.6g  regime=%s\n", r.scenario.id.c_str(), r.scenario.h,
                r.scenario.M, r.gamma, r.regime.in_regime ? "ok" : "outside");
    for (const auto& v : r.variants) {
        std::printf("  k=%d  case=%s  sup_ratio=%.4g", v.k, v.prediction.label.name().c_str(), v.filtered_sup_ratio);
        if (r.mode == packetlab::Mode::simulate || r.mode == packetlab::Mode::compare)
            std::printf("  l2_drift=%.3g", v.conservation_error);
        std::printf("\n");
        if (r.mode == packetlab::Mode::predict)
            for (const auto& p : v.prediction.packets)
                std::printf("    pick=%+.6f  v=%+.6g  factor=%.6g\n", p.pick_eta, p.velocity, p.amplitude_factor);
        for (const auto& pc : v.packets)
            std::printf("    pick=%+.6f  v=%+.6g (err %.3g)  amp err %.3g  width err %s  %s\n",
                        pc.prediction.pick_eta, pc.prediction.velocity, pc.velocity_error, pc.max_amplitude_error,
                        pc.width_checked ? std::to_string(pc.max_width_error).c_str() : "n/a",
                        pc.within_tolerance ? "ok" : "BREACH");
        if (v.norms)
            std::printf("    strichartz ratio=%.6g  smoothing ratio=%.6g\n", v.norms->ratio, v.norms->smoothing_ratio);
    }
    for (const auto& d : r.distances)
        std::printf("  |u_k%d - u_k%d| / |u| = %.3g\n", d.k_a, d.k_b, d.relative_l2);
    for (const auto& f : r.files) std::printf("  wrote %s\n", f.c_str());
}

int run_mode(const Options& opt, packetlab::Mode mode) {
    const packetlab::Scenario s = load(opt);
    const packetlab::RunReport r = packetlab::run(s, mode, true);
    if (!opt.quiet) print_report(r);
    if (mode == packetlab::Mode::compare && opt.strict && r.tolerance_breach) {
        std::fprintf(stderr, "packetlab: tolerance breach in %s\n", s.id.c_str());
        return exit_breach;
    }
    return exit_ok;
}

int run_sweep(const Options& opt) {
    const packetlab::Scenario s = load(opt);
    std::vector<double> hs;
    std::vector<std::string> problems;
    for (const auto& item : opt.h_list)
        for (const auto& part : packetlab::detail::split_list(item)) {
            try {
                hs.push_back(packetlab::evaluate(part));
            } catch (const std::exception& e) {
                problems.push_back(std::string("--h-list: ") + e.what());
            }
        }
    if (!problems.empty()) throw packetlab::config_error(problems);

    const auto report = packetlab::sweep(s, hs);
    const std::filesystem::path dir = std::filesystem::path(s.output_dir) / s.id;
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "sweep.json").string();
    packetlab::write_text_file(path, report.to_json().dump(2) + "\n");
    if (!opt.quiet) {
        for (const auto& p : report.points) {
            std::printf("h=%.6g  M=%zu  gamma=%.6g", p.h, p.M, p.gamma);
            for (const auto& [k, nr] : p.norms)
                std::printf("  k%d: strichartz=%.6g smoothing=%.6g", k, nr.ratio, nr.smoothing_ratio);
            if (p.remainder) std::printf("  remainder=%.6g", p.remainder->ratio);
            std::printf("\n");
        }
        std::printf("wrote %s\n", path.c_str());
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-discrete Schroedinger wave packet lab"};
    app.set_version_flag("--version", std::string(packetlab::version));
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", opt.config, "config file, or preset:NAME")->required();
        sub->add_option("--out", opt.out, "output directory (overrides output.dir)");
        sub->add_flag("-q,--quiet", opt.quiet, "suppress the console summary");
        return sub;
    };

    struct Entry {
        const char* name;
        const char* help;
        packetlab::Mode mode;
    };
    const Entry entries[] = {
        {"simulate", "build, filter, evolve and measure; write all requested outputs", packetlab::Mode::simulate},
        {"project", "write filtered data and spectra only", packetlab::Mode::project},
        {"predict", "write the a priori packet predictions", packetlab::Mode::predict},
        {"norms", "Strichartz and local smoothing functionals", packetlab::Mode::norms},
        {"compare", "measured against predicted packet laws", packetlab::Mode::compare},
    };
    std::vector<std::pair<CLI::App*, packetlab::Mode>> modes;
    for (const auto& e : entries) modes.emplace_back(add_common(app.add_subcommand(e.name, e.help)), e.mode);
    for (auto& [sub, mode] : modes)
        if (mode == packetlab::Mode::compare)
            sub->add_flag("--strict", opt.strict, "exit with status 3 when a tolerance is breached");

    auto* sweep_cmd = add_common(app.add_subcommand("sweep", "h-refinement at fixed window length"));
    sweep_cmd->add_option("--h-list", opt.h_list, "mesh sizes, descending (expressions such as 2pi/256)")
        ->required()
        ->delimiter(',');

    auto* presets_cmd = app.add_subcommand("presets", "list the built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (presets_cmd->parsed()) {
            for (const auto& n : packetlab::preset_names()) std::printf("preset:%s\n", n.c_str());
            return exit_ok;
        }
        if (sweep_cmd->parsed()) return run_sweep(opt);
        for (auto& [sub, mode] : modes)
            if (sub->parsed()) return run_mode(opt, mode);
    } catch (const packetlab::validation_error& e) {
        std::fprintf(stderr, "packetlab: %s\n", e.what());
        return exit_invalid;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "packetlab: error: %s\n", e.what());
        return 1;
    }
    return exit_ok;
}
