#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "packetlab/runner.hpp"

using namespace packetlab;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("packetlab_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> problems_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const config_error& e) {
        return e.problems();
    }
    return {};
}

}  // namespace

TEST(Expression, Arithmetic) {
    EXPECT_NEAR(evaluate("2*pi/256"), 2 * pi / 256, 1e-15);
    EXPECT_NEAR(evaluate("2pi/3"), 2 * pi / 3, 1e-15);
    EXPECT_NEAR(evaluate("h^(-1/4)", {{"h", 0.0625}}), 2.0, 1e-15);
    EXPECT_NEAR(evaluate("-pi"), -pi, 0.0);
    EXPECT_NEAR(evaluate("2^3^2"), 512.0, 0.0);
    EXPECT_NEAR(evaluate(" 1e-3 * (2 + 3) "), 5e-3, 1e-18);
    EXPECT_THROW(evaluate("2 +"), validation_error);
    EXPECT_THROW(evaluate("foo"), validation_error);
    EXPECT_THROW(evaluate("(1"), validation_error);
}

TEST(Config, KeyValueFile) {
    const auto s = parse_scenario(R"(
# comment line
scenario_id = demo
h = 2*pi/128
M = 1024
gamma = 3
eta0 = 2pi/3
band = -pi, pi
symbol = semidiscrete
bigrid.k = 0, 1, 2
bigrid.projection = restrict
time.T = 0.5
time.n_samples = 32
sign = -
outputs = norms, prediction
norms.p = 4
norms.radii = L/8, L/4
compare.tol.amplitude = 0.1
)");
    EXPECT_EQ(s.id, "demo");
    EXPECT_NEAR(s.h, 2 * pi / 128, 1e-15);
    EXPECT_EQ(s.M, 1024u);
    EXPECT_EQ(s.gamma(), 3.0);
    EXPECT_NEAR(s.eta0, 2 * pi / 3, 1e-15);
    EXPECT_EQ(s.k_levels, (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(s.projection, Projection::restrict);
    EXPECT_EQ(s.time.n_samples, 32);
    EXPECT_EQ(s.sign, PhaseSign::minus);
    EXPECT_EQ(s.outputs, (std::set<Output>{Output::norms, Output::prediction}));
    ASSERT_EQ(s.radii.size(), 2u);
    EXPECT_NEAR(s.radii[0], 1024 * 2 * pi / 128 / 8, 1e-12);
    EXPECT_EQ(s.tolerances.amplitude, 0.1);
}

TEST(Config, JsonEquivalent) {
    const auto kv = parse_scenario(R"(scenario_id = j
eta0 = pi-split
bigrid.k = 1, 2
bigrid.projection = average
time.T = 0.25)");
    const auto js = parse_scenario(R"({"scenario_id": "j", "eta0": "pi-split",
        "bigrid": {"k": [1, 2], "projection": "average"}, "time": {"T": 0.25}})");
    EXPECT_TRUE(js.pi_split);
    EXPECT_EQ(js.k_levels, kv.k_levels);
    EXPECT_EQ(js.projection, kv.projection);
    EXPECT_EQ(js.time.T, kv.time.T);
    EXPECT_EQ(js.id, kv.id);
}

TEST(Config, DefaultGammaExpression) {
    const auto s = parse_scenario("h = 2pi/256");
    EXPECT_NEAR(s.gamma(), std::pow(2 * pi / 256, -0.25), 1e-14);
}

TEST(Config, AllProblemsReportedTogether) {
    const auto p = problems_of(R"(
h = -1
M = 100
frobnicate = 3
bigrid.projection = sideways
symbol = quantum
time.n_samples = 4
)");
    EXPECT_GE(p.size(), 6u);
    auto mentions = [&](const std::string& what) {
        for (const auto& s : p)
            if (s.find(what) != std::string::npos) return true;
        return false;
    };
    EXPECT_TRUE(mentions("frobnicate"));
    EXPECT_TRUE(mentions("h must be positive"));
    EXPECT_TRUE(mentions("power of two"));
    EXPECT_TRUE(mentions("sideways"));
    EXPECT_TRUE(mentions("quantum"));
    EXPECT_TRUE(mentions("n_samples"));
}

TEST(Config, RejectsDuplicatesAndMalformedLines) {
    EXPECT_THROW(parse_config_text("h = 1\nh = 2\n"), config_error);
    EXPECT_THROW(parse_config_text("just words\n"), config_error);
    EXPECT_THROW(parse_config_text("{not json"), config_error);
}

TEST(Config, BigridNeedsProjectionAndRoom) {
    const auto a = problems_of("bigrid.k = 1");
    ASSERT_FALSE(a.empty());
    const auto b = problems_of("M = 16\nbigrid.k = 3\nbigrid.projection = restrict");
    ASSERT_EQ(b.size(), 1u);
    EXPECT_NE(b[0].find("fewer than 4 coarse nodes"), std::string::npos);
}

TEST(Presets, AllSixLoadAndValidate) {
    EXPECT_EQ(preset_names().size(), 6u);
    for (const auto& n : preset_names()) {
        const auto s = load_scenario("preset:" + n);
        EXPECT_EQ(s.id, n);
        EXPECT_NO_THROW(s.validate());
    }
    EXPECT_THROW(load_scenario("preset:nope"), config_error);
    EXPECT_THROW(load_scenario("/nonexistent/file.cfg"), config_error);
}

TEST(Run, DegenerateScenarioWritesNothing) {
    Scenario s;
    s.M = 16;
    s.k_levels = {0, 3};
    s.projection = Projection::restrict;
    s.output_dir = scratch("degenerate").string();
    EXPECT_THROW(run(s), config_error);
    EXPECT_FALSE(fs::exists(s.output_dir));
}

TEST(Run, HalfPiRestrictionAmplitudes) {
    Scenario s = preset("fig3a");
    const auto r = run(s, Mode::compare, false);
    ASSERT_EQ(r.variants.size(), 3u);
    const auto& k1 = r.variants[1];
    ASSERT_EQ(k1.packets.size(), 2u);
    for (const auto& pc : k1.packets) {
        EXPECT_NEAR(pc.prediction.amplitude_factor, 0.5, 1e-14);
        EXPECT_NEAR(pc.rows.front().measured_amplitude, 0.5, 0.07 * 0.5);
        EXPECT_NEAR(pc.rows.back().measured_amplitude, 0.5, 0.07 * 0.5);
    }
    // k = 2 restriction folds pi/2 to the resting coarse mode.
    const auto& k2 = r.variants[2];
    EXPECT_EQ(k2.prediction.label.kind, CaseKind::B_i);
    ASSERT_EQ(k2.packets.size(), 1u);
    EXPECT_NEAR(k2.packets[0].rows.front().measured_amplitude, 1.0, 0.07);
    // resting packet spreads like the continuous one
    EXPECT_LE(k2.packets[0].max_amplitude_error, 0.07);
    EXPECT_FALSE(r.tolerance_breach);
}

TEST(Run, ZoneEdgeSolutionsAtBothLevelsNearlyCoincide) {
    // Both filters reduce the datum to the same smooth envelope; what separates
    // them is the linear interpolation error, O(gamma (2^k h)^2).
    double previous = 1.0;
    for (int r : {0, 1}) {
        Scenario s = preset("fig3c");
        s.h = 2 * pi / (256 << r);
        s.M = 2048u << r;
        s.k_levels = {1, 2};
        s.outputs = {};
        const auto rep = run(s, Mode::simulate, false);
        ASSERT_EQ(rep.distances.size(), 1u);
        const double d = rep.distances[0].relative_l2;
        EXPECT_LT(d, 5e-3);
        EXPECT_LT(d, 0.5 * previous);
        previous = d;
    }
}

TEST(Run, ConservationForEveryPreset) {
    for (const auto& n : preset_names()) {
        const auto r = run(preset(n), Mode::simulate, false);
        for (const auto& v : r.variants) EXPECT_LE(v.conservation_error, 1e-10) << n << " k=" << v.k;
    }
}

TEST(Run, OutputsAreDeterministicAndStamped) {
    Scenario s = preset("fig3d");
    s.time.n_samples = 16;
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    s.output_dir = a.string();
    const auto ra = run(s, Mode::simulate, true);
    s.output_dir = b.string();
    const auto rb = run(s, Mode::simulate, true);
    ASSERT_EQ(ra.files.size(), rb.files.size());
    ASSERT_FALSE(ra.files.empty());
    for (std::size_t i = 0; i < ra.files.size(); ++i) {
        const fs::path rel = fs::relative(ra.files[i], a);
        EXPECT_EQ(rel, fs::relative(rb.files[i], b));
        const std::string content = slurp(ra.files[i]);
        EXPECT_EQ(content, slurp(rb.files[i])) << rel;
        for (const char* key : {"scenario_id", "gamma", "projection", "sign", "tool_version"})
            EXPECT_NE(content.find(key), std::string::npos) << rel << " lacks " << key;
    }
    EXPECT_TRUE(fs::exists(a / "fig3d" / "comparison.csv"));
    EXPECT_TRUE(fs::exists(a / "fig3d" / "k2_p3_timeseries.csv"));
    EXPECT_TRUE(fs::exists(a / "fig3d" / "k1_norms.json"));
    EXPECT_TRUE(fs::exists(a / "fig3d" / "prediction.json"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Run, ProjectModeWritesOnlyData) {
    Scenario s = preset("fig1");
    s.output_dir = scratch("project").string();
    const auto r = run(s, Mode::project, true);
    for (const auto& f : r.files) {
        const auto name = fs::path(f).filename().string();
        const bool data = name.find("_datum.csv") != std::string::npos ||
                          name.find("_spectrum.csv") != std::string::npos ||
                          name.find("_coarse.csv") != std::string::npos || name == "project_summary.json";
        EXPECT_TRUE(data) << name;
    }
    fs::remove_all(s.output_dir);
}

TEST(Run, SummaryCarriesScaleRegime) {
    const auto r = run(preset("fig3b"), Mode::predict, false);
    const auto j = r.summary();
    EXPECT_TRUE(j.contains("scale_regime"));
    EXPECT_NEAR(j["scale_regime"]["gamma_h23"].get<double>(), 0.213, 1e-3);
    EXPECT_EQ(j["variants"][1]["case"]["label"], "D(C)");
}

TEST(Sweep, RejectsBadRefinements) {
    Scenario s;
    s.M = 256;
    s.h = 2 * pi / 64;
    const std::vector<double> ascending{2 * pi / 128, 2 * pi / 64};
    EXPECT_THROW(sweep(s, ascending), config_error);
    const std::vector<double> odd{2 * pi / 64, 2 * pi / 96};
    EXPECT_THROW(sweep(s, odd), config_error);
    EXPECT_THROW(sweep(s, {}), config_error);
}

TEST(Sweep, KeepsWindowAndReportsGrowth) {
    Scenario s;
    s.id = "sw";
    s.h = 2 * pi / 64;
    s.M = 512;
    s.eta0 = pi / 2;
    s.k_levels = {0, 2};
    s.projection = Projection::restrict;
    s.time.n_samples = 16;
    const std::vector<double> hs{2 * pi / 64, 2 * pi / 128, 2 * pi / 256};
    const auto rep = sweep(s, hs);
    ASSERT_EQ(rep.points.size(), 3u);
    for (const auto& p : rep.points) {
        EXPECT_NEAR(p.h * static_cast<double>(p.M), 16 * pi, 1e-9);
        EXPECT_NEAR(p.gamma, std::pow(p.h, -0.25), 1e-12);
        ASSERT_EQ(p.norms.size(), 2u);
        ASSERT_TRUE(p.remainder.has_value());
    }
    EXPECT_EQ(rep.strichartz_growth(0).size(), 2u);
    EXPECT_EQ(rep.remainder_drop().size(), 2u);
    const auto j = rep.to_json();
    EXPECT_EQ(j["points"].size(), 3u);
    EXPECT_EQ(j["growth"][1]["k"], 2);
}
