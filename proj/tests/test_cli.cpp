#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "sact/cli.hpp"

using namespace sact;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sact_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json base_config() {
    return json::parse(R"({"generator": {"kind": "bspline_tensor", "orders": [1, 1]},
                           "f_support": [0, 2, 0, 2],
                           "direction": {"theta_radians": 0.5235987755982988},
                           "plan": {"method": "kernel_points"}})");
}

int run_quiet(std::string_view sub, const RunConfig& c) {
    std::ostringstream log, err;
    return run(sub, c, log, err);
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(SACT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Config, MinimalDefaults) {
    const auto c = parse_config(base_config());
    EXPECT_EQ(c.kind, GeneratorKind::bspline_tensor);
    EXPECT_EQ(c.coefficients.seed, 42u);
    EXPECT_FALSE(c.coefficients.values.has_value());
    EXPECT_EQ(c.sampling.invertibility_tolerance, SamplingOptions{}.invertibility_tolerance);
    EXPECT_EQ(c.eligibility.angular_tolerance, kAngularTolerance);
    EXPECT_EQ(c.eligibility.scan.nodes, 4096);
    EXPECT_NEAR(c.theta, std::numbers::pi / 6, 1e-16);
}

TEST(Config, ThetaNormalized) {
    auto j = base_config();
    j["direction"]["theta_radians"] = -std::numbers::pi / 2;
    EXPECT_NEAR(parse_config(j).theta, 3 * std::numbers::pi / 2, 1e-15);
}

TEST(Config, UnknownKeysListed) {
    auto j = base_config();
    j["colour"] = "blue";
    j["plan"]["speed"] = 3;
    try {
        parse_config(j);
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("colour"), std::string::npos);
        EXPECT_NE(msg.find("plan.speed"), std::string::npos);
    }
}

TEST(Config, MissingKeysListed) {
    json j = json::object();
    try {
        parse_config(j);
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("generator"), std::string::npos);
        EXPECT_NE(msg.find("f_support"), std::string::npos);
        EXPECT_NE(msg.find("direction.theta_radians"), std::string::npos);
    }
}

TEST(Config, DegreesRejected) {
    auto j = base_config();
    j["direction"] = {{"theta_degrees", 30}};
    EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, BadValues) {
    for (const char* patch : {R"({"f_support": [2, 0, 0, 2]})", R"({"f_support": [0, 1, 2]})",
                              R"({"generator": {"kind": "gaussian"}})", R"({"plan": {"method": "magic"}})",
                              R"({"quadrature": {"oracle_refinement": 1}})", R"({"coefficients": {"seed": "x"}})",
                              R"({"generator": {"kind": "vanishing_pd", "orders": [2, 2]}})"}) {
        auto j = base_config();
        j.merge_patch(json::parse(patch));
        EXPECT_THROW(parse_config(j), ConfigError) << patch;
    }
    EXPECT_THROW(parse_config_text("{ not json"), ConfigError);
}

TEST(Config, ExplicitValuesLengthChecked) {
    auto j = base_config();
    j["coefficients"] = {{"values", {1, 2, 3}}};
    const auto c = parse_config(j);
    EXPECT_EQ(run_quiet("reconstruct", c), 2);
}

TEST(Run, ExitCodes) {
    auto j = base_config();
    j["output"] = {{"dir", scratch("codes").string()}};
    EXPECT_EQ(run_quiet("reconstruct", parse_config(j)), 0);
    EXPECT_EQ(run_quiet("eligibility", parse_config(j)), 0);
    EXPECT_EQ(run_quiet("plan", parse_config(j)), 0);
    EXPECT_EQ(run_quiet("radon", parse_config(j)), 0);
    EXPECT_EQ(run_quiet("verify", parse_config(j)), 0);
    EXPECT_EQ(run_quiet("transmogrify", parse_config(j)), 2);
    j["direction"]["theta_radians"] = std::numbers::pi / 2;
    EXPECT_EQ(run_quiet("eligibility", parse_config(j)), 1);
    EXPECT_EQ(run_quiet("reconstruct", parse_config(j)), 1);
}

TEST(Run, EligibilityNamesWitness) {
    const auto dir = scratch("witness");
    auto j = base_config();
    j["f_support"] = {0, 6, 0, 1};
    j["direction"]["theta_radians"] = std::numbers::pi / 2;
    j["output"] = {{"dir", dir.string()}};
    EXPECT_EQ(run_quiet("eligibility", parse_config(j)), 1);
    const auto out = json::parse(slurp(dir / "eligibility.json"));
    EXPECT_EQ(out["schema_version"], kSchemaVersion);
    EXPECT_FALSE(out["eligible"].get<bool>());
    EXPECT_EQ(out["nearest_forbidden"]["witness"], json::array({1, 0}));
}

TEST(Run, ReconstructCsv) {
    const auto dir = scratch("csv");
    auto j = base_config();
    j["output"] = {{"dir", dir.string()}};
    const auto c = parse_config(j);
    ASSERT_EQ(run_quiet("reconstruct", c), 0);
    std::istringstream csv(slurp(dir / "reconstruct.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "k1,k2,c_true,c_recovered,abs_error");
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, c.index_set().size());
    const auto report = json::parse(slurp(dir / "reconstruct.json"));
    EXPECT_EQ(report["sample_count"], c.index_set().size());
    EXPECT_LE(report["coeff_max_error"].get<double>(), 1e-6);
    EXPECT_FALSE(report.contains("timing_seconds"));
}

TEST(Run, RadonCsv) {
    const auto dir = scratch("radon");
    auto j = base_config();
    j["radon"] = {{"target", "generator"}, {"points", 11}, {"t_min", -1.0}, {"t_max", 1.0}};
    j["output"] = {{"dir", dir.string()}};
    ASSERT_EQ(run_quiet("radon", parse_config(j)), 0);
    std::istringstream csv(slurp(dir / "radon.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "t,value");
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 11u);
}

TEST(Run, DeterministicArtifacts) {
    for (const char* sub : {"reconstruct", "plan", "radon", "eligibility", "verify"}) {
        const auto a = scratch(std::string("det_a_") + sub), b = scratch(std::string("det_b_") + sub);
        auto j = base_config();
        j["output"] = {{"dir", a.string()}};
        run_quiet(sub, parse_config(j));
        j["output"] = {{"dir", b.string()}};
        run_quiet(sub, parse_config(j));
        for (const auto& entry : fs::directory_iterator(a))
            EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
    }
}

TEST(Run, JsonRoundTrips) {
    const auto dir = scratch("roundtrip");
    auto j = base_config();
    j["output"] = {{"dir", dir.string()}};
    for (const char* sub : {"reconstruct", "plan", "radon", "eligibility", "verify"}) run_quiet(sub, parse_config(j));
    j["direction"]["theta_radians"] = std::numbers::pi / 4;
    j["generator"] = {{"kind", "counterexample"}};
    j["output"] = {{"dir", (dir / "err").string()}};
    run_quiet("plan", parse_config(j));
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        const std::string text = slurp(entry.path());
        const auto once = json::parse(text);
        EXPECT_TRUE(once.contains("schema_version")) << entry.path();
        EXPECT_EQ(once.dump(2) + "\n", text) << entry.path();
        EXPECT_EQ(json::parse(once.dump()), once);
    }
    EXPECT_TRUE(json::parse(slurp(dir / "err" / "plan.json")).contains("error"));
}

TEST(Binary, ShippedConfigs) {
    const auto dir = scratch("binary");
    const std::string cfg = SACT_CONFIG_DIR;
    const std::string out = " -o " + dir.string();
    EXPECT_EQ(run_binary("reconstruct -c " + cfg + "/kernel_points_hat.json" + out), 0);
    EXPECT_EQ(run_binary("eligibility -c " + cfg + "/forbidden_vertical.json" + out), 1);
    EXPECT_EQ(run_binary("eligibility -c " + cfg + "/vanishing_pd_axis.json" + out), 1);
    EXPECT_EQ(run_binary("plan -c " + cfg + "/counterexample_diagonal.json" + out), 1);
    EXPECT_EQ(run_binary("reconstruct -c " + cfg + "/counterexample_refine.json" + out), 0);
    EXPECT_EQ(run_binary("radon -c " + cfg + "/radon_profile.json" + out), 0);
    EXPECT_EQ(run_binary("reconstruct -c " + cfg + "/oracle_samples.json" + out), 0);
}

TEST(Binary, ConfigErrorsExitTwo) {
    const auto dir = scratch("binary_bad");
    std::ofstream(dir / "bad.json") << R"({"generator": {"kind": "bspline_tensor"}, "f_support": [0, 1, 0, 1],
                                          "direction": {"theta_degrees": 30}, "extra": 1})";
    EXPECT_EQ(run_binary("plan -c " + (dir / "bad.json").string()), 2);
    EXPECT_EQ(run_binary("plan -c " + (dir / "missing.json").string()), 2);
    EXPECT_EQ(run_binary("plan"), 2);
    EXPECT_EQ(run_binary("frobnicate -c x"), 2);
}
