#include <gtest/gtest.h>

#include "shiftlab/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace shiftlab;

namespace {

cli::Options options(const std::string &command, const std::string &cfg, std::uint64_t seed = 0) {
    cli::Options o;
    o.command = command;
    o.config = dsl::Config::parse(cfg);
    o.seed = seed;
    return o;
}

int exit_of(const cli::Options &o) {
    try {
        return cli::run(o).exit;
    } catch (const Error &e) {
        return cli::exit_code_for(e.kind());
    }
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Cli, ExitCodeMapping) {
    EXPECT_EQ(cli::exit_code_for(ErrorKind::InvalidArgument), cli::kValidation);
    EXPECT_EQ(cli::exit_code_for(ErrorKind::HorizonExhausted), cli::kRuntime);
    EXPECT_EQ(cli::exit_code_for(ErrorKind::InsufficientHorizon), cli::kRuntime);
    EXPECT_EQ(cli::exit_code_for(ErrorKind::NoCertificate), cli::kRuntime);
}

TEST(Cli, ManifestSchema) {
    const auto res = cli::run(options("criterion", "weight = constant 2\np = 2\nhorizon = 50\n", 7));
    EXPECT_EQ(res.exit, cli::kOk);
    for (const char *k : {"schema", "command", "seed", "config", "results"}) EXPECT_TRUE(res.manifest.contains(k)) << k;
    EXPECT_EQ(res.manifest["schema"], cli::kSchema);
    EXPECT_EQ(res.manifest["seed"], 7);
    EXPECT_EQ(res.manifest["results"]["classification"], "Convergent");
    EXPECT_NEAR(res.manifest["results"]["partial_sum"].get<double>(), 1.0 / 3, 1e-9);
}

TEST(Cli, UnknownKeyIsValidationError) {
    EXPECT_EQ(exit_of(options("criterion", "weight = constant 2\nwieght = 3\n")), cli::kValidation);
    EXPECT_EQ(exit_of(options("density", "sets = primes\n")), cli::kValidation);
    EXPECT_EQ(exit_of(options("launch", "")), cli::kValidation);
    auto o = options("criterion", "");
    o.format = "xml";
    EXPECT_EQ(exit_of(o), cli::kValidation);
}

TEST(Cli, DensityOutputs) {
    const auto res = cli::run(options("density", "sets = evens | squares\nhorizon = 10000\ntrace_step = 100\n"));
    EXPECT_EQ(res.exit, cli::kOk);
    ASSERT_TRUE(res.files.count("density_trace.csv"));
    EXPECT_EQ(res.files.at("density_trace.csv").rfind("set,n,count,mu", 0), 0u);
    auto o = options("density", "sets = evens\nhorizon = 1000\n");
    o.format = "json";
    const auto js = cli::run(o);
    EXPECT_TRUE(js.files.count("density_trace.json"));
    EXPECT_FALSE(js.files.count("density_trace.csv"));
}

TEST(Cli, HorizonFlagOverridesConfig) {
    auto o = options("criterion", "weight = constant 2\nhorizon = 10\n");
    o.horizon = 20;
    EXPECT_EQ(cli::run(o).manifest["results"]["horizon"], 20);
}

TEST(Cli, DivergentWeightHasNoFhcCertificate) {
    EXPECT_EQ(exit_of(options("construct", "construction = fhc\nweight = constant 1\nhorizon = 1000\n")), cli::kRuntime);
}

TEST(Cli, TmShortHorizonIsRuntimeError) {
    auto o = options("construct", "construction = tm\nstages = 4\n");
    o.horizon = 500;
    EXPECT_EQ(exit_of(o), cli::kRuntime);
}

TEST(Cli, NePlanManifest) {
    const auto res = cli::run(options("construct", "construction = ne_plan\ni_max = 1\n"));
    EXPECT_EQ(res.exit, cli::kOk);
    EXPECT_NE(res.manifest.dump().find("\"n_0\":\"43046722\""), std::string::npos);
}

TEST(Cli, VerifyFailureExitCode) {
    const auto bad = options("verify", "suites = hat\nM = 3\nfamilies = 0\nfamily = [[0,1],[0],[]]\n");
    EXPECT_EQ(exit_of(bad), cli::kVerificationFailed);
    const auto good = options("verify", "suites = hat lscsm\nM = 6\nfamilies = 5\ninstances = 20\n", 3);
    EXPECT_EQ(exit_of(good), cli::kOk);
}

TEST(Cli, DeterministicAcrossRuns) {
    const auto cfg = "construction = fhc\nweight = constant 2\ntargets = 2\nhorizon = 5000\n";
    const auto a = cli::run(options("construct", cfg, 11)), b = cli::run(options("construct", cfg, 11));
    EXPECT_EQ(a.manifest.dump(), b.manifest.dump());
    EXPECT_EQ(a.files, b.files);
}

TEST(Cli, WriteOutputsAndReplay) {
    const auto dir = std::filesystem::temp_directory_path() / "shiftlab_test_cli";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto res = cli::run(options("criterion", "weight = constant 3\np = 1\nhorizon = 40\n", 2));
    cli::write_outputs(res, dir);
    ASSERT_TRUE(std::filesystem::exists(dir / "manifest.json"));
    const auto manifest = io::Json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest["exit_code"], 0);
    EXPECT_TRUE(manifest.contains("outputs"));
    const auto replay = cli::run(options("criterion", slurp(dir / "resolved.cfg"), 2));
    EXPECT_EQ(replay.manifest.dump(), res.manifest.dump());
    std::filesystem::remove_all(dir);
}

TEST(Cli, ThreadBudgetEnv) {
    ::setenv("SHIFTLAB_THREADS", "1", 1);
    EXPECT_EQ(cli::thread_budget(), 1u);
    ::setenv("SHIFTLAB_THREADS", "many", 1);
    EXPECT_THROW(cli::thread_budget(), Error);
    ::unsetenv("SHIFTLAB_THREADS");
    EXPECT_GE(cli::thread_budget(), 1u);
}
