#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "cli.hpp"

using namespace itosynth;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "itosynth");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const std::string kModels = ITOSYNTH_MODEL_DIR;

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("itosynth_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, kExitUsage);
    const CliRun r = run({"synthesize", "--model", kModels + "/ex12.toml", "--bogus"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(run({"verify", "sideways", "--spec", "x.toml"}).code, kExitUsage);
    EXPECT_EQ(run({"--help"}).code, kExitPass);
}

TEST(Cli, ModelErrorsExitOne) {
    const CliRun r = run({"synthesize", "--model", "/nonexistent/model.toml"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST(Cli, SampleExcursionToStdout) {
    const CliRun r = run({"sample-excursion", "--eps", "0.1", "--seed", "3"});
    EXPECT_EQ(r.code, kExitPass);
    EXPECT_EQ(r.out.rfind("t,x\n0,0\n", 0), 0u);
}

TEST(Cli, SynthesizeWritesArtifactsDeterministically) {
    const fs::path a = scratch("syn_a"), b = scratch("syn_b");
    for (const auto& dir : {a, b}) {
        const CliRun r = run({"synthesize", "--model", kModels + "/ex12.toml", "--T", "2", "--eps", "0.05", "--seed", "7",
                           "--out", dir.string()});
        ASSERT_EQ(r.code, kExitPass) << r.err;
    }
    for (const char* f : {"path.csv", "eta.csv", "manifest.json"}) {
        ASSERT_TRUE(fs::exists(a / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    EXPECT_EQ(slurp(a / "path.csv").rfind("t,x\n", 0), 0u);
    EXPECT_EQ(slurp(a / "eta.csv").rfind("s,eta\n", 0), 0u);
    EXPECT_NE(slurp(a / "manifest.json").find("\"model_hash\""), std::string::npos);
}

TEST(Cli, CheckVerdicts) {
    EXPECT_EQ(run({"check", "--model", kModels + "/ex12.toml"}).code, kExitPass);
    const fs::path dir = scratch("check");
    std::ofstream(dir / "bad.toml") << "version = 1\nc = 1\n[m]\nkind = \"density\"\ndensity = \"(2*x+1)/x\"\n";
    const CliRun r = run({"check", "--model", (dir / "bad.toml").string()});
    EXPECT_EQ(r.code, kExitStatFail);
    EXPECT_NE(r.out.find("fails_C"), std::string::npos);
}

TEST(Cli, VerifyRejectsSteepBeta) {
    const fs::path dir = scratch("steep");
    std::ofstream(dir / "m.toml") << "version = 1\n[m]\nkind = \"canonical\"\nalpha = 0.5\n[j]\nkind = \"canonical\"\n"
                                     "beta = 0.5\n[regime]\nkind = \"divergent\"\nalpha = 0.5\nbeta = 2.5\n";
    std::ofstream(dir / "spec.toml") << "version = 1\nmodel = \"m.toml\"\nlambdas = [4, 16]\nreplicates = 100\n";
    const CliRun r = run({"verify", "divergent", "--spec", (dir / "spec.toml").string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("beta"), std::string::npos);
}

TEST(Cli, StableIndexFromFile) {
    const fs::path dir = scratch("stable");
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    {
        std::ofstream f(dir / "jumps.csv");
        f << "jump\n";
        for (int i = 0; i < 20000; ++i) f << std::pow(1.0 - u(g), -2.0) << "\n";
    }
    const CliRun r = run({"stable-index", "--input", (dir / "jumps.csv").string()});
    EXPECT_EQ(r.code, kExitPass) << r.out;
    EXPECT_NE(r.out.find("true"), std::string::npos);
}

TEST(Cli, IdentityCheckSmall) {
    const fs::path dir = scratch("identity");
    const CliRun r = run({"identity-check", "--model", kModels + "/stable_quarter.toml", "--lambda", "4,16", "--n", "300",
                       "--eps", "0.1", "--seed", "5", "--out", dir.string()});
    EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
    EXPECT_EQ(slurp(dir / "results.csv").rfind("lambda,stat,pvalue,n\n", 0), 0u);
}

TEST(Cli, Laplace) {
    const CliRun r = run({"laplace", "--model", kModels + "/reflecting.toml", "--eps", "0.1,0.05", "--n", "2000"});
    EXPECT_EQ(r.code, kExitPass) << r.err;
    EXPECT_NE(r.out.find("extrapolated,"), std::string::npos);
}
