#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "itosynth/errors.hpp"
#include "itosynth/io.hpp"
#include "itosynth/model_file.hpp"

using namespace itosynth;

TEST(ConfigDocument, ParsesTablesAndValues) {
    const auto doc = ConfigDocument::parse(R"(
version = 1   # trailing comment
name = "a # b"
flag = true
[t]
xs = [1, 2.5, -3e-1]
pairs = [[1.0, 0.5], [2, 3]]
)");
    EXPECT_EQ(doc.number("", "version"), 1.0);
    EXPECT_EQ(doc.string("", "name"), "a # b");
    EXPECT_EQ(std::get<bool>(doc.get("", "flag")), true);
    EXPECT_EQ(doc.numbers("t", "xs"), (std::vector<double>{1.0, 2.5, -0.3}));
    EXPECT_EQ(doc.pairs("t", "pairs").size(), 2u);
    EXPECT_EQ(doc.pairs("t", "pairs")[1][1], 3.0);
    EXPECT_EQ(doc.number_or("t", "missing", 4.0), 4.0);
}

TEST(ConfigDocument, Errors) {
    EXPECT_THROW(ConfigDocument::parse("x 1"), ModelError);
    EXPECT_THROW(ConfigDocument::parse("x = 1\nx = 2"), ModelError);
    EXPECT_THROW(ConfigDocument::parse("[t\nx = 1"), ModelError);
    EXPECT_THROW(ConfigDocument::parse("x = \"open"), ModelError);
    EXPECT_THROW(ConfigDocument::parse("x = [1, [2]]"), ModelError);
    EXPECT_THROW(ConfigDocument::parse("x = 1").string("", "x"), ModelError);
    EXPECT_THROW(ConfigDocument::parse("x = 1").number("", "y"), ModelError);
}

TEST(ModelFile, Eq12) {
    const ModelSpec s = load_model(std::filesystem::path(ITOSYNTH_MODEL_DIR) / "ex12.toml");
    EXPECT_EQ(s.name, "ex12");
    EXPECT_NEAR(s.triple.m.density(2.0), 2.5, 1e-12);
    EXPECT_NEAR(s.triple.J(0.5), 0.25, 1e-8);
    ASSERT_TRUE(s.regime.has_value());
    EXPECT_EQ(s.regime->kind, RegimeKind::divergent);
    EXPECT_EQ(s.regime->beta, 0.5);
    EXPECT_NE(s.hash, 0u);
}

TEST(ModelFile, AllShippedModelsLoad) {
    for (const char* name : {"reflecting.toml", "atom_delay.toml", "stable_quarter.toml"}) {
        const ModelSpec s = load_model(std::filesystem::path(ITOSYNTH_MODEL_DIR) / name);
        EXPECT_TRUE(s.regime.has_value()) << name;
    }
}

TEST(ModelFile, AtomsAndDrift) {
    const ModelSpec s = parse_model(R"(
version = 1
c = 0.5
r = 2
[m]
kind = "density"
density = "2"
atoms = [[0.5, 1.0]]
[j]
kind = "atoms"
atoms = [[2.0, 0.5]]
)");
    EXPECT_EQ(s.triple.r, 2.0);
    EXPECT_DOUBLE_EQ(s.triple.J.c(), 0.5);
    EXPECT_DOUBLE_EQ(s.triple.J.d(), 1.5);
    EXPECT_NEAR(s.triple.m.mass(0.0, 1.0), 3.0, 1e-10);
    EXPECT_FALSE(s.regime.has_value());
}

TEST(ModelFile, Errors) {
    EXPECT_THROW(parse_model("[m]\nkind = \"canonical\"\nalpha = 0.5"), ModelError);  // no version
    EXPECT_THROW(parse_model("version = 2\n[m]\nkind = \"canonical\"\nalpha = 0.5"), ModelError);
    EXPECT_THROW(parse_model("version = 1\n[m]\nkind = \"cubic\""), ModelError);
    EXPECT_THROW(parse_model("version = 1\nc = -1\n[m]\nkind = \"canonical\"\nalpha = 0.5"), ModelError);
    EXPECT_THROW(parse_model("version = 1\n[m]\nkind = \"density\"\ndensity = \"2*\""), ModelError);
    EXPECT_THROW(parse_model("version = 1\n[m]\nkind = \"canonical\"\nalpha = 0.5\n[j]\nkind = \"density\"\n"
                             "density = \"x^(-2.5)\""),
                 ModelError);
}

TEST(ExperimentFile, ParsesAndResolvesPaths) {
    const ExperimentSpec e = parse_experiment(R"(
version = 1
model = "ex12.toml"
regime = "divergent"
lambdas = [4, 16, 64]
times = [1.0]
replicates = 500
eps = [0.1, 0.05]
seed = 3
output = "out"
)",
                                              "/base");
    EXPECT_EQ(e.model, std::filesystem::path("/base/ex12.toml"));
    EXPECT_EQ(e.output, std::filesystem::path("/base/out"));
    EXPECT_EQ(e.lambdas.size(), 3u);
    EXPECT_EQ(e.replicates, 500u);
    EXPECT_EQ(*e.regime, RegimeKind::divergent);
    EXPECT_EQ(e.seed, 3u);
}

TEST(ExperimentFile, Invariants) {
    EXPECT_THROW(parse_experiment("version = 1\nmodel = \"m\"\nlambdas = [16, 4]", "."), ModelError);
    EXPECT_THROW(parse_experiment("version = 1\nmodel = \"m\"\nlambdas = [4]\nreplicates = 50", "."), ModelError);
    EXPECT_THROW(parse_experiment("version = 1\nmodel = \"m\"\nlambdas = [4]\nregime = \"sideways\"", "."),
                 ModelError);
}

TEST(Fnv1a, KnownValues) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Io, FormatsRoundTrip) {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 12345.678}) EXPECT_EQ(std::stod(format_double(x)), x);
    EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Io, EtaCsvHasBothLimits) {
    const Staircase eta(1.0, 2.0, {0.5}, {3.0});
    std::ostringstream os;
    write_eta_csv(os, eta);
    EXPECT_EQ(os.str(), "s,eta\n0,0\n0.5,0.5\n0.5,3.5\n2,5\n");
}

TEST(Io, ResultsCsv) {
    std::ostringstream os;
    write_results_csv(os, {{4.0, 0.1, 0.5, 100}});
    EXPECT_EQ(os.str(), "lambda,stat,pvalue,n\n4,0.1,0.5,100\n");
}

TEST(Io, ManifestIsJson) {
    Manifest m;
    m.command = "synthesize";
    m.seed = 7;
    m.model_hash = 0xabc;
    m.numbers = {{"eps", 0.05}};
    const std::string j = manifest_json(m);
    EXPECT_NE(j.find("\"seed\": 7"), std::string::npos);
    EXPECT_NE(j.find("\"model_hash\": \"0000000000000abc\""), std::string::npos);
    EXPECT_NE(j.find("\"eps\": 0.05"), std::string::npos);
}
