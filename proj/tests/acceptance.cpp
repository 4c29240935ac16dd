// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "itosynth/boundary.hpp"
#include "itosynth/excursion.hpp"
#include "itosynth/expression.hpp"
#include "itosynth/harness.hpp"
#include "itosynth/local_time.hpp"
#include "itosynth/model_file.hpp"
#include "itosynth/statistics.hpp"
#include "itosynth/synthesis.hpp"
#include "itosynth/time_change.hpp"
#include "oracles.hpp"

using namespace itosynth;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const std::string kModels = ITOSYNTH_MODEL_DIR;

BoundaryTriple reflecting() { return {SpeedMeasure::canonical(0.5), JumpFunction::step(1.0), 0.0}; }
BoundaryTriple stable_quarter() { return {SpeedMeasure::canonical(0.5), JumpFunction::canonical(0.5), 0.0}; }

// 1. P(M > x | M > 0.1) = 0.1 / x.
Outcome max_law() {
    constexpr std::size_t N = 100000;
    RngStream rng(101, 0);
    std::vector<double> maxima(N);
    for (std::size_t i = 0; i < N; ++i) {
        RngStream r = rng.child(i);
        maxima[i] = path_stats(sample_excursion_above(0.1, {}, r)).max();
    }
    Outcome out{true, ""};
    for (double x : {0.2, 0.5, 1.0}) {
        const double p = 0.1 / x;
        const auto hits = std::count_if(maxima.begin(), maxima.end(), [x](double m) { return m > x; });
        const double phat = static_cast<double>(hits) / N;
        const double z = (phat - p) / binomial_sigma(p, N);
        out.pass = out.pass && std::abs(z) <= 3.0;
        out.detail += "x=" + fmt("%g", x) + " p=" + fmt("%.5f", phat) + " (" + fmt("%+.2f", z) + " sigma) ";
    }
    return out;
}

// 2. Occupation identity on random bands.
double median_residual(double dt, double dx, std::uint64_t seed) {
    RngStream rng(seed, 0);
    GridPolicy policy;
    policy.dt = dt;
    std::vector<double> res;
    for (int i = 0; i < 100; ++i) {
        RngStream r = rng.child(static_cast<std::uint64_t>(i));
        const Excursion e = sample_excursion_above(0.1, policy, r);
        const double M = path_stats(e).max();
        const LocalTimeField f = estimate_local_time(e, dx, 2);
        std::vector<std::pair<double, double>> bands{{0.05, 0.2}};
        for (int k = 0; k < 3; ++k) {
            const double a = r.uniform() * std::max(0.0, M - 0.1);
            bands.emplace_back(a, a + 0.1);
        }
        for (const auto& [a, b] : bands) {
            if (occupation_time(e, a, b) < 10.0 * dt) continue;
            res.push_back(occupation_residual(e, f, a, b));
        }
    }
    return itosynth::testing::median(res);
}

Outcome occupation() {
    const double coarse = median_residual(1e-4, 1e-3, 202);
    const double fine = median_residual(5e-5, 5e-4, 202);
    return {coarse <= 0.05 && fine <= coarse,
            "median residual " + fmt("%.3g", coarse) + " at (dt, dx) = (1e-4, 1e-3), " + fmt("%.3g", fine) +
                " at (5e-5, 5e-4)"};
}

// 3. m = m^(1/2) leaves excursions unchanged.
Outcome fixed_point() {
    const SpeedMeasure m = SpeedMeasure::canonical(0.5);
    RngStream rng(303, 0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        RngStream r = rng.child(static_cast<std::uint64_t>(i));
        const Excursion e = sample_excursion_above(0.1, {}, r);
        const double dx = default_clock_dx(e);
        worst = std::max(worst, itosynth::testing::sup_distance(time_change_excursion(e, m, dx), e) / dx);
    }
    return {worst <= 10.0, "worst sup|e_m - e| / dx = " + fmt("%.3g", worst)};
}

// 4. Lifetimes under Q_m^1 and absorbed BM from 1.
Outcome qmx_identity() {
    constexpr int N = 5000;
    const SpeedMeasure m = SpeedMeasure::canonical(0.5);
    RngStream rng(404, 0);
    std::vector<double> a(N), b(N);
    for (int i = 0; i < N; ++i) {
        RngStream r1 = rng.child(2 * static_cast<std::uint64_t>(i));
        RngStream r2 = rng.child(2 * static_cast<std::uint64_t>(i) + 1);
        a[static_cast<std::size_t>(i)] = sample_Qmx(m, 1.0, r1).lifetime();
        b[static_cast<std::size_t>(i)] = sample_absorbed_bm(1.0, {}, r2).lifetime();
    }
    const KsResult ks = ks_two_sample(a, b);
    return {ks.pvalue > 0.01, "KS D = " + fmt("%.4f", ks.statistic) + ", p = " + fmt("%.3f", ks.pvalue)};
}

// 5. Exact scaling identity, 9 of 10 seeds per triple.
Outcome scaling_identity() {
    constexpr std::size_t N = 500;
    const double level = 0.01 / 2.0;
    Outcome out{true, ""};
    for (const char* name : {"stable_quarter.toml", "ex12.toml"}) {
        const ModelSpec spec = load_model(kModels + "/" + name);
        int passed = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            bool ok = true;
            for (double lambda : {4.0, 16.0}) {
                const auto r = scaling_identity_check(spec.triple, *spec.regime, lambda, 1.0, N,
                                                      RngStream(500 + seed, 0), 0.05);
                ok = ok && r.ks.pvalue > level;
            }
            passed += ok ? 1 : 0;
        }
        out.pass = out.pass && passed >= 9;
        out.detail += std::string(name) + " " + std::to_string(passed) + "/10 seeds; ";
    }
    return out;
}

// 6. Tail indices of eta jumps.
Outcome stable_indices() {
    constexpr std::size_t n = 20000;
    Outcome out{true, ""};
    const std::pair<BoundaryTriple, double> cases[] = {{reflecting(), 0.5}, {stable_quarter(), 0.25}};
    std::uint64_t seed = 600;
    for (const auto& [b, expected] : cases) {
        RngStream rng(++seed, 0);
        const StableIndex s = stable_index(sample_eta_jumps(b, 0.05, n, rng));
        out.pass = out.pass && std::abs(s.index - expected) <= 0.05;
        out.detail += "index " + fmt("%.3f", s.index) + " (expected " + fmt("%g", expected) + ", R^2 " +
                      fmt("%.4f", s.r2) + "); ";
    }
    return out;
}

// 7. Convergent regime at lambda = 100.
Outcome convergent_limit() {
    const ModelSpec m = load_model(kModels + "/atom_delay.toml");
    ExperimentSpec spec;
    spec.lambdas = {100.0};
    spec.replicates = 2000;
    spec.eps = {0.1, 0.05};
    spec.seed = 707;
    const VerifyReport rep = verify_convergent(m.triple, *m.regime, spec);
    const KsResult& ks = rep.rows.front().ks;
    return {ks.pvalue > 0.01, "vs " + rep.reference + ": KS D = " + fmt("%.4f", ks.statistic) +
                                  ", p = " + fmt("%.3f", ks.pvalue)};
}

// 8. Divergent regime: J1 ladder on the ex12 model.
Outcome divergent_ladder() {
    const ModelSpec m = load_model(kModels + "/ex12.toml");
    int decreasing = 0;
    std::string seq;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ExperimentSpec spec;
        spec.lambdas = {4.0, 16.0, 64.0};
        spec.replicates = 1000;
        spec.eps = {0.05};
        spec.seed = 800 + seed;
        spec.j1_pairs = 1;
        const VerifyReport rep = verify_divergent(m.triple, *m.regime, spec);
        decreasing += rep.trend ? 1 : 0;
        seq += fmt("%.3f", rep.rows.front().ks.statistic) + ">" + fmt("%.3f", rep.rows.back().ks.statistic) +
               (rep.trend ? " " : "(x) ");
    }
    return {decreasing >= 8, std::to_string(decreasing) + "/10 seeds with KS(64) < KS(4): " + seq};
}

// 9. Laplace exponent.
Outcome laplace() {
    const double ladder[] = {0.2, 0.1, 0.05};
    RngStream rng(909, 0);
    const auto est = laplace_exponent_ladder(reflecting(), 1.0, ladder, 40000, rng);
    std::vector<double> x, y;
    for (const auto& e : est) {
        x.push_back(e.eps);
        y.push_back(e.psi);
    }
    const double psi = extrapolate_to_zero(x, y);
    const double rel = std::abs(psi - std::sqrt(2.0)) / std::sqrt(2.0);
    const BoundaryTriple drift{SpeedMeasure::canonical(0.5), JumpFunction::step(0.0), 2.0};
    bool exact = true;
    for (double xi : {0.5, 1.0, 3.0}) {
        RngStream r(910, 0);
        exact = exact && laplace_exponent(drift, xi, 0.1, 100, r) == 2.0 * xi;
    }
    return {rel <= 0.05 && exact, "Psi(1) -> " + fmt("%.4f", psi) + " (rel. error " + fmt("%.4f", rel) +
                                      "), drift-only exact: " + (exact ? "yes" : "no")};
}

// 10. Existence checker.
Outcome existence() {
    Outcome out{true, ""};
    std::string misses;
    for (double alpha : {0.4, 0.8, 1.5}) {
        for (double f : {0.5, 0.9, 1.1}) {
            const double beta = f / alpha;
            const auto rep = check_existence(SpeedMeasure::canonical(alpha), JumpMeasure::canonical(beta), 0.0, 0.0);
            const bool expected = beta < 1.0 / alpha;
            if ((rep.verdict == Verdict::exists) != expected) {
                out.pass = false;
                misses += "(" + fmt("%g", alpha) + ", " + fmt("%g", beta) + ") got " + to_string(rep.verdict) + "; ";
            }
        }
    }
    const SpeedMeasure m12 = SpeedMeasure::from_expression(Expression::parse("(2*x + 1)/x"));
    struct Hand {
        const char* label;
        JumpMeasure j;
        double c;
        bool exists;
    };
    const Hand hands[] = {
        {"j = x^-1.5/2, c = 1", JumpMeasure::canonical(0.5), 1.0, false},
        {"j = x^-2 log(e + 1/x)^-2", JumpMeasure::from_expression(Expression::parse("x^(-2)*log(e + 1/x)^(-2)")), 0.0,
         false},
        {"j = x^-2 log(e + 1/x)^-3", JumpMeasure::from_expression(Expression::parse("x^(-2)*log(e + 1/x)^(-3)")), 0.0,
         true},
    };
    for (const Hand& h : hands) {
        const auto rep = check_existence(m12, h.j, h.c, 0.0);
        if ((rep.verdict == Verdict::exists) != h.exists) {
            out.pass = false;
            misses += std::string(h.label) + " got " + to_string(rep.verdict) + "; ";
        }
    }
    out.detail = misses.empty() ? "all 9 grid cells and 3 hand-built j agree" : "mismatches: " + misses;
    return out;
}

// 11. Byte-identical CLI output for identical seeds.
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "itosynth");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli_run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "itosynth_acceptance_determinism";
    fs::remove_all(root);
    auto synth = [&](const std::string& tag, const std::string& seed) {
        const fs::path dir = root / tag;
        fs::create_directories(dir);
        const int a = run_cli({"synthesize", "--model", kModels + "/ex12.toml", "--T", "10", "--eps", "0.05", "--seed",
                               seed, "--out", dir.string()});
        const int b = run_cli({"sample-excursion", "--eps", "0.1", "--seed", seed, "--out", (dir / "exc.csv").string()});
        return a == kExitPass && b == kExitPass;
    };
    if (!synth("a", "7") || !synth("b", "7") || !synth("c", "8")) return {false, "cli run failed"};
    bool same = true;
    for (const char* f : {"path.csv", "eta.csv", "exc.csv"}) same = same && slurp(root / "a" / f) == slurp(root / "b" / f);
    const bool differs = slurp(root / "a" / "path.csv") != slurp(root / "c" / "path.csv");
    return {same && differs, std::string("seed 7 twice: ") + (same ? "identical" : "DIFFERENT") +
                                 "; seed 8: " + (differs ? "different" : "identical")};
}

const std::map<int, std::function<Outcome()>> kCriteria = {
    {1, max_law},          {2, occupation},       {3, fixed_point}, {4, qmx_identity},
    {5, scaling_identity}, {6, stable_indices},   {7, convergent_limit},
    {8, divergent_ladder}, {9, laplace},          {10, existence},  {11, determinism},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            which.push_back(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--criterion N]...\n";
            return 2;
        }
    }
    if (which.empty())
        for (const auto& [k, f] : kCriteria) which.push_back(k);
    bool all = true;
    for (int k : which) {
        const auto it = kCriteria.find(k);
        if (it == kCriteria.end()) {
            std::cerr << "unknown criterion " << k << "\n";
            return 2;
        }
        Outcome o;
        try {
            o = it->second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
