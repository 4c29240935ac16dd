#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "itosynth/errors.hpp"
#include "itosynth/harness.hpp"
#include "itosynth/io.hpp"
#include "itosynth/model_file.hpp"
#include "itosynth/statistics.hpp"
#include "itosynth/synthesis.hpp"
#include "itosynth/time_change.hpp"

namespace itosynth {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ModelError("cannot write " + p.string());
    return f;
}

Manifest base_manifest(const std::string& command, std::uint64_t seed, const std::string& model_path,
                       std::uint64_t hash) {
    Manifest m;
    m.command = command;
    m.seed = seed;
    m.model_path = model_path;
    m.model_hash = hash;
    return m;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

SynthesisOptions synthesis_options(double dt) {
    SynthesisOptions o;
    o.grid.dt = dt;
    return o;
}

struct SampleExcursionArgs {
    double eps = 0.1;
    double x = 0.0;
    double dt = 1e-4;
    std::uint64_t seed = 1;
    std::string model;
    std::string out;
};

void run_sample_excursion(const SampleExcursionArgs& a, std::ostream& out) {
    RngStream rng(a.seed, 0);
    GridPolicy grid;
    grid.dt = a.dt;
    Excursion e;
    std::optional<ModelSpec> model;
    if (!a.model.empty()) model = load_model(a.model);
    if (a.x > 0.0) {
        const SpeedMeasure m = model ? model->triple.m : SpeedMeasure::canonical(0.5);
        e = sample_Qmx(m, a.x, rng, grid);
    } else if (model) {
        e = sample_nm_above(model->triple.m, a.eps, rng, grid);
    } else {
        e = sample_excursion_above(a.eps, grid, rng);
    }
    if (a.out.empty()) {
        write_path_csv(out, e);
        return;
    }
    auto f = open_out(a.out);
    write_path_csv(f, e);
    Manifest man = base_manifest("sample-excursion", a.seed, a.model, model ? model->hash : 0);
    man.numbers = {{"eps", a.eps}, {"x", a.x}, {"dt", a.dt}, {"lifetime", e.lifetime()}};
    write_manifest(fs::path(a.out).replace_extension(".manifest.json"), man);
    out << "wrote " << a.out << " (" << e.size() << " points, lifetime " << format_double(e.lifetime()) << ")\n";
}

struct SynthesizeArgs {
    std::string model;
    double T = 1.0;
    double eps = 0.05;
    double dt = 1e-4;
    std::uint64_t seed = 1;
    std::string out = ".";
};

void run_synthesize(const SynthesizeArgs& a, std::ostream& out) {
    const ModelSpec model = load_model(a.model);
    RngStream rng(a.seed, 0);
    const Synthesis syn = synthesize(model.triple, a.T, a.eps, rng, synthesis_options(a.dt));
    const fs::path dir(a.out);
    fs::create_directories(dir);
    {
        std::vector<double> ts, xs;
        syn.path.knots(ts, xs);
        auto f = open_out(dir / "path.csv");
        write_knots_csv(f, ts, xs);
    }
    {
        auto f = open_out(dir / "eta.csv");
        write_eta_csv(f, syn.path.eta);
    }
    Manifest man = base_manifest("synthesize", a.seed, a.model, model.hash);
    man.numbers = {{"T", a.T},
                   {"eps", a.eps},
                   {"dt", a.dt},
                   {"S", syn.pp.S},
                   {"intensity", syn.pp.intensity},
                   {"points", static_cast<double>(syn.pp.points.size())}};
    man.strings = {{"triple", model.triple.describe()}};
    write_manifest(dir / "manifest.json", man);
    out << "synthesized " << syn.pp.points.size() << " excursions, S = " << format_double(syn.pp.S) << ", wrote "
        << (dir / "path.csv").string() << ", " << (dir / "eta.csv").string() << "\n";
}

struct LaplaceArgs {
    std::string model;
    double xi = 1.0;
    std::vector<double> eps{0.1, 0.05, 0.025};
    std::size_t n = 20000;
    double dt = 1e-4;
    std::uint64_t seed = 1;
    std::string out;
};

void run_laplace(const LaplaceArgs& a, std::ostream& out) {
    const ModelSpec model = load_model(a.model);
    RngStream rng(a.seed, 0);
    const auto est = laplace_exponent_ladder(model.triple, a.xi, a.eps, a.n, rng, synthesis_options(a.dt));
    std::vector<double> xs, ys;
    std::ostringstream csv;
    csv << "eps,psi,stderr,n\n";
    for (const auto& e : est) {
        xs.push_back(e.eps);
        ys.push_back(e.psi);
        csv << format_double(e.eps) << ',' << format_double(e.psi) << ',' << format_double(e.std_error) << ','
            << e.n << '\n';
    }
    const double psi0 = est.size() >= 2 ? extrapolate_to_zero(xs, ys) : ys.front();
    out << csv.str() << "extrapolated," << format_double(psi0) << "\n";
    if (!a.out.empty()) {
        auto f = open_out(a.out);
        f << csv.str();
    }
}

struct VerifyArgs {
    std::string regime;
    std::string spec;
    double dt = 1e-4;
};

int run_verify(const VerifyArgs& a, std::ostream& out) {
    const ExperimentSpec spec = load_experiment(a.spec);
    const RegimeKind kind = a.regime == "convergent" ? RegimeKind::convergent : RegimeKind::divergent;
    if (spec.regime && *spec.regime != kind)
        throw ParameterError("experiment declares regime " + std::string(to_string(*spec.regime)));
    const ModelSpec model = load_model(spec.model);
    if (!model.regime) throw ModelError(spec.model.string() + ": no [regime] table");
    ScalingRegime reg = *model.regime;
    if (reg.kind != kind) throw RegimeError("model regime is " + std::string(to_string(reg.kind)));

    const VerifyReport rep = verify(model.triple, reg, spec, synthesis_options(a.dt));
    fs::create_directories(spec.output);
    {
        auto f = open_out(spec.output / "results.csv");
        write_results_csv(f, rep.results());
    }
    Manifest man = base_manifest("verify " + a.regime, spec.seed, spec.model.string(), model.hash);
    man.numbers = {{"t", rep.t}, {"replicates", static_cast<double>(spec.replicates)}, {"level", rep.level}};
    man.strings = {{"lambdas", join(spec.lambdas)},
                   {"eps", join(spec.eps)},
                   {"reference", rep.reference},
                   {"trend", rep.trend ? "decreasing" : "not decreasing"},
                   {"verdict", rep.pass ? "pass" : "fail"}};
    write_manifest(spec.output / "manifest.json", man);

    out << "lambda,stat,pvalue,n" << (kind == RegimeKind::divergent ? ",j1_mean" : "") << "\n";
    for (const auto& r : rep.rows) {
        out << format_double(r.lambda) << ',' << format_double(r.ks.statistic) << ',' << format_double(r.ks.pvalue)
            << ',' << r.n;
        if (kind == RegimeKind::divergent) out << ',' << format_double(r.j1_mean);
        out << '\n';
    }
    out << "verdict: " << (rep.pass ? "pass" : "fail") << " (trend " << (rep.trend ? "decreasing" : "not decreasing")
        << ")\n";
    return rep.pass ? kExitPass : kExitStatFail;
}

struct IdentityArgs {
    std::string model;
    std::vector<double> lambdas{4.0, 16.0};
    double t = 1.0;
    std::size_t n = 2000;
    double eps = 0.05;
    double dt = 1e-4;
    std::uint64_t seed = 1;
    std::string out;
};

int run_identity(const IdentityArgs& a, std::ostream& out) {
    const ModelSpec model = load_model(a.model);
    if (!model.regime) throw ModelError(a.model + ": no [regime] table");
    const RngStream root(a.seed, 0);
    const double level = 0.01 / static_cast<double>(a.lambdas.size());
    std::vector<ResultRow> rows;
    bool pass = true;
    for (std::size_t i = 0; i < a.lambdas.size(); ++i) {
        const auto rep = scaling_identity_check(model.triple, *model.regime, a.lambdas[i], a.t, a.n, root.child(i),
                                                a.eps, synthesis_options(a.dt));
        rows.push_back({rep.lambda, rep.ks.statistic, rep.ks.pvalue, rep.n});
        pass = pass && rep.ks.pvalue > level;
    }
    write_results_csv(out, rows);
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        auto f = open_out(fs::path(a.out) / "results.csv");
        write_results_csv(f, rows);
        Manifest man = base_manifest("identity-check", a.seed, a.model, model.hash);
        man.numbers = {{"t", a.t}, {"eps", a.eps}, {"n", static_cast<double>(a.n)}, {"level", level}};
        man.strings = {{"lambdas", join(a.lambdas)}, {"verdict", pass ? "pass" : "fail"}};
        write_manifest(fs::path(a.out) / "manifest.json", man);
    }
    out << "verdict: " << (pass ? "pass" : "fail") << "\n";
    return pass ? kExitPass : kExitStatFail;
}

struct StableArgs {
    std::string model;
    std::string input;
    double eps = 0.01;
    std::size_t n = 10000;
    double dt = 1e-4;
    std::uint64_t seed = 1;
};

std::vector<double> read_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open " + path);
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
        char* end = nullptr;
        const double x = std::strtod(cell.c_str(), &end);
        if (end != cell.c_str()) v.push_back(x);
    }
    return v;
}

int run_stable(const StableArgs& a, std::ostream& out) {
    std::vector<double> jumps;
    if (!a.input.empty()) {
        jumps = read_column(a.input);
    } else {
        if (a.model.empty()) throw ParameterError("stable-index needs --model or --input");
        const ModelSpec model = load_model(a.model);
        RngStream rng(a.seed, 0);
        jumps = sample_eta_jumps(model.triple, a.eps, a.n, rng, synthesis_options(a.dt));
    }
    const StableIndex s = stable_index(jumps);
    out << "index,stderr,r2,points,power_law\n"
        << format_double(s.index) << ',' << format_double(s.std_error) << ',' << format_double(s.r2) << ','
        << s.points << ',' << (s.power_law ? "true" : "false") << '\n';
    return s.power_law ? kExitPass : kExitStatFail;
}

int run_check(const std::string& path, std::ostream& out) {
    const ModelSpec model = load_model(path);
    const ExistenceReport rep = check_existence(model.triple);
    out << "triple: " << model.triple.describe() << "\n"
        << "verdict: " << to_string(rep.verdict) << (rep.confident ? "" : " (low confidence)") << "\n";
    for (const auto& d : rep.diagnostics) out << "  " << d << "\n";
    return rep.verdict == Verdict::exists ? kExitPass : kExitStatFail;
}

}  // namespace

int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"itosynth: Ito excursion synthesis of Feller boundary processes", "itosynth"};
    app.require_subcommand(1);

    SampleExcursionArgs se;
    auto* sub_se = app.add_subcommand("sample-excursion", "Sample one excursion above eps (optionally time-changed)");
    sub_se->add_option("--eps", se.eps, "Truncation level")->check(CLI::PositiveNumber);
    sub_se->add_option("--x", se.x, "Start level: sample Q_m^x instead of n_m(. | M > eps)");
    sub_se->add_option("--dt", se.dt, "Base time step")->check(CLI::PositiveNumber);
    sub_se->add_option("--seed", se.seed, "RNG seed");
    sub_se->add_option("--model", se.model, "Model file (its speed measure is used)");
    sub_se->add_option("--out", se.out, "CSV output file (stdout if omitted)");

    SynthesizeArgs sy;
    auto* sub_sy = app.add_subcommand("synthesize", "Synthesize X and eta on [0, T]");
    sub_sy->add_option("--model", sy.model, "Model file")->required();
    sub_sy->add_option("--T", sy.T, "Real-time horizon")->check(CLI::PositiveNumber);
    sub_sy->add_option("--eps", sy.eps, "Excursion truncation")->check(CLI::PositiveNumber);
    sub_sy->add_option("--dt", sy.dt, "Base time step")->check(CLI::PositiveNumber);
    sub_sy->add_option("--seed", sy.seed, "RNG seed");
    sub_sy->add_option("--out", sy.out, "Output directory");

    LaplaceArgs la;
    auto* sub_la = app.add_subcommand("laplace", "Laplace exponent of eta on an eps ladder");
    sub_la->add_option("--model", la.model, "Model file")->required();
    sub_la->add_option("--xi", la.xi, "Laplace argument")->check(CLI::PositiveNumber);
    sub_la->add_option("--eps", la.eps, "Comma-separated eps ladder")->delimiter(',');
    sub_la->add_option("--n", la.n, "Marks per estimate");
    sub_la->add_option("--dt", la.dt, "Base time step")->check(CLI::PositiveNumber);
    sub_la->add_option("--seed", la.seed, "RNG seed");
    sub_la->add_option("--out", la.out, "CSV output file");

    VerifyArgs ve;
    auto* sub_ve = app.add_subcommand("verify", "Scaling-limit verification on a lambda ladder");
    sub_ve->add_option("regime", ve.regime, "convergent | divergent")
        ->required()
        ->check(CLI::IsMember({"convergent", "divergent"}));
    sub_ve->add_option("--spec", ve.spec, "Experiment file")->required();
    sub_ve->add_option("--dt", ve.dt, "Base time step")->check(CLI::PositiveNumber);

    IdentityArgs id;
    auto* sub_id = app.add_subcommand("identity-check", "Exact scaling identity X(u t) / lambda = X_lambda(t) in law");
    sub_id->add_option("--model", id.model, "Model file with a [regime] table")->required();
    sub_id->add_option("--lambda", id.lambdas, "Comma-separated lambdas")->delimiter(',');
    sub_id->add_option("--t", id.t, "Observation time")->check(CLI::PositiveNumber);
    sub_id->add_option("--n", id.n, "Sample size per side");
    sub_id->add_option("--eps", id.eps, "Truncation in scaled units")->check(CLI::PositiveNumber);
    sub_id->add_option("--dt", id.dt, "Base time step")->check(CLI::PositiveNumber);
    sub_id->add_option("--seed", id.seed, "RNG seed");
    sub_id->add_option("--out", id.out, "Output directory");

    StableArgs st;
    auto* sub_st = app.add_subcommand("stable-index", "Tail index of eta jumps");
    sub_st->add_option("--model", st.model, "Model file");
    sub_st->add_option("--input", st.input, "CSV/column file of jump sizes");
    sub_st->add_option("--eps", st.eps, "Excursion truncation")->check(CLI::PositiveNumber);
    sub_st->add_option("--n", st.n, "Number of jumps");
    sub_st->add_option("--dt", st.dt, "Base time step")->check(CLI::PositiveNumber);
    sub_st->add_option("--seed", st.seed, "RNG seed");

    std::string check_model;
    auto* sub_ch = app.add_subcommand("check", "Existence conditions for a model");
    sub_ch->add_option("--model", check_model, "Model file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (sub_se->parsed()) {
            run_sample_excursion(se, out);
            return kExitPass;
        }
        if (sub_sy->parsed()) {
            run_synthesize(sy, out);
            return kExitPass;
        }
        if (sub_la->parsed()) {
            run_laplace(la, out);
            return kExitPass;
        }
        if (sub_ve->parsed()) return run_verify(ve, out);
        if (sub_id->parsed()) return run_identity(id, out);
        if (sub_st->parsed()) return run_stable(st, out);
        if (sub_ch->parsed()) return run_check(check_model, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace itosynth
