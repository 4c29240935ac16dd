#include "itosynth/harness.hpp"

#include <algorithm>
#include <cmath>

#include "itosynth/errors.hpp"
#include "itosynth/j1.hpp"

namespace itosynth {

namespace {

constexpr std::uint64_t kNativeTag = 0x6e61;
constexpr std::uint64_t kScaledTag = 0x7363;
constexpr std::uint64_t kLimitTag = 0x6c69;
constexpr std::uint64_t kPathTag = 0x7061;

std::vector<double> sorted_ladder(std::span<const double> eps) {
    std::vector<double> e(eps.begin(), eps.end());
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

double half_normal_cdf(double x, double t) { return x <= 0.0 ? 0.0 : std::erf(x / std::sqrt(2.0 * t)); }

CadlagPath knots_path(const SyntheticPath& p, double time_scale, double value_scale) {
    std::vector<double> ts, xs;
    p.knots(ts, xs);
    for (double& t : ts) t /= time_scale;
    for (double& x : xs) x /= value_scale;
    return CadlagPath(std::move(ts), std::move(xs));
}

bool decreasing(const std::vector<LadderRow>& rows) {
    return rows.size() >= 2 && rows.back().ks.statistic < rows.front().ks.statistic;
}

}  // namespace

std::vector<std::vector<double>> sample_rescaled(const BoundaryTriple& b, const ScalingRegime& reg, double lambda,
                                                 double t, std::span<const double> eps_ladder, std::size_t N,
                                                 RngStream rng, const SynthesisOptions& options) {
    if (!(lambda > 0.0) || !(t > 0.0)) throw ParameterError("sample_rescaled: lambda and t must be positive");
    std::vector<double> native(eps_ladder.begin(), eps_ladder.end());
    for (double& e : native) e *= lambda;
    const double times[1] = {reg.u(lambda) * t};
    std::vector<std::vector<double>> out(native.size(), std::vector<double>(N));
    for (std::size_t i = 0; i < N; ++i) {
        const auto x = sample_marginals(b, native, times, rng.child(i), options);
        for (std::size_t k = 0; k < native.size(); ++k) out[k][i] = x[k][0] / lambda;
    }
    return out;
}

std::vector<double> sample_marginal(const BoundaryTriple& b, double t, double eps, std::size_t N, RngStream rng,
                                    const SynthesisOptions& options) {
    const double ladder[1] = {eps};
    const double times[1] = {t};
    std::vector<double> out(N);
    for (std::size_t i = 0; i < N; ++i) out[i] = sample_marginals(b, ladder, times, rng.child(i), options)[0][0];
    return out;
}

IdentityReport scaling_identity_check(const BoundaryTriple& b, const ScalingRegime& reg, double lambda, double t,
                                      std::size_t N, RngStream rng, double eps, const SynthesisOptions& options) {
    const double ladder[1] = {eps};
    const auto native = sample_rescaled(b, reg, lambda, t, ladder, N, rng.child(kNativeTag), options);
    const auto scaled = sample_marginal(scale_triple(b, reg, lambda), t, eps, N, rng.child(kScaledTag), options);
    return {lambda, t, ks_two_sample(native[0], scaled), N};
}

std::vector<ResultRow> VerifyReport::results() const {
    std::vector<ResultRow> out;
    for (const auto& r : rows) out.push_back({r.lambda, r.ks.statistic, r.ks.pvalue, r.n});
    return out;
}

VerifyReport verify_convergent(const BoundaryTriple& b, const ScalingRegime& reg, const ExperimentSpec& spec,
                               const SynthesisOptions& options) {
    spec.validate();
    if (reg.kind != RegimeKind::convergent) throw RegimeError("verify_convergent: regime is divergent");
    const BoundaryTriple limit = limit_triple(b, reg);
    const RngStream root(spec.seed, 0);
    const double t = spec.times.front();
    const auto ladder = sorted_ladder(spec.eps);
    const std::size_t N = spec.replicates;

    VerifyReport rep;
    rep.regime = RegimeKind::convergent;
    rep.t = t;
    rep.level = spec.level / static_cast<double>(spec.lambdas.size());

    const bool closed_form = limit.m.alpha() == 0.5;
    std::vector<double> reference;
    if (closed_form) {
        rep.reference = "|N(0, t)|";
    } else {
        rep.reference = "limit sample";
        reference = sample_marginal(limit, t, ladder.front(), N, root.child(kLimitTag), options);
    }
    const auto cdf = [t](double x) { return half_normal_cdf(x, t); };

    for (std::size_t li = 0; li < spec.lambdas.size(); ++li) {
        const double lambda = spec.lambdas[li];
        const std::size_t used = std::min<std::size_t>(ladder.size(), 2);
        const auto x = sample_rescaled(b, reg, lambda, t, std::span(ladder).first(used), N,
                                       root.child(kNativeTag).child(li), options);
        LadderRow row{lambda, {}, N, 0.0};
        if (closed_form)
            row.ks = used == 2 ? ks_extrapolated(x[0], x[1], ladder[0], ladder[1], cdf) : ks_one_sample(x[0], cdf);
        else
            row.ks = ks_two_sample(x[0], reference);
        rep.rows.push_back(row);
    }
    rep.trend = spec.lambdas.size() < 2 || decreasing(rep.rows);
    rep.accepted = rep.rows.back().ks.pvalue > rep.level;
    rep.pass = rep.trend && rep.accepted;
    return rep;
}

VerifyReport verify_divergent(const BoundaryTriple& b, const ScalingRegime& reg, const ExperimentSpec& spec,
                              const SynthesisOptions& options) {
    spec.validate();
    if (reg.kind != RegimeKind::divergent) throw RegimeError("verify_divergent: regime is convergent");
    if (!(reg.beta > 0.0 && reg.beta < std::min(1.0, 1.0 / reg.alpha)))
        throw RegimeError("verify_divergent: need 0 < beta < min(1, 1/alpha)");
    const BoundaryTriple limit = limit_triple(b, reg);
    const RngStream root(spec.seed, 0);
    const double t = spec.times.front();
    const double eps = sorted_ladder(spec.eps).front();
    const std::size_t N = spec.replicates;

    VerifyReport rep;
    rep.regime = RegimeKind::divergent;
    rep.reference = "limit sample";
    rep.t = t;
    rep.level = spec.level / static_cast<double>(spec.lambdas.size());
    const auto reference = sample_marginal(limit, t, eps, N, root.child(kLimitTag), options);

    for (std::size_t li = 0; li < spec.lambdas.size(); ++li) {
        const double lambda = spec.lambdas[li];
        const double ladder[1] = {eps};
        const auto x = sample_rescaled(b, reg, lambda, t, ladder, N, root.child(kNativeTag).child(li), options);
        LadderRow row{lambda, ks_two_sample(x[0], reference), N, 0.0};

        if (spec.j1_pairs > 0) {
            const double u = reg.u(lambda);
            RngStream prng = root.child(kPathTag).child(li);
            double sum = 0.0;
            for (std::size_t k = 0; k < spec.j1_pairs; ++k) {
                RngStream a = prng.child(2 * k), c = prng.child(2 * k + 1);
                const auto native = synthesize(b, u * t, eps * lambda, a, options);
                const auto lim = synthesize(limit, t, eps, c, options);
                sum += j1_distance(knots_path(native.path, u, lambda), knots_path(lim.path, 1.0, 1.0), t, eps)
                           .distance;
            }
            row.j1_mean = sum / static_cast<double>(spec.j1_pairs);
        }
        rep.rows.push_back(row);
    }
    rep.trend = spec.lambdas.size() < 2 || decreasing(rep.rows);
    rep.accepted = true;
    rep.pass = rep.trend;
    return rep;
}

VerifyReport verify(const BoundaryTriple& b, const ScalingRegime& reg, const ExperimentSpec& spec,
                    const SynthesisOptions& options) {
    return reg.kind == RegimeKind::convergent ? verify_convergent(b, reg, spec, options)
                                              : verify_divergent(b, reg, spec, options);
}

}  // namespace itosynth
