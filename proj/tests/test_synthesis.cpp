#include <gtest/gtest.h>

#include <cmath>

#include "itosynth/errors.hpp"
#include "itosynth/statistics.hpp"
#include "itosynth/synthesis.hpp"
#include "itosynth/time_change.hpp"

using namespace itosynth;

namespace {

BoundaryTriple reflecting() { return {SpeedMeasure::canonical(0.5), JumpFunction::step(1.0), 0.0}; }
BoundaryTriple stable_quarter() { return {SpeedMeasure::canonical(0.5), JumpFunction::canonical(0.5), 0.0}; }
BoundaryTriple drift_only(double r) { return {SpeedMeasure::canonical(0.5), JumpFunction::step(0.0), r}; }
BoundaryTriple atom_at_two() {
    return {SpeedMeasure::canonical(0.5), j_c_to_J(JumpMeasure::atoms({{2.0, 0.5}}), 0.0), 1.0};
}

}  // namespace

TEST(PointSampler, IntensityHandIntegrals) {
    EXPECT_NEAR(PointSampler(reflecting(), 0.1).intensity(), 10.0, 1e-12);
    EXPECT_NEAR(PointSampler(stable_quarter(), 0.1).intensity(), 2.0 / std::sqrt(0.1), 1e-12);
    // Atom at 2 with mass 1/2: z in (0, 1) at level 2, I = 1/2.
    EXPECT_NEAR(PointSampler(atom_at_two(), 0.1).intensity(), 0.5, 1e-12);
    EXPECT_EQ(PointSampler(drift_only(1.0), 0.1).intensity(), 0.0);
}

TEST(PointSampler, MarksFollowDzOverMaxJEps) {
    // For J = z^2 and eps = 0.1: P(z < sqrt(0.1)) = (sqrt(0.1)/0.1) / I = 1/2.
    const PointSampler ps(stable_quarter(), 0.1);
    RngStream rng(1, 0);
    const int N = 20000;
    int low = 0;
    std::vector<double> levels;
    for (int i = 0; i < N; ++i) {
        const auto mk = ps.draw_mark(rng);
        EXPECT_NEAR(mk.level, mk.z * mk.z, 1e-12 + 1e-9 * mk.level);
        if (mk.z < std::sqrt(0.1)) low++;
        else levels.push_back(mk.level);
    }
    EXPECT_NEAR(static_cast<double>(low) / N, 0.5, 4.0 * binomial_sigma(0.5, N));
    // Above eps, levels have law j restricted to (eps, inf): P(level > x) = sqrt(eps / x).
    const auto ks = ks_one_sample(levels, [](double x) { return x <= 0.1 ? 0.0 : 1.0 - std::sqrt(0.1 / x); });
    EXPECT_GT(ks.pvalue, 0.01);
}

TEST(SamplePointProcess, MeanCountAndConditioning) {
    RngStream rng(2, 0);
    double total = 0.0;
    const int runs = 200;
    for (int i = 0; i < runs; ++i) {
        RngStream child = rng.child(i);
        const auto pp = sample_point_process(reflecting(), 1.0, 0.1, child);
        total += static_cast<double>(pp.points.size());
        double prev = 0.0;
        for (const auto& p : pp.points) {
            EXPECT_GT(p.s, prev);
            EXPECT_LE(p.s, 1.0);
            EXPECT_GE(p.max, std::max(p.level, 0.1));
            prev = p.s;
        }
    }
    EXPECT_NEAR(total / runs, 10.0, 4.0 * std::sqrt(10.0 / runs));
}

TEST(SamplePointProcess, ShiftedLevelsAndConditioning) {
    RngStream rng(3, 0);
    const auto pp = sample_point_process(stable_quarter(), 2.0, 0.05, rng);
    ASSERT_FALSE(pp.points.empty());
    for (const auto& p : pp.points) {
        EXPECT_GE(p.max, std::max(p.level, 0.05));
        if (p.level > 0.0) EXPECT_DOUBLE_EQ(p.path.values.front(), p.level);
        EXPECT_DOUBLE_EQ(p.lifetime, p.path.lifetime());
    }
}

TEST(SamplePointProcess, RejectsNonExistentTriple) {
    RngStream rng(4, 0);
    const BoundaryTriple bad{SpeedMeasure::canonical(0.5), j_c_to_J(JumpMeasure::atoms({{1.0, 1.0}}), 0.0), 0.0};
    EXPECT_THROW(sample_point_process(bad, 1.0, 0.1, rng), SynthesisError);
}

TEST(SamplePointProcess, Deterministic) {
    RngStream a(5, 1), b(5, 1);
    const auto pa = sample_point_process(stable_quarter(), 1.0, 0.1, a);
    const auto pb = sample_point_process(stable_quarter(), 1.0, 0.1, b);
    ASSERT_EQ(pa.points.size(), pb.points.size());
    for (std::size_t i = 0; i < pa.points.size(); ++i) {
        EXPECT_EQ(pa.points[i].s, pb.points[i].s);
        EXPECT_EQ(pa.points[i].path.values, pb.points[i].path.values);
    }
}

TEST(BuildEta, DriftOnly) {
    RngStream rng(6, 0);
    const auto pp = sample_point_process(drift_only(1.0), 3.0, 0.1, rng);
    EXPECT_TRUE(pp.points.empty());
    const Staircase eta = build_eta(pp, drift_only(1.0));
    for (double s : {0.0, 0.5, 2.9}) EXPECT_DOUBLE_EQ(eta(s), s);
}

TEST(BuildEta, JumpsAreClockIncrements) {
    RngStream rng(7, 0);
    const BoundaryTriple b = atom_at_two();
    const auto pp = sample_point_process(b, 20.0, 0.1, rng);
    const Staircase eta = build_eta(pp, b);
    ASSERT_EQ(eta.jumps().size(), pp.points.size());
    for (std::size_t i = 0; i < pp.points.size(); ++i) {
        const double s = pp.points[i].s;
        EXPECT_NEAR(eta(s) - eta.left(s), pp.points[i].lifetime, 1e-12 * (1.0 + eta(s)));
        EXPECT_DOUBLE_EQ(eta.jumps()[i], pp.points[i].lifetime);
    }
}

TEST(BuildPath, EmptyWithDriftIsZero) {
    RngStream rng(8, 0);
    const auto pp = sample_point_process(drift_only(2.0), 1.0, 0.1, rng);
    const SyntheticPath sp = build_path(pp, drift_only(2.0), 2.0);
    for (double t : {0.0, 0.7, 2.0}) EXPECT_EQ(sp(t), 0.0);
    EXPECT_THROW(build_path(pp, drift_only(2.0), 3.0), HorizonError);
}

TEST(BuildPath, IntervalsMatchEtaJumps) {
    RngStream rng(9, 0);
    const BoundaryTriple b = atom_at_two();
    const Synthesis syn = synthesize(b, 5.0, 0.1, rng);
    const SyntheticPath& sp = syn.path;
    ASSERT_GE(syn.pp.S, 0.0);
    std::size_t used = 0;
    for (const auto& p : syn.pp.points) {
        const double start = sp.eta.left(p.s);
        if (start > sp.T) break;
        ASSERT_LT(used, sp.starts.size());
        EXPECT_DOUBLE_EQ(sp.starts[used], start);
        EXPECT_NEAR(sp.eta(p.s) - start, sp.pieces[used].lifetime(), 1e-12 * (1.0 + start));
        ++used;
    }
    EXPECT_EQ(used, sp.starts.size());
    // Zero on the drift stretches between excursions.
    for (std::size_t i = 0; i + 1 < sp.starts.size(); ++i) {
        const double gap_lo = sp.starts[i] + sp.pieces[i].lifetime();
        const double gap_hi = sp.starts[i + 1];
        if (gap_hi - gap_lo > 1e-9 && gap_hi < sp.T) EXPECT_EQ(sp(0.5 * (gap_lo + gap_hi)), 0.0);
    }
    for (double t = 0.0; t <= sp.T; t += 0.01) EXPECT_GE(sp(t), 0.0);
}

TEST(BuildPath, KnotsAgreeWithEvaluation) {
    RngStream rng(10, 0);
    const Synthesis syn = synthesize(stable_quarter(), 2.0, 0.05, rng);
    std::vector<double> ts, xs;
    syn.path.knots(ts, xs);
    ASSERT_EQ(ts.front(), 0.0);
    ASSERT_EQ(ts.back(), 2.0);
    EXPECT_TRUE(std::is_sorted(ts.begin(), ts.end()));
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (ts[i + 1] - ts[i] < 1e-12) continue;
        const double mid = 0.5 * (ts[i] + ts[i + 1]);
        EXPECT_NEAR(syn.path(mid), 0.5 * (xs[i] + xs[i + 1]), 1e-9 + 1e-6 * xs[i]);
    }
}

TEST(BoundaryLocalTime, InverseOfEta) {
    RngStream rng(11, 0);
    const BoundaryTriple b = atom_at_two();
    const Synthesis syn = synthesize(b, 5.0, 0.1, rng);
    for (double s : {0.1, 0.5, 1.0}) {
        if (s >= syn.pp.S) continue;
        bool at_jump = false;
        for (const auto& p : syn.pp.points) at_jump = at_jump || p.s == s;
        if (!at_jump && syn.path.eta(s) <= syn.path.T) EXPECT_NEAR(boundary_local_time(syn.path, syn.path.eta(s)), s, 1e-12);
    }
    EXPECT_NEAR(boundary_local_time(syn.path, 0.0, 2.0), 0.0, 1e-15);
}

TEST(EstimateC, TrivialDrift) {
    RngStream rng(12, 0);
    EXPECT_DOUBLE_EQ(estimate_C(sample_point_process(drift_only(1.0), 1.0, 0.1, rng), 1.0), 1.0);
}

TEST(Laplace, DriftOnlyIsExact) {
    RngStream rng(13, 0);
    for (double xi : {0.5, 1.0, 3.0}) EXPECT_DOUBLE_EQ(laplace_exponent(drift_only(2.0), xi, 0.1, 100, rng), 2.0 * xi);
}

TEST(Laplace, ConcaveIncreasing) {
    std::vector<double> psi;
    const std::vector<double> xis{0.25, 0.5, 1.0, 2.0, 4.0};
    for (double xi : xis) {
        RngStream rng(14, 0);
        psi.push_back(laplace_exponent(reflecting(), xi, 0.1, 4000, rng));
    }
    for (std::size_t i = 1; i < psi.size(); ++i) EXPECT_GT(psi[i], psi[i - 1]);
    for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
        const double slope_l = (psi[i] - psi[i - 1]) / (xis[i] - xis[i - 1]);
        const double slope_r = (psi[i + 1] - psi[i]) / (xis[i + 1] - xis[i]);
        EXPECT_LT(slope_r, slope_l);
    }
}

TEST(Laplace, FromEtaAgreesWithMarks) {
    RngStream a(15, 0), b(16, 0);
    const double marks = laplace_exponent(atom_at_two(), 1.0, 0.1, 20000, a);
    const double eta = laplace_exponent_from_eta(atom_at_two(), 1.0, 0.1, 2.0, 4000, b);
    EXPECT_NEAR(eta, marks, 0.05 * marks);
}

TEST(SampleMarginals, DriftOnlyIsZero) {
    const double eps[] = {0.1};
    const double times[] = {0.5, 1.0};
    const auto x = sample_marginals(drift_only(1.0), eps, times, RngStream(17, 0));
    EXPECT_EQ(x[0][0], 0.0);
    EXPECT_EQ(x[0][1], 0.0);
}

TEST(SampleMarginals, ThinnedLadderIsConsistent) {
    // The coarse column of a two-eps ladder has the law of a direct coarse run.
    const double ladder[] = {0.05, 0.2};
    const double coarse[] = {0.2};
    const double times[] = {1.0};
    std::vector<double> thinned, direct;
    for (std::uint64_t i = 0; i < 1500; ++i) {
        thinned.push_back(sample_marginals(reflecting(), ladder, times, RngStream(18, i))[1][0]);
        direct.push_back(sample_marginals(reflecting(), coarse, times, RngStream(19, i))[0][0]);
    }
    EXPECT_GT(ks_two_sample(thinned, direct).pvalue, 0.01);
}

TEST(SingleLevel, SingleReachableLevelMatchesQmx) {
    // All marks sit at level 2, so e_{m,J(z)} must have law Q_m^2.
    const PointSampler ps(atom_at_two(), 0.1);
    RngStream rng(20, 0), direct(21, 0);
    std::vector<double> a, b;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        RngStream child = rng.child(i);
        const auto p = ps.draw_point(child, i);
        EXPECT_DOUBLE_EQ(p.level, 2.0);
        a.push_back(p.lifetime);
        b.push_back(sample_Qmx(SpeedMeasure::canonical(0.5), 2.0, direct).lifetime());
    }
    EXPECT_GT(ks_two_sample(a, b).pvalue, 0.01);
}

TEST(EtaJumps, AboveTruncation) {
    RngStream rng(22, 0);
    const auto jumps = sample_eta_jumps(reflecting(), 0.1, 500, rng);
    EXPECT_EQ(jumps.size(), 500u);
    for (double j : jumps) EXPECT_GT(j, 0.0);
}
