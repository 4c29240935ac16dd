#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "itosynth/errors.hpp"
#include "itosynth/expression.hpp"
#include "itosynth/statistics.hpp"
#include "itosynth/time_change.hpp"
#include "oracles.hpp"

using namespace itosynth;
using itosynth::testing::sup_distance;
using itosynth::testing::triangle;

namespace {

SpeedMeasure eq12_m() { return SpeedMeasure::from_expression(Expression::parse("(2*x+1)/x")); }

}  // namespace

TEST(Clock, CanonicalHalfIsIdentity) {
    const SpeedMeasure m = SpeedMeasure::canonical(0.5);
    RngStream rng(1, 0);
    for (int i = 0; i < 50; ++i) {
        const Excursion e = sample_excursion_above(0.1, {}, rng);
        const Clock A = clock(e, m);
        EXPECT_NEAR(A.total(), e.lifetime(), 1e-9 * e.lifetime());
        for (std::size_t k = 0; k < e.size(); k += 97) EXPECT_NEAR(A.values[k], e.times[k], 1e-9 * e.lifetime());
    }
}

TEST(Clock, TriangleLebesgue) {
    const SpeedMeasure m = SpeedMeasure::from_expression(Expression::parse("1"));
    // Tabulated densities are integrated to about 1e-9 relative accuracy.
    EXPECT_NEAR(clock(triangle(), m).total(), 0.5, 1e-9);
    EXPECT_NEAR(clock(triangle(), m).at(0.5), 0.25, 1e-9);
}

TEST(Clock, AtomAddsWeightedLocalTime) {
    // l(1, 0.2) = 1 on the triangle.
    const SpeedMeasure m = SpeedMeasure::from_expression(Expression::parse("2"), {{0.2, 0.3}});
    EXPECT_NEAR(clock(triangle(), m).total(), 1.0 + 0.3, 1e-9);
}

TEST(Clock, FromFieldAgrees) {
    RngStream rng(2, 0);
    const Excursion e = sample_excursion_above(0.1, {}, rng);
    const SpeedMeasure m = SpeedMeasure::from_expression(Expression::parse("3*x^2 + 1"));
    const double dx = default_clock_dx(e);
    const double a = clock(e, m, dx).total();
    const double b = clock_from_field(estimate_local_time(e, dx), m).total();
    EXPECT_NEAR(a, b, 1e-2 * a);
}

TEST(Clock, MonotoneAndStartsAtZero) {
    RngStream rng(3, 0);
    const Excursion e = sample_excursion_above(0.1, {}, rng);
    const Clock A = clock(e, eq12_m());
    EXPECT_EQ(A.values.front(), 0.0);
    EXPECT_TRUE(std::is_sorted(A.values.begin(), A.values.end()));
    EXPECT_TRUE(std::isfinite(A.total()));
    EXPECT_DOUBLE_EQ(A.inverse(A.at(0.5 * e.lifetime())), 0.5 * e.lifetime());
}

TEST(TimeChange, CanonicalHalfFixedPoint) {
    RngStream rng(4, 0);
    const SpeedMeasure m = SpeedMeasure::canonical(0.5);
    for (int i = 0; i < 20; ++i) {
        const Excursion e = sample_excursion_above(0.1, {}, rng);
        const double dx = default_clock_dx(e);
        EXPECT_LE(sup_distance(time_change_excursion(e, m), e), 10.0 * dx);
    }
}

TEST(TimeChange, LebesgueHalvesTime) {
    const Excursion em = time_change_excursion(triangle(), SpeedMeasure::from_expression(Expression::parse("1")));
    ASSERT_EQ(em.size(), 3u);
    EXPECT_NEAR(em.times[1], 0.25, 1e-9);
    EXPECT_NEAR(em.times[2], 0.5, 1e-9);
    EXPECT_EQ(em.values, triangle().values);
}

TEST(TimeChange, PreservesMaxAndLifetimeIsClockTotal) {
    RngStream rng(5, 0);
    const SpeedMeasure m = eq12_m();
    const Excursion e = sample_excursion_above(0.1, {}, rng);
    const Excursion em = time_change_excursion(e, m);
    EXPECT_EQ(path_stats(em).max(), path_stats(e).max());
    EXPECT_DOUBLE_EQ(em.lifetime(), clock(e, m).total());
    EXPECT_NO_THROW(em.validate());
}

TEST(Shift, Triangle) {
    const Excursion s = shift(triangle(), 0.25);
    EXPECT_DOUBLE_EQ(s.lifetime(), 0.75);
    EXPECT_DOUBLE_EQ(s.values.front(), 0.25);
    EXPECT_DOUBLE_EQ(s.value_at(0.25), 0.5);
    EXPECT_TRUE(shift(triangle(), 0.5).is_zero());
    EXPECT_TRUE(shift(triangle(), 0.7).is_zero());
}

TEST(Shift, CommutesWithTimeChange) {
    RngStream rng(6, 0);
    const SpeedMeasure m = eq12_m();
    for (int i = 0; i < 100; ++i) {
        const Excursion e = sample_excursion_above(0.1, {}, rng);
        const double x = 0.05 + 0.1 * rng.uniform();
        const double dx = default_clock_dx(e);
        const Excursion a = shift(time_change_excursion(e, m, dx), x);
        const Excursion b = time_change_excursion(shift(e, x), m, dx);
        // The shifted clock is read off the time-changed grid, linear within a step.
        // Same knots of e after tau_x, at times that agree up to that offset.
        ASSERT_EQ(a.size(), b.size());
        EXPECT_EQ(std::vector<double>(a.values.begin() + 1, a.values.end()),
                  std::vector<double>(b.values.begin() + 1, b.values.end()));
        double worst = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a.times[k] - b.times[k]));
        EXPECT_LE(worst, 1e-5 * (1.0 + a.lifetime()));
    }
}

TEST(SampleQmx, StartsAtX) {
    RngStream rng(7, 0);
    for (const SpeedMeasure& m : {SpeedMeasure::canonical(0.5), eq12_m()}) {
        const Excursion e = sample_Qmx(m, 0.7, rng);
        EXPECT_DOUBLE_EQ(e.values.front(), 0.7);
        EXPECT_NO_THROW(e.validate());
    }
    EXPECT_THROW(sample_Qmx(SpeedMeasure::canonical(0.5), 0.0, rng), ParameterError);
}

TEST(SampleQmx, GamblersRuin) {
    RngStream rng(8, 0);
    const SpeedMeasure m = SpeedMeasure::canonical(0.5);
    const int N = 4000;
    int hits = 0;
    for (int i = 0; i < N; ++i) hits += path_stats(sample_Qmx(m, 1.0, rng)).reaches(2.0);
    EXPECT_NEAR(static_cast<double>(hits) / N, 0.5, 4.0 * binomial_sigma(0.5, N));
}

TEST(SampleQmx, LifetimeFormula) {
    // zeta(e_{m,x}) = A(zeta) - A(tau_x).
    RngStream rng(9, 0);
    const SpeedMeasure m = eq12_m();
    for (int i = 0; i < 30; ++i) {
        const Excursion e = sample_excursion_above(0.2, {}, rng);
        const PathStats st(e);
        const double dx = default_clock_dx(e);
        const Clock A = clock(e, m, dx);
        const Excursion q = time_change_excursion(shift_at_hit(e, st, 0.2), m, dx);
        const double expect = A.total() - A.at(st.hitting_time(0.2));
        EXPECT_NEAR(q.lifetime(), expect, 1e-6 * expect);
    }
}

TEST(SampleNm, LifetimeIsSourceClock) {
    const SpeedMeasure m = eq12_m();
    RngStream a(10, 0), b(10, 0);
    const Excursion em = sample_nm_above(m, 0.1, a);
    const Excursion e = sample_excursion_above(0.1, {}, b);
    EXPECT_DOUBLE_EQ(em.lifetime(), clock(e, m).total());
    EXPECT_EQ(em.values, e.values);
}

TEST(SampleNm, CanonicalHalfIsRawExcursion) {
    RngStream a(11, 0), b(11, 0);
    const Excursion em = sample_nm_above(SpeedMeasure::canonical(0.5), 0.1, a);
    const Excursion e = sample_excursion_above(0.1, {}, b);
    EXPECT_NEAR(em.lifetime(), e.lifetime(), 1e-9 * e.lifetime());
}
