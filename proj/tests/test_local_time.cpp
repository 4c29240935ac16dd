#include <gtest/gtest.h>

#include "itosynth/errors.hpp"
#include "itosynth/local_time.hpp"
#include "oracles.hpp"

using namespace itosynth;
using itosynth::testing::triangle;

TEST(LocalTime, TriangleIsOneBelowPeak) {
    const auto f = estimate_local_time(triangle(), 1e-3);
    const std::size_t last = f.time_count() - 1;
    for (std::size_t k = 0; k + 1 < 500; ++k) EXPECT_NEAR(f.band(last, k), 1.0, 1e-9) << "band " << k;
    for (double x : {0.01, 0.1, 0.25, 0.49}) EXPECT_NEAR(f.at(last, x), 1.0, 1e-9) << x;
}

TEST(LocalTime, TriangleVanishesAbovePeak) {
    const auto f = estimate_local_time(triangle(), 1e-3);
    const std::size_t last = f.time_count() - 1;
    // Band-midpoint interpolation resolves the peak to within one band.
    for (double x : {0.5 + 1e-3, 0.6, 2.0}) EXPECT_EQ(f.at(last, x), 0.0);
    EXPECT_EQ(f.band(last, 500), 0.0);
    for (std::size_t k = 501; k < f.level_count(); ++k) EXPECT_EQ(f.band(last, k), 0.0);
}

TEST(LocalTime, ZeroAtOriginAndMonotoneInTime) {
    RngStream rng(1, 0);
    const Excursion e = sample_excursion_above(0.1, {}, rng);
    const auto f = estimate_local_time(e, 1e-3);
    for (std::size_t i = 0; i < f.time_count(); ++i) EXPECT_EQ(f.at(i, 0.0), 0.0);
    for (std::size_t i = 1; i < f.time_count(); ++i)
        for (std::size_t k = 0; k < f.level_count(); ++k) ASSERT_GE(f.band(i, k), f.band(i - 1, k));
    EXPECT_EQ(f.times().back(), e.lifetime());
}

TEST(LocalTime, DegenerateGrid) { EXPECT_THROW(estimate_local_time(triangle(), 0.6), DegenerateGridError); }

TEST(OccupationTime, Triangle) {
    EXPECT_NEAR(occupation_time(triangle(), 0.0, 0.25), 0.5, 1e-15);
    EXPECT_NEAR(occupation_time(triangle(), 0.0, 0.25, 0.1), 0.1, 1e-15);
    EXPECT_NEAR(occupation_time(triangle(), 0.3, 0.7), 0.4, 1e-15);
}

TEST(OccupationResidual, TriangleExact) {
    const auto f = estimate_local_time(triangle(), 1e-3);
    EXPECT_LT(occupation_residual(triangle(), f, 0.0, 0.5), 1e-9);
}

TEST(OccupationResidual, RejectsEmptyBand) {
    const auto f = estimate_local_time(triangle(), 1e-3);
    EXPECT_THROW(occupation_residual(triangle(), f, 0.3, 0.3), ParameterError);
    EXPECT_THROW(occupation_residual(triangle(), f, 0.3, 0.1), ParameterError);
}

TEST(OccupationResidual, BrownianExcursionBands) {
    RngStream rng(2, 0);
    int checked = 0;
    while (checked < 20) {
        const Excursion e = sample_excursion_above(0.1, {}, rng);
        if (path_stats(e).max() < 0.3) {
            const auto f = estimate_local_time(e, 1e-3);
            EXPECT_LE(occupation_residual(e, f, 0.05, 0.2), 0.05);
            continue;
        }
        const auto f = estimate_local_time(e, 1e-3);
        EXPECT_LE(occupation_residual(e, f, 0.1, 0.3), 0.05);
        EXPECT_LE(occupation_residual(e, f, 0.05, 0.2), 0.05);
        ++checked;
    }
}
