#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "itosynth/rng.hpp"

namespace itosynth {

/// Nonnegative continuous path on a (possibly non-uniform) time grid, read by
/// linear interpolation. The lifetime is the last grid time, where the value
/// is 0. The zero path is the single point (0, 0).
struct Excursion {
    std::vector<double> times;
    std::vector<double> values;

    static Excursion zero_path() { return Excursion{{0.0}, {0.0}}; }

    std::size_t size() const noexcept { return times.size(); }
    bool is_zero() const noexcept { return times.size() <= 1; }
    double lifetime() const noexcept { return times.empty() ? 0.0 : times.back(); }
    double start_value() const noexcept { return values.empty() ? 0.0 : values.front(); }

    /// Linear interpolation; 0 past the lifetime.
    double value_at(double t) const;

    /// Throws ModelError when the grid/value invariants do not hold.
    void validate() const;
};

/// Supremum and first hitting times of an excursion, both read off the linear
/// interpolant.
class PathStats {
public:
    explicit PathStats(const Excursion& e);

    double max() const noexcept { return max_; }
    double lifetime() const noexcept { return lifetime_; }

    /// tau_a = inf{t >= 0 : e(t) = a}; +inf when the path never reaches a.
    double hitting_time(double a) const;
    bool reaches(double a) const { return hitting_time(a) < std::numeric_limits<double>::infinity(); }

private:
    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<double> running_max_;
    double max_ = 0.0;
    double lifetime_ = 0.0;
};

PathStats path_stats(const Excursion& e);

/// Time-grid policy shared by the samplers.
///
/// With rel_step > 0 the step at level x is max(h_floor, (rel_step * x)^2),
/// where h_floor = min(dt, (rel_step * scale)^2) and scale is the sampler's
/// natural level (the conditioning level or the starting point). With
/// rel_step == 0 every step is exactly dt.
struct GridPolicy {
    double dt = 1e-4;
    double rel_step = 0.05;
    /// Relative tolerance of the running-maximum bridge refinement (0 = off).
    double max_rel_tol = 1e-3;
    std::size_t max_steps = 20'000'000;
    int max_retries = 16;

    double floor_step(double scale) const;
    double step(double level, double floor) const {
        if (rel_step <= 0.0) return dt;
        const double rel = rel_step * level;
        return rel * rel > floor ? rel * rel : floor;
    }
};

struct SampleDiagnostics {
    int retries = 0;
    std::size_t steps = 0;
};

/// Draws from n_BE( . | M > eps): a Bessel(3) rise from 0 to eps spliced with
/// an absorbed Brownian motion from eps.
Excursion sample_excursion_above(double eps, const GridPolicy& policy, RngStream& rng,
                                 SampleDiagnostics* diag = nullptr);

/// Brownian motion from x0 > 0 stopped at its first hit of 0.
Excursion sample_absorbed_bm(double x0, const GridPolicy& policy, RngStream& rng,
                             SampleDiagnostics* diag = nullptr);

}  // namespace itosynth
