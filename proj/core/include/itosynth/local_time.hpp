#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "itosynth/excursion.hpp"

namespace itosynth {

/// Local-time field l(t, x) of an excursion, with the convention
/// int_0^t 1_A(e(s)) ds = 2 int_A l(t, x) dx.
///
/// Levels are band edges x_k = k * dx; entry (i, k) is the band average of
/// l(t_i, .) over [x_k, x_k + dx), i.e. (1 / 2dx) times the time spent in the
/// band up to t_i. Rows are snapshots at a subset of the path's grid times;
/// the last row is always t = lifetime.
class LocalTimeField {
public:
    LocalTimeField(double dx, std::size_t levels, std::vector<double> times, std::vector<double> values);

    double dx() const noexcept { return dx_; }
    std::size_t level_count() const noexcept { return levels_; }
    std::size_t time_count() const noexcept { return times_.size(); }
    double level(std::size_t k) const noexcept { return static_cast<double>(k) * dx_; }
    std::span<const double> times() const noexcept { return times_; }

    double band(std::size_t i, std::size_t k) const noexcept { return values_[i * levels_ + k]; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * levels_, levels_};
    }
    std::span<const double> final_row() const noexcept { return row(times_.size() - 1); }

    /// l(t_i, x) at a continuous level: linear through the band midpoints and
    /// pinned to l(t, 0) = 0.
    double at(std::size_t i, double x) const;

    /// int_a^b l(t_i, x) dx from the band averages (partial bands pro-rated).
    double integral(std::size_t i, double a, double b) const;

private:
    double dx_;
    std::size_t levels_;
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Band-occupation estimator of the excursion local time, computed exactly on
/// the piecewise-linear interpolant. Throws DegenerateGridError if dx > M(e).
LocalTimeField estimate_local_time(const Excursion& e, double dx, std::size_t max_snapshots = 2048);

/// Lebesgue time the interpolant spends in [a, b) during [0, t].
double occupation_time(const Excursion& e, double a, double b,
                       double t = std::numeric_limits<double>::infinity());

/// |occupation of [a, b) - 2 int_a^b l(zeta, x) dx| / max(occupation, floor).
double occupation_residual(const Excursion& e, const LocalTimeField& f, double a, double b,
                           double floor = 1e-12);

}  // namespace itosynth
