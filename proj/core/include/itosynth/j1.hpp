#pragma once

#include <utility>
#include <vector>

namespace itosynth {

/// Cadlag path on [0, inf): piecewise linear between knots, with jumps written
/// as two knots at the same time (left limit first). Constant after the last knot.
class CadlagPath {
public:
    CadlagPath(std::vector<double> times, std::vector<double> values);
    /// Right-continuous step function: value[i] on [times[i], times[i+1]).
    static CadlagPath step(const std::vector<double>& times, const std::vector<double>& values);

    double operator()(double t) const;
    double left(double t) const;
    const std::vector<double>& times() const noexcept { return t_; }
    const std::vector<double>& values() const noexcept { return x_; }

    struct Jump {
        double time;
        double size;
    };
    /// Jumps with |size| >= floor, in time order.
    std::vector<Jump> jumps(double floor) const;

private:
    std::vector<double> t_;
    std::vector<double> x_;
};

struct J1Report {
    /// Matched jump times (w1 time, w2 time).
    std::vector<std::pair<double, double>> matched;
    /// Knots (t, Lambda(t)) of the warp, linear after the last knot with tail_slope.
    std::vector<std::pair<double, double>> warp;
    double tail_slope = 1.0;
    double time_modulus = 0.0;   // sup_[0,T] |Lambda(t) - t|
    double value_modulus = 0.0;  // sup_[0,T] |w2(Lambda(t)) - w1(t)|
    double distance = 0.0;
    std::size_t unmatched = 0;
};

/// Matches the jumps of size >= jump_floor in order, pins Lambda at matched
/// jump times and interpolates linearly in between. After the last pin Lambda
/// is linear with the slope in [1/4, 4] that minimises the value modulus
/// (ties towards 1). Both moduli are evaluated exactly at the breakpoints of
/// the piecewise-linear composition.
J1Report j1_distance(const CadlagPath& w1, const CadlagPath& w2, double T, double jump_floor);

}  // namespace itosynth
