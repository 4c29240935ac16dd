#pragma once

#include <vector>

#include "itosynth/excursion.hpp"
#include "itosynth/local_time.hpp"
#include "itosynth/rng.hpp"
#include "itosynth/speed_measure.hpp"

namespace itosynth {

/// A_m(t) = int l(t, x) dm(x) on the time grid of an excursion.
struct Clock {
    std::vector<double> times;
    std::vector<double> values;

    double total() const { return values.empty() ? 0.0 : values.back(); }
    /// A at a time, linear between grid points, constant after the lifetime.
    double at(double t) const;
    /// Right-continuous inverse inf{t : A(t) > a}, linear between grid points.
    double inverse(double a) const;
};

/// Level resolution used near 0: min(1e-3, M / 500) unless dx > 0 is given.
double default_clock_dx(const Excursion& e);

/// Streaming clock, exact on the piecewise-linear path. On [0, dx / 2) the
/// measure is replaced by a constant density with the same first moment,
/// which keeps the clock finite when m(0+) = -inf.
Clock clock(const Excursion& e, const SpeedMeasure& m, double dx = 0.0);

/// Clock from a local-time field: A(t_i) = sum_k l(t_i, band k) w_k with
/// w_k = int_band y dm(y) / band midpoint.
Clock clock_from_field(const LocalTimeField& f, const SpeedMeasure& m);

/// e_m(t) = e(A^-1(t)) on the grid {A(t_i)}.
Excursion time_change_excursion(const Excursion& e, const Clock& A);
Excursion time_change_excursion(const Excursion& e, const SpeedMeasure& m, double dx = 0.0);

/// theta_x(e) = e(tau_x + .) when M(e) > x, else the zero path.
Excursion shift(const Excursion& e, double x);

/// e(tau_x + .) for a path with M(e) >= x (the boundary case M(e) = x keeps
/// the path from its hitting time on).
Excursion shift_at_hit(const Excursion& e, const PathStats& st, double x);

/// Absorbing L_m-diffusion from x: e_{m,x} for e ~ n_BE( . | M > x).
Excursion sample_Qmx(const SpeedMeasure& m, double x, RngStream& rng, const GridPolicy& policy = {},
                     double dx = 0.0);

/// e_m for e ~ n_BE( . | M > eps), i.e. n_m( . | M > eps).
Excursion sample_nm_above(const SpeedMeasure& m, double eps, RngStream& rng, const GridPolicy& policy = {},
                          double dx = 0.0);

}  // namespace itosynth
