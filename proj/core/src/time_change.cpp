#include "itosynth/time_change.hpp"

#include <algorithm>
#include <cmath>

#include "itosynth/errors.hpp"

namespace itosynth {

double Clock::at(double t) const {
    if (times.empty() || t <= 0.0) return 0.0;
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto i = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return values[i - 1] + w * (values[i] - values[i - 1]);
}

double Clock::inverse(double a) const {
    if (times.empty()) return 0.0;
    if (a >= values.back()) return times.back();
    const auto it = std::upper_bound(values.begin(), values.end(), a);
    const auto i = static_cast<std::size_t>(it - values.begin());
    if (i == 0) return 0.0;
    const double span = values[i] - values[i - 1];
    const double w = span > 0.0 ? (a - values[i - 1]) / span : 1.0;
    return times[i - 1] + w * (times[i] - times[i - 1]);
}

double default_clock_dx(const Excursion& e) { return std::min(1e-3, path_stats(e).max() / 500.0); }

namespace {

// m with its restriction to (0, delta) replaced by rho0 dx, where rho0
// preserves int_(0,delta) y dm.
class RegularisedMeasure {
public:
    RegularisedMeasure(const SpeedMeasure& m, double delta) : m_(m), delta_(delta) {
        rho0_ = m.first_moment(delta) / (0.5 * delta * delta);
        if (!std::isfinite(rho0_)) throw ClockOverflowError("clock: int_0+ x dm(x) is not finite near 0");
    }

    double mass(double a, double b) const {
        double s = 0.0;
        if (a < delta_) s += rho0_ * (std::min(b, delta_) - a);
        if (b > delta_) s += m_.mass(std::max(a, delta_), b);
        return s;
    }

    double density(double x) const { return x < delta_ ? rho0_ : m_.density(x); }

private:
    const SpeedMeasure& m_;
    double delta_;
    double rho0_ = 0.0;
};

}  // namespace

Clock clock(const Excursion& e, const SpeedMeasure& m, double dx) {
    Clock A;
    A.times = e.times;
    A.values.assign(e.size(), 0.0);
    if (e.is_zero()) return A;
    if (!(dx > 0.0)) dx = default_clock_dx(e);
    const RegularisedMeasure reg(m, 0.5 * dx);
    double acc = 0.0;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const double h = e.times[i] - e.times[i - 1];
        const double a = e.values[i - 1];
        const double b = e.values[i];
        double inc;
        if (a == b) {
            inc = 0.5 * h * reg.density(a);
        } else {
            const double lo = std::min(a, b);
            const double hi = std::max(a, b);
            inc = 0.5 * h * reg.mass(lo, hi) / (hi - lo);
        }
        acc += inc;
        if (!std::isfinite(acc))
            throw ClockOverflowError("clock: A_m overflowed on this path (speed measure " + m.describe() + ")");
        A.values[i] = acc;
    }
    return A;
}

Clock clock_from_field(const LocalTimeField& f, const SpeedMeasure& m) {
    const std::size_t K = f.level_count();
    std::vector<double> w(K);
    const double dx = f.dx();
    for (std::size_t k = 0; k < K; ++k) {
        const double a = f.level(k);
        const double mom = k == 0 ? m.first_moment(dx) : m.first_moment(a, a + dx);
        w[k] = mom / (a + 0.5 * dx);
    }
    Clock A;
    A.times.assign(f.times().begin(), f.times().end());
    A.values.resize(f.time_count());
    for (std::size_t i = 0; i < f.time_count(); ++i) {
        const auto row = f.row(i);
        double s = 0.0;
        for (std::size_t k = 0; k < K; ++k) s += row[k] * w[k];
        if (!std::isfinite(s)) throw ClockOverflowError("clock_from_field: A_m overflowed");
        A.values[i] = s;
    }
    return A;
}

Excursion time_change_excursion(const Excursion& e, const Clock& A) {
    if (A.times.size() != e.size()) throw ParameterError("time_change_excursion: clock does not match the path grid");
    Excursion out;
    if (e.is_zero()) return Excursion::zero_path();
    out.times.reserve(e.size());
    out.values.reserve(e.size());
    out.times.push_back(A.values[0]);
    out.values.push_back(e.values[0]);
    for (std::size_t i = 1; i < e.size(); ++i) {
        if (A.values[i] > out.times.back()) {
            out.times.push_back(A.values[i]);
            out.values.push_back(e.values[i]);
        } else if (out.times.size() > 1) {
            out.values.back() = e.values[i];
        }
    }
    if (out.size() == 1) return Excursion::zero_path();
    out.values.back() = e.values.back();
    return out;
}

Excursion time_change_excursion(const Excursion& e, const SpeedMeasure& m, double dx) {
    return time_change_excursion(e, clock(e, m, dx));
}

Excursion shift_at_hit(const Excursion& e, const PathStats& st, double x) {
    if (!st.reaches(x)) throw ParameterError("shift_at_hit: path does not reach the level");
    const double tau = st.hitting_time(x);
    if (tau == 0.0) return e;
    Excursion out;
    out.times.push_back(0.0);
    out.values.push_back(x);
    const auto it = std::upper_bound(e.times.begin(), e.times.end(), tau);
    for (auto i = static_cast<std::size_t>(it - e.times.begin()); i < e.size(); ++i) {
        const double t = e.times[i] - tau;
        if (!(t > out.times.back())) continue;
        out.times.push_back(t);
        out.values.push_back(e.values[i]);
    }
    return out;
}

Excursion shift(const Excursion& e, double x) {
    if (e.is_zero()) return Excursion::zero_path();
    const PathStats st(e);
    if (!(st.max() > x)) return Excursion::zero_path();
    return shift_at_hit(e, st, x);
}

Excursion sample_Qmx(const SpeedMeasure& m, double x, RngStream& rng, const GridPolicy& policy, double dx) {
    if (!(x > 0.0)) throw ParameterError("sample_Qmx: x must be positive");
    const Excursion e = sample_excursion_above(x, policy, rng);
    if (!(dx > 0.0)) dx = default_clock_dx(e);
    return time_change_excursion(shift_at_hit(e, PathStats(e), x), m, dx);
}

Excursion sample_nm_above(const SpeedMeasure& m, double eps, RngStream& rng, const GridPolicy& policy, double dx) {
    if (!(eps > 0.0)) throw ParameterError("sample_nm_above: eps must be positive");
    const Excursion e = sample_excursion_above(eps, policy, rng);
    return time_change_excursion(e, m, dx);
}

}  // namespace itosynth
