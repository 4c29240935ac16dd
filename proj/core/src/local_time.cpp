#include "itosynth/local_time.hpp"

#include <algorithm>
#include <cmath>

#include "itosynth/errors.hpp"

namespace itosynth {

LocalTimeField::LocalTimeField(double dx, std::size_t levels, std::vector<double> times,
                               std::vector<double> values)
    : dx_(dx), levels_(levels), times_(std::move(times)), values_(std::move(values)) {}

double LocalTimeField::at(std::size_t i, double x) const {
    if (x <= 0.0 || levels_ == 0) return 0.0;
    const double top = static_cast<double>(levels_) * dx_;
    if (x >= top) return 0.0;
    const auto r = row(i);
    const double u = x / dx_ - 0.5;  // position in band-midpoint coordinates
    if (u < 0.0) return r[0] * (x / (0.5 * dx_));
    const auto k = static_cast<std::size_t>(u);
    const double w = u - static_cast<double>(k);
    const double right = k + 1 < levels_ ? r[k + 1] : 0.0;
    return r[k] + w * (right - r[k]);
}

double LocalTimeField::integral(std::size_t i, double a, double b) const {
    if (!(b > a)) return 0.0;
    const auto r = row(i);
    double sum = 0.0;
    const double lo = std::max(a, 0.0);
    const double hi = std::min(b, static_cast<double>(levels_) * dx_);
    if (!(hi > lo)) return 0.0;
    auto k0 = static_cast<std::size_t>(std::floor(lo / dx_));
    for (std::size_t k = k0; k < levels_; ++k) {
        const double x0 = static_cast<double>(k) * dx_;
        const double x1 = x0 + dx_;
        if (x0 >= hi) break;
        const double overlap = std::min(x1, hi) - std::max(x0, lo);
        if (overlap > 0.0) sum += r[k] * overlap;
    }
    return sum;
}

namespace {

// Adds the time a linear segment spends in each band to occ.
void deposit_segment(double v0, double v1, double h, double dx, std::vector<double>& occ) {
    const std::size_t levels = occ.size();
    if (v0 == v1) {
        const auto k = static_cast<std::size_t>(std::floor(v0 / dx));
        if (k < levels) occ[k] += h;
        return;
    }
    const double lo = std::min(v0, v1);
    const double hi = std::max(v0, v1);
    const double rate = h / (hi - lo);
    auto k = static_cast<std::size_t>(std::floor(lo / dx));
    for (; k < levels; ++k) {
        const double x0 = static_cast<double>(k) * dx;
        if (x0 >= hi) break;
        const double overlap = std::min(x0 + dx, hi) - std::max(x0, lo);
        if (overlap > 0.0) occ[k] += rate * overlap;
    }
}

}  // namespace

LocalTimeField estimate_local_time(const Excursion& e, double dx, std::size_t max_snapshots) {
    if (!(dx > 0.0)) throw ParameterError("estimate_local_time: dx must be positive");
    const double top = path_stats(e).max();
    if (dx > top) throw DegenerateGridError("estimate_local_time: dx larger than M(e)");
    const auto levels = static_cast<std::size_t>(std::ceil(top / dx)) + 1;
    const std::size_t n = e.size();
    max_snapshots = std::max<std::size_t>(max_snapshots, 2);

    // Snapshot indices: every grid point when affordable, otherwise an even
    // subsample that keeps the first and last points.
    std::vector<std::size_t> snap;
    if (n <= max_snapshots) {
        snap.resize(n);
        for (std::size_t i = 0; i < n; ++i) snap[i] = i;
    } else {
        snap.reserve(max_snapshots);
        for (std::size_t j = 0; j < max_snapshots; ++j)
            snap.push_back((j * (n - 1)) / (max_snapshots - 1));
    }

    std::vector<double> occ(levels, 0.0);
    std::vector<double> times;
    std::vector<double> values;
    times.reserve(snap.size());
    values.reserve(snap.size() * levels);
    const double scale = 1.0 / (2.0 * dx);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) deposit_segment(e.values[i - 1], e.values[i], e.times[i] - e.times[i - 1], dx, occ);
        if (next < snap.size() && snap[next] == i) {
            times.push_back(e.times[i]);
            for (double o : occ) values.push_back(o * scale);
            ++next;
        }
    }
    return LocalTimeField(dx, levels, std::move(times), std::move(values));
}

double occupation_time(const Excursion& e, double a, double b, double t) {
    double sum = 0.0;
    for (std::size_t i = 1; i < e.size(); ++i) {
        double t0 = e.times[i - 1];
        if (t0 >= t) break;
        double t1 = e.times[i];
        double v0 = e.values[i - 1];
        double v1 = e.values[i];
        if (t1 > t) {
            v1 = v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            t1 = t;
        }
        const double h = t1 - t0;
        if (v0 == v1) {
            if (v0 >= a && v0 < b) sum += h;
            continue;
        }
        const double lo = std::min(v0, v1);
        const double hi = std::max(v0, v1);
        const double overlap = std::min(hi, b) - std::max(lo, a);
        if (overlap > 0.0) sum += h * overlap / (hi - lo);
    }
    return sum;
}

double occupation_residual(const Excursion& e, const LocalTimeField& f, double a, double b, double floor) {
    if (!(a >= 0.0) || !(b > a)) throw ParameterError("occupation_residual: need 0 <= a < b");
    const double occ = occupation_time(e, a, b);
    const double from_field = 2.0 * f.integral(f.time_count() - 1, a, b);
    return std::abs(occ - from_field) / std::max(occ, floor);
}

}  // namespace itosynth
