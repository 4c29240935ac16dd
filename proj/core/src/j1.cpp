#include "itosynth/j1.hpp"

#include <algorithm>
#include <cmath>

#include "itosynth/errors.hpp"

namespace itosynth {

CadlagPath::CadlagPath(std::vector<double> times, std::vector<double> values)
    : t_(std::move(times)), x_(std::move(values)) {
    if (t_.empty() || t_.size() != x_.size()) throw ParameterError("CadlagPath: need matching non-empty knots");
    for (std::size_t i = 1; i < t_.size(); ++i) {
        if (t_[i] < t_[i - 1]) throw ParameterError("CadlagPath: knot times must be non-decreasing");
        if (i >= 2 && t_[i] == t_[i - 1] && t_[i - 1] == t_[i - 2])
            throw ParameterError("CadlagPath: at most two knots per time");
    }
}

CadlagPath CadlagPath::step(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.empty() || times.size() != values.size()) throw ParameterError("CadlagPath::step: bad knots");
    std::vector<double> t{times[0]}, x{values[0]};
    for (std::size_t i = 1; i < times.size(); ++i) {
        t.push_back(times[i]);
        x.push_back(values[i - 1]);
        t.push_back(times[i]);
        x.push_back(values[i]);
    }
    return CadlagPath(std::move(t), std::move(x));
}

double CadlagPath::operator()(double t) const {
    if (t <= t_.front()) return t < t_.front() ? x_.front() : x_[t_.size() > 1 && t_[1] == t_[0] ? 1 : 0];
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    if (it == t_.end()) return x_.back();
    const auto i = static_cast<std::size_t>(it - t_.begin());
    const double w = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
    return x_[i - 1] + w * (x_[i] - x_[i - 1]);
}

double CadlagPath::left(double t) const {
    if (t <= t_.front()) return x_.front();
    const auto it = std::lower_bound(t_.begin(), t_.end(), t);
    if (it == t_.end()) return x_.back();
    const auto i = static_cast<std::size_t>(it - t_.begin());
    const double w = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
    return x_[i - 1] + w * (x_[i] - x_[i - 1]);
}

std::vector<CadlagPath::Jump> CadlagPath::jumps(double floor) const {
    std::vector<Jump> out;
    for (std::size_t i = 1; i < t_.size(); ++i) {
        if (t_[i] == t_[i - 1] && std::abs(x_[i] - x_[i - 1]) >= floor) out.push_back({t_[i], x_[i] - x_[i - 1]});
    }
    return out;
}

namespace {

struct Warp {
    std::vector<double> a;  // source knots
    std::vector<double> b;  // images
    double slope = 1.0;     // after the last knot

    double operator()(double t) const {
        if (t >= a.back()) return b.back() + slope * (t - a.back());
        const auto it = std::upper_bound(a.begin(), a.end(), t);
        const auto i = static_cast<std::size_t>(it - a.begin());
        const double w = (t - a[i - 1]) / (a[i] - a[i - 1]);
        return b[i - 1] + w * (b[i] - b[i - 1]);
    }
    double inverse(double s) const {
        if (s >= b.back()) return a.back() + (s - b.back()) / slope;
        const auto it = std::upper_bound(b.begin(), b.end(), s);
        const auto i = static_cast<std::size_t>(it - b.begin());
        const double w = (s - b[i - 1]) / (b[i] - b[i - 1]);
        return a[i - 1] + w * (a[i] - a[i - 1]);
    }
};

}  // namespace

namespace {

using Jumps = std::vector<CadlagPath::Jump>;

Jumps in_range(std::vector<CadlagPath::Jump> js, double T) {
    std::erase_if(js, [T](const CadlagPath::Jump& j) { return j.time <= 0.0 || j.time > T; });
    return js;
}

// Breakpoints of t -> w2(Lambda(t)) - w1(t) on [0, T].
void eval(const CadlagPath& w1, const CadlagPath& w2, double T, const Warp& W, double& time_mod, double& value_mod) {
    std::vector<double> bp{0.0, T};
    for (double t : w1.times())
        if (t > 0.0 && t < T) bp.push_back(t);
    for (double t : W.a)
        if (t > 0.0 && t < T) bp.push_back(t);
    for (double s : w2.times()) {
        const double t = W.inverse(s);
        if (t > 0.0 && t < T) bp.push_back(t);
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    time_mod = 0.0;
    value_mod = 0.0;
    for (double t : bp) {
        const double lt = W(t);
        time_mod = std::max(time_mod, std::abs(lt - t));
        value_mod = std::max(value_mod, std::abs(w2(lt) - w1(t)));
        if (t > 0.0) value_mod = std::max(value_mod, std::abs(w2.left(lt) - w1.left(t)));
    }
}

// Pins at matched jumps; returns the number of pairs that had to be dropped.
std::size_t pin(const Jumps& j1, const Jumps& j2, Warp& L, std::vector<std::pair<double, double>>* matched) {
    L.a.assign(1, 0.0);
    L.b.assign(1, 0.0);
    std::size_t dropped = 0;
    const std::size_t k = std::min(j1.size(), j2.size());
    for (std::size_t i = 0; i < k; ++i) {
        // Keep the warp strictly increasing; a pin that would fold it is dropped.
        if (j1[i].time > L.a.back() && j2[i].time > L.b.back()) {
            L.a.push_back(j1[i].time);
            L.b.push_back(j2[i].time);
            if (matched) matched->emplace_back(j1[i].time, j2[i].time);
        } else {
            ++dropped;
        }
    }
    return dropped;
}

// Tail slope: smallest value modulus, ties broken towards slope 1.
void fit_tail(const CadlagPath& w1, const CadlagPath& w2, double T, Warp& L) {
    if (L.a.back() >= T) return;
    double best_v = 0.0, best_t = 0.0, best_u = 0.0;
    auto value_at = [&](double u) {
        Warp W = L;
        W.slope = std::exp(u);
        double tm = 0.0, vm = 0.0;
        eval(w1, w2, T, W, tm, vm);
        return std::pair{tm, vm};
    };
    auto consider = [&](double u) {
        const auto [tm, vm] = value_at(u);
        if (vm < best_v - 1e-12 || (vm <= best_v + 1e-12 && std::abs(u) < std::abs(best_u))) {
            best_v = vm;
            best_t = tm;
            best_u = u;
        }
    };
    L.slope = 1.0;
    eval(w1, w2, T, L, best_t, best_v);
    constexpr int kGrid = 80;
    const double span = std::log(4.0);
    for (int i = -kGrid; i <= kGrid; ++i) consider(span * i / kGrid);
    const double h = span / kGrid;
    double lo = best_u - h, hi = best_u + h;
    for (int it = 0; it < 40; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (value_at(m1).second <= value_at(m2).second) hi = m2;
        else lo = m1;
    }
    consider(0.5 * (lo + hi));
    L.slope = std::exp(best_u);
}

}  // namespace

J1Report j1_distance(const CadlagPath& w1, const CadlagPath& w2, double T, double jump_floor) {
    if (!(T > 0.0)) throw ParameterError("j1_distance: T must be positive");
    if (!(jump_floor > 0.0)) throw ParameterError("j1_distance: jump_floor must be positive");
    const Jumps j1 = in_range(w1.jumps(jump_floor), T);
    const Jumps j2 = in_range(w2.jumps(jump_floor), T);
    J1Report rep;
    rep.unmatched = std::max(j1.size(), j2.size()) - std::min(j1.size(), j2.size());

    Warp L;
    rep.unmatched += pin(j1, j2, L, &rep.matched);
    fit_tail(w1, w2, T, L);
    eval(w1, w2, T, L, rep.time_modulus, rep.value_modulus);
    rep.distance = std::max(rep.time_modulus, rep.value_modulus);

    // The inverse of the best warp in the other direction is also admissible.
    Warp R;
    pin(j2, j1, R, nullptr);
    fit_tail(w2, w1, T, R);
    Warp Rinv;
    Rinv.a = R.b;
    Rinv.b = R.a;
    Rinv.slope = 1.0 / R.slope;
    double tm = 0.0, vm = 0.0;
    eval(w1, w2, T, Rinv, tm, vm);
    if (std::max(tm, vm) < rep.distance - 1e-12) {
        L = Rinv;
        rep.time_modulus = tm;
        rep.value_modulus = vm;
        rep.distance = std::max(tm, vm);
    }
    for (std::size_t i = 0; i < L.a.size(); ++i) rep.warp.emplace_back(L.a[i], L.b[i]);
    rep.tail_slope = L.slope;
    return rep;
}

}  // namespace itosynth
