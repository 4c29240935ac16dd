#include "itosynth/excursion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "itosynth/errors.hpp"

namespace itosynth {

double Excursion::value_at(double t) const {
    if (times.empty() || t < 0.0) return 0.0;
    if (t >= times.back()) return t == times.back() ? values.back() : 0.0;
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    if (i == 0) return values.front();
    const double t0 = times[i - 1], t1 = times[i];
    const double w = (t - t0) / (t1 - t0);
    return values[i - 1] + w * (values[i] - values[i - 1]);
}

void Excursion::validate() const {
    if (times.size() != values.size() || times.empty())
        throw ModelError("excursion: times/values size mismatch or empty");
    if (times.front() != 0.0) throw ModelError("excursion: grid must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ModelError("excursion: grid not strictly increasing at " + std::to_string(i));
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw ModelError("excursion: negative or non-finite value");
    if (values.back() != 0.0) throw ModelError("excursion: last value must be 0");
}

PathStats::PathStats(const Excursion& e)
    : times_(e.times), values_(e.values), lifetime_(e.lifetime()) {
    running_max_.resize(values_.size());
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        m = std::max(m, values_[i]);
        running_max_[i] = m;
    }
    max_ = m;
}

double PathStats::hitting_time(double a) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (values_.empty()) return inf;
    const double x0 = values_.front();
    if (a == x0) return 0.0;
    if (a > x0) {
        if (a > max_) return inf;
        const auto it = std::lower_bound(running_max_.begin(), running_max_.end(), a);
        const std::size_t i = static_cast<std::size_t>(it - running_max_.begin());
        if (values_[i] == a) return times_[i];
        const double v0 = values_[i - 1], v1 = values_[i];
        return times_[i - 1] + (times_[i] - times_[i - 1]) * (a - v0) / (v1 - v0);
    }
    // Downward first passage below the start value.
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (values_[i] <= a) {
            const double v0 = values_[i - 1], v1 = values_[i];
            return times_[i - 1] + (times_[i] - times_[i - 1]) * (v0 - a) / (v0 - v1);
        }
    }
    return inf;
}

PathStats path_stats(const Excursion& e) { return PathStats(e); }

double GridPolicy::floor_step(double scale) const {
    if (rel_step <= 0.0) return dt;
    const double rel = rel_step * scale;
    return std::min(dt, rel * rel);
}

namespace {

// exp(-x) is below 4e-18 past this point; the bridge event is skipped.
constexpr double kNegligibleExponent = 40.0;
constexpr int kMaxRefineDepth = 40;
constexpr int kHitBisections = 26;

class StepBudgetExceeded {};

// Appends an absorbed Brownian motion to (ts, xs), starting from the last point.
//
// Grid values are exact in law for any step size: each step is a Gaussian
// increment, a crossing of 0 inside the step is decided with the bridge
// probability exp(-2ab/h), and the crossing time is located by bisection
// of the bridge.
class AbsorbedWalk {
public:
    AbsorbedWalk(const GridPolicy& policy, double scale, RngStream& rng, std::vector<double>& ts,
                 std::vector<double>& xs, std::size_t& steps)
        : policy_(policy), floor_(policy.floor_step(scale)), rng_(rng), ts_(ts), xs_(xs),
          steps_(steps) {}

    void run() {
        while (!done_) {
            const double t = ts_.back();
            const double a = xs_.back();
            const double h = policy_.step(a, floor_);
            const double b = a + std::sqrt(h) * rng_.normal();
            advance(t, a, h, b);
        }
    }

private:
    void emit(double t, double x) {
        if (++steps_ > policy_.max_steps) throw StepBudgetExceeded{};
        ts_.push_back(t);
        xs_.push_back(x);
    }

    void advance(double t, double a, double h, double b) {
        if (b <= 0.0) {
            locate_hit(t, a, h, b);
            return;
        }
        const double arg = 2.0 * a * b / h;
        if (arg < kNegligibleExponent && rng_.uniform() < std::exp(-arg)) {
            // Conditioned on hitting 0, the bridge a -> b has the pre-hit law of a -> -b.
            locate_hit(t, a, h, -b);
            return;
        }
        emit(t + h, b);
    }

    // Bridge from (t, a > 0) to (t + h, b <= 0): bisect for the first zero.
    void locate_hit(double t, double a, double h, double b) {
        for (int k = 0; k < kHitBisections; ++k) {
            const double hh = 0.5 * h;
            if (!(t + hh > t)) break;
            const double mid = 0.5 * (a + b) + 0.5 * std::sqrt(h) * rng_.normal();
            if (mid <= 0.0) {
                b = mid;
                h = hh;
                continue;
            }
            const double arg = 2.0 * a * mid / hh;
            if (arg < kNegligibleExponent && rng_.uniform() < std::exp(-arg)) {
                b = -mid;
                h = hh;
                continue;
            }
            emit(t + hh, mid);
            t += hh;
            a = mid;
            h = hh;
        }
        double tau = t + h * a / (a - b);
        if (!(tau > ts_.back())) tau = std::nextafter(ts_.back(), std::numeric_limits<double>::infinity());
        emit(tau, 0.0);
        done_ = true;
    }

    const GridPolicy& policy_;
    double floor_;
    RngStream& rng_;
    std::vector<double>& ts_;
    std::vector<double>& xs_;
    std::size_t& steps_;
    bool done_ = false;
};

// Splits Brownian steps of [first, end) whose bridge could still carry the
// path above (1 + tol) * max. Midpoints come from the bridge conditioned not
// to touch 0, so the refined grid has the same law as a finer walk.
class MaxRefiner {
public:
    MaxRefiner(double tol, RngStream& rng) : tol_(tol), rng_(rng) {}

    void run(std::vector<double>& ts, std::vector<double>& xs, std::size_t first) {
        if (tol_ <= 0.0 || xs.size() < first + 2) return;
        top_ = *std::max_element(xs.begin() + static_cast<std::ptrdiff_t>(first), xs.end());
        if (!(top_ > 0.0)) return;
        std::vector<double> nt(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(first) + 1);
        std::vector<double> nx(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(first) + 1);
        out_t_ = &nt;
        out_x_ = &nx;
        for (std::size_t i = first; i + 1 < ts.size(); ++i)
            split(ts[i], xs[i], ts[i + 1] - ts[i], ts[i + 1], xs[i + 1], 0);
        ts.swap(nt);
        xs.swap(nx);
    }

private:
    void split(double t, double a, double h, double t1, double b, int depth) {
        const double c = top_ * (1.0 + tol_);
        const bool interior = a > 0.0 && b > 0.0;
        const double tm = t + 0.5 * h;
        const bool splittable = tm > t && tm < t1;
        if (interior && splittable && depth < kMaxRefineDepth && 2.0 * (c - a) * (c - b) / h < kRefineExponent) {
            const double mid = conditioned_midpoint(a, h, b);
            top_ = std::max(top_, mid);
            split(t, a, 0.5 * h, tm, mid, depth + 1);
            split(tm, mid, 0.5 * h, t1, b, depth + 1);
            return;
        }
        out_t_->push_back(t1);
        out_x_->push_back(b);
    }

    double conditioned_midpoint(double a, double h, double b) {
        const double hh = 0.5 * h;
        for (;;) {
            const double mid = 0.5 * (a + b) + 0.5 * std::sqrt(h) * rng_.normal();
            if (mid <= 0.0) continue;
            const double keep = (1.0 - std::exp(-2.0 * a * mid / hh)) * (1.0 - std::exp(-2.0 * mid * b / hh));
            if (rng_.uniform() < keep) return mid;
        }
    }

    // Refine while the bridge exceeds the threshold with probability above 1e-3.
    static constexpr double kRefineExponent = 6.907755278982137;

    double tol_;
    RngStream& rng_;
    double top_ = 0.0;
    std::vector<double>* out_t_ = nullptr;
    std::vector<double>* out_x_ = nullptr;
};

// Norm of a 3-d Brownian motion from the origin, run to its first passage
// above eps; the crossing is placed at the interpolated time with value eps.
void bessel3_rise(double eps, const GridPolicy& policy, RngStream& rng, std::vector<double>& ts,
                  std::vector<double>& xs, std::size_t& steps) {
    const double floor = policy.floor_step(eps);
    std::array<double, 3> w{0.0, 0.0, 0.0};
    double r = 0.0;
    double t = 0.0;
    ts.push_back(0.0);
    xs.push_back(0.0);
    for (;;) {
        const double h = policy.step(r, floor);
        const double s = std::sqrt(h);
        for (double& c : w) c += s * rng.normal();
        const double r1 = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
        if (++steps > policy.max_steps) throw StepBudgetExceeded{};
        if (r1 >= eps) {
            double tau = t + h * (eps - r) / (r1 - r);
            if (!(tau > t)) tau = std::nextafter(t, std::numeric_limits<double>::infinity());
            ts.push_back(tau);
            xs.push_back(eps);
            return;
        }
        t += h;
        r = r1;
        ts.push_back(t);
        xs.push_back(r);
    }
}

template <class Body>
Excursion with_retries(const GridPolicy& policy, SampleDiagnostics* diag, Body body) {
    Excursion e;
    std::size_t steps = 0;
    for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
        e.times.clear();
        e.values.clear();
        steps = 0;
        try {
            body(e, steps);
            if (diag) {
                diag->retries += attempt;
                diag->steps += steps;
            }
            return e;
        } catch (const StepBudgetExceeded&) {
        }
    }
    throw SamplingError("sampler: path not absorbed within " + std::to_string(policy.max_steps) +
                        " steps after " + std::to_string(policy.max_retries) + " retries");
}

void check_policy(const GridPolicy& policy) {
    if (!(policy.dt > 0.0)) throw ParameterError("grid policy: dt must be positive");
    if (!(policy.rel_step >= 0.0)) throw ParameterError("grid policy: rel_step must be >= 0");
}

}  // namespace

Excursion sample_excursion_above(double eps, const GridPolicy& policy, RngStream& rng,
                                 SampleDiagnostics* diag) {
    if (!(eps > 0.0)) throw ParameterError("sample_excursion_above: eps must be positive");
    check_policy(policy);
    return with_retries(policy, diag, [&](Excursion& e, std::size_t& steps) {
        bessel3_rise(eps, policy, rng, e.times, e.values, steps);
        const std::size_t splice = e.size() - 1;
        AbsorbedWalk(policy, eps, rng, e.times, e.values, steps).run();
        MaxRefiner(policy.max_rel_tol, rng).run(e.times, e.values, splice);
    });
}

Excursion sample_absorbed_bm(double x0, const GridPolicy& policy, RngStream& rng,
                             SampleDiagnostics* diag) {
    if (!(x0 > 0.0)) throw ParameterError("sample_absorbed_bm: x0 must be positive");
    check_policy(policy);
    return with_retries(policy, diag, [&](Excursion& e, std::size_t& steps) {
        e.times.push_back(0.0);
        e.values.push_back(x0);
        AbsorbedWalk(policy, x0, rng, e.times, e.values, steps).run();
        MaxRefiner(policy.max_rel_tol, rng).run(e.times, e.values, 0);
    });
}

}  // namespace itosynth
