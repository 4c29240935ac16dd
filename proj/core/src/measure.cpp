#include "itosynth/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "itosynth/errors.hpp"

namespace itosynth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_a^b C y^q dy for 0 <= a <= b <= inf.
double power_integral(double c, double q, double a, double b) {
    if (c == 0.0 || !(b > a)) return 0.0;
    const double k = q + 1.0;
    if (a == 0.0) return k > 0.0 && std::isfinite(b) ? c * std::pow(b, k) / k : kInf;
    if (!std::isfinite(b)) return k < 0.0 ? -c * std::pow(a, k) / k : kInf;
    const double l = std::log(b / a);
    if (std::abs(k) * l < 1e-12) return c * std::pow(a, k) * l;
    return c * std::pow(a, k) * std::expm1(k * l) / k;
}

class PowerPart final : public ContinuousPart {
public:
    PowerPart(double c, double p) : c_(c), p_(p) {}

    double density(double x) const override { return c_ * std::pow(x, p_); }
    double mass(double a, double b) const override { return power_integral(c_, p_, a, b); }
    double moment(double a, double b) const override { return power_integral(c_, p_ + 1.0, a, b); }
    double mass_from_zero(double x) const override { return power_integral(c_, p_, 0.0, x); }
    double moment_from_zero(double x) const override { return power_integral(c_, p_ + 1.0, 0.0, x); }
    double tail(double x) const override { return power_integral(c_, p_, x, kInf); }
    double moment_tail(double x) const override { return power_integral(c_, p_ + 1.0, x, kInf); }
    std::string describe() const override {
        std::ostringstream os;
        os << c_ << "*x^" << p_;
        return os.str();
    }

    double coefficient() const { return c_; }
    double exponent() const { return p_; }

private:
    double c_;
    double p_;
};

// Cubic Hermite interpolation on a uniform grid in u = log x.
struct HermiteTable {
    double u0 = 0.0;
    double du = 1.0;
    std::vector<double> value;
    std::vector<double> slope;  // d value / du

    double operator()(double u) const {
        const double pos = (u - u0) / du;
        auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(value.size() - 2)));
        const double s = pos - static_cast<double>(i);
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * value[i] + (s3 - 2 * s2 + s) * du * slope[i] +
               (-2 * s3 + 3 * s2) * value[i + 1] + (s3 - s2) * du * slope[i + 1];
    }
};

class TabulatedDensityPart final : public ContinuousPart {
public:
    TabulatedDensityPart(RealFunction f, std::string description, const DivergencePolicy& policy)
        : f_(std::move(f)), description_(std::move(description)) {
        constexpr int kPerDecade = 128;
        constexpr int kDecades = 12;
        const double du = std::log(10.0) / kPerDecade;
        const std::size_t n = 2 * kDecades * kPerDecade + 1;
        anchor_ = static_cast<std::size_t>(kDecades * kPerDecade);
        lo_ = std::exp(-kDecades * std::log(10.0));
        hi_ = std::exp(kDecades * std::log(10.0));
        for (HermiteTable* t : {&cum_[0], &cum_[1]}) {
            t->u0 = std::log(lo_);
            t->du = du;
            t->value.assign(n, 0.0);
            t->slope.assign(n, 0.0);
        }
        std::vector<double> dens(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::exp(cum_[0].u0 + static_cast<double>(i) * du);
            dens[i] = checked(x);
            cum_[0].slope[i] = dens[i] * x;
            cum_[1].slope[i] = dens[i] * x * x;
        }
        for (int k = 0; k < 2; ++k) {
            auto g = [&, k](double u) {
                const double x = std::exp(u);
                return checked(x) * (k == 0 ? x : x * x);
            };
            // Accumulate outwards from the anchor knot at x = 1.
            for (std::size_t i = anchor_; i + 1 < n; ++i) {
                const double ua = cum_[k].u0 + static_cast<double>(i) * du;
                cum_[k].value[i + 1] = cum_[k].value[i] + integrate(g, ua, ua + du, 1e-12);
            }
            for (std::size_t i = anchor_; i > 0; --i) {
                const double ua = cum_[k].u0 + static_cast<double>(i - 1) * du;
                cum_[k].value[i - 1] = cum_[k].value[i] - integrate(g, ua, ua + du, 1e-12);
            }
        }
        fit_power(dens[0], dens[1], du, lo_c_, lo_p_, lo_);
        fit_power(dens[n - 1], dens[n - 2], -du, hi_c_, hi_p_, hi_);

        auto moment_fn = [this](double x) { return checked(x) * x; };
        auto mass_fn = [this](double x) { return checked(x); };
        const auto low_mass = integrate_to_zero(mass_fn, lo_, policy);
        const auto low_moment = integrate_to_zero(moment_fn, lo_, policy);
        const auto high_mass = integrate_to_infinity(mass_fn, hi_, policy);
        const auto high_moment = integrate_to_infinity(moment_fn, hi_, policy);
        low_[0] = low_mass.value;
        low_[1] = low_moment.value;
        high_[0] = high_mass.value;
        high_[1] = high_moment.value;
        confident_ = low_mass.confident && low_moment.confident && high_mass.confident && high_moment.confident;
    }

    double density(double x) const override { return f_(x); }
    double mass(double a, double b) const override { return cum(0, b) - cum(0, a); }
    double moment(double a, double b) const override { return cum(1, b) - cum(1, a); }
    double mass_from_zero(double x) const override { return from_zero(0, x); }
    double moment_from_zero(double x) const override { return from_zero(1, x); }
    double tail(double x) const override { return to_inf(0, x); }
    double moment_tail(double x) const override { return to_inf(1, x); }
    std::string describe() const override { return description_; }
    bool confident() const override { return confident_; }

private:
    double checked(double x) const {
        const double v = f_(x);
        if (!std::isfinite(v) || v < 0.0) {
            std::ostringstream os;
            os << "density '" << description_ << "' is negative or not finite at x = " << x;
            throw ModelError(os.str());
        }
        return v;
    }

    // Density ~ C x^p through the two outermost knots.
    static void fit_power(double f_end, double f_next, double du, double& c, double& p, double x_end) {
        if (f_end > 0.0 && f_next > 0.0) {
            p = std::log(f_next / f_end) / du;
            c = f_end / std::pow(x_end, p);
        } else {
            c = 0.0;
            p = 0.0;
        }
    }

    // int_1^x y^k f(y) dy.
    double cum(int k, double x) const {
        if (x < lo_) return cum_[k].value.front() - power_integral(lo_c_, lo_p_ + k, x, lo_);
        if (x > hi_) return cum_[k].value.back() + power_integral(hi_c_, hi_p_ + k, hi_, x);
        return cum_[k](std::log(x));
    }

    double from_zero(int k, double x) const {
        if (!std::isfinite(low_[k])) return kInf;
        if (x < lo_) {
            const double whole = power_integral(lo_c_, lo_p_ + k, 0.0, lo_);
            if (std::isfinite(whole) && whole > 0.0) return low_[k] * (power_integral(lo_c_, lo_p_ + k, 0.0, x) / whole);
            return std::max(0.0, low_[k] - power_integral(lo_c_, lo_p_ + k, x, lo_));
        }
        return low_[k] + cum(k, x) - cum_[k].value.front();
    }

    double to_inf(int k, double x) const {
        if (!std::isfinite(high_[k])) return kInf;
        if (x > hi_) return std::max(0.0, high_[k] - power_integral(hi_c_, hi_p_ + k, hi_, x));
        return high_[k] + cum_[k].value.back() - cum(k, x);
    }

    RealFunction f_;
    std::string description_;
    HermiteTable cum_[2];
    std::size_t anchor_ = 0;
    double lo_ = 0.0, hi_ = 0.0;
    double lo_c_ = 0.0, lo_p_ = 0.0, hi_c_ = 0.0, hi_p_ = 0.0;
    double low_[2] = {0.0, 0.0};
    double high_[2] = {0.0, 0.0};
    bool confident_ = true;
};

// Piecewise power-law interpolation of a positive nonincreasing/nondecreasing
// function on increasing knots; zero stays zero.
double loglog(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const std::size_t n = xs.size();
    auto pw = [](double x0, double y0, double x1, double y1, double x) {
        if (y0 <= 0.0 || y1 <= 0.0) {
            return (x - x0) * (y1 - y0) / (x1 - x0) + y0;
        }
        const double s = std::log(y1 / y0) / std::log(x1 / x0);
        return y0 * std::pow(x / x0, s);
    };
    if (x <= xs.front()) return pw(xs[0], ys[0], xs[1], ys[1], x);
    if (x >= xs.back()) return pw(xs[n - 2], ys[n - 2], xs[n - 1], ys[n - 1], x);
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
    return pw(xs[i], ys[i], xs[i + 1], ys[i + 1], x);
}

class TabulatedTailPart final : public ContinuousPart {
public:
    TabulatedTailPart(std::vector<double> knots, std::vector<double> tails, std::vector<double> moments,
                      std::string description)
        : x_(std::move(knots)), t_(std::move(tails)), y_(std::move(moments)), description_(std::move(description)) {
        if (x_.size() < 2 || t_.size() != x_.size() || y_.size() != x_.size())
            throw ModelError("tabulated tail: need matching knot/tail/moment arrays of size >= 2");
        const std::size_t n = x_.size();
        const double s0 = slope(t_, 0);
        zero_mass_inf_ = s0 < -1e-9;
        const double sy = slope(y_, n - 2);
        top_moment_inf_ = sy > 1e-9;
        top_moment_ = y_.back();
    }

    double density(double x) const override {
        const double h = x * 1e-6;
        return std::max(0.0, (tail(x - h) - tail(x + h)) / (2 * h));
    }
    double mass(double a, double b) const override { return std::max(0.0, tail(a) - tail(b)); }
    double moment(double a, double b) const override { return std::max(0.0, ymom(b) - ymom(a)); }
    double mass_from_zero(double x) const override {
        if (zero_mass_inf_) return kInf;
        return std::max(0.0, t_.front() - tail(x));
    }
    double moment_from_zero(double x) const override { return ymom(x); }
    double tail(double x) const override { return std::max(0.0, loglog(x_, t_, x)); }
    double moment_tail(double x) const override {
        if (top_moment_inf_) return kInf;
        return std::max(0.0, top_moment_ - ymom(x));
    }
    std::string describe() const override { return description_; }

private:
    double slope(const std::vector<double>& v, std::size_t i) const {
        if (v[i] <= 0.0 || v[i + 1] <= 0.0) return 0.0;
        return std::log(v[i + 1] / v[i]) / std::log(x_[i + 1] / x_[i]);
    }
    double ymom(double x) const {
        if (x >= x_.back() && !top_moment_inf_) return top_moment_;
        return std::max(0.0, loglog(x_, y_, x));
    }

    std::vector<double> x_, t_, y_;
    std::string description_;
    bool zero_mass_inf_ = false;
    bool top_moment_inf_ = false;
    double top_moment_ = 0.0;
};

class ScaledPart final : public ContinuousPart {
public:
    ScaledPart(std::shared_ptr<const ContinuousPart> base, double lambda, double factor)
        : base_(std::move(base)), l_(lambda), f_(factor) {}

    double density(double x) const override { return f_ * l_ * base_->density(l_ * x); }
    double mass(double a, double b) const override { return f_ * base_->mass(l_ * a, l_ * b); }
    double moment(double a, double b) const override { return f_ / l_ * base_->moment(l_ * a, l_ * b); }
    double mass_from_zero(double x) const override { return f_ * base_->mass_from_zero(l_ * x); }
    double moment_from_zero(double x) const override { return f_ / l_ * base_->moment_from_zero(l_ * x); }
    double tail(double x) const override { return f_ * base_->tail(l_ * x); }
    double moment_tail(double x) const override { return f_ / l_ * base_->moment_tail(l_ * x); }
    std::string describe() const override {
        std::ostringstream os;
        os << f_ << " * [" << base_->describe() << "](" << l_ << " x)";
        return os.str();
    }
    bool confident() const override { return base_->confident(); }

private:
    std::shared_ptr<const ContinuousPart> base_;
    double l_;
    double f_;
};

}  // namespace

std::shared_ptr<const ContinuousPart> power_density(double coefficient, double exponent) {
    if (!(coefficient >= 0.0) || !std::isfinite(exponent)) throw ParameterError("power_density: bad parameters");
    return std::make_shared<PowerPart>(coefficient, exponent);
}

std::shared_ptr<const ContinuousPart> tabulated_density(RealFunction density, std::string description,
                                                        const DivergencePolicy& policy) {
    return std::make_shared<TabulatedDensityPart>(std::move(density), std::move(description), policy);
}

std::shared_ptr<const ContinuousPart> tabulated_tail(std::vector<double> knots, std::vector<double> tails,
                                                     std::vector<double> moments, std::string description) {
    return std::make_shared<TabulatedTailPart>(std::move(knots), std::move(tails), std::move(moments),
                                               std::move(description));
}

Measure::Measure(std::shared_ptr<const ContinuousPart> continuous, std::vector<Atom> atoms)
    : continuous_(std::move(continuous)), atoms_(std::move(atoms)) {
    for (const Atom& a : atoms_) {
        if (!(a.location > 0.0) || !std::isfinite(a.location) || !(a.mass >= 0.0) || !std::isfinite(a.mass))
            throw ModelError("measure: atoms need a positive finite location and a nonnegative finite mass");
    }
    std::erase_if(atoms_, [](const Atom& a) { return a.mass == 0.0; });
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
}

double Measure::density(double x) const { return continuous_ ? continuous_->density(x) : 0.0; }

double Measure::mass(double a, double b) const {
    if (!(b > a)) return 0.0;
    double s = continuous_ ? continuous_->mass(a, b) : 0.0;
    for (const Atom& at : atoms_)
        if (at.location > a && at.location <= b) s += at.mass;
    return s;
}

double Measure::moment(double a, double b) const {
    if (!(b > a)) return 0.0;
    double s = continuous_ ? continuous_->moment(a, b) : 0.0;
    for (const Atom& at : atoms_)
        if (at.location > a && at.location <= b) s += at.location * at.mass;
    return s;
}

double Measure::mass_from_zero(double x) const {
    double s = continuous_ ? continuous_->mass_from_zero(x) : 0.0;
    for (const Atom& at : atoms_)
        if (at.location <= x) s += at.mass;
    return s;
}

double Measure::moment_from_zero(double x) const {
    double s = continuous_ ? continuous_->moment_from_zero(x) : 0.0;
    for (const Atom& at : atoms_)
        if (at.location <= x) s += at.location * at.mass;
    return s;
}

double Measure::tail(double x) const {
    double s = continuous_ ? continuous_->tail(x) : 0.0;
    for (const Atom& at : atoms_)
        if (at.location > x) s += at.mass;
    return s;
}

double Measure::moment_tail(double x) const {
    double s = continuous_ ? continuous_->moment_tail(x) : 0.0;
    for (const Atom& at : atoms_)
        if (at.location > x) s += at.location * at.mass;
    return s;
}

double Measure::total_moment() const { return moment_from_zero(1.0) + moment_tail(1.0); }

std::string Measure::describe() const {
    std::ostringstream os;
    os << (continuous_ ? continuous_->describe() : std::string("0"));
    for (const Atom& a : atoms_) os << " + " << a.mass << "*delta(" << a.location << ")";
    return os.str();
}

Measure Measure::scaled(double lambda, double factor) const {
    if (!(lambda > 0.0) || !(factor > 0.0)) throw ParameterError("Measure::scaled: lambda and factor must be positive");
    std::shared_ptr<const ContinuousPart> part;
    if (auto* p = dynamic_cast<const PowerPart*>(continuous_.get())) {
        part = power_density(factor * p->coefficient() * std::pow(lambda, p->exponent() + 1.0), p->exponent());
    } else if (continuous_) {
        part = std::make_shared<ScaledPart>(continuous_, lambda, factor);
    }
    std::vector<Atom> atoms;
    for (const Atom& a : atoms_) atoms.push_back({a.location / lambda, factor * a.mass});
    return Measure(std::move(part), std::move(atoms));
}

}  // namespace itosynth
