#include "itosynth/jump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "itosynth/errors.hpp"

namespace itosynth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest x in (lo, hi] with pred(x), given !pred(lo) and pred(hi); the
// search runs geometrically first and ends on adjacent doubles.
template <class Pred>
double bisect_first(double lo, double hi, Pred pred) {
    while (lo > 0.0 && hi / lo > 1.0 + 1e-9) {
        const double mid = lo * std::sqrt(hi / lo);
        if (!(mid > lo) || !(mid < hi)) break;
        (pred(mid) ? hi : lo) = mid;
    }
    for (;;) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo) || !(mid < hi)) return hi;
        (pred(mid) ? hi : lo) = mid;
    }
}

}  // namespace

JumpMeasure JumpMeasure::canonical(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("canonical j: beta must be positive");
    return JumpMeasure(Measure(power_density(beta, -beta - 1.0), {}), beta);
}

JumpMeasure JumpMeasure::atoms(std::vector<Atom> atoms) { return JumpMeasure(Measure(nullptr, std::move(atoms))); }

JumpMeasure JumpMeasure::from_density(RealFunction density, std::vector<Atom> atoms, std::string description,
                                      const DivergencePolicy& policy) {
    return JumpMeasure(Measure(tabulated_density(std::move(density), std::move(description), policy), std::move(atoms)));
}

JumpMeasure JumpMeasure::from_expression(const Expression& density, std::vector<Atom> atoms,
                                         const DivergencePolicy& policy) {
    return from_density(density, std::move(atoms), density.text(), policy);
}

JumpMeasure JumpMeasure::scaled(double lambda, double v) const {
    if (is_zero()) return *this;
    return JumpMeasure(mu_.scaled(lambda, v), beta_);
}

double JumpMeasure::sample_above(double eps, double u) const {
    const double total = tail(eps);
    if (!(total > 0.0) || !std::isfinite(total)) throw SamplingError("jump measure: tail above eps is zero or infinite");
    const double target = u * total;
    if (beta_ && mu_.atoms().empty() && mu_.continuous()) {
        // Pure power law c x^-beta: closed-form inverse.
        const double c = mu_.tail(1.0);
        return std::max(eps, std::pow(target / c, -1.0 / *beta_));
    }
    double hi = eps;
    while (!(tail(hi) < target)) {
        hi *= 2.0;
        if (!std::isfinite(hi)) throw SamplingError("jump measure: inverse tail search diverged");
    }
    if (hi == eps) return eps;
    return bisect_first(eps, hi, [&](double x) { return tail(x) < target; });
}

JumpFunction::JumpFunction(JumpMeasure j, double c, std::function<double(double)> closed, std::string label)
    : j_(std::move(j)), c_(c), closed_(std::move(closed)), label_(std::move(label)) {
    d_ = c_ + j_.total_moment();
}

JumpFunction JumpFunction::canonical(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("canonical J: beta must lie in (0, 1)");
    auto closed = [beta](double z) { return z <= 0.0 ? 0.0 : std::pow((1.0 - beta) / beta * z, 1.0 / (1.0 - beta)); };
    std::ostringstream os;
    os << "J^(" << beta << ")";
    return JumpFunction(JumpMeasure::canonical(beta), 0.0, closed, os.str());
}

JumpFunction JumpFunction::step(double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("V_(0,c): c must be finite and nonnegative");
    std::ostringstream os;
    os << "V_(0," << c << ")";
    return JumpFunction(JumpMeasure::zero(), c, nullptr, os.str());
}

JumpFunction JumpFunction::from_measure(JumpMeasure j, double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("j_c_to_J: c must be finite and nonnegative");
    if (!std::isfinite(j.moment(1.0)))
        throw ModelError("j_c_to_J: int_(0,1] x j(dx) diverges for j = " + j.describe());
    if (j.is_zero()) return step(c);
    if (c == 0.0 && j.beta() && *j.beta() < 1.0 && j.measure().atoms().empty() && j.tail(1.0) == 1.0)
        return canonical(*j.beta());
    return JumpFunction(std::move(j), c, nullptr, "");
}

double JumpFunction::inverse(double x) const {
    if (!(x > 0.0)) return c_;
    return c_ + j_.moment(x);
}

double JumpFunction::inverse_left(double x) const {
    double y = inverse(x);
    for (const Atom& a : j_.measure().atoms())
        if (a.location == x) y -= a.location * a.mass;
    return y;
}

double JumpFunction::operator()(double z) const {
    if (closed_) return closed_(z);
    if (z < c_) return 0.0;
    if (z >= d_) return kInf;
    // inf{x > 0 : Y(x) > z}
    auto above = [&](double x) { return inverse(x) > z; };
    double hi = 1.0;
    while (!above(hi)) {
        hi *= 2.0;
        if (!std::isfinite(hi)) return kInf;
    }
    double lo = hi;
    while (above(lo)) {
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;
    }
    if (hi > 2.0 * lo) hi = 2.0 * lo;
    return bisect_first(lo, hi, above);
}

std::string JumpFunction::describe() const {
    if (!label_.empty()) return label_;
    std::ostringstream os;
    os << "J from (j = " << j_.describe() << ", c = " << c_ << ")";
    return os.str();
}

JumpFunction JumpFunction::scaled(double lambda, double v) const {
    if (!(lambda > 0.0) || !(v > 0.0)) throw ParameterError("JumpFunction::scaled: lambda and v must be positive");
    std::function<double(double)> closed;
    if (closed_) {
        auto base = closed_;
        closed = [base, lambda, v](double z) { return base(lambda * z / v) / lambda; };
    }
    std::ostringstream os;
    os << describe() << " scaled by lambda=" << lambda << ", v=" << v;
    return JumpFunction(j_.scaled(lambda, v), c_ * v / lambda, std::move(closed), os.str());
}

JumpFunction j_c_to_J(const JumpMeasure& j, double c) { return JumpFunction::from_measure(j, c); }

JumpDecomposition J_to_j_c(const std::function<double(double)>& J, const JumpRecoveryOptions& opt) {
    if (!(opt.x_min > 0.0) || !(opt.x_max > opt.x_min) || opt.knots_per_decade < 2)
        throw ParameterError("J_to_j_c: bad recovery grid");
    // Monotonicity on a probe grid in z.
    double prev = -kInf;
    for (int i = -80; i <= 80; ++i) {
        const double z = std::pow(10.0, i / 8.0);
        const double v = J(z);
        if (std::isnan(v) || v < 0.0) throw ModelError("J_to_j_c: J is negative or NaN at z = " + std::to_string(z));
        if (v < prev) throw ModelError("J_to_j_c: J is not non-decreasing near z = " + std::to_string(z));
        prev = v;
    }
    if (!(J(1e300) > opt.x_max)) throw ModelError("J_to_j_c: J does not increase to infinity");

    // c(J) = inf{z : J(z) > 0}.
    double c = 0.0;
    if (!(J(1e-300) > 0.0)) {
        double hi = 1e-300;
        while (!(J(hi) > 0.0)) hi *= 2.0;
        c = hi <= 2e-300 ? 0.0 : bisect_first(hi * 0.5, hi, [&](double z) { return J(z) > 0.0; });
        // J(z) underflows before z does; such thresholds are not resolved.
        if (c < 1e-100) c = 0.0;
    }

    // Y(x) = inf{z : J(z) > x}.
    auto Y = [&](double x) {
        if (J(c) > x && c > 0.0) return c;
        double hi = std::max(1.0, 2.0 * c);
        while (!(J(hi) > x)) {
            hi *= 2.0;
            if (!std::isfinite(hi)) return kInf;
        }
        double lo = c;
        if (lo == 0.0) {
            lo = hi;
            while (J(lo) > x) {
                lo *= 0.5;
                if (lo < 1e-300) return 0.0;
            }
        }
        return bisect_first(lo, hi, [&](double z) { return J(z) > x; });
    };

    const double ln10 = std::log(10.0);
    const double u0 = std::log(opt.x_min);
    const double du = ln10 / opt.knots_per_decade;
    const auto n = static_cast<std::size_t>(std::ceil((std::log(opt.x_max) - u0) / du)) + 1;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::exp(u0 + static_cast<double>(i) * du);
        ys[i] = Y(xs[i]);
        if (!std::isfinite(ys[i])) throw ModelError("J_to_j_c: J^-1 is infinite on the grid");
    }

    // Atoms: jumps of Y stand out against both neighbouring increments.
    std::vector<double> dy(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) dy[i] = ys[i + 1] - ys[i];
    std::vector<Atom> atoms;
    std::vector<double> cont(n - 1);
    const double scale = std::max(1.0, ys.back());
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cont[i] = dy[i];
        const double left = i > 0 ? dy[i - 1] : 0.0;
        const double right = i + 2 < n ? dy[i + 1] : 0.0;
        if (!(dy[i] > 1e-12 * scale) || !(dy[i] > 50.0 * std::max(left, right))) continue;
        double lo = xs[i], hi = xs[i + 1];
        double ylo = ys[i], yhi = ys[i + 1];
        for (;;) {
            const double mid = lo + 0.5 * (hi - lo);
            if (!(mid > lo) || !(mid < hi)) break;
            const double ym = Y(mid);
            if (ym - ylo >= yhi - ym) {
                hi = mid;
                yhi = ym;
            } else {
                lo = mid;
                ylo = ym;
            }
        }
        const double jump = yhi - ylo;
        if (jump > 1e-12 * scale) {
            atoms.push_back({hi, jump / hi});
            cont[i] -= jump;
        }
    }

    // Continuous part: j_c((x_i, inf)) by summing dY_c / y (log-midpoint rule)
    // from the top, with a power-law tail above x_max.
    std::vector<double> tails(n, 0.0), moments(n, 0.0);
    double atom_moment = 0.0;
    std::size_t next_atom = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (; next_atom < atoms.size() && atoms[next_atom].location <= xs[i]; ++next_atom)
            atom_moment += atoms[next_atom].location * atoms[next_atom].mass;
        moments[i] = std::max(0.0, ys[i] - c - atom_moment);
    }
    double top = 0.0;
    if (n >= 3 && cont[n - 2] > 1e-14 * scale && moments[n - 1] > 0.0 && moments[n - 2] > 0.0) {
        const double q = std::log(moments[n - 1] / moments[n - 2]) / du;
        if (q >= 1.0) throw ModelError("J_to_j_c: int y j(dy) grows too fast at the top of the grid");
        top = q * moments[n - 1] / (xs[n - 1] * (1.0 - q));
    }
    tails[n - 1] = top;
    bool any = top > 0.0;
    for (std::size_t i = n - 1; i > 0; --i) {
        const double inc = std::max(0.0, cont[i - 1]);
        any = any || inc > 1e-14 * scale;
        tails[i - 1] = tails[i] + inc / std::sqrt(xs[i - 1] * xs[i]);
    }
    JumpDecomposition out;
    out.c = c;
    if (any) {
        out.j = JumpMeasure(Measure(tabulated_tail(xs, tails, moments, "recovered from J"), std::move(atoms)));
    } else {
        out.j = JumpMeasure::atoms(std::move(atoms));
    }
    return out;
}

JumpDecomposition J_to_j_c(const JumpFunction& J, const JumpRecoveryOptions& options) {
    return J_to_j_c([&](double z) { return J(z); }, options);
}

}  // namespace itosynth
