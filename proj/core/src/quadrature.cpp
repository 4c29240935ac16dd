#include "itosynth/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "itosynth/errors.hpp"

namespace itosynth {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr unsigned kMaxDepth = 12;

double gk(const RealFunction& f, double a, double b, double rel_tol) {
    double err = 0.0;
    return gauss_kronrod<double, 15>::integrate(f, a, b, kMaxDepth, rel_tol, &err);
}

// Decade k covers [x0 * 10^-(k+1), x0 * 10^-k] towards zero, or
// [x0 * 10^k, x0 * 10^(k+1)] towards infinity.
ImproperIntegral classify(const RealFunction& f, double x0, bool to_zero, const DivergencePolicy& p) {
    const double ln10 = std::log(10.0);
    const double u0 = std::log(x0);
    auto in_u = [&](double u) {
        const double x = std::exp(u);
        return f(x) * x;
    };
    ImproperIntegral out;
    std::vector<double> terms;
    double sum = 0.0;
    for (int k = 0; k < p.max_decades; ++k) {
        const double ua = to_zero ? u0 - (k + 1) * ln10 : u0 + k * ln10;
        const double t = gk(in_u, ua, ua + ln10, 1e-10);
        out.decades = k + 1;
        if (!std::isfinite(t) || t < 0.0) {
            out.finite = false;
            out.value = std::numeric_limits<double>::infinity();
            out.diagnostic = "non-finite or negative decade term at decade " + std::to_string(k);
            return out;
        }
        terms.push_back(t);
        sum += t;
        if (sum > p.threshold) {
            out.finite = false;
            out.value = std::numeric_limits<double>::infinity();
            out.diagnostic = "partial sum exceeded divergence threshold after " + std::to_string(k + 1) + " decades";
            return out;
        }
        if (k + 1 < p.min_decades) continue;
        // Vanishing terms: the integrand has (numerically) compact support.
        bool vanished = true;
        for (int i = 0; i < p.ratio_window; ++i)
            vanished = vanished && terms[terms.size() - 1 - static_cast<std::size_t>(i)] <= 1e-300;
        if (vanished) {
            out.value = sum;
            out.diagnostic = "decade terms vanish";
            return out;
        }
        double worst = 0.0;
        bool geometric = true;
        for (int i = 0; i < p.ratio_window; ++i) {
            const double cur = terms[terms.size() - 1 - static_cast<std::size_t>(i)];
            const double prev = terms[terms.size() - 2 - static_cast<std::size_t>(i)];
            if (!(prev > 0.0)) {
                geometric = cur == 0.0;
                if (!geometric) break;
                continue;
            }
            worst = std::max(worst, cur / prev);
            geometric = geometric && cur / prev < p.ratio;
        }
        if (geometric) {
            out.value = sum + terms.back() * worst / (1.0 - worst);
            out.diagnostic = "geometric decay of decade terms";
            return out;
        }
    }
    // Fit t_k ~ C k^-q over the second half of the decades.
    const std::size_t n = terms.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = n / 2; k < n; ++k) {
        if (!(terms[k] > 0.0)) continue;
        const double lx = std::log(static_cast<double>(k + 1));
        const double ly = std::log(terms[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    out.confident = false;
    if (m < 3) {
        out.value = sum;
        out.diagnostic = "too few positive decade terms to fit; treated as convergent";
        return out;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.exponent = -slope;
    out.confident = std::abs(out.exponent - 1.0) >= p.confidence_margin;
    if (out.exponent <= p.power_exponent) {
        out.finite = false;
        out.value = std::numeric_limits<double>::infinity();
        out.diagnostic = "decade terms decay like k^-" + std::to_string(out.exponent) + " (not summable)";
        return out;
    }
    out.value = sum + terms.back() * static_cast<double>(n) / (out.exponent - 1.0);
    out.diagnostic = "decade terms decay like k^-" + std::to_string(out.exponent) + " (summable)";
    return out;
}

}  // namespace

double integrate(const RealFunction& f, double a, double b, double rel_tol) {
    if (!(b > a)) return 0.0;
    if (a > 0.0 && b / a > 4.0) {
        auto in_u = [&](double u) {
            const double x = std::exp(u);
            return f(x) * x;
        };
        return gk(in_u, std::log(a), std::log(b), rel_tol);
    }
    return gk(f, a, b, rel_tol);
}

ImproperIntegral integrate_to_zero(const RealFunction& f, double x0, const DivergencePolicy& policy) {
    if (!(x0 > 0.0)) throw ParameterError("integrate_to_zero: x0 must be positive");
    return classify(f, x0, true, policy);
}

ImproperIntegral integrate_to_infinity(const RealFunction& f, double x0, const DivergencePolicy& policy) {
    if (!(x0 > 0.0)) throw ParameterError("integrate_to_infinity: x0 must be positive");
    return classify(f, x0, false, policy);
}

}  // namespace itosynth
