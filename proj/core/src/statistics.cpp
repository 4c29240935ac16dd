#include "itosynth/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "itosynth/errors.hpp"

namespace itosynth {

double kolmogorov_pvalue(double d, double n_eff) {
    if (!(n_eff > 0.0)) return 1.0;
    const double sn = std::sqrt(n_eff);
    const double lam = (sn + 0.12 + 0.11 / sn) * d;
    if (lam < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lam * lam);
        sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
    if (x.empty()) throw ParameterError("ks_one_sample: empty sample");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < x.size()) {
        std::size_t j = i;
        while (j < x.size() && x[j] == x[i]) ++j;
        const double f = cdf(x[i]);
        d = std::max({d, std::abs(static_cast<double>(j) / n - f), std::abs(static_cast<double>(i) / n - f)});
        i = j;
    }
    return {d, kolmogorov_pvalue(d, n), n};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ParameterError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (j >= b.size()) v = a[i];
        else if (i >= a.size()) v = b[j];
        else v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    return {d, kolmogorov_pvalue(d, ne), ne};
}

KsResult ks_extrapolated(std::span<const double> fine, std::span<const double> coarse, double eps_fine,
                         double eps_coarse, const std::function<double(double)>& cdf) {
    if (fine.empty() || fine.size() != coarse.size())
        throw ParameterError("ks_extrapolated: need paired samples of equal size");
    if (!(eps_coarse > eps_fine) || !(eps_fine > 0.0))
        throw ParameterError("ks_extrapolated: need 0 < eps_fine < eps_coarse");
    const double w = eps_fine / (eps_coarse - eps_fine);
    std::vector<double> a(fine.begin(), fine.end());
    std::vector<double> b(coarse.begin(), coarse.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double n = static_cast<double>(a.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (j >= b.size()) v = a[i];
        else if (i >= a.size()) v = b[j];
        else v = std::min(a[i], b[j]);
        const double before = ((1.0 + w) * static_cast<double>(i) - w * static_cast<double>(j)) / n;
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        const double after = ((1.0 + w) * static_cast<double>(i) - w * static_cast<double>(j)) / n;
        const double f = cdf(v);
        d = std::max({d, std::abs(after - f), std::abs(before - f)});
    }
    // Variance inflation of (1 + w) 1{X_fine <= q} - w 1{X_coarse <= q} relative
    // to a single indicator, worst case over interior quantiles.
    double inflation = 1.0;
    for (int q = 1; q <= 9; ++q) {
        const double level = a[static_cast<std::size_t>(q * (a.size() - 1) / 10)];
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t k = 0; k < fine.size(); ++k) {
            const double y = (1.0 + w) * (fine[k] <= level ? 1.0 : 0.0) - w * (coarse[k] <= level ? 1.0 : 0.0);
            s1 += y;
            s2 += y * y;
        }
        const double mean = s1 / n;
        const double var = s2 / n - mean * mean;
        const double p = std::clamp(mean, 1.0 / n, 1.0 - 1.0 / n);
        inflation = std::max(inflation, var / (p * (1.0 - p)));
    }
    const double n_eff = n / inflation;
    return {d, kolmogorov_pvalue(d, n_eff), n_eff};
}

double extrapolate_to_zero(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw ParameterError("extrapolate_to_zero: bad input");
    if (x.size() == 1) return y[0];
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return (sy - slope * sx) / n;
}

StableIndex stable_index(std::vector<double> jumps, double r2_threshold) {
    std::erase_if(jumps, [](double v) { return !(v > 0.0) || !std::isfinite(v); });
    if (jumps.size() < 1000) throw ParameterError("stable_index: need at least 1000 positive jumps");
    std::sort(jumps.begin(), jumps.end(), std::greater<>());
    const double n = static_cast<double>(jumps.size());
    // The k-th largest value has empirical survival k / n; use k in [10, 1000].
    const std::size_t k_lo = 10;
    const std::size_t k_hi = std::min<std::size_t>(1000, jumps.size());
    std::vector<double> lx, ly;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        lx.push_back(std::log(jumps[k - 1]));
        ly.push_back(std::log(static_cast<double>(k) / n));
    }
    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw ParameterError("stable_index: no spread in the tail");
    const double slope = sxy / sxx;
    StableIndex out;
    out.index = -slope;
    out.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 0.0;
    out.points = lx.size();
    // Survival ranks are strongly dependent; the regression residual error is
    // replaced by the Hill-type asymptotic error index / sqrt(k_hi).
    out.std_error = out.index / std::sqrt(static_cast<double>(k_hi));
    out.power_law = out.r2 >= r2_threshold;
    return out;
}

double binomial_sigma(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

}  // namespace itosynth
