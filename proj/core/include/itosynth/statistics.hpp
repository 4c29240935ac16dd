#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace itosynth {

struct KsResult {
    double statistic = 0.0;
    double pvalue = 1.0;
    /// Effective sample size used for the p-value.
    double n_eff = 0.0;
};

/// Asymptotic Kolmogorov p-value with Stephens' small-sample correction,
/// P(sqrt(n) D > (sqrt(n) + 0.12 + 0.11 / sqrt(n)) d).
double kolmogorov_pvalue(double d, double n_eff);

/// One-sample KS against a continuous cdf; ties are handled exactly.
KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Two-sample KS; n_eff = n m / (n + m).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample KS for the eps-extrapolated cdf
///   F_0 = (1 + w) F_fine - w F_coarse,   w = eps_fine / (eps_coarse - eps_fine),
/// built from paired samples of the same replicates. The p-value uses n
/// divided by the empirical variance inflation of the combined indicator.
KsResult ks_extrapolated(std::span<const double> fine, std::span<const double> coarse, double eps_fine,
                         double eps_coarse, const std::function<double(double)>& cdf);

/// Linear least-squares fit y ~ a + b x, value at x = 0.
double extrapolate_to_zero(std::span<const double> x, std::span<const double> y);

struct StableIndex {
    double index = 0.0;
    double std_error = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
    bool power_law = false;
};

/// Tail index from the log-log regression of the empirical survival over its
/// top two decades (survival in [10 / n, 1000 / n]). power_law is false when
/// R^2 < r2_threshold. Throws ParameterError below 1000 jumps.
StableIndex stable_index(std::vector<double> jumps, double r2_threshold = 0.99);

/// Binomial standard deviation sqrt(p (1 - p) / n).
double binomial_sigma(double p, std::size_t n);

}  // namespace itosynth
