#pragma once

#include <functional>
#include <string>

namespace itosynth {

using RealFunction = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on [a, b]. Intervals with b / a > 4 (a > 0) are
/// integrated in log x, which keeps power laws well resolved.
double integrate(const RealFunction& f, double a, double b, double rel_tol = 1e-11);

/// Policy for deciding whether an improper integral of a nonnegative function
/// converges. The integral is split into decades; the sequence of decade
/// contributions t_k decides the verdict.
struct DivergencePolicy {
    int min_decades = 24;
    int max_decades = 120;
    /// t_k / t_{k-1} below this over the last ratio_window decades: converges.
    double ratio = 0.9;
    int ratio_window = 4;
    /// Partial sums above this are declared divergent.
    double threshold = 1e8;
    /// t_k ~ k^-q with q <= power_exponent is declared divergent.
    double power_exponent = 1.05;
    /// Power-law verdicts with |q - 1| below this are flagged low-confidence.
    double confidence_margin = 0.5;
};

struct ImproperIntegral {
    double value = 0.0;  // partial sum plus tail estimate; +inf when divergent
    bool finite = true;
    /// False when the verdict rests on the power-law fit of the decade terms.
    bool confident = true;
    int decades = 0;
    double exponent = 0.0;  // fitted q of t_k ~ k^-q, when used
    std::string diagnostic;
};

/// int_0^x0 f(x) dx for f >= 0.
ImproperIntegral integrate_to_zero(const RealFunction& f, double x0, const DivergencePolicy& policy = {});

/// int_x0^inf f(x) dx for f >= 0.
ImproperIntegral integrate_to_infinity(const RealFunction& f, double x0, const DivergencePolicy& policy = {});

}  // namespace itosynth
