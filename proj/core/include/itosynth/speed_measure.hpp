#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "itosynth/expression.hpp"
#include "itosynth/measure.hpp"

namespace itosynth {

/// Slowly varying function k * (log(e + x))^p.
struct SlowVariation {
    double k = 1.0;
    double p = 0.0;

    double operator()(double x) const;
    bool is_constant() const { return p == 0.0; }
};

/// Speed measure dm on (0, inf), with the function m itself. The origin must
/// be an exit boundary: int_(0,1] x dm(x) < inf.
class SpeedMeasure {
public:
    /// m^(alpha): (1-alpha)^-1 x^(1/alpha - 1), log x, or -(alpha-1)^-1 x^(1/alpha - 1).
    static SpeedMeasure canonical(double alpha);

    /// Density m' plus atoms; m is anchored by m(1) = 0.
    static SpeedMeasure from_density(RealFunction density, std::vector<Atom> atoms, std::string description,
                                     const DivergencePolicy& policy = {});
    static SpeedMeasure from_expression(const Expression& density, std::vector<Atom> atoms = {},
                                        const DivergencePolicy& policy = {});

    const Measure& measure() const noexcept { return mu_; }
    double density(double x) const { return mu_.density(x); }
    /// m((a, b]).
    double mass(double a, double b) const { return mu_.mass(a, b); }
    /// int_(a, b] y dm(y).
    double first_moment(double a, double b) const { return mu_.moment(a, b); }
    /// int_(0, x] y dm(y).
    double first_moment(double x) const { return mu_.moment_from_zero(x); }
    double value(double x) const { return value_(x); }

    /// True when m(0+) > -inf (the origin is also an entrance boundary).
    bool entrance() const;
    std::optional<double> alpha() const noexcept { return alpha_; }
    bool confident() const { return mu_.confident(); }
    std::string describe() const;

    /// dm_lambda(x) = dm(lambda x) / (lambda^(1/alpha - 1) K(lambda)).
    SpeedMeasure scaled(double lambda, double alpha, const SlowVariation& K) const;

    /// Throws ModelError when the origin is not exit or m is not strictly
    /// increasing on a probe grid.
    void validate() const;

private:
    SpeedMeasure(Measure mu, std::function<double(double)> value, std::optional<double> alpha, std::string label)
        : mu_(std::move(mu)), value_(std::move(value)), alpha_(alpha), label_(std::move(label)) {}

    Measure mu_;
    std::function<double(double)> value_;
    std::optional<double> alpha_;
    std::string label_;
};

}  // namespace itosynth
