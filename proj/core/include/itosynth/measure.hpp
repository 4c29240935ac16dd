#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "itosynth/quadrature.hpp"

namespace itosynth {

struct Atom {
    double location;
    double mass;
};

/// Absolutely continuous part of a Radon measure on (0, inf). Integrals over
/// unbounded ranges may be +inf.
class ContinuousPart {
public:
    virtual ~ContinuousPart() = default;

    virtual double density(double x) const = 0;
    /// mu((a, b]) and int_(a,b] y mu(dy), 0 < a <= b < inf.
    virtual double mass(double a, double b) const = 0;
    virtual double moment(double a, double b) const = 0;
    /// mu((0, x]) and int_(0,x] y mu(dy).
    virtual double mass_from_zero(double x) const = 0;
    virtual double moment_from_zero(double x) const = 0;
    /// mu((x, inf)) and int_(x,inf) y mu(dy).
    virtual double tail(double x) const = 0;
    virtual double moment_tail(double x) const = 0;

    virtual std::string describe() const = 0;
    /// False when a finiteness verdict near 0 or inf came from the low
    /// confidence branch of the divergence policy.
    virtual bool confident() const { return true; }
};

/// Density C x^p, integrated in closed form.
std::shared_ptr<const ContinuousPart> power_density(double coefficient, double exponent);

/// Arbitrary nonnegative density, tabulated on a log grid over
/// [1e-12, 1e12] (cubic Hermite in log x) with power-law extrapolation
/// outside; the behaviour at 0 and inf is classified with DivergencePolicy.
std::shared_ptr<const ContinuousPart> tabulated_density(RealFunction density, std::string description,
                                                        const DivergencePolicy& policy = {});

/// Density-free part given by its tail x -> mu((x, inf)) and moment function
/// x -> int_(0,x] y mu(dy) on a log grid (both interpolated log-log).
std::shared_ptr<const ContinuousPart> tabulated_tail(std::vector<double> knots, std::vector<double> tails,
                                                     std::vector<double> moments, std::string description);

/// Measure with a continuous part (possibly absent) and finitely many atoms.
class Measure {
public:
    Measure() = default;
    Measure(std::shared_ptr<const ContinuousPart> continuous, std::vector<Atom> atoms);

    bool is_zero() const noexcept { return !continuous_ && atoms_.empty(); }
    const std::shared_ptr<const ContinuousPart>& continuous() const noexcept { return continuous_; }
    std::span<const Atom> atoms() const noexcept { return atoms_; }

    double density(double x) const;
    double mass(double a, double b) const;
    double moment(double a, double b) const;
    double mass_from_zero(double x) const;
    double moment_from_zero(double x) const;
    double tail(double x) const;
    double moment_tail(double x) const;
    double total_moment() const;
    bool confident() const { return !continuous_ || continuous_->confident(); }
    std::string describe() const;

    /// The measure A -> factor * mu(lambda * A).
    Measure scaled(double lambda, double factor) const;

private:
    std::shared_ptr<const ContinuousPart> continuous_;
    std::vector<Atom> atoms_;
};

}  // namespace itosynth
