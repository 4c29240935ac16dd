#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "itosynth/expression.hpp"
#include "itosynth/measure.hpp"

namespace itosynth {

/// Jumping-in measure j on (0, inf): density plus atoms.
class JumpMeasure {
public:
    JumpMeasure() = default;
    explicit JumpMeasure(Measure mu, std::optional<double> beta = std::nullopt) : mu_(std::move(mu)), beta_(beta) {}

    static JumpMeasure zero() { return JumpMeasure(); }
    /// j^(beta)(dx) = beta x^(-beta-1) dx, so j((x, inf)) = x^-beta.
    static JumpMeasure canonical(double beta);
    static JumpMeasure atoms(std::vector<Atom> atoms);
    static JumpMeasure from_density(RealFunction density, std::vector<Atom> atoms, std::string description,
                                    const DivergencePolicy& policy = {});
    static JumpMeasure from_expression(const Expression& density, std::vector<Atom> atoms = {},
                                       const DivergencePolicy& policy = {});

    const Measure& measure() const noexcept { return mu_; }
    bool is_zero() const noexcept { return mu_.is_zero(); }
    std::optional<double> beta() const noexcept { return beta_; }

    double density(double x) const { return mu_.density(x); }
    double tail(double x) const { return mu_.tail(x); }
    double mass(double a, double b) const { return mu_.mass(a, b); }
    /// int_(0, x] y j(dy).
    double moment(double x) const { return mu_.moment_from_zero(x); }
    double total_moment() const { return mu_.total_moment(); }
    std::string describe() const { return mu_.describe(); }

    /// j_lambda(A) = v * j(lambda A).
    JumpMeasure scaled(double lambda, double v) const;

    /// Inverse tail: the level X >= eps with P(X > y) = tail(y) / tail(eps)
    /// when u is uniform on (0, 1). Requires 0 < tail(eps) < inf.
    double sample_above(double eps, double u) const;

private:
    Measure mu_;
    std::optional<double> beta_;
};

/// Right-continuous non-decreasing J : (0, inf) -> [0, inf] with J(inf) = inf,
/// kept together with its pair (j, c):
///   J(z) = inf{x > 0 : c + int_(0,x] y j(dy) > z}.
class JumpFunction {
public:
    /// J^(beta)(z) = ((1 - beta) / beta * z)^(1 / (1 - beta)), 0 < beta < 1.
    static JumpFunction canonical(double beta);
    /// V_(0,c): 0 on (0, c), inf on [c, inf).
    static JumpFunction step(double c);
    static JumpFunction from_measure(JumpMeasure j, double c);

    double operator()(double z) const;
    /// J^-1(x) = c + int_(0,x] y j(dy) (right-continuous) and its left limit.
    double inverse(double x) const;
    double inverse_left(double x) const;

    double c() const noexcept { return c_; }
    double d() const noexcept { return d_; }
    const JumpMeasure& measure() const noexcept { return j_; }
    bool trivial() const { return c_ == 0.0 && j_.is_zero(); }
    std::string describe() const;

    /// J_lambda(z) = J(lambda z / v) / lambda, i.e. (j_lambda, c v / lambda).
    JumpFunction scaled(double lambda, double v) const;

private:
    JumpFunction(JumpMeasure j, double c, std::function<double(double)> closed, std::string label);

    JumpMeasure j_;
    double c_ = 0.0;
    double d_ = 0.0;
    std::function<double(double)> closed_;
    std::string label_;
};

/// Builds J from (j, c). Throws ModelError when int_(0,1] x j(dx) diverges.
JumpFunction j_c_to_J(const JumpMeasure& j, double c);

struct JumpRecoveryOptions {
    double x_min = 1e-8;
    double x_max = 1e8;
    int knots_per_decade = 2000;
};

struct JumpDecomposition {
    JumpMeasure j;
    double c = 0.0;
};

/// Recovers (j, c) from a jump function given as a callable, with
/// j(dx) = dJ^-1(x) / x evaluated on a log grid; jumps of J^-1 become atoms.
/// Throws ModelError when J is not non-decreasing or J(inf) < inf.
JumpDecomposition J_to_j_c(const std::function<double(double)>& J, const JumpRecoveryOptions& options = {});
JumpDecomposition J_to_j_c(const JumpFunction& J, const JumpRecoveryOptions& options = {});

}  // namespace itosynth
