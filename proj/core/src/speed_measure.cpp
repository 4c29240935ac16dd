#include "itosynth/speed_measure.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "itosynth/errors.hpp"

namespace itosynth {

double SlowVariation::operator()(double x) const {
    if (p == 0.0) return k;
    return k * std::pow(std::log(std::numbers::e + x), p);
}

SpeedMeasure SpeedMeasure::canonical(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("canonical_m: alpha must be positive");
    const double q = 1.0 / alpha - 1.0;
    std::function<double(double)> value;
    if (alpha < 1.0) {
        value = [q, alpha](double x) { return std::pow(x, q) / (1.0 - alpha); };
    } else if (alpha == 1.0) {
        value = [](double x) { return std::log(x); };
    } else {
        value = [q, alpha](double x) { return -std::pow(x, q) / (alpha - 1.0); };
    }
    std::ostringstream os;
    os << "m^(" << alpha << ")";
    return SpeedMeasure(Measure(power_density(1.0 / alpha, 1.0 / alpha - 2.0), {}), std::move(value), alpha,
                        os.str());
}

SpeedMeasure SpeedMeasure::from_density(RealFunction density, std::vector<Atom> atoms, std::string description,
                                        const DivergencePolicy& policy) {
    Measure mu(tabulated_density(std::move(density), description, policy), std::move(atoms));
    auto value = [mu](double x) { return x >= 1.0 ? mu.mass(1.0, x) : -mu.mass(x, 1.0); };
    SpeedMeasure m(mu, value, std::nullopt, "m' = " + description);
    m.validate();
    return m;
}

SpeedMeasure SpeedMeasure::from_expression(const Expression& density, std::vector<Atom> atoms,
                                           const DivergencePolicy& policy) {
    return from_density(density, std::move(atoms), density.text(), policy);
}

bool SpeedMeasure::entrance() const { return std::isfinite(mu_.mass_from_zero(1.0)); }

std::string SpeedMeasure::describe() const { return label_; }

SpeedMeasure SpeedMeasure::scaled(double lambda, double alpha, const SlowVariation& K) const {
    if (!(lambda > 0.0)) throw ParameterError("SpeedMeasure::scaled: lambda must be positive");
    if (!(alpha > 0.0)) throw ParameterError("SpeedMeasure::scaled: alpha must be positive");
    const double norm = std::pow(lambda, 1.0 / alpha - 1.0) * K(lambda);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ParameterError("SpeedMeasure::scaled: bad normalisation");
    auto base = value_;
    auto value = [base, lambda, norm](double x) { return base(lambda * x) / norm; };
    std::optional<double> tag;
    if (alpha_ && *alpha_ == alpha && K.is_constant() && K.k == 1.0) tag = alpha;
    std::ostringstream os;
    os << label_ << " scaled by lambda=" << lambda;
    return SpeedMeasure(mu_.scaled(lambda, 1.0 / norm), std::move(value), tag, os.str());
}

void SpeedMeasure::validate() const {
    const double near_zero = mu_.moment_from_zero(1.0);
    if (!std::isfinite(near_zero))
        throw ModelError("speed measure " + label_ + ": int_0+ x dm(x) diverges (origin is not an exit boundary)");
    // Strictly increasing: every probe cell carries mass.
    double prev = 1e-6;
    for (int i = 1; i <= 12 * 8; ++i) {
        const double x = 1e-6 * std::pow(10.0, i / 8.0);
        if (!(mu_.mass(prev, x) > 0.0))
            throw ModelError("speed measure " + label_ + ": no mass on a probe cell near x = " + std::to_string(x));
        prev = x;
    }
}

}  // namespace itosynth
