#pragma once

#include <string>
#include <vector>

#include "itosynth/jump.hpp"
#include "itosynth/quadrature.hpp"
#include "itosynth/speed_measure.hpp"

namespace itosynth {

/// (m, J, r): speed measure, jump function (equivalently (j, c)) and the
/// stagnancy coefficient r >= 0.
struct BoundaryTriple {
    SpeedMeasure m;
    JumpFunction J;
    double r = 0.0;

    std::string describe() const;
};

enum class Verdict { exists, fails_C, fails_Cplus };
const char* to_string(Verdict v);

struct ExistenceReport {
    Verdict verdict = Verdict::exists;
    bool confident = true;
    /// j((1, inf)) and int_(0,1) j(dx) int_0^x m((y, 1)) dy.
    double jump_tail = 0.0;
    double inner_integral = 0.0;
    /// m(0+) > -inf.
    bool entrance = true;
    /// j((0, 1)).
    double jump_near_zero = 0.0;
    std::vector<std::string> diagnostics;
};

/// Feller/Ito existence conditions with x0 = 1.
ExistenceReport check_existence(const BoundaryTriple& b, const DivergencePolicy& policy = {});
/// Same check on (m, j, c, r) directly, for pairs where J is not defined.
ExistenceReport check_existence(const SpeedMeasure& m, const JumpMeasure& j, double c, double r,
                                const DivergencePolicy& policy = {});

enum class RegimeKind { convergent, divergent };
const char* to_string(RegimeKind k);

/// Regular-variation data: m'(x) ~ alpha^-1 x^(1/alpha - 2) K(x) and, in the
/// divergent case, j((x, inf)) ~ x^-beta L(x).
struct ScalingRegime {
    RegimeKind kind = RegimeKind::convergent;
    double alpha = 0.5;
    SlowVariation K;
    double beta = 0.5;
    SlowVariation L;

    double u(double lambda) const;
    double v(double lambda) const;
};

/// (m_lambda, J_lambda, r_lambda) with r_lambda = v / u * r.
BoundaryTriple scale_triple(const BoundaryTriple& b, const ScalingRegime& reg, double lambda);

struct RegimeCertificate {
    bool certified = false;
    std::vector<std::string> diagnostics;
};

/// Numerical check of the regime hypotheses on b: the asymptotics of m' and
/// (convergent) d(J) < inf or (divergent) the tail j((x, inf)) ~ x^-beta L(x)
/// with beta < min(1, 1/alpha).
RegimeCertificate certify_regime(const BoundaryTriple& b, const ScalingRegime& reg);

/// (m^(alpha), V_(0,d(J)), 0) or (m^(alpha), J^(beta), 0). Throws RegimeError
/// for trivial triples and uncertified regimes.
BoundaryTriple limit_triple(const BoundaryTriple& b, const ScalingRegime& reg);

}  // namespace itosynth
