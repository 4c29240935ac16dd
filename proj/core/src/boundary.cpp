#include "itosynth/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "itosynth/errors.hpp"

namespace itosynth {

std::string BoundaryTriple::describe() const {
    std::ostringstream os;
    os << "(m = " << m.describe() << ", J = " << J.describe() << ", r = " << r << ")";
    return os.str();
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::exists: return "exists";
    case Verdict::fails_C: return "fails_C";
    case Verdict::fails_Cplus: return "fails_Cplus";
    }
    return "?";
}

const char* to_string(RegimeKind k) { return k == RegimeKind::convergent ? "convergent" : "divergent"; }

namespace {

double atom_at(const Measure& mu, double x) {
    double s = 0.0;
    for (const Atom& a : mu.atoms())
        if (a.location == x) s += a.mass;
    return s;
}

}  // namespace

ExistenceReport check_existence(const BoundaryTriple& b, const DivergencePolicy& policy) {
    return check_existence(b.m, b.J.measure(), b.J.c(), b.r, policy);
}

ExistenceReport check_existence(const SpeedMeasure& m, const JumpMeasure& j, double c, double r,
                                const DivergencePolicy& policy) {
    ExistenceReport rep;
    const double m_atom_1 = atom_at(m.measure(), 1.0);

    // g(x) = int_0^x m((y, 1)) dy = x m((x, 1)) + int_(0,x] y dm(y).
    auto g = [&](double x) { return x * (m.mass(x, 1.0) - m_atom_1) + m.first_moment(x); };

    rep.jump_tail = j.tail(1.0);
    if (!std::isfinite(rep.jump_tail)) rep.diagnostics.push_back("j((1, inf)) diverges");

    double inner = 0.0;
    if (const auto& part = j.measure().continuous()) {
        const auto res = integrate_to_zero([&](double x) { return x >= 1.0 ? 0.0 : g(x) * part->density(x); }, 1.0,
                                           policy);
        inner = res.value;
        rep.confident = rep.confident && res.confident;
        if (!res.finite) rep.diagnostics.push_back("int_(0,1) g dj diverges: " + res.diagnostic);
    }
    for (const Atom& a : j.measure().atoms())
        if (a.location < 1.0) inner += g(a.location) * a.mass;
    rep.inner_integral = inner;
    rep.confident = rep.confident && m.confident() && j.measure().confident();

    rep.entrance = m.entrance();
    rep.jump_near_zero = j.measure().mass_from_zero(1.0) - atom_at(j.measure(), 1.0);

    const bool c21 = std::isfinite(rep.jump_tail) && std::isfinite(inner);
    const bool c22 = rep.entrance || c == 0.0;
    if (!c22) rep.diagnostics.push_back("m(0+) = -inf requires c = 0");
    const bool cplus = !(c == 0.0 && std::isfinite(rep.jump_near_zero)) || r > 0.0;
    if (!cplus) rep.diagnostics.push_back("c = 0 and j((0, 1)) < inf require r > 0");

    if (!c21 || !c22) rep.verdict = Verdict::fails_C;
    else if (!cplus) rep.verdict = Verdict::fails_Cplus;
    else rep.verdict = Verdict::exists;
    if (!rep.confident) rep.diagnostics.push_back("verdict rests on a low-confidence divergence classification");
    return rep;
}

double ScalingRegime::u(double lambda) const { return std::pow(lambda, 1.0 / alpha) * K(lambda); }

double ScalingRegime::v(double lambda) const {
    if (kind == RegimeKind::convergent) return lambda;
    return std::pow(lambda, beta) / L(lambda);
}

BoundaryTriple scale_triple(const BoundaryTriple& b, const ScalingRegime& reg, double lambda) {
    if (!(lambda > 0.0)) throw ParameterError("scale_triple: lambda must be positive");
    const double u = reg.u(lambda);
    const double v = reg.v(lambda);
    return BoundaryTriple{b.m.scaled(lambda, reg.alpha, reg.K), b.J.scaled(lambda, v), v / u * b.r};
}

RegimeCertificate certify_regime(const BoundaryTriple& b, const ScalingRegime& reg) {
    RegimeCertificate cert;
    bool ok = true;
    auto note = [&](const std::string& s) { cert.diagnostics.push_back(s); };
    if (!(reg.alpha > 0.0)) {
        note("alpha must be positive");
        ok = false;
    }
    if (b.J.trivial()) {
        note("trivial triple (j = 0, c = 0): the process is identically 0");
        ok = false;
    }
    // m'(x) / (alpha^-1 x^(1/alpha - 2) K(x)) -> 1.
    if (ok) {
        for (double x : {1e6, 1e8}) {
            const double ref = std::pow(x, 1.0 / reg.alpha - 2.0) * reg.K(x) / reg.alpha;
            const double ratio = b.m.density(x) / ref;
            if (!(std::abs(ratio - 1.0) < 0.05)) {
                std::ostringstream os;
                os << "m'(x) / (alpha^-1 x^(1/alpha-2) K(x)) = " << ratio << " at x = " << x;
                note(os.str());
                ok = false;
            }
        }
    }
    if (reg.kind == RegimeKind::convergent) {
        if (!std::isfinite(b.J.d())) {
            note("convergent regime needs d(J) = c + int y j(dy) < inf");
            ok = false;
        }
    } else {
        if (!(reg.beta > 0.0 && reg.beta < std::min(1.0, 1.0 / reg.alpha))) {
            note("divergent regime needs 0 < beta < min(1, 1/alpha)");
            ok = false;
        }
        for (double x : {1e6, 1e8}) {
            const double ratio = b.J.measure().tail(x) / (std::pow(x, -reg.beta) * reg.L(x));
            if (!(std::abs(ratio - 1.0) < 0.05)) {
                std::ostringstream os;
                os << "j((x, inf)) / (x^-beta L(x)) = " << ratio << " at x = " << x;
                note(os.str());
                ok = false;
            }
        }
    }
    cert.certified = ok;
    return cert;
}

BoundaryTriple limit_triple(const BoundaryTriple& b, const ScalingRegime& reg) {
    const auto cert = certify_regime(b, reg);
    if (!cert.certified) {
        std::string msg = "limit_triple: regime not certified";
        for (const auto& d : cert.diagnostics) msg += "; " + d;
        throw RegimeError(msg);
    }
    if (reg.kind == RegimeKind::convergent)
        return BoundaryTriple{SpeedMeasure::canonical(reg.alpha), JumpFunction::step(b.J.d()), 0.0};
    return BoundaryTriple{SpeedMeasure::canonical(reg.alpha), JumpFunction::canonical(reg.beta), 0.0};
}

}  // namespace itosynth
