#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "itosynth/boundary.hpp"
#include "itosynth/excursion.hpp"
#include "itosynth/rng.hpp"

namespace itosynth {

struct SynthesisOptions {
    GridPolicy grid;
    /// Clock level resolution; 0 picks min(1e-3, M / 500) per path.
    double clock_dx = 0.0;
};

/// One point (s, z, e) of the excursion point process together with its
/// time-changed, shifted excursion e_{m,J(z)}.
struct MarkedPoint {
    std::uint64_t index = 0;
    double s = 0.0;
    double z = 0.0;
    double level = 0.0;     // J(z)
    double max = 0.0;       // M(e) of the Brownian excursion
    double lifetime = 0.0;  // zeta(e_{m,J(z)})
    Excursion path;         // e_{m,J(z)}
};

struct MarkedPointProcess {
    double S = 0.0;
    double eps = 0.0;
    double intensity = 0.0;
    std::vector<MarkedPoint> points;
};

/// Marks (z, J(z)) under dz / max(J(z), eps) and the conditioned excursions.
///
/// I(eps) = J^-1(eps) / eps + j((eps, inf)): on z < J^-1(eps) the mark is
/// uniform, above it the level J(z) has law j restricted to (eps, inf).
class PointSampler {
public:
    PointSampler(BoundaryTriple b, double eps, SynthesisOptions options = {});

    const BoundaryTriple& triple() const noexcept { return b_; }
    const SynthesisOptions& options() const noexcept { return opt_; }
    double eps() const noexcept { return eps_; }
    double intensity() const noexcept { return intensity_; }
    double low_mark_mass() const noexcept { return low_mass_; }

    struct Mark {
        double z;
        double level;
    };
    Mark draw_mark(RngStream& rng) const;

    /// Mark plus e_{m,J(z)} for e ~ n_BE( . | M > max(J(z), eps)); s is left at 0.
    MarkedPoint draw_point(RngStream& rng, std::uint64_t index) const;

private:
    BoundaryTriple b_;
    double eps_;
    SynthesisOptions opt_;
    double z_low_ = 0.0;  // J^-1(eps)
    double low_mass_ = 0.0;
    double high_mass_ = 0.0;
    double intensity_ = 0.0;
};

/// Points in increasing local time; gaps are exponential with rate I(eps)
/// and point i is drawn from the child stream i.
class PointStream {
public:
    PointStream(const PointSampler& sampler, RngStream rng);
    MarkedPoint next();

private:
    const PointSampler& sampler_;
    RngStream rng_;
    double s_ = 0.0;
    std::uint64_t count_ = 0;
};

/// Requires check_existence(b) == exists; throws SynthesisError otherwise or
/// when I(eps) is not finite.
MarkedPointProcess sample_point_process(const BoundaryTriple& b, double S, double eps, RngStream& rng,
                                        const SynthesisOptions& options = {});

/// s -> eta(s) = r s + sum_{s_i <= s} zeta_i on [0, S].
class Staircase {
public:
    Staircase() : Staircase(0.0, 0.0, {}, {}) {}
    Staircase(double drift, double horizon, std::vector<double> s, std::vector<double> jumps);

    double drift() const noexcept { return drift_; }
    double horizon() const noexcept { return horizon_; }
    std::span<const double> jump_times() const noexcept { return s_; }
    std::span<const double> jumps() const noexcept { return jumps_; }

    double operator()(double s) const;
    double left(double s) const;
    /// L(t) = inf{s : eta(s) > t}, capped at the horizon.
    double inverse(double t) const;

private:
    double drift_;
    double horizon_;
    std::vector<double> s_;
    std::vector<double> jumps_;
    std::vector<double> cum_;
};

Staircase build_eta(const MarkedPointProcess& pp, const BoundaryTriple& b);

/// X on [0, T] pasted from the excursions of a point process.
struct SyntheticPath {
    Staircase eta;
    std::vector<double> starts;  // eta(s_i-) of excursions that start before T
    std::vector<Excursion> pieces;
    double T = 0.0;
    double eps = 0.0;
    std::string triple;

    double operator()(double t) const;
    /// (t, x) knots of X on [0, T]; jumps appear as repeated times.
    void knots(std::vector<double>& ts, std::vector<double>& xs) const;
};

/// Throws HorizonError when eta(S) < T.
SyntheticPath build_path(const MarkedPointProcess& pp, const BoundaryTriple& b, double T);

/// Point process grown by doubling S until eta(S) >= T, then the path.
struct Synthesis {
    MarkedPointProcess pp;
    SyntheticPath path;
};
Synthesis synthesize(const BoundaryTriple& b, double T, double eps, RngStream& rng,
                     const SynthesisOptions& options = {}, int max_doublings = 40);

/// Right-continuous inverse of eta, optionally divided by C.
double boundary_local_time(const SyntheticPath& sp, double t, double C = 1.0);

/// C = r + int (1 - e^-t) n(zeta in dt), estimated from the realised points.
double estimate_C(const MarkedPointProcess& pp, double r);

/// X(t_j) for every eps of the ladder, from one realisation at the smallest
/// eps thinned to the coarser ones. Result[k][j] is for eps_ladder[k], times[j].
std::vector<std::vector<double>> sample_marginals(const BoundaryTriple& b, std::span<const double> eps_ladder,
                                                  std::span<const double> times, RngStream rng,
                                                  const SynthesisOptions& options = {});

struct LaplaceEstimate {
    double eps = 0.0;
    double psi = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Psi(xi) ~ xi r + I(eps) E[1 - exp(-xi zeta)] over N marks.
double laplace_exponent(const BoundaryTriple& b, double xi, double eps, std::size_t N, RngStream& rng,
                        const SynthesisOptions& options = {});

/// The same estimator on a whole eps ladder from N marks at the smallest eps.
std::vector<LaplaceEstimate> laplace_exponent_ladder(const BoundaryTriple& b, double xi,
                                                     std::span<const double> eps_ladder, std::size_t N,
                                                     RngStream& rng, const SynthesisOptions& options = {});

/// -(1/s) log E[exp(-xi eta(s))] from N independent staircases.
double laplace_exponent_from_eta(const BoundaryTriple& b, double xi, double eps, double s, std::size_t N,
                                 RngStream& rng, const SynthesisOptions& options = {});

/// Lifetimes of n marked excursions (the jumps of eta above the truncation).
std::vector<double> sample_eta_jumps(const BoundaryTriple& b, double eps, std::size_t n, RngStream& rng,
                                     const SynthesisOptions& options = {});

}  // namespace itosynth
