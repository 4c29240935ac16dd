#include "itosynth/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "itosynth/errors.hpp"
#include "itosynth/time_change.hpp"

namespace itosynth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

PointSampler::PointSampler(BoundaryTriple b, double eps, SynthesisOptions options)
    : b_(std::move(b)), eps_(eps), opt_(options) {
    if (!(eps > 0.0)) throw ParameterError("PointSampler: eps must be positive");
    z_low_ = b_.J.inverse(eps);
    low_mass_ = z_low_ / eps;
    high_mass_ = b_.J.measure().tail(eps);
    intensity_ = low_mass_ + high_mass_;
    if (!std::isfinite(intensity_))
        throw SynthesisError("PointSampler: I(eps) = int dz / max(J(z), eps) is not finite");
}

PointSampler::Mark PointSampler::draw_mark(RngStream& rng) const {
    if (!(intensity_ > 0.0)) throw SynthesisError("PointSampler: no excursions (I(eps) = 0)");
    const double u = rng.uniform() * intensity_;
    if (u < low_mass_) {
        const double z = rng.uniform() * z_low_;
        return {z, std::min(b_.J(z), eps_)};
    }
    const double level = b_.J.measure().sample_above(eps_, rng.uniform());
    const double z_hi = b_.J.inverse(level);
    const double z_lo = b_.J.inverse_left(level);
    const double z = z_hi > z_lo ? z_lo + rng.uniform() * (z_hi - z_lo) : z_hi;
    return {z, level};
}

MarkedPoint PointSampler::draw_point(RngStream& rng, std::uint64_t index) const {
    MarkedPoint p;
    p.index = index;
    const Mark mk = draw_mark(rng);
    p.z = mk.z;
    p.level = mk.level;
    const Excursion e = sample_excursion_above(std::max(mk.level, eps_), opt_.grid, rng);
    const PathStats st(e);
    p.max = st.max();
    const double dx = opt_.clock_dx > 0.0 ? opt_.clock_dx : std::min(1e-3, p.max / 500.0);
    p.path = mk.level > 0.0 ? time_change_excursion(shift_at_hit(e, st, mk.level), b_.m, dx)
                            : time_change_excursion(e, b_.m, dx);
    p.lifetime = p.path.lifetime();
    return p;
}

PointStream::PointStream(const PointSampler& sampler, RngStream rng) : sampler_(sampler), rng_(std::move(rng)) {}

MarkedPoint PointStream::next() {
    s_ += rng_.exponential() / sampler_.intensity();
    RngStream child = rng_.child(count_);
    MarkedPoint p = sampler_.draw_point(child, count_);
    p.s = s_;
    ++count_;
    return p;
}

MarkedPointProcess sample_point_process(const BoundaryTriple& b, double S, double eps, RngStream& rng,
                                        const SynthesisOptions& options) {
    if (!(S > 0.0)) throw ParameterError("sample_point_process: S must be positive");
    const auto rep = check_existence(b);
    if (rep.verdict != Verdict::exists)
        throw SynthesisError(std::string("sample_point_process: triple fails existence (") + to_string(rep.verdict) + ")");
    const PointSampler sampler(b, eps, options);
    MarkedPointProcess pp;
    pp.S = S;
    pp.eps = eps;
    pp.intensity = sampler.intensity();
    if (pp.intensity > 0.0) {
        PointStream stream(sampler, rng.child(0x9e11));
        for (;;) {
            MarkedPoint p = stream.next();
            if (p.s > S) break;
            pp.points.push_back(std::move(p));
        }
    }
    return pp;
}

Staircase::Staircase(double drift, double horizon, std::vector<double> s, std::vector<double> jumps)
    : drift_(drift), horizon_(horizon), s_(std::move(s)), jumps_(std::move(jumps)) {
    cum_.resize(jumps_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < jumps_.size(); ++i) cum_[i] = acc += jumps_[i];
}

double Staircase::operator()(double s) const {
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const auto k = static_cast<std::size_t>(it - s_.begin());
    return drift_ * s + (k > 0 ? cum_[k - 1] : 0.0);
}

double Staircase::left(double s) const {
    const auto it = std::lower_bound(s_.begin(), s_.end(), s);
    const auto k = static_cast<std::size_t>(it - s_.begin());
    return drift_ * s + (k > 0 ? cum_[k - 1] : 0.0);
}

double Staircase::inverse(double t) const {
    if (t < 0.0) return 0.0;
    // Last jump index k with eta(s_k) <= t; then L lies in [s_k, s_{k+1}].
    std::size_t lo = 0, hi = s_.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if ((*this)(s_[mid]) <= t) lo = mid + 1;
        else hi = mid;
    }
    const double base_s = lo > 0 ? s_[lo - 1] : 0.0;
    const double base = lo > 0 ? (*this)(base_s) : 0.0;
    const double next_s = lo < s_.size() ? s_[lo] : horizon_;
    double s;
    if (drift_ > 0.0) s = std::min(next_s, base_s + (t - base) / drift_);
    else s = next_s;
    return std::min(s, horizon_);
}

Staircase build_eta(const MarkedPointProcess& pp, const BoundaryTriple& b) {
    std::vector<double> s, jumps;
    s.reserve(pp.points.size());
    jumps.reserve(pp.points.size());
    for (const MarkedPoint& p : pp.points) {
        s.push_back(p.s);
        jumps.push_back(p.lifetime);
    }
    return Staircase(b.r, pp.S, std::move(s), std::move(jumps));
}

double SyntheticPath::operator()(double t) const {
    if (t < 0.0 || t > T) throw ParameterError("SyntheticPath: t outside [0, T]");
    const auto it = std::upper_bound(starts.begin(), starts.end(), t);
    if (it == starts.begin()) return 0.0;
    const auto i = static_cast<std::size_t>(it - starts.begin()) - 1;
    const double local = t - starts[i];
    if (local >= pieces[i].lifetime()) return 0.0;
    return pieces[i].value_at(local);
}

void SyntheticPath::knots(std::vector<double>& ts, std::vector<double>& xs) const {
    ts.clear();
    xs.clear();
    ts.push_back(0.0);
    xs.push_back(0.0);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double t0 = starts[i];
        if (t0 > T) break;
        const Excursion& e = pieces[i];
        if (t0 > ts.back() || xs.back() != 0.0) {
            ts.push_back(t0);
            xs.push_back(0.0);
        }
        for (std::size_t k = 0; k < e.size(); ++k) {
            const double t = t0 + e.times[k];
            if (t > T) {
                ts.push_back(T);
                xs.push_back(e.value_at(T - t0));
                return;
            }
            ts.push_back(t);
            xs.push_back(e.values[k]);
        }
    }
    if (ts.back() < T) {
        ts.push_back(T);
        xs.push_back(0.0);
    }
}

SyntheticPath build_path(const MarkedPointProcess& pp, const BoundaryTriple& b, double T) {
    if (!(T > 0.0)) throw ParameterError("build_path: T must be positive");
    SyntheticPath sp{build_eta(pp, b), {}, {}, T, pp.eps, b.describe()};
    if (sp.eta(pp.S) < T)
        throw HorizonError("build_path: eta(S) < T; increase the local-time horizon S");
    for (const MarkedPoint& p : pp.points) {
        const double start = sp.eta.left(p.s);
        if (start > T) break;
        if (p.lifetime <= 0.0) continue;
        sp.starts.push_back(start);
        sp.pieces.push_back(p.path);
    }
    return sp;
}

Synthesis synthesize(const BoundaryTriple& b, double T, double eps, RngStream& rng, const SynthesisOptions& options,
                     int max_doublings) {
    if (!(T > 0.0)) throw ParameterError("synthesize: T must be positive");
    const auto rep = check_existence(b);
    if (rep.verdict != Verdict::exists)
        throw SynthesisError(std::string("synthesize: triple fails existence (") + to_string(rep.verdict) + ")");
    const PointSampler sampler(b, eps, options);
    Synthesis out;
    out.pp.eps = eps;
    out.pp.intensity = sampler.intensity();
    double S = sampler.intensity() > 0.0 ? 1.0 / sampler.intensity() : (b.r > 0.0 ? T / b.r : 1.0);
    PointStream stream(sampler, rng.child(0x9e11));
    std::optional<MarkedPoint> pending;
    double eta = 0.0;
    for (int round = 0; round <= max_doublings; ++round) {
        if (sampler.intensity() > 0.0) {
            for (;;) {
                if (!pending) pending = stream.next();
                if (pending->s > S) break;
                eta += pending->lifetime;
                out.pp.points.push_back(std::move(*pending));
                pending.reset();
            }
        }
        out.pp.S = S;
        if (b.r * S + eta >= T) {
            out.path = build_path(out.pp, b, T);
            return out;
        }
        S *= 2.0;
    }
    throw HorizonError("synthesize: eta(S) < T after the maximum number of horizon doublings");
}

double boundary_local_time(const SyntheticPath& sp, double t, double C) { return sp.eta.inverse(t) / C; }

double estimate_C(const MarkedPointProcess& pp, double r) {
    double s = 0.0;
    for (const MarkedPoint& p : pp.points) s += -std::expm1(-p.lifetime);
    return r + s / pp.S;
}

std::vector<std::vector<double>> sample_marginals(const BoundaryTriple& b, std::span<const double> eps_ladder,
                                                  std::span<const double> times, RngStream rng,
                                                  const SynthesisOptions& options) {
    if (eps_ladder.empty() || times.empty()) throw ParameterError("sample_marginals: empty eps ladder or time list");
    for (double t : times)
        if (!(t >= 0.0)) throw ParameterError("sample_marginals: times must be nonnegative");
    const double eps_min = *std::min_element(eps_ladder.begin(), eps_ladder.end());
    const PointSampler sampler(b, eps_min, options);
    const std::size_t K = eps_ladder.size();
    const std::size_t n = times.size();
    std::vector<std::vector<double>> out(K, std::vector<double>(n, 0.0));
    std::vector<std::vector<char>> done(K, std::vector<char>(n, 0));
    std::vector<double> sum(K, 0.0);
    std::size_t open = K * n;
    if (!(sampler.intensity() > 0.0)) {
        if (!(b.r > 0.0)) throw SynthesisError("sample_marginals: no excursions and no drift");
        return out;
    }
    PointStream stream(sampler, rng);
    while (open > 0) {
        const MarkedPoint p = stream.next();
        for (std::size_t k = 0; k < K; ++k) {
            const double start = b.r * p.s + sum[k];
            // Times passed during the drift stretch before this point.
            for (std::size_t j = 0; j < n; ++j) {
                if (!done[k][j] && times[j] < start) {
                    done[k][j] = 1;
                    --open;
                }
            }
            if (!(p.max > std::max(p.level, eps_ladder[k]))) continue;
            const double end = start + p.lifetime;
            for (std::size_t j = 0; j < n; ++j) {
                if (!done[k][j] && times[j] < end) {
                    out[k][j] = p.path.value_at(times[j] - start);
                    done[k][j] = 1;
                    --open;
                }
            }
            sum[k] += p.lifetime;
        }
    }
    return out;
}

std::vector<LaplaceEstimate> laplace_exponent_ladder(const BoundaryTriple& b, double xi,
                                                     std::span<const double> eps_ladder, std::size_t N,
                                                     RngStream& rng, const SynthesisOptions& options) {
    if (!(xi > 0.0)) throw ParameterError("laplace_exponent: xi must be positive");
    if (eps_ladder.empty()) throw ParameterError("laplace_exponent: empty eps ladder");
    const double eps_min = *std::min_element(eps_ladder.begin(), eps_ladder.end());
    const PointSampler sampler(b, eps_min, options);
    const std::size_t K = eps_ladder.size();
    std::vector<LaplaceEstimate> out(K);
    for (std::size_t k = 0; k < K; ++k) {
        out[k].eps = eps_ladder[k];
        out[k].psi = xi * b.r;
    }
    if (!(sampler.intensity() > 0.0) || N == 0) return out;
    std::vector<double> s1(K, 0.0), s2(K, 0.0);
    std::vector<std::size_t> kept(K, 0);
    for (std::size_t i = 0; i < N; ++i) {
        RngStream child = rng.child(i);
        const MarkedPoint p = sampler.draw_point(child, i);
        const double g = -std::expm1(-xi * p.lifetime);
        for (std::size_t k = 0; k < K; ++k) {
            if (!(p.max > std::max(p.level, eps_ladder[k]))) continue;
            s1[k] += g;
            s2[k] += g * g;
            ++kept[k];
        }
    }
    const double I = sampler.intensity();
    const double n = static_cast<double>(N);
    for (std::size_t k = 0; k < K; ++k) {
        const double mean = s1[k] / n;
        const double var = std::max(0.0, s2[k] / n - mean * mean);
        out[k].psi += I * mean;
        out[k].std_error = I * std::sqrt(var / n);
        out[k].n = kept[k];
    }
    return out;
}

double laplace_exponent(const BoundaryTriple& b, double xi, double eps, std::size_t N, RngStream& rng,
                        const SynthesisOptions& options) {
    const double ladder[] = {eps};
    return laplace_exponent_ladder(b, xi, ladder, N, rng, options).front().psi;
}

double laplace_exponent_from_eta(const BoundaryTriple& b, double xi, double eps, double s, std::size_t N,
                                 RngStream& rng, const SynthesisOptions& options) {
    if (!(xi > 0.0) || !(s > 0.0) || N == 0) throw ParameterError("laplace_exponent_from_eta: bad arguments");
    const PointSampler sampler(b, eps, options);
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double eta = b.r * s;
        if (sampler.intensity() > 0.0) {
            PointStream stream(sampler, rng.child(i));
            for (;;) {
                const MarkedPoint p = stream.next();
                if (p.s > s) break;
                eta += p.lifetime;
            }
        }
        acc += std::exp(-xi * eta);
    }
    return -std::log(acc / static_cast<double>(N)) / s;
}

std::vector<double> sample_eta_jumps(const BoundaryTriple& b, double eps, std::size_t n, RngStream& rng,
                                     const SynthesisOptions& options) {
    const PointSampler sampler(b, eps, options);
    if (!(sampler.intensity() > 0.0)) throw SynthesisError("sample_eta_jumps: no excursions (I(eps) = 0)");
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream child = rng.child(i);
        out.push_back(sampler.draw_point(child, i).lifetime);
    }
    return out;
}

}  // namespace itosynth
