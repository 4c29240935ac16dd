#pragma once

#include <cstdint>
#include <random>

namespace itosynth {

/// Seeded random stream. Identical (seed, stream) pairs produce bit-identical
/// sequences; workers get disjoint stream ids instead of sharing a generator.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    /// Deterministic child stream, e.g. one per Poisson point or replicate.
    RngStream child(std::uint64_t id) const;

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal() { return normal_(engine_); }
    double exponential();
    std::uint64_t poisson(double mean);

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// splitmix64 finaliser; used to derive child stream ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace itosynth
