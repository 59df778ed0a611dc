#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace poasim {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for the stream named `label`, derived from the master seed. Streams
/// are keyed by stable labels like "uptime/node-3" so adding an entity never
/// shifts another entity's randomness.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label) noexcept;

/// Stateless uniform draw in [0, 1) keyed by a 64-bit counter.
double hash_uniform(std::uint64_t key) noexcept;

/// Sequential stream. Distribution sampling is done by hand so the values do
/// not depend on the standard library's distribution implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform();
    bool bernoulli(double p) { return uniform() < p; }
    /// Trials up to and including the first success, >= 1. p must be in (0, 1].
    std::uint64_t geometric(double p);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

}  // namespace poasim
