#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace coev {

/// Deterministic random stream.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
/// implements every distribution locally so that draws are bit-identical across
/// standard library implementations. Streams never share state; derive child
/// seeds with derive_seed() instead of sharing a stream between runs.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Raw 64-bit draw.
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Uniform integer in [low, high], inclusive. Full 64-bit range allowed.
    std::uint64_t uniform_between(std::uint64_t low, std::uint64_t high);

    /// Uniform real in [0, 1) with 53 bits of resolution.
    double uniform01();

    /// Uniform real in [low, high).
    double uniform_real(double low, double high);

    /// True with probability p.
    bool bernoulli(double p);

    /// Standard normal draw (Marsaglia polar method, no cached second value).
    double normal();

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stable seed derivation: hash(seed, index, tag).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::string_view tag = {}) noexcept;

} // namespace coev
