#include "coev/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace coev {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("uniform_index: empty range");
    }
    // Rejection of the biased low tail, then modulo.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold) {
            return r % n;
        }
    }
}

std::uint64_t Rng::uniform_between(std::uint64_t low, std::uint64_t high) {
    if (low > high) {
        throw std::invalid_argument("uniform_between: low > high");
    }
    const std::uint64_t span = high - low;
    if (span == std::numeric_limits<std::uint64_t>::max()) {
        return engine_();
    }
    return low + uniform_index(span + 1);
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_real(double low, double high) {
    return low + (high - low) * uniform01();
}

bool Rng::bernoulli(double p) {
    if (p >= 1.0) {
        return true;
    }
    if (p <= 0.0) {
        return false;
    }
    return uniform01() < p;
}

double Rng::normal() {
    for (;;) {
        const double u = 2.0 * uniform01() - 1.0;
        const double v = 2.0 * uniform01() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::string_view tag) noexcept {
    // FNV-1a over the tag keeps derivation independent of std::hash.
    std::uint64_t tag_hash = 0xcbf29ce484222325ULL;
    for (const char c : tag) {
        tag_hash ^= static_cast<unsigned char>(c);
        tag_hash *= 0x100000001b3ULL;
    }
    return mix64(mix64(mix64(seed) ^ index) ^ tag_hash);
}

} // namespace coev
