#include "coev/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coev {

namespace {

void require_same_shape(const RealGenome& a, const RealGenome& b, const char* what) {
    if (a.size() != b.size() || a.bounds() != b.bounds()) {
        throw std::invalid_argument(std::string(what) + ": parents differ in dimensionality or bounds");
    }
}

} // namespace

std::pair<BitGenome, BitGenome> two_point_crossover(const BitGenome& a, const BitGenome& b, std::size_t first,
                                                    std::size_t second) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("two_point_crossover: length mismatch");
    }
    if (first > second || second > a.size()) {
        throw std::invalid_argument("two_point_crossover: cuts out of order or out of range");
    }
    const std::uint64_t segment = BitGenome::mask_for(second) & ~BitGenome::mask_for(first);
    const std::uint64_t child1 = (a.word() & ~segment) | (b.word() & segment);
    const std::uint64_t child2 = (b.word() & ~segment) | (a.word() & segment);
    return {BitGenome(a.size(), child1), BitGenome(a.size(), child2)};
}

std::pair<BitGenome, BitGenome> two_point_crossover(const BitGenome& a, const BitGenome& b, Rng& rng) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("two_point_crossover: length mismatch");
    }
    auto c1 = static_cast<std::size_t>(rng.uniform_index(a.size() + 1));
    auto c2 = static_cast<std::size_t>(rng.uniform_index(a.size() + 1));
    if (c1 > c2) {
        std::swap(c1, c2);
    }
    return two_point_crossover(a, b, c1, c2);
}

BitGenome flip_bit_mutation(const BitGenome& g, double per_bit_rate, Rng& rng) {
    if (!(per_bit_rate >= 0.0 && per_bit_rate <= 1.0)) {
        throw std::invalid_argument("flip_bit_mutation: rate outside [0, 1]");
    }
    BitGenome out = g;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (rng.bernoulli(per_bit_rate)) {
            out.flip(i);
        }
    }
    return out;
}

double sbx_spread_factor(double u, double eta) {
    const double exponent = 1.0 / (eta + 1.0);
    if (u <= 0.5) {
        return std::pow(2.0 * u, exponent);
    }
    return std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
}

std::pair<RealGenome, RealGenome> sbx_crossover(const RealGenome& a, const RealGenome& b, double eta,
                                                std::span<const double> uniforms) {
    require_same_shape(a, b, "sbx_crossover");
    if (!(eta > 0.0)) {
        throw std::invalid_argument("sbx_crossover: eta must be positive");
    }
    if (uniforms.size() != a.size()) {
        throw std::invalid_argument("sbx_crossover: one uniform draw per dimension required");
    }
    RealGenome c1 = a;
    RealGenome c2 = b;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double beta = sbx_spread_factor(uniforms[d], eta);
        c1.set(d, 0.5 * ((1.0 + beta) * a[d] + (1.0 - beta) * b[d]));
        c2.set(d, 0.5 * ((1.0 - beta) * a[d] + (1.0 + beta) * b[d]));
    }
    return {std::move(c1), std::move(c2)};
}

std::pair<RealGenome, RealGenome> sbx_crossover(const RealGenome& a, const RealGenome& b, double eta, Rng& rng) {
    require_same_shape(a, b, "sbx_crossover");
    std::vector<double> uniforms(a.size());
    for (auto& u : uniforms) {
        u = rng.uniform01();
    }
    return sbx_crossover(a, b, eta, uniforms);
}

RealGenome gaussian_mutation(const RealGenome& g, std::span<const double> sigma, double per_dim_rate, Rng& rng) {
    if (sigma.size() != g.size()) {
        throw std::invalid_argument("gaussian_mutation: one sigma per dimension required");
    }
    if (std::any_of(sigma.begin(), sigma.end(), [](double s) { return !(s >= 0.0); })) {
        throw std::invalid_argument("gaussian_mutation: negative sigma");
    }
    if (!(per_dim_rate >= 0.0 && per_dim_rate <= 1.0)) {
        throw std::invalid_argument("gaussian_mutation: rate outside [0, 1]");
    }
    RealGenome out = g;
    for (std::size_t d = 0; d < g.size(); ++d) {
        if (rng.bernoulli(per_dim_rate)) {
            out.set(d, g[d] + sigma[d] * rng.normal());
        }
    }
    return out;
}

} // namespace coev
