#pragma once

/// Variation and selection operators shared by both benchmarks.
///
/// Every operator takes its randomness from an explicit Rng; replaying with
/// an identically seeded stream reproduces the output bit for bit.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "coev/errors.hpp"
#include "coev/genome.hpp"
#include "coev/rng.hpp"

namespace coev {

/// Two-point crossover with explicit cut points 0 <= first <= second <= L.
/// The first child is `a` with [first, second) taken from `b`; the second
/// child is the mirror image.
std::pair<BitGenome, BitGenome> two_point_crossover(const BitGenome& a, const BitGenome& b, std::size_t first,
                                                    std::size_t second);

/// Two-point crossover with both cuts drawn uniformly from [0, L].
std::pair<BitGenome, BitGenome> two_point_crossover(const BitGenome& a, const BitGenome& b, Rng& rng);

/// Inverts each bit independently with probability `per_bit_rate`.
BitGenome flip_bit_mutation(const BitGenome& g, double per_bit_rate, Rng& rng);

/// SBX spread factor for a uniform draw u in [0, 1).
double sbx_spread_factor(double u, double eta);

/// Simulated binary crossover with caller-supplied uniform draws, one per
/// dimension. Children are clamped (or wrapped) into the parents' bounds.
std::pair<RealGenome, RealGenome> sbx_crossover(const RealGenome& a, const RealGenome& b, double eta,
                                                std::span<const double> uniforms);

/// Simulated binary crossover drawing one uniform per dimension from `rng`.
std::pair<RealGenome, RealGenome> sbx_crossover(const RealGenome& a, const RealGenome& b, double eta, Rng& rng);

/// Each dimension d is perturbed, with probability `per_dim_rate`, by a normal
/// draw of standard deviation sigma[d], then clamped (or wrapped).
RealGenome gaussian_mutation(const RealGenome& g, std::span<const double> sigma, double per_dim_rate, Rng& rng);

/// Index of the tournament winner among `draws` (positions into `pop`).
/// Ties go to the earliest position in `pop`.
template <class G>
std::size_t tournament_winner(std::span<const Individual<G>> pop, std::span<const std::size_t> draws, Sense sense) {
    std::size_t best = draws.front();
    for (const std::size_t idx : draws.subspan(1)) {
        const double f = *pop[idx].fitness;
        const double fb = *pop[best].fitness;
        if (strictly_better(f, fb, sense) || (f == fb && idx < best)) {
            best = idx;
        }
    }
    return best;
}

/// `count` tournaments of size `k`, each over uniform draws with replacement.
template <class G>
std::vector<Individual<G>> tournament_select(std::span<const Individual<G>> pop, std::size_t k, std::size_t count,
                                             Sense sense, Rng& rng) {
    if (pop.empty()) {
        throw std::invalid_argument("tournament_select: empty population");
    }
    if (k == 0) {
        throw std::invalid_argument("tournament_select: tournament size must be >= 1");
    }
    for (const auto& ind : pop) {
        if (!ind.evaluated()) {
            throw IllegalState("tournament_select: population contains an unevaluated individual");
        }
    }
    std::vector<Individual<G>> winners;
    winners.reserve(count);
    std::vector<std::size_t> draws(k);
    for (std::size_t n = 0; n < count; ++n) {
        for (auto& d : draws) {
            d = static_cast<std::size_t>(rng.uniform_index(pop.size()));
        }
        winners.push_back(pop[tournament_winner<G>(pop, draws, sense)]);
    }
    return winners;
}

} // namespace coev
