#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>

#include "coev/genome.hpp"
#include "coev/rng.hpp"

namespace coev {

/// A cooperative problem over genomes of type G.
///
/// An individual is scored by the complete solution it forms with the
/// representatives of every other species, so
/// individual_fitness(r_i, R \ r_i) == collaboration_fitness(R).
template <class G>
class Problem {
  public:
    using Genome = G;

    virtual ~Problem() = default;

    virtual Sense sense() const = 0;

    virtual G random_genome(Rng& rng) const = 0;
    virtual std::pair<G, G> crossover(const G& a, const G& b, Rng& rng) const = 0;
    virtual G mutate(const G& g, Rng& rng) const = 0;

    virtual double individual_fitness(const G& genome, std::span<const G> partners) const = 0;
    virtual double collaboration_fitness(std::span<const G> representatives) const = 0;

    /// Marginal value of representative i to the collaboration.
    virtual double contribution(std::size_t i, std::span<const G> representatives) const = 0;

    /// Stop predicate: the representatives form an acceptable solution.
    virtual bool perfect(std::span<const G> representatives) const = 0;

    /// Text form used in run logs.
    virtual std::string serialize(const G& genome) const = 0;

    /// Scores a whole population against the same partners. Overrides may
    /// cache partner-only work but must produce the same values as
    /// individual_fitness.
    virtual void evaluate(std::span<Individual<G>> population, std::span<const G> partners) const {
        for (auto& ind : population) {
            ind.fitness = individual_fitness(ind.genome, partners);
        }
    }
};

} // namespace coev
