#pragma once

/// Binary string covering benchmark.
///
/// A match set M covers a target set T with strength
///   S(M, T) = (1/|T|) * sum over t in T of max over m in M of s(m, t),
/// where s counts agreeing bit positions. Targets are random instances of a
/// few schemata over {0, 1, #}.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coev/genome.hpp"
#include "coev/problem.hpp"
#include "coev/rng.hpp"

namespace coev::string_cover {

inline constexpr std::size_t string_length = 64;

/// Template over {0, 1, #}. `fixed_mask` marks fixed positions, `fixed_bits`
/// holds their values (zero elsewhere).
class Schema {
  public:
    Schema() = default;
    Schema(std::size_t length, std::uint64_t fixed_mask, std::uint64_t fixed_bits);

    static Schema parse(std::string_view text);

    std::size_t size() const noexcept { return length_; }
    std::uint64_t fixed_mask() const noexcept { return fixed_mask_; }
    std::uint64_t fixed_bits() const noexcept { return fixed_bits_; }
    std::size_t variable_count() const noexcept;

    /// True iff g agrees with every fixed position.
    bool covered_by(const BitGenome& g) const noexcept { return ((g.word() ^ fixed_bits_) & fixed_mask_) == 0; }

    std::string to_string() const;

    friend bool operator==(const Schema&, const Schema&) = default;

  private:
    std::size_t length_ = 0;
    std::uint64_t fixed_mask_ = 0;
    std::uint64_t fixed_bits_ = 0;
};

struct TargetSet {
    std::vector<BitGenome> strings;
    std::vector<std::size_t> origin; // schema index per string
};

struct Scenario {
    TargetSet targets;
    std::vector<Schema> schemata;
};

/// The three schemata of the classic three-niche scenario.
const std::vector<Schema>& scenario1_schemata();

std::size_t match_strength(const BitGenome& x, const BitGenome& y);

/// Average over targets of the best match strength in `matches`.
double set_strength(std::span<const BitGenome> matches, std::span<const BitGenome> targets);

BitGenome instantiate_schema(const Schema& schema, Rng& rng);

/// Scenario 1: three fixed schemata, 10 instances each.
/// Scenario 2: five random schemata on scenario 1's variable mask, 6 instances each.
/// Scenario 3: five random schemata with 16..48 shuffled variable bits, 10 instances each.
Scenario generate_target(int scenario, Rng& rng);

/// set_strength({genome} + partners, targets).
double cc_fitness(const BitGenome& genome, std::span<const BitGenome> partners, std::span<const BitGenome> targets);

/// Number of targets for which reps[i] is the best match (ties go to the
/// lowest position).
double contribution(std::size_t i, std::span<const BitGenome> reps, std::span<const BitGenome> targets);

/// True iff every schema's fixed bits are reproduced by some representative.
bool perfect(std::span<const BitGenome> reps, std::span<const Schema> schemata);

class StringCoverProblem final : public Problem<BitGenome> {
  public:
    StringCoverProblem(Scenario scenario, double flip_bit_rate = 1.0 / 64.0);

    Sense sense() const override { return Sense::maximize; }
    BitGenome random_genome(Rng& rng) const override;
    std::pair<BitGenome, BitGenome> crossover(const BitGenome& a, const BitGenome& b, Rng& rng) const override;
    BitGenome mutate(const BitGenome& g, Rng& rng) const override;
    double individual_fitness(const BitGenome& genome, std::span<const BitGenome> partners) const override;
    double collaboration_fitness(std::span<const BitGenome> reps) const override;
    double contribution(std::size_t i, std::span<const BitGenome> reps) const override;
    bool perfect(std::span<const BitGenome> reps) const override;
    std::string serialize(const BitGenome& g) const override { return g.to_string(); }
    void evaluate(std::span<Individual<BitGenome>> population, std::span<const BitGenome> partners) const override;

    const Scenario& scenario() const noexcept { return scenario_; }

  private:
    Scenario scenario_;
    double flip_bit_rate_;
};

} // namespace coev::string_cover
