#include "coev/string_cover.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "coev/operators.hpp"

namespace coev::string_cover {

namespace {

constexpr std::string_view kScenario1[] = {
    "1##1###1###11111##1##1111#1##1###1#1111##111111##1#11#1#11######",
    "1##1###1###11111##1##1000#0##0###0#0000##000000##0#00#0#00######",
    "0##0###0###00000##0##0000#0##0###0#0000##001111##1#11#1#11######",
};

// Writes the low `count` bits of `value`, most significant first, into the
// fixed positions listed in `positions`.
std::uint64_t spread_bits(std::uint64_t value, const std::vector<std::size_t>& positions) {
    std::uint64_t bits = 0;
    const std::size_t count = positions.size();
    for (std::size_t k = 0; k < count; ++k) {
        if ((value >> (count - 1 - k)) & 1U) {
            bits |= std::uint64_t{1} << positions[k];
        }
    }
    return bits;
}

std::vector<std::size_t> set_positions(std::uint64_t mask, std::size_t length) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < length; ++i) {
        if ((mask >> i) & 1U) {
            out.push_back(i);
        }
    }
    return out;
}

void require_targets(std::span<const BitGenome> targets) {
    if (targets.empty()) {
        throw std::invalid_argument("string_cover: empty target set");
    }
}

} // namespace

Schema::Schema(std::size_t length, std::uint64_t fixed_mask, std::uint64_t fixed_bits)
    : length_(length),
      fixed_mask_(fixed_mask & BitGenome::mask_for(length)),
      fixed_bits_(fixed_bits & fixed_mask & BitGenome::mask_for(length)) {
    if (length > BitGenome::max_length) {
        throw std::invalid_argument("Schema: length exceeds 64");
    }
}

Schema Schema::parse(std::string_view text) {
    if (text.size() > BitGenome::max_length) {
        throw std::invalid_argument("Schema: length exceeds 64");
    }
    std::uint64_t mask = 0;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const std::uint64_t bit = std::uint64_t{1} << i;
        switch (text[i]) {
        case '#':
            break;
        case '1':
            bits |= bit;
            [[fallthrough]];
        case '0':
            mask |= bit;
            break;
        default:
            throw std::invalid_argument("Schema: symbol outside {0,1,#} at position " + std::to_string(i));
        }
    }
    return Schema(text.size(), mask, bits);
}

std::size_t Schema::variable_count() const noexcept {
    return length_ - static_cast<std::size_t>(std::popcount(fixed_mask_));
}

std::string Schema::to_string() const {
    std::string out(length_, '#');
    for (std::size_t i = 0; i < length_; ++i) {
        if ((fixed_mask_ >> i) & 1U) {
            out[i] = ((fixed_bits_ >> i) & 1U) ? '1' : '0';
        }
    }
    return out;
}

const std::vector<Schema>& scenario1_schemata() {
    static const std::vector<Schema> schemata = [] {
        std::vector<Schema> out;
        for (const auto text : kScenario1) {
            out.push_back(Schema::parse(text));
        }
        for (const auto& s : out) {
            if (s.size() != string_length || s.variable_count() != 32 || s.fixed_mask() != out.front().fixed_mask()) {
                throw std::logic_error("scenario 1 schemata do not share a 32-bit variable mask");
            }
        }
        return out;
    }();
    return schemata;
}

std::size_t match_strength(const BitGenome& x, const BitGenome& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("match_strength: length mismatch");
    }
    return x.size() - hamming_distance(x, y);
}

double set_strength(std::span<const BitGenome> matches, std::span<const BitGenome> targets) {
    if (matches.empty()) {
        throw std::invalid_argument("set_strength: empty match set");
    }
    require_targets(targets);
    std::size_t total = 0;
    for (const auto& t : targets) {
        std::size_t best = 0;
        for (const auto& m : matches) {
            best = std::max(best, match_strength(m, t));
        }
        total += best;
    }
    return static_cast<double>(total) / static_cast<double>(targets.size());
}

BitGenome instantiate_schema(const Schema& schema, Rng& rng) {
    BitGenome g(schema.size(), schema.fixed_bits());
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (!((schema.fixed_mask() >> i) & 1U)) {
            g.set(i, rng.bernoulli(0.5));
        }
    }
    return g;
}

Scenario generate_target(int scenario, Rng& rng) {
    Scenario out;
    std::size_t per_schema = 0;
    switch (scenario) {
    case 1:
        out.schemata = scenario1_schemata();
        per_schema = 10;
        break;
    case 2: {
        const std::uint64_t mask = scenario1_schemata().front().fixed_mask();
        const auto positions = set_positions(mask, string_length);
        for (int k = 0; k < 5; ++k) {
            const std::uint64_t value = rng.uniform_between(0, (std::uint64_t{1} << 32) - 1);
            out.schemata.emplace_back(string_length, mask, spread_bits(value, positions));
        }
        per_schema = 6;
        break;
    }
    case 3:
        for (int k = 0; k < 5; ++k) {
            const auto variable = static_cast<std::size_t>(rng.uniform_between(16, 48));
            const std::size_t fixed = string_length - variable;
            const std::uint64_t value = rng.uniform_between(0, BitGenome::mask_for(fixed));
            // Layout before shuffling: fixed bits (most significant first), then '#'.
            std::string layout(string_length, '#');
            for (std::size_t i = 0; i < fixed; ++i) {
                layout[i] = ((value >> (fixed - 1 - i)) & 1U) ? '1' : '0';
            }
            for (std::size_t i = string_length - 1; i > 0; --i) {
                std::swap(layout[i], layout[static_cast<std::size_t>(rng.uniform_index(i + 1))]);
            }
            out.schemata.push_back(Schema::parse(layout));
        }
        per_schema = 10;
        break;
    default:
        throw std::invalid_argument("generate_target: scenario must be 1, 2 or 3");
    }
    for (std::size_t s = 0; s < out.schemata.size(); ++s) {
        for (std::size_t n = 0; n < per_schema; ++n) {
            out.targets.strings.push_back(instantiate_schema(out.schemata[s], rng));
            out.targets.origin.push_back(s);
        }
    }
    return out;
}

double cc_fitness(const BitGenome& genome, std::span<const BitGenome> partners, std::span<const BitGenome> targets) {
    std::vector<BitGenome> group;
    group.reserve(partners.size() + 1);
    group.push_back(genome);
    group.insert(group.end(), partners.begin(), partners.end());
    return set_strength(group, targets);
}

double contribution(std::size_t i, std::span<const BitGenome> reps, std::span<const BitGenome> targets) {
    if (i >= reps.size()) {
        throw std::out_of_range("contribution: index out of range");
    }
    std::size_t wins = 0;
    for (const auto& t : targets) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < reps.size(); ++j) {
            if (match_strength(reps[j], t) > match_strength(reps[best], t)) {
                best = j;
            }
        }
        wins += best == i ? 1 : 0;
    }
    return static_cast<double>(wins);
}

bool perfect(std::span<const BitGenome> reps, std::span<const Schema> schemata) {
    return std::all_of(schemata.begin(), schemata.end(), [&](const Schema& s) {
        return std::any_of(reps.begin(), reps.end(), [&](const BitGenome& r) { return s.covered_by(r); });
    });
}

StringCoverProblem::StringCoverProblem(Scenario scenario, double flip_bit_rate)
    : scenario_(std::move(scenario)), flip_bit_rate_(flip_bit_rate) {
    require_targets(scenario_.targets.strings);
    if (!(flip_bit_rate_ >= 0.0 && flip_bit_rate_ <= 1.0)) {
        throw std::invalid_argument("StringCoverProblem: flip bit rate outside [0, 1]");
    }
}

BitGenome StringCoverProblem::random_genome(Rng& rng) const {
    return BitGenome(string_length, rng.next_u64());
}

std::pair<BitGenome, BitGenome> StringCoverProblem::crossover(const BitGenome& a, const BitGenome& b,
                                                              Rng& rng) const {
    return two_point_crossover(a, b, rng);
}

BitGenome StringCoverProblem::mutate(const BitGenome& g, Rng& rng) const {
    return flip_bit_mutation(g, flip_bit_rate_, rng);
}

double StringCoverProblem::individual_fitness(const BitGenome& genome, std::span<const BitGenome> partners) const {
    return cc_fitness(genome, partners, scenario_.targets.strings);
}

double StringCoverProblem::collaboration_fitness(std::span<const BitGenome> reps) const {
    return set_strength(reps, scenario_.targets.strings);
}

double StringCoverProblem::contribution(std::size_t i, std::span<const BitGenome> reps) const {
    return string_cover::contribution(i, reps, scenario_.targets.strings);
}

bool StringCoverProblem::perfect(std::span<const BitGenome> reps) const {
    return string_cover::perfect(reps, scenario_.schemata);
}

void StringCoverProblem::evaluate(std::span<Individual<BitGenome>> population,
                                  std::span<const BitGenome> partners) const {
    const auto& targets = scenario_.targets.strings;
    std::vector<std::size_t> partner_best(targets.size(), 0);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        for (const auto& p : partners) {
            partner_best[t] = std::max(partner_best[t], match_strength(p, targets[t]));
        }
    }
    for (auto& ind : population) {
        std::size_t total = 0;
        for (std::size_t t = 0; t < targets.size(); ++t) {
            total += std::max(partner_best[t], match_strength(ind.genome, targets[t]));
        }
        ind.fitness = static_cast<double>(total) / static_cast<double>(targets.size());
    }
}

} // namespace coev::string_cover
