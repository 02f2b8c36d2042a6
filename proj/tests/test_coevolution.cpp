#include <doctest.h>

#include <algorithm>
#include <bit>
#include <map>
#include <vector>

#include "coev/coevolution.hpp"
#include "coev/string_cover.hpp"

using namespace coev;

namespace {

// Fitness is the number of set bits in the OR of the group. Contributions
// come from a table keyed by genome value so tests can dictate them.
class ToyProblem final : public Problem<BitGenome> {
  public:
    std::map<std::uint64_t, double> contribution_table;
    double constant_fitness = -1.0;

    Sense sense() const override { return Sense::maximize; }
    BitGenome random_genome(Rng& rng) const override { return BitGenome(16, rng.next_u64()); }
    std::pair<BitGenome, BitGenome> crossover(const BitGenome& a, const BitGenome& b, Rng& rng) const override {
        return two_point_crossover(a, b, rng);
    }
    BitGenome mutate(const BitGenome& g, Rng& rng) const override { return flip_bit_mutation(g, 1.0 / 16.0, rng); }
    double individual_fitness(const BitGenome& genome, std::span<const BitGenome> partners) const override {
        std::vector<BitGenome> group(partners.begin(), partners.end());
        group.push_back(genome);
        return collaboration_fitness(group);
    }
    double collaboration_fitness(std::span<const BitGenome> reps) const override {
        if (constant_fitness >= 0.0) {
            return constant_fitness;
        }
        std::uint64_t acc = 0;
        for (const auto& r : reps) {
            acc |= r.word();
        }
        return std::popcount(acc);
    }
    double contribution(std::size_t i, std::span<const BitGenome> reps) const override {
        const auto it = contribution_table.find(reps[i].word());
        return it == contribution_table.end() ? 100.0 : it->second;
    }
    bool perfect(std::span<const BitGenome>) const override { return false; }
    std::string serialize(const BitGenome& g) const override { return g.to_string(); }
};

class RecordingScheduler final : public Scheduler {
  public:
    std::vector<SpeciesId> added;
    std::vector<SpeciesId> removed;

    std::vector<std::size_t> next(std::span<const SpeciesId> species) override {
        std::vector<std::size_t> all(species.size());
        for (std::size_t i = 0; i < all.size(); ++i) {
            all[i] = i;
        }
        return all;
    }
    std::optional<int> notify(const StepOutcome&) override { return std::nullopt; }
    void on_add(SpeciesId id) override { added.push_back(id); }
    void on_remove(SpeciesId id) override { removed.push_back(id); }
    bool immediate_representative_update() const override { return false; }
    std::size_t effective_improvement_length(std::size_t i, std::size_t) const override { return i; }
    std::string_view name() const override { return "recording"; }
};

CoevParams small_params() {
    CoevParams p;
    p.species_size = 10;
    return p;
}

// Gives species i the representative word `value`.
void set_rep(Ecosystem<BitGenome>& eco, std::size_t i, std::uint64_t value) {
    eco.representatives[i].genome = BitGenome(16, value);
}

} // namespace

TEST_CASE("init_ecosystem") {
    ToyProblem toy;
    const CoevParams params;
    Rng rng(1);
    const auto one = init_ecosystem(1, params, toy, rng);
    CHECK(one.species.size() == 1);
    CHECK(one.species[0].population.size() == 50);
    CHECK(one.representatives.size() == 1);
    CHECK_FALSE(one.representatives[0].fitness.has_value());

    const auto three = init_ecosystem(3, params, toy, rng);
    REQUIRE(three.representatives.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& pop = three.species[i].population;
        CHECK(std::any_of(pop.begin(), pop.end(),
                          [&](const auto& ind) { return ind.genome == three.representatives[i].genome; }));
        CHECK(three.species[i].id == i);
    }
    CHECK_THROWS_AS(init_ecosystem(0, params, toy, rng), std::invalid_argument);

    Rng r1(9);
    Rng r2(9);
    const auto e1 = init_ecosystem(2, params, toy, r1);
    const auto e2 = init_ecosystem(2, params, toy, r2);
    CHECK(e1.representative_genomes() == e2.representative_genomes());
}

TEST_CASE("step_species") {
    ToyProblem toy;
    const CoevParams params;
    Rng rng(2);
    auto eco = init_ecosystem(2, params, toy, rng);
    CHECK(step_species(eco, 0, toy, params, rng) == 50);
    for (const auto& ind : eco.species[0].population) {
        CHECK(ind.fitness == toy.individual_fitness(ind.genome, std::vector<BitGenome>{eco.representatives[1].genome}));
    }
    CHECK_THROWS_AS(step_species(eco, 5, toy, params, rng), std::out_of_range);

    Rng a(3);
    Rng b(3);
    auto e1 = init_ecosystem(1, params, toy, a);
    auto e2 = init_ecosystem(1, params, toy, b);
    for (int g = 0; g < 3; ++g) {
        step_species(e1, 0, toy, params, a);
        step_species(e2, 0, toy, params, b);
    }
    for (std::size_t j = 0; j < 50; ++j) {
        CHECK(e1.species[0].population[j].genome == e2.species[0].population[j].genome);
    }
}

TEST_CASE("update_representative") {
    ToyProblem toy;
    const CoevParams params = small_params();
    Rng rng(4);
    auto eco = init_ecosystem(1, params, toy, rng);
    CHECK_THROWS_AS(update_representative(eco, 0, Sense::maximize), IllegalState);

    auto& pop = eco.species[0].population;
    for (std::size_t j = 0; j < pop.size(); ++j) {
        pop[j].fitness = static_cast<double>(j % 4);
    }
    CHECK(update_representative(eco, 0, Sense::maximize));
    CHECK(eco.representatives[0].fitness == 3.0);
    CHECK(eco.representatives[0].genome == pop[3].genome);
    CHECK_FALSE(update_representative(eco, 0, Sense::maximize));

    pop[7].fitness = 5.0;
    CHECK(update_representative(eco, 0, Sense::maximize));

    for (std::size_t j = 0; j < pop.size(); ++j) {
        pop[j].fitness = 10.0 - static_cast<double>(j);
    }
    eco.representatives[0].fitness = 2.0;
    CHECK(update_representative(eco, 0, Sense::minimize));
    CHECK(eco.representatives[0].fitness == 1.0);

    SUBCASE("constant fitness never degrades the representative") {
        ToyProblem flat;
        flat.constant_fitness = 7.0;
        Rng r(5);
        auto e = init_ecosystem(1, params, flat, r);
        double best = -1.0;
        for (int g = 0; g < 10; ++g) {
            step_species(e, 0, flat, params, r);
            update_representative(e, 0, Sense::maximize);
            CHECK(*e.representatives[0].fitness >= best);
            best = *e.representatives[0].fitness;
        }
    }
}

TEST_CASE("check_stagnation") {
    const std::vector<double> rising{10.0, 10.6};
    const std::vector<double> flat{10.0, 10.2};
    CHECK_FALSE(check_stagnation(rising, 0, 1, 0.5, Sense::maximize));
    CHECK(check_stagnation(flat, 0, 1, 0.5, Sense::maximize));

    // Minimising: a drop is an improvement.
    const std::vector<double> falling{10.0, 9.0};
    CHECK_FALSE(check_stagnation(falling, 0, 1, 0.5, Sense::minimize));
    CHECK(check_stagnation(falling, 0, 1, 0.5, Sense::maximize));

    // Only three steps since a change at origin 4; window of 5 not yet full.
    const std::vector<double> h(8, 1.0);
    CHECK_FALSE(check_stagnation(h, 4, 5, 0.5, Sense::maximize));
    const std::vector<double> longer(10, 1.0);
    CHECK(check_stagnation(longer, 4, 5, 0.5, Sense::maximize));
    CHECK_THROWS_AS(check_stagnation(h, 0, 0, 0.5, Sense::maximize), std::invalid_argument);
}

TEST_CASE("prune_and_replace") {
    ToyProblem toy;
    const CoevParams params = small_params();
    Rng rng(6);

    SUBCASE("contributions 6 and 4 with threshold 5") {
        auto eco = init_ecosystem(2, params, toy, rng);
        set_rep(eco, 0, 0x6);
        set_rep(eco, 1, 0x4);
        toy.contribution_table = {{0x6, 6.0}, {0x4, 4.0}};
        RecordingScheduler sched;
        const auto removed = prune_and_replace(eco, toy, 5.0, params, rng, sched, 10);
        CHECK(removed == std::vector<SpeciesId>{1});
        CHECK(sched.removed == std::vector<SpeciesId>{1});
        CHECK(sched.added == std::vector<SpeciesId>{2});
        CHECK(eco.species_ids() == std::vector<SpeciesId>{0, 2});
        CHECK(eco.representatives.size() == 2);
        CHECK(eco.last_structural_change == 10);
    }
    SUBCASE("all above threshold") {
        auto eco = init_ecosystem(2, params, toy, rng);
        RecordingScheduler sched;
        CHECK(prune_and_replace(eco, toy, 5.0, params, rng, sched, 3).empty());
        CHECK(eco.species.size() == 3);
    }
    SUBCASE("single species is retained") {
        auto eco = init_ecosystem(1, params, toy, rng);
        set_rep(eco, 0, 0x1);
        toy.contribution_table = {{0x1, 0.0}};
        RecordingScheduler sched;
        CHECK(prune_and_replace(eco, toy, 5.0, params, rng, sched, 3).empty());
        CHECK(eco.species.size() == 2);
    }
    SUBCASE("removal is newest first with recomputation") {
        auto eco = init_ecosystem(3, params, toy, rng);
        set_rep(eco, 0, 0x1);
        set_rep(eco, 1, 0x2);
        set_rep(eco, 2, 0x3);
        toy.contribution_table = {{0x1, 0.0}, {0x2, 0.0}, {0x3, 0.0}};
        RecordingScheduler sched;
        const auto removed = prune_and_replace(eco, toy, 5.0, params, rng, sched, 3);
        CHECK(removed == std::vector<SpeciesId>{2, 1});
        CHECK(eco.species_ids() == std::vector<SpeciesId>{0, 3});
    }
}

TEST_CASE("run invariants on the string benchmark") {
    Rng scenario_rng(11);
    const string_cover::StringCoverProblem problem(string_cover::generate_target(2, scenario_rng));
    const auto& targets = problem.scenario().targets.strings;
    CoevParams params;
    params.max_steps = 150;

    for (const bool bandit : {false, true}) {
        CAPTURE(bandit);
        RoundRobinScheduler rr;
        BanditScheduler mab(DynamicBandit{}, Rng(5));
        Scheduler& sched = bandit ? static_cast<Scheduler&>(mab) : static_cast<Scheduler&>(rr);
        Rng rng(12);
        const RunLog log = run(problem, params, sched, rng);
        REQUIRE_FALSE(log.steps.empty());
        SpeciesId highest = 0;
        for (const auto& rec : log.steps) {
            CHECK(rec.representatives.size() == rec.species.size());
            CHECK(rec.contributions.size() == rec.species.size());
            CHECK(std::is_sorted(rec.species.begin(), rec.species.end()));
            CHECK(std::is_sorted(rec.removed.rbegin(), rec.removed.rend()));
            CHECK(rec.chosen.size() == (bandit ? 1U : rec.species.size()));
            std::vector<BitGenome> reps;
            for (const auto& s : rec.representatives) {
                reps.push_back(BitGenome::from_string(s));
            }
            CHECK(rec.collaboration_fitness == string_cover::set_strength(reps, targets));
            for (const auto id : rec.added) {
                CHECK(id > highest);
                highest = id;
            }
        }
        CHECK(log.final_species >= 1);
    }
}

TEST_CASE("single species round robin behaves as a plain GA") {
    Rng scenario_rng(13);
    const string_cover::StringCoverProblem problem(string_cover::generate_target(1, scenario_rng));
    CoevParams params;
    params.max_steps = 60;
    params.add_interval = 1000; // scheduled regime, so no species is ever added
    params.max_species = 1;
    RoundRobinScheduler rr;
    Rng rng(14);
    const RunLog log = run(problem, params, rr, rng);
    REQUIRE(log.steps.size() == 60);
    double best_so_far = 0.0;
    for (const auto& rec : log.steps) {
        CHECK(rec.species.size() == 1);
        CHECK(rec.evaluations == 50 * rec.step);
        best_so_far = std::max(best_so_far, rec.collaboration_fitness);
    }
    CHECK(best_so_far > log.steps.front().collaboration_fitness);
}

TEST_CASE("zero budget") {
    ToyProblem toy;
    CoevParams params;
    params.max_steps = 0;
    RoundRobinScheduler rr;
    Rng rng(1);
    const RunLog log = run<BitGenome>(toy, params, rr, rng);
    CHECK(log.steps.empty());
    CHECK_FALSE(log.success());
}

TEST_CASE("bandit scheduler rewards collaboration progress") {
    BanditScheduler mab(DynamicBandit{}, Rng(1));
    mab.on_add(4);
    mab.on_add(7);
    const std::vector<SpeciesId> ids{4, 7};
    const auto first = mab.next(ids);
    REQUIRE(first.size() == 1);
    CHECK(mab.notify(StepOutcome{ids[first[0]], 10.0, 11.0, Sense::maximize}) == 1);
    const auto second = mab.next(ids);
    CHECK(second[0] != first[0]);
    CHECK(mab.notify(StepOutcome{ids[second[0]], 11.0, 11.0, Sense::maximize}) == 0);
    CHECK(mab.effective_improvement_length(5, 3) == 15);
    mab.on_remove(4);
    CHECK(mab.bandit().arms().size() == 1);

    RoundRobinScheduler rr;
    CHECK(rr.next(ids) == std::vector<std::size_t>{0, 1});
    CHECK(rr.effective_improvement_length(5, 3) == 5);
}
