#pragma once

/// Cooperative coevolution ecosystem: species lifecycle, representative
/// management, stagnation handling and the outer loop.
///
/// The engine is generic over the genome type; the problem supplies variation
/// and scoring, and a Scheduler decides which species evolve at each step.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coev/errors.hpp"
#include "coev/genome.hpp"
#include "coev/operators.hpp"
#include "coev/problem.hpp"
#include "coev/rng.hpp"
#include "coev/scheduler.hpp"

namespace coev {

struct CoevParams {
    std::size_t species_size = 50;
    std::size_t initial_species = 1;
    double crossover_rate = 0.6;
    double mutation_rate = 1.0;
    std::size_t tournament_size = 3;
    std::size_t improvement_length = 5;
    double improvement_threshold = 0.5;
    double extinction_threshold = 5.0;
    std::size_t max_steps = 500;
    /// Non-zero selects the scheduled-addition regime: a species is added every
    /// `add_interval` steps until `max_species` exist, and the stagnation
    /// lifecycle (extinction and addition) is disabled.
    std::size_t add_interval = 0;
    std::size_t max_species = 0;

    void validate() const {
        if (species_size < 2) {
            throw std::invalid_argument("CoevParams: species_size must be >= 2");
        }
        if (initial_species < 1) {
            throw std::invalid_argument("CoevParams: initial_species must be >= 1");
        }
        if (improvement_length < 1) {
            throw std::invalid_argument("CoevParams: improvement_length must be >= 1");
        }
        if (tournament_size < 1) {
            throw std::invalid_argument("CoevParams: tournament_size must be >= 1");
        }
        if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0) || !(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
            throw std::invalid_argument("CoevParams: variation rates must lie in [0, 1]");
        }
        if (add_interval > 0 && max_species < initial_species) {
            throw std::invalid_argument("CoevParams: max_species must be >= initial_species");
        }
    }
};

template <class G>
struct Species {
    SpeciesId id;
    std::size_t creation_step;
    std::vector<Individual<G>> population;
};

template <class G>
struct Representative {
    G genome;
    std::optional<double> fitness;
};

template <class G>
struct Ecosystem {
    std::vector<Species<G>> species;
    std::vector<Representative<G>> representatives;
    /// history[0] is the collaboration fitness at initialisation, history[t]
    /// the value after step t.
    std::vector<double> history;
    /// Step of the most recent species addition or removal.
    std::optional<std::size_t> last_structural_change;
    /// First history index usable as a stagnation baseline.
    std::size_t stagnation_origin = 0;
    SpeciesId next_id = 0;

    std::vector<G> representative_genomes() const {
        std::vector<G> out;
        out.reserve(representatives.size());
        for (const auto& r : representatives) {
            out.push_back(r.genome);
        }
        return out;
    }

    std::vector<SpeciesId> species_ids() const {
        std::vector<SpeciesId> ids;
        ids.reserve(species.size());
        for (const auto& s : species) {
            ids.push_back(s.id);
        }
        return ids;
    }
};

struct StepRecord {
    std::size_t step = 0;
    std::uint64_t evaluations = 0; // cumulative
    std::vector<SpeciesId> species;  // live ids, ecosystem order
    std::vector<SpeciesId> chosen;
    std::optional<int> reward;
    double collaboration_fitness = 0.0;
    std::vector<double> contributions;
    std::vector<std::string> representatives;
    std::vector<SpeciesId> added;
    std::vector<SpeciesId> removed;
};

struct RunLog {
    std::vector<StepRecord> steps;
    std::optional<std::size_t> first_hit_step;
    std::uint64_t evaluations = 0;
    std::size_t final_species = 0;

    bool success() const noexcept { return first_hit_step.has_value(); }
};

using StepObserver = std::function<void(const StepRecord&)>;

namespace detail {

template <class G>
Species<G> random_species(SpeciesId id, std::size_t step, const CoevParams& params, const Problem<G>& problem,
                          Rng& rng) {
    Species<G> s{id, step, {}};
    s.population.reserve(params.species_size);
    for (std::size_t n = 0; n < params.species_size; ++n) {
        s.population.push_back(Individual<G>{problem.random_genome(rng), std::nullopt});
    }
    return s;
}

template <class G>
std::vector<G> partners_of(const Ecosystem<G>& eco, std::size_t i) {
    std::vector<G> partners;
    partners.reserve(eco.representatives.size());
    for (std::size_t j = 0; j < eco.representatives.size(); ++j) {
        if (j != i) {
            partners.push_back(eco.representatives[j].genome);
        }
    }
    return partners;
}

} // namespace detail

/// Appends a random species and a uniformly drawn, unevaluated representative.
template <class G>
SpeciesId add_species(Ecosystem<G>& eco, const Problem<G>& problem, const CoevParams& params, Rng& rng,
                      std::size_t step) {
    const SpeciesId id = eco.next_id++;
    eco.species.push_back(detail::random_species(id, step, params, problem, rng));
    const auto& pop = eco.species.back().population;
    eco.representatives.push_back(Representative<G>{pop[rng.uniform_index(pop.size())].genome, std::nullopt});
    return id;
}

template <class G>
Ecosystem<G> init_ecosystem(std::size_t n_species, const CoevParams& params, const Problem<G>& problem, Rng& rng) {
    if (n_species < 1) {
        throw std::invalid_argument("init_ecosystem: at least one species required");
    }
    Ecosystem<G> eco;
    for (std::size_t i = 0; i < n_species; ++i) {
        add_species(eco, problem, params, rng, 0);
    }
    return eco;
}

/// One generation of species i: tournament parents (skipped while the
/// population is still unevaluated), crossover on consecutive pairs, mutation,
/// then every offspring is scored against the other representatives and
/// replaces the population. Returns the number of evaluations.
template <class G>
std::size_t step_species(Ecosystem<G>& eco, std::size_t i, const Problem<G>& problem, const CoevParams& params,
                         Rng& rng) {
    if (i >= eco.species.size()) {
        throw std::out_of_range("step_species: species index out of range");
    }
    auto& pop = eco.species[i].population;
    const std::size_t evaluated = static_cast<std::size_t>(
        std::count_if(pop.begin(), pop.end(), [](const Individual<G>& ind) { return ind.evaluated(); }));

    std::vector<Individual<G>> offspring;
    if (evaluated == pop.size()) {
        offspring = tournament_select<G>(pop, params.tournament_size, params.species_size, problem.sense(), rng);
    } else if (evaluated == 0) {
        offspring = pop;
    } else {
        throw IllegalState("step_species: partially evaluated population");
    }

    for (std::size_t j = 0; j + 1 < offspring.size(); j += 2) {
        if (rng.bernoulli(params.crossover_rate)) {
            auto [a, b] = problem.crossover(offspring[j].genome, offspring[j + 1].genome, rng);
            offspring[j].genome = std::move(a);
            offspring[j + 1].genome = std::move(b);
        }
    }
    for (auto& ind : offspring) {
        if (rng.bernoulli(params.mutation_rate)) {
            ind.genome = problem.mutate(ind.genome, rng);
        }
        ind.fitness.reset();
    }

    const std::vector<G> partners = detail::partners_of(eco, i);
    problem.evaluate(std::span<Individual<G>>(offspring), std::span<const G>(partners));
    pop = std::move(offspring);
    return pop.size();
}

/// Replaces representative i with the best member of species i (earliest on
/// ties). Returns whether the recorded fitness strictly improved; a
/// representative without a recorded fitness always counts as improved.
template <class G>
bool update_representative(Ecosystem<G>& eco, std::size_t i, Sense sense) {
    const auto& pop = eco.species.at(i).population;
    if (pop.empty() || !std::all_of(pop.begin(), pop.end(), [](const Individual<G>& ind) { return ind.evaluated(); })) {
        throw IllegalState("update_representative: species is not fully evaluated");
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < pop.size(); ++j) {
        if (strictly_better(*pop[j].fitness, *pop[best].fitness, sense)) {
            best = j;
        }
    }
    auto& rep = eco.representatives[i];
    const bool changed = !rep.fitness || strictly_better(*pop[best].fitness, *rep.fitness, sense);
    rep.genome = pop[best].genome;
    rep.fitness = pop[best].fitness;
    return changed;
}

/// True iff at least `effective_length` steps separate the newest history
/// entry from `origin` and the improvement over the last `effective_length`
/// steps, measured in the improving direction, is below `threshold`.
inline bool check_stagnation(std::span<const double> history, std::size_t origin, std::size_t effective_length,
                             double threshold, Sense sense) {
    if (effective_length < 1) {
        throw std::invalid_argument("check_stagnation: effective length must be >= 1");
    }
    if (history.empty()) {
        return false;
    }
    const std::size_t now = history.size() - 1;
    if (now < origin + effective_length) {
        return false;
    }
    const double then = history[now - effective_length];
    const double improvement = sense == Sense::maximize ? history[now] - then : then - history[now];
    return improvement < threshold;
}

template <class G>
bool check_stagnation(const Ecosystem<G>& eco, std::size_t effective_length, double threshold, Sense sense) {
    return check_stagnation(eco.history, eco.stagnation_origin, effective_length, threshold, sense);
}

/// Extinction and renewal after stagnation. The newest species whose
/// contribution is below `extinction_threshold` is removed, contributions are
/// recomputed, and so on until none qualifies or one species remains. One new
/// random species is then added.
template <class G>
std::vector<SpeciesId> prune_and_replace(Ecosystem<G>& eco, const Problem<G>& problem, double extinction_threshold,
                                         const CoevParams& params, Rng& rng, Scheduler& scheduler, std::size_t step) {
    std::vector<SpeciesId> removed;
    while (eco.species.size() > 1) {
        const std::vector<G> reps = eco.representative_genomes();
        std::optional<std::size_t> victim;
        for (std::size_t i = 0; i < eco.species.size(); ++i) {
            if (problem.contribution(i, reps) < extinction_threshold &&
                (!victim || eco.species[i].id > eco.species[*victim].id)) {
                victim = i;
            }
        }
        if (!victim) {
            break;
        }
        const SpeciesId id = eco.species[*victim].id;
        eco.species.erase(eco.species.begin() + static_cast<std::ptrdiff_t>(*victim));
        eco.representatives.erase(eco.representatives.begin() + static_cast<std::ptrdiff_t>(*victim));
        scheduler.on_remove(id);
        removed.push_back(id);
    }
    scheduler.on_add(add_species(eco, problem, params, rng, step));
    eco.last_structural_change = step;
    return removed;
}

/// The outer loop. Runs until the problem's perfect predicate holds or
/// `params.max_steps` steps have elapsed.
template <class G>
RunLog run(const Problem<G>& problem, const CoevParams& params, Scheduler& scheduler, Rng& rng,
           const StepObserver& observer = {}) {
    params.validate();
    RunLog log;
    if (params.max_steps == 0) {
        return log;
    }
    const Sense sense = problem.sense();
    Ecosystem<G> eco = init_ecosystem(params.initial_species, params, problem, rng);
    for (const auto& s : eco.species) {
        scheduler.on_add(s.id);
    }

    std::vector<G> reps = eco.representative_genomes();
    double collaboration = problem.collaboration_fitness(reps);
    eco.history.push_back(collaboration);

    for (std::size_t step = 1; step <= params.max_steps; ++step) {
        StepRecord rec;
        rec.step = step;
        rec.species = eco.species_ids();

        const std::vector<std::size_t> chosen = scheduler.next(rec.species);
        for (const std::size_t i : chosen) {
            rec.chosen.push_back(eco.species.at(i).id);
        }
        const double previous = collaboration;
        for (const std::size_t i : chosen) {
            log.evaluations += step_species(eco, i, problem, params, rng);
            if (scheduler.immediate_representative_update()) {
                update_representative(eco, i, sense);
            }
        }
        if (!scheduler.immediate_representative_update()) {
            for (const std::size_t i : chosen) {
                update_representative(eco, i, sense);
            }
        }

        reps = eco.representative_genomes();
        collaboration = problem.collaboration_fitness(reps);
        eco.history.push_back(collaboration);
        for (const SpeciesId id : rec.chosen) {
            if (auto reward = scheduler.notify(StepOutcome{id, previous, collaboration, sense})) {
                rec.reward = reward;
            }
        }

        rec.evaluations = log.evaluations;
        rec.collaboration_fitness = collaboration;
        rec.contributions.reserve(reps.size());
        rec.representatives.reserve(reps.size());
        for (std::size_t i = 0; i < reps.size(); ++i) {
            rec.contributions.push_back(problem.contribution(i, reps));
            rec.representatives.push_back(problem.serialize(reps[i]));
        }

        const bool hit = problem.perfect(reps);
        if (hit) {
            log.first_hit_step = step;
        } else if (params.add_interval > 0) {
            if (step % params.add_interval == 0 && eco.species.size() < params.max_species) {
                const SpeciesId id = add_species(eco, problem, params, rng, step);
                scheduler.on_add(id);
                eco.last_structural_change = step;
                rec.added.push_back(id);
            }
        } else {
            const std::size_t effective =
                scheduler.effective_improvement_length(params.improvement_length, eco.species.size());
            if (check_stagnation(eco, effective, params.improvement_threshold, sense)) {
                rec.removed =
                    prune_and_replace(eco, problem, params.extinction_threshold, params, rng, scheduler, step);
                rec.added.push_back(eco.species.back().id);
            }
        }
        if (!rec.added.empty() || !rec.removed.empty()) {
            eco.stagnation_origin = eco.history.size();
            collaboration = problem.collaboration_fitness(eco.representative_genomes());
        }

        if (observer) {
            observer(rec);
        }
        log.steps.push_back(std::move(rec));
        if (hit) {
            break;
        }
    }
    log.final_species = eco.species.size();
    return log;
}

} // namespace coev
