#include "coev/scheduler.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "coev/errors.hpp"

namespace coev {

std::vector<std::size_t> RoundRobinScheduler::next(std::span<const SpeciesId> species) {
    std::vector<std::size_t> all(species.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
}

std::vector<std::size_t> BanditScheduler::next(std::span<const SpeciesId> species) {
    if (bandit_.arms().size() != species.size()) {
        throw IllegalState("BanditScheduler: arms out of sync with species");
    }
    const ArmId arm = bandit_.select_arm(rng_);
    const auto it = std::find(species.begin(), species.end(), arm);
    if (it == species.end()) {
        throw IllegalState("BanditScheduler: selected arm is not a live species");
    }
    return {static_cast<std::size_t>(it - species.begin())};
}

std::optional<int> BanditScheduler::notify(const StepOutcome& outcome) {
    const int reward = binary_reward(outcome.previous, outcome.current, outcome.sense);
    bandit_.record_reward(outcome.species, reward);
    return reward;
}

} // namespace coev
