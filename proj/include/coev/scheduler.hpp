#pragma once

/// Species schedulers: the seam between the classic algorithm, which evolves
/// every species each step, and the bandit-driven variant, which evolves one.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "coev/bandit.hpp"
#include "coev/genome.hpp"
#include "coev/rng.hpp"

namespace coev {

using SpeciesId = ArmId;

/// Collaboration fitness before and after one species was stepped.
struct StepOutcome {
    SpeciesId species;
    double previous;
    double current;
    Sense sense;
};

class Scheduler {
  public:
    virtual ~Scheduler() = default;

    /// Positions (into `species`, in ecosystem order) to evolve this step.
    virtual std::vector<std::size_t> next(std::span<const SpeciesId> species) = 0;

    /// Reports the outcome of a step; returns the reward issued, if any.
    virtual std::optional<int> notify(const StepOutcome& outcome) = 0;

    virtual void on_add(SpeciesId id) = 0;
    virtual void on_remove(SpeciesId id) = 0;

    /// Whether a stepped species' representative is replaced right away
    /// rather than after every scheduled species has been stepped.
    virtual bool immediate_representative_update() const = 0;

    /// Stagnation window for the current number of species.
    virtual std::size_t effective_improvement_length(std::size_t improvement_length,
                                                     std::size_t species_count) const = 0;

    virtual std::string_view name() const = 0;
};

/// Classic cooperative coevolution: every species, every step.
class RoundRobinScheduler final : public Scheduler {
  public:
    std::vector<std::size_t> next(std::span<const SpeciesId> species) override;
    std::optional<int> notify(const StepOutcome&) override { return std::nullopt; }
    void on_add(SpeciesId) override {}
    void on_remove(SpeciesId) override {}
    bool immediate_representative_update() const override { return false; }
    std::size_t effective_improvement_length(std::size_t improvement_length, std::size_t) const override {
        return improvement_length;
    }
    std::string_view name() const override { return "ccea"; }
};

/// One species per step, chosen by a dynamic bandit rewarded with binary
/// improvement of the collaboration fitness.
class BanditScheduler final : public Scheduler {
  public:
    BanditScheduler(DynamicBandit bandit, Rng rng) : bandit_(std::move(bandit)), rng_(std::move(rng)) {}

    std::vector<std::size_t> next(std::span<const SpeciesId> species) override;
    std::optional<int> notify(const StepOutcome& outcome) override;
    void on_add(SpeciesId id) override { bandit_.add_arm(id); }
    void on_remove(SpeciesId id) override { bandit_.remove_arm(id); }
    bool immediate_representative_update() const override { return true; }
    std::size_t effective_improvement_length(std::size_t improvement_length,
                                             std::size_t species_count) const override {
        return improvement_length * species_count;
    }
    std::string_view name() const override { return "ccea-mab"; }

    const DynamicBandit& bandit() const noexcept { return bandit_; }

  private:
    DynamicBandit bandit_;
    Rng rng_;
};

} // namespace coev
