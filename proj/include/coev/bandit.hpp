#pragma once

/// Dynamic multi-armed bandit with a sliding reward window, rank-based
/// (area-under-curve) credit assignment and UCB arm selection. Arms can be
/// added and removed while the bandit runs.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "coev/genome.hpp"
#include "coev/rng.hpp"

namespace coev {

using ArmId = std::uint64_t;

struct RewardEntry {
    int reward; // 0 or 1
    ArmId arm;

    friend bool operator==(const RewardEntry&, const RewardEntry&) = default;
};

/// Area-under-curve credit of `arm` over `window` (newest entry first).
///
/// Entries are ranked by reward (best first), ties by age (newer first). Rank r
/// (1-based) carries weight d^(r-1) * (|w| - (r-1)). Walking the ranks, entries
/// of `arm` raise the curve height y; entries of any other arm add y * weight.
double auc_credit(ArmId arm, std::span<const RewardEntry> window, double decay);

/// 1 iff `current` is strictly better than `previous`.
int binary_reward(double previous, double current, Sense sense);

class DynamicBandit {
  public:
    /// Table defaults: W = 50, C = 1.0, d = 1.0.
    DynamicBandit(std::size_t window_size = 50, double exploration = 1.0, double decay = 1.0);

    /// Appends an untried arm (n = 0, q = 0). The window is untouched.
    void add_arm(ArmId arm);

    /// Deletes the arm and purges its window entries; counts and credits of
    /// the remaining arms are recomputed.
    void remove_arm(ArmId arm);

    /// Uniformly random untried arm if one exists; otherwise the UCB argmax,
    /// ties to the lowest arm position.
    ArmId select_arm(Rng& rng) const;

    /// Prepends (reward, arm), truncates the window to W, then recomputes
    /// every count and credit from the window.
    void record_reward(ArmId arm, int reward);

    /// q_i + C * sqrt(2 ln(sum n) / n_i) for an arm position with n_i > 0.
    double ucb_score(std::size_t position) const;

    bool has_arm(ArmId arm) const noexcept;
    std::size_t position_of(ArmId arm) const;

    std::span<const ArmId> arms() const noexcept { return arms_; }
    std::span<const std::size_t> counts() const noexcept { return counts_; }
    std::span<const double> credits() const noexcept { return credits_; }
    std::span<const RewardEntry> window() const noexcept { return window_; }

    std::size_t window_size() const noexcept { return window_size_; }
    double exploration() const noexcept { return exploration_; }
    double decay() const noexcept { return decay_; }

  private:
    void refresh();

    std::size_t window_size_;
    double exploration_;
    double decay_;
    std::vector<ArmId> arms_;
    std::vector<std::size_t> counts_;
    std::vector<double> credits_;
    std::vector<RewardEntry> window_; // newest first
};

} // namespace coev
