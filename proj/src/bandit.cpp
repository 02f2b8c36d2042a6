#include "coev/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "coev/errors.hpp"

namespace coev {

double auc_credit(ArmId arm, std::span<const RewardEntry> window, double decay) {
    if (!(decay >= 0.0 && decay <= 1.0)) {
        throw std::invalid_argument("auc_credit: decay outside [0, 1]");
    }
    // The window is already newest first, so a stable sort on reward alone
    // yields (reward desc, age asc). Rewards are binary; ties are never grouped.
    std::vector<RewardEntry> ranked(window.begin(), window.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RewardEntry& x, const RewardEntry& y) { return x.reward > y.reward; });

    const double n = static_cast<double>(ranked.size());
    double credit = 0.0;
    double height = 0.0;
    double decay_power = 1.0;
    for (std::size_t r = 0; r < ranked.size(); ++r) {
        const double weight = decay_power * (n - static_cast<double>(r));
        if (ranked[r].arm == arm) {
            height += weight;
        } else {
            credit += height * weight;
        }
        decay_power *= decay;
    }
    return credit;
}

int binary_reward(double previous, double current, Sense sense) {
    return strictly_better(current, previous, sense) ? 1 : 0;
}

DynamicBandit::DynamicBandit(std::size_t window_size, double exploration, double decay)
    : window_size_(window_size), exploration_(exploration), decay_(decay) {
    if (window_size_ == 0) {
        throw std::invalid_argument("DynamicBandit: window size must be >= 1");
    }
    if (!(exploration_ >= 0.0)) {
        throw std::invalid_argument("DynamicBandit: exploration factor must be >= 0");
    }
    if (!(decay_ >= 0.0 && decay_ <= 1.0)) {
        throw std::invalid_argument("DynamicBandit: decay outside [0, 1]");
    }
}

bool DynamicBandit::has_arm(ArmId arm) const noexcept {
    return std::find(arms_.begin(), arms_.end(), arm) != arms_.end();
}

std::size_t DynamicBandit::position_of(ArmId arm) const {
    const auto it = std::find(arms_.begin(), arms_.end(), arm);
    if (it == arms_.end()) {
        throw std::invalid_argument("DynamicBandit: unknown arm " + std::to_string(arm));
    }
    return static_cast<std::size_t>(it - arms_.begin());
}

void DynamicBandit::add_arm(ArmId arm) {
    if (has_arm(arm)) {
        throw std::invalid_argument("DynamicBandit: duplicate arm " + std::to_string(arm));
    }
    arms_.push_back(arm);
    counts_.push_back(0);
    credits_.push_back(0.0);
}

void DynamicBandit::remove_arm(ArmId arm) {
    const std::size_t pos = position_of(arm);
    if (arms_.size() < 2) {
        throw IllegalState("DynamicBandit: cannot remove the last arm");
    }
    arms_.erase(arms_.begin() + static_cast<std::ptrdiff_t>(pos));
    counts_.erase(counts_.begin() + static_cast<std::ptrdiff_t>(pos));
    credits_.erase(credits_.begin() + static_cast<std::ptrdiff_t>(pos));
    std::erase_if(window_, [arm](const RewardEntry& e) { return e.arm == arm; });
    refresh();
}

double DynamicBandit::ucb_score(std::size_t position) const {
    std::size_t total = 0;
    for (const std::size_t c : counts_) {
        total += c;
    }
    const double n_i = static_cast<double>(counts_.at(position));
    return credits_[position] + exploration_ * std::sqrt(2.0 * std::log(static_cast<double>(total)) / n_i);
}

ArmId DynamicBandit::select_arm(Rng& rng) const {
    if (arms_.empty()) {
        throw IllegalState("DynamicBandit: no arms to select from");
    }
    std::vector<std::size_t> untried;
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        if (counts_[i] == 0) {
            untried.push_back(i);
        }
    }
    if (!untried.empty()) {
        return arms_[untried[rng.uniform_index(untried.size())]];
    }
    std::size_t best = 0;
    double best_score = ucb_score(0);
    for (std::size_t i = 1; i < arms_.size(); ++i) {
        const double score = ucb_score(i);
        if (score > best_score) {
            best = i;
            best_score = score;
        }
    }
    return arms_[best];
}

void DynamicBandit::record_reward(ArmId arm, int reward) {
    if (!has_arm(arm)) {
        throw std::invalid_argument("DynamicBandit: reward for unknown arm " + std::to_string(arm));
    }
    if (reward != 0 && reward != 1) {
        throw std::invalid_argument("DynamicBandit: reward must be 0 or 1");
    }
    window_.insert(window_.begin(), RewardEntry{reward, arm});
    if (window_.size() > window_size_) {
        window_.resize(window_size_);
    }
    refresh();
}

void DynamicBandit::refresh() {
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        counts_[i] = static_cast<std::size_t>(
            std::count_if(window_.begin(), window_.end(), [&](const RewardEntry& e) { return e.arm == arms_[i]; }));
        credits_[i] = auc_credit(arms_[i], window_, decay_);
    }
}

} // namespace coev
