#pragma once

/// Rank-based two-sample tests and run summaries.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace coev::stats {

struct RunSummary {
    std::optional<std::size_t> first_hit_step;
    std::uint64_t evaluations = 0;
    std::size_t final_species = 0;
    std::uint64_t seed = 0;

    bool success() const noexcept { return first_hit_step.has_value(); }
};

struct SignedRankResult {
    std::size_t n = 0; // non-zero differences
    double w_plus = 0.0;
    double w_minus = 0.0;
    double statistic = 0.0; // min(W+, W-)
    double p_two_sided = 1.0;
    bool exact = false;
};

struct RankSumResult {
    double u_a = 0.0;
    double u_b = 0.0;
    double p_two_sided = 1.0;
    bool exact = false;
};

/// Largest n of non-zero differences for which the signed-rank p-value is
/// computed by enumerating all sign assignments.
inline constexpr std::size_t signed_rank_exact_limit = 12;
/// Largest |a| + |b| for which the rank-sum p-value is computed by
/// enumerating all group assignments.
inline constexpr std::size_t rank_sum_exact_limit = 10;

/// Average ranks (1-based) of `values`; tied values share their mean rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Wilcoxon signed-rank test on pairwise differences a - b. Zero differences
/// are dropped. All-zero input yields p = 1.
SignedRankResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs);

/// Mann-Whitney U test. Normal approximation uses tie correction and a 0.5
/// continuity correction.
RankSumResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Forced-path variants, used to compare exact and approximate p-values.
SignedRankResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, bool exact);
RankSumResult mann_whitney_u(std::span<const double> a, std::span<const double> b, bool exact);

struct Histogram {
    double bin_width = 0.0;
    std::vector<double> lower_edges;
    std::vector<std::size_t> counts;
};

struct Aggregate {
    std::size_t runs = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    std::optional<double> mean_first_hit;
    std::optional<double> median_first_hit;
    double mean_final_species = 0.0;
    double mean_evaluations = 0.0;
    Histogram histogram;
};

/// Statistics over successful runs only; histogram bins of `bin_width` cover
/// [0, budget].
Aggregate summarize(std::span<const RunSummary> runs, std::size_t budget, double bin_width = 25.0);

/// First-hit step, or budget + 1 for a failed run. Used to pair censored runs.
double censored_first_hit(const RunSummary& run, std::size_t budget);

} // namespace coev::stats
