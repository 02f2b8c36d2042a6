#include "coev/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coev::stats {

namespace {

// Slack when comparing enumerated statistics with the observed one; ranks are
// half-integers so anything below 0.25 is safe.
constexpr double kStatTolerance = 1e-9;

double tie_term(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double term = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        const double t = static_cast<double>(j - i);
        term += t * t * t - t;
        i = j;
    }
    return term;
}

double normal_two_sided(double deviation, double variance) {
    if (!(variance > 0.0)) {
        return 1.0;
    }
    const double z = std::max(0.0, std::abs(deviation) - 0.5) / std::sqrt(variance);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

} // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == values[order[i]]) {
            ++j;
        }
        const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            ranks[order[k]] = mean_rank;
        }
        i = j;
    }
    return ranks;
}

SignedRankResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, bool exact) {
    std::vector<double> diffs;
    for (const auto& [a, b] : pairs) {
        if (a - b != 0.0) {
            diffs.push_back(a - b);
        }
    }
    SignedRankResult res;
    res.n = diffs.size();
    if (diffs.empty()) {
        return res;
    }
    std::vector<double> magnitudes(diffs.size());
    std::transform(diffs.begin(), diffs.end(), magnitudes.begin(), [](double d) { return std::abs(d); });
    const std::vector<double> ranks = average_ranks(magnitudes);
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        (diffs[i] > 0.0 ? res.w_plus : res.w_minus) += ranks[i];
    }
    res.statistic = std::min(res.w_plus, res.w_minus);

    const double n = static_cast<double>(res.n);
    const double mean = n * (n + 1.0) / 4.0;
    const double observed = std::abs(res.w_plus - mean);
    res.exact = exact;
    if (exact) {
        if (res.n > 20) {
            throw std::invalid_argument("wilcoxon_signed_rank: exact enumeration limited to 20 differences");
        }
        const std::uint32_t total = std::uint32_t{1} << res.n;
        std::uint64_t extreme = 0;
        for (std::uint32_t signs = 0; signs < total; ++signs) {
            double w = 0.0;
            for (std::size_t i = 0; i < res.n; ++i) {
                if ((signs >> i) & 1U) {
                    w += ranks[i];
                }
            }
            if (std::abs(w - mean) >= observed - kStatTolerance) {
                ++extreme;
            }
        }
        res.p_two_sided = static_cast<double>(extreme) / static_cast<double>(total);
    } else {
        const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term(magnitudes) / 48.0;
        res.p_two_sided = normal_two_sided(res.w_plus - mean, variance);
    }
    return res;
}

SignedRankResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs) {
    std::size_t nonzero = 0;
    for (const auto& [a, b] : pairs) {
        nonzero += (a - b != 0.0) ? 1 : 0;
    }
    return wilcoxon_signed_rank(pairs, nonzero <= signed_rank_exact_limit);
}

RankSumResult mann_whitney_u(std::span<const double> a, std::span<const double> b, bool exact) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("mann_whitney_u: both samples must be nonempty");
    }
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::vector<double> ranks = average_ranks(pooled);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);

    RankSumResult res;
    res.u_a = rank_sum_a - na * (na + 1.0) / 2.0;
    res.u_b = na * nb - res.u_a;
    const double mean = na * nb / 2.0;
    const double observed = std::abs(res.u_a - mean);
    res.exact = exact;
    if (exact) {
        const std::size_t total_n = pooled.size();
        if (total_n > 20) {
            throw std::invalid_argument("mann_whitney_u: exact enumeration limited to 20 observations");
        }
        std::uint64_t extreme = 0;
        std::uint64_t assignments = 0;
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << total_n); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != a.size()) {
                continue;
            }
            ++assignments;
            double r = 0.0;
            for (std::size_t i = 0; i < total_n; ++i) {
                if ((mask >> i) & 1U) {
                    r += ranks[i];
                }
            }
            const double u = r - na * (na + 1.0) / 2.0;
            if (std::abs(u - mean) >= observed - kStatTolerance) {
                ++extreme;
            }
        }
        res.p_two_sided = static_cast<double>(extreme) / static_cast<double>(assignments);
    } else {
        const double n = na + nb;
        const double variance = na * nb / 12.0 * ((n + 1.0) - tie_term(pooled) / (n * (n - 1.0)));
        res.p_two_sided = normal_two_sided(res.u_a - mean, variance);
    }
    return res;
}

RankSumResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    return mann_whitney_u(a, b, a.size() + b.size() <= rank_sum_exact_limit);
}

double censored_first_hit(const RunSummary& run, std::size_t budget) {
    return run.first_hit_step ? static_cast<double>(*run.first_hit_step) : static_cast<double>(budget + 1);
}

Aggregate summarize(std::span<const RunSummary> runs, std::size_t budget, double bin_width) {
    if (!(bin_width > 0.0)) {
        throw std::invalid_argument("summarize: bin width must be positive");
    }
    Aggregate agg;
    agg.runs = runs.size();
    std::vector<double> hits;
    double species = 0.0;
    double evaluations = 0.0;
    for (const auto& r : runs) {
        if (r.first_hit_step) {
            hits.push_back(static_cast<double>(*r.first_hit_step));
        }
        species += static_cast<double>(r.final_species);
        evaluations += static_cast<double>(r.evaluations);
    }
    agg.successes = hits.size();
    if (!runs.empty()) {
        const double n = static_cast<double>(runs.size());
        agg.success_rate = static_cast<double>(hits.size()) / n;
        agg.mean_final_species = species / n;
        agg.mean_evaluations = evaluations / n;
    }
    if (!hits.empty()) {
        agg.mean_first_hit = std::accumulate(hits.begin(), hits.end(), 0.0) / static_cast<double>(hits.size());
        std::sort(hits.begin(), hits.end());
        const std::size_t mid = hits.size() / 2;
        agg.median_first_hit = hits.size() % 2 == 1 ? hits[mid] : (hits[mid - 1] + hits[mid]) / 2.0;
    }

    agg.histogram.bin_width = bin_width;
    const auto bins = static_cast<std::size_t>(std::floor(static_cast<double>(budget) / bin_width)) + 1;
    agg.histogram.counts.assign(bins, 0);
    for (std::size_t b = 0; b < bins; ++b) {
        agg.histogram.lower_edges.push_back(static_cast<double>(b) * bin_width);
    }
    for (const double h : hits) {
        const auto b = std::min(bins - 1, static_cast<std::size_t>(std::floor(h / bin_width)));
        ++agg.histogram.counts[b];
    }
    return agg;
}

} // namespace coev::stats
