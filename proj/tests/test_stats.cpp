#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "coev/rng.hpp"
#include "coev/stats.hpp"
#include "properties.hpp"

using namespace coev;
using namespace coev::stats;

namespace {

// Largest allowed gap between exact and normal-approximation p-values at the
// largest exact sample size.
constexpr double kApproxGap = 0.02;

std::vector<std::pair<double, double>> against_zero(const std::vector<double>& d) {
    std::vector<std::pair<double, double>> out;
    for (const double v : d) {
        out.emplace_back(v, 0.0);
    }
    return out;
}

} // namespace

TEST_CASE("average ranks") {
    const std::vector<double> v{10.0, 20.0, 10.0, 5.0};
    CHECK(average_ranks(v) == std::vector<double>{2.5, 4.0, 2.5, 1.0});
}

TEST_CASE("signed rank small cases") {
    const auto r = wilcoxon_signed_rank(against_zero({1.0, 2.0, 3.0}));
    CHECK(r.exact);
    CHECK(r.n == 3);
    CHECK(r.w_plus == 6.0);
    CHECK(r.w_minus == 0.0);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_two_sided == doctest::Approx(0.25));

    const auto zeros = wilcoxon_signed_rank(against_zero({0.0, 0.0}));
    CHECK(zeros.n == 0);
    CHECK(zeros.p_two_sided == 1.0);

    const auto mixed = wilcoxon_signed_rank(against_zero({0.0, -1.0, 2.0}));
    CHECK(mixed.n == 2);
    CHECK(mixed.w_minus == 1.0);
    CHECK(mixed.w_plus == 2.0);
}

TEST_CASE("rank sum small cases") {
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{3.0, 4.0};
    const auto r = mann_whitney_u(a, b);
    CHECK(r.exact);
    CHECK(r.u_a == 0.0);
    CHECK(r.u_b == 4.0);
    CHECK(r.p_two_sided == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(mann_whitney_u(std::vector<double>{}, b), std::invalid_argument);
}

TEST_CASE("property: exact p-values equal enumeration") {
    const auto w = props::signed_rank_matches_enumeration(400, 31);
    INFO(w.detail);
    CHECK(w.ok);
    const auto u = props::rank_sum_matches_enumeration(400, 32);
    INFO(u.detail);
    CHECK(u.ok);
}

TEST_CASE("exact and approximate p agree at the switch-over sizes") {
    Rng rng(33);
    for (int t = 0; t < 200; ++t) {
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i < signed_rank_exact_limit; ++i) {
            pairs.emplace_back(rng.normal() + 0.5, rng.normal());
        }
        const double exact = wilcoxon_signed_rank(pairs, true).p_two_sided;
        const double approx = wilcoxon_signed_rank(pairs, false).p_two_sided;
        CHECK(std::abs(exact - approx) <= kApproxGap);

        std::vector<double> a(rank_sum_exact_limit / 2);
        std::vector<double> b(rank_sum_exact_limit - a.size());
        for (auto& v : a) {
            v = rng.normal() + 0.8;
        }
        for (auto& v : b) {
            v = rng.normal();
        }
        CHECK(std::abs(mann_whitney_u(a, b, true).p_two_sided - mann_whitney_u(a, b, false).p_two_sided) <=
              kApproxGap);
    }
}

TEST_CASE("large samples use the normal approximation") {
    Rng rng(34);
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> a;
    std::vector<double> b;
    for (int i = 0; i < 100; ++i) {
        const double x = rng.normal();
        pairs.emplace_back(x + 1.0, x + rng.normal() * 0.5);
        a.push_back(rng.normal() + 1.0);
        b.push_back(rng.normal());
    }
    const auto w = wilcoxon_signed_rank(pairs);
    CHECK_FALSE(w.exact);
    CHECK(w.p_two_sided < 1e-6);
    const auto u = mann_whitney_u(a, b);
    CHECK_FALSE(u.exact);
    CHECK(u.p_two_sided < 1e-6);
    CHECK(u.u_a + u.u_b == doctest::Approx(100.0 * 100.0));
}

TEST_CASE("tests are invariant under monotone transforms") {
    Rng rng(35);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> a;
        std::vector<double> b;
        std::vector<std::pair<double, double>> pairs;
        std::vector<std::pair<double, double>> pairs_exp;
        for (int i = 0; i < 30; ++i) {
            a.push_back(rng.normal());
            b.push_back(rng.normal() + 0.3);
        }
        std::vector<double> ea;
        std::vector<double> eb;
        for (int i = 0; i < 30; ++i) {
            ea.push_back(std::exp(a[i]));
            eb.push_back(std::exp(b[i]));
        }
        CHECK(mann_whitney_u(a, b).p_two_sided == doctest::Approx(mann_whitney_u(ea, eb).p_two_sided));
        // Signed ranks are invariant under scaling both members by a positive constant.
        for (int i = 0; i < 30; ++i) {
            pairs.emplace_back(a[i], b[i]);
            pairs_exp.emplace_back(3.0 * a[i], 3.0 * b[i]);
        }
        CHECK(wilcoxon_signed_rank(pairs).p_two_sided ==
              doctest::Approx(wilcoxon_signed_rank(pairs_exp).p_two_sided));
    }
}

TEST_CASE("summaries") {
    std::vector<RunSummary> runs{
        {10, 500, 3, 1}, {std::nullopt, 2500, 4, 2}, {30, 1500, 3, 3}, {60, 3000, 5, 4}, {std::nullopt, 100, 2, 5}};
    CHECK(runs[0].success());
    CHECK_FALSE(runs[1].success());
    const auto agg = summarize(runs, 100, 25.0);
    CHECK(agg.runs == 5);
    CHECK(agg.successes == 3);
    CHECK(agg.success_rate == doctest::Approx(0.6));
    CHECK(*agg.mean_first_hit == doctest::Approx(100.0 / 3.0));
    CHECK(*agg.median_first_hit == 30.0);
    CHECK(agg.mean_final_species == doctest::Approx(17.0 / 5.0));
    CHECK(agg.mean_evaluations == doctest::Approx(7600.0 / 5.0));
    CHECK(agg.histogram.counts == std::vector<std::size_t>{1, 1, 1, 0, 0});
    CHECK(agg.histogram.lower_edges == std::vector<double>{0, 25, 50, 75, 100});

    const auto none = summarize(std::vector<RunSummary>{{std::nullopt, 0, 1, 0}}, 100, 50.0);
    CHECK_FALSE(none.mean_first_hit.has_value());
    CHECK(none.histogram.counts.size() == 3);
    CHECK_THROWS_AS(summarize(runs, 100, 0.0), std::invalid_argument);

    CHECK(censored_first_hit(runs[0], 500) == 10.0);
    CHECK(censored_first_hit(runs[1], 500) == 501.0);
}
