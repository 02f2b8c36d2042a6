#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coev/experiment.hpp"
#include "properties.hpp"

using namespace coev;

namespace {

ExperimentConfig quick(Algo algo, int scenario = 1) {
    ExperimentConfig c;
    c.algo = algo;
    c.scenario = scenario;
    c.max_steps = 80;
    return c;
}

} // namespace

TEST_CASE("property: runs replay bit for bit") {
    const auto r = props::runs_are_deterministic();
    INFO(r.detail);
    CHECK(r.ok);
}

TEST_CASE("property: batches do not depend on the thread count") {
    const auto r = props::batches_ignore_thread_count();
    INFO(r.detail);
    CHECK(r.ok);
}

TEST_CASE("run_experiment summary mirrors the log") {
    const auto res = run_experiment(quick(Algo::ccea_mab));
    CHECK(res.summary.first_hit_step == res.log.first_hit_step);
    CHECK(res.summary.evaluations == res.log.evaluations);
    CHECK(res.summary.final_species == res.log.final_species);
    CHECK(res.schemata.size() == 3);
    CHECK(res.budget == 80);
    if (!res.log.steps.empty()) {
        CHECK(res.log.steps.back().evaluations == res.log.evaluations);
    }
}

TEST_CASE("adaptation protocol adds species on schedule") {
    ExperimentConfig c = quick(Algo::ccea, 2);
    c.protocol = Protocol::adaptation;
    c.add_interval = 10;
    const auto res = run_experiment(c);
    CHECK(res.budget == 50);
    CHECK(res.log.steps.size() <= 50);
    for (const auto& rec : res.log.steps) {
        CHECK(rec.removed.empty());
        CHECK(rec.added.empty() == (rec.step % 10 != 0 || rec.step == 50 || rec.species.size() == 5));
        CHECK(rec.species.size() == std::min<std::size_t>(5, 1 + (rec.step - 1) / 10));
    }
}

TEST_CASE("paired batch shares targets and separates run seeds") {
    const auto runs = batch_paired(quick(Algo::ccea), quick(Algo::ccea_mab), 3, 5);
    REQUIRE(runs.size() == 6);
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& a = runs[2 * k];
        const auto& b = runs[2 * k + 1];
        CHECK(a.pair == k);
        CHECK(b.pair == k);
        CHECK(a.algo == Algo::ccea);
        CHECK(b.algo == Algo::ccea_mab);
        CHECK(a.scenario_seed == b.scenario_seed);
        CHECK(a.scenario_seed == pair_scenario_seed(5, k));
        CHECK(a.run_seed != b.run_seed);
        CHECK(a.schemata == b.schemata);
    }

    ExperimentConfig other = quick(Algo::ccea_mab);
    other.species_size = 20;
    CHECK_THROWS_AS(batch_paired(quick(Algo::ccea), other, 1, 5), std::invalid_argument);
}

TEST_CASE("run csv layout") {
    const auto res = run_experiment(quick(Algo::ccea_mab));
    std::ostringstream out;
    write_run_csv(out, res.log);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "step,evaluations,species_count,species,chosen,reward,collaboration_fitness,contributions,"
          "representatives,added,removed");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 10);
    }
    CHECK(rows == res.log.steps.size());
}

TEST_CASE("summaries round trip through json") {
    const auto runs = batch_paired(quick(Algo::ccea), quick(Algo::ccea_mab), 2, 9);
    for (const auto& r : runs) {
        const auto back = run_entry_from_json(to_json(r));
        CHECK(back.pair == r.pair);
        CHECK(back.algo == r.algo);
        CHECK(back.run_seed == r.run_seed);
        CHECK(back.summary.first_hit_step == r.summary.first_hit_step);
        CHECK(back.summary.evaluations == r.summary.evaluations);
        CHECK(back.schemata == r.schemata);
    }
}

TEST_CASE("report") {
    std::vector<RunEntry> runs;
    for (std::size_t k = 0; k < 6; ++k) {
        RunEntry a;
        a.pair = k;
        a.algo = Algo::ccea;
        a.summary.first_hit_step = 100 + 10 * k;
        a.summary.final_species = 3;
        RunEntry b = a;
        b.algo = Algo::ccea_mab;
        b.summary.first_hit_step = k == 5 ? std::nullopt : std::optional<std::size_t>(50 + k);
        runs.push_back(a);
        runs.push_back(b);
    }
    const auto report = build_report(runs, 500, 50.0);
    CHECK(report["algorithms"]["ccea"]["success_rate"] == 1.0);
    CHECK(report["algorithms"]["ccea-mab"]["successes"] == 5);
    CHECK(report["algorithms"]["ccea-mab"]["mean_first_hit"].get<double>() == doctest::Approx(52.0));
    CHECK(report["tests"]["wilcoxon_signed_rank"]["applicable"] == true);
    CHECK(report["tests"]["wilcoxon_signed_rank"]["exact"] == true);
    // Differences are all of one sign except the censored pair (150 vs 501).
    CHECK(report["tests"]["wilcoxon_signed_rank"]["w_minus"].get<double>() == 6.0);
    CHECK(report["tests"]["mann_whitney_u"]["applicable"] == true);

    std::vector<RunEntry> single(runs.begin(), runs.begin() + 1);
    const auto lone = build_report(single, 500);
    CHECK(lone["tests"]["wilcoxon_signed_rank"]["applicable"] == false);
    CHECK(lone["tests"]["mann_whitney_u"]["status"] == "not applicable");

    std::ostringstream hist;
    write_histogram_csv(hist, runs, 500, 50.0);
    CHECK(hist.str().rfind("bin_start,bin_end,ccea,ccea-mab\n0,50,0,0\n50,100,0,5\n100,150,5,0\n", 0) == 0);
}

TEST_CASE("write_report reads a batch directory") {
    const auto dir = std::filesystem::temp_directory_path() / "coev_report_test";
    std::filesystem::create_directories(dir);
    const auto runs = batch_paired(quick(Algo::ccea), quick(Algo::ccea_mab), 2, 3);
    {
        std::ofstream out(dir / "summaries.json");
        out << summaries_document(runs, quick(Algo::ccea), 80).dump(2);
    }
    const auto report = write_report(dir, dir / "report.json", 20.0);
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "report_histogram.csv"));
    CHECK(report["budget"] == 80);
    CHECK(report["algorithms"]["ccea"]["runs"] == 2);
    std::filesystem::remove_all(dir);
    CHECK_THROWS(write_report(dir, dir / "r.json"));
}

TEST_CASE("sensor layout csv lists the final representatives") {
    ExperimentConfig c;
    c.algo = Algo::ccea;
    c.problem = ProblemKind::sensor;
    c.improvement_threshold = sensor_improvement_threshold;
    c.extinction_threshold = sensor_extinction_threshold;
    c.max_steps = 15;
    const auto res = run_experiment(c);
    std::ostringstream out;
    write_layout_csv(out, res.log);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,theta");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 2);
    }
    CHECK(rows == res.log.final_species);

    RunLog bits;
    bits.steps.emplace_back();
    bits.steps.back().representatives = {"0101"};
    std::ostringstream sink;
    CHECK_THROWS_AS(write_layout_csv(sink, bits), std::invalid_argument);
}
