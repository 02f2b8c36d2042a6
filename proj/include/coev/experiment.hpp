#pragma once

/// Experiment execution: single runs, paired batches, logs and reports.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coev/coevolution.hpp"
#include "coev/config.hpp"
#include "coev/stats.hpp"

namespace coev {

struct ExperimentResult {
    RunLog log;
    stats::RunSummary summary;
    /// Generating schemata (string-cover only), in text form for audit.
    std::vector<std::string> schemata;
    std::size_t budget = 0;
};

/// Runs one configuration. Targets come from scenario_seed, evolution and
/// bandit randomness from streams derived from run_seed.
ExperimentResult run_experiment(const ExperimentConfig& config, const StepObserver& observer = {});

/// One run inside a batch, without its step log.
struct RunEntry {
    std::size_t pair = 0;
    Algo algo = Algo::ccea;
    std::uint64_t scenario_seed = 0;
    std::uint64_t run_seed = 0;
    stats::RunSummary summary;
    std::vector<std::string> schemata;
};

struct BatchOptions {
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;
    /// Called once per finished run, possibly from a worker thread.
    std::function<void(const RunEntry&, const ExperimentConfig&, const ExperimentResult&)> on_run;
};

/// Seeds used by pair k of a batch started from seed0.
std::uint64_t pair_scenario_seed(std::uint64_t seed0, std::size_t k);
std::uint64_t pair_run_seed(std::uint64_t seed0, std::size_t k, Algo algo);

/// Runs n_runs pairs. Both runs of pair k share a target set; each algorithm
/// gets its own run seed. Output is ordered (pair, a then b) regardless of
/// thread count. Throws std::invalid_argument if the configs differ in
/// anything but `algo` (seeds excepted, they are overwritten).
std::vector<RunEntry> batch_paired(const ExperimentConfig& config_a, const ExperimentConfig& config_b,
                                   std::size_t n_runs, std::uint64_t seed0, const BatchOptions& options = {});

/// Step records as CSV (header row; list cells joined with ';').
void write_run_csv(std::ostream& out, const RunLog& log);

/// Final sensor layout as CSV with columns x,y,theta, one row per species.
/// Reads the representatives of the last logged step.
void write_layout_csv(std::ostream& out, const RunLog& log);

nlohmann::json to_json(const RunEntry& entry);
RunEntry run_entry_from_json(const nlohmann::json& j);

/// Document stored as summaries.json by the run and batch commands.
nlohmann::json summaries_document(const std::vector<RunEntry>& runs, const ExperimentConfig& config,
                                  std::size_t budget);

/// Aggregates, paired signed-rank and rank-sum tests over censored first-hit
/// steps. Tests are marked "not applicable" unless two algorithms are present.
nlohmann::json build_report(const std::vector<RunEntry>& runs, std::size_t budget, double bin_width = 25.0);

/// Histogram rows (bin_start, bin_end, one count column per algorithm).
void write_histogram_csv(std::ostream& out, const std::vector<RunEntry>& runs, std::size_t budget,
                         double bin_width = 25.0);

/// Reads <in_dir>/summaries.json and writes the JSON report to out_path and
/// the histogram next to it (<stem>_histogram.csv). Returns the report.
nlohmann::json write_report(const std::filesystem::path& in_dir, const std::filesystem::path& out_path,
                            double bin_width = 25.0);

} // namespace coev
