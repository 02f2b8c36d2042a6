// Command-line front end: single runs, paired batches and reports.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coev/config.hpp"
#include "coev/experiment.hpp"

namespace fs = std::filesystem;

namespace {

coev::ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return coev::parse_config(buffer.str());
    } catch (const coev::ConfigError& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

int run_command(const fs::path& config_path, const fs::path& out_dir) {
    const auto config = load_config(config_path);
    fs::create_directories(out_dir);
    const auto result = coev::run_experiment(config);

    std::ofstream csv(out_dir / "run.csv");
    coev::write_run_csv(csv, result.log);
    if (!csv) {
        throw std::runtime_error("cannot write " + (out_dir / "run.csv").string());
    }
    if (config.problem == coev::ProblemKind::sensor) {
        std::ofstream layout(out_dir / "layout.csv");
        coev::write_layout_csv(layout, result.log);
    }
    coev::RunEntry entry;
    entry.algo = config.algo;
    entry.scenario_seed = config.scenario_seed;
    entry.run_seed = config.run_seed;
    entry.summary = result.summary;
    entry.schemata = result.schemata;
    write_file(out_dir / "summaries.json",
               coev::summaries_document({entry}, config, result.budget).dump(2) + "\n");
    write_file(out_dir / "config.txt", coev::to_text(config));

    std::cout << coev::to_string(config.algo) << ": "
              << (result.summary.success() ? "hit at step " + std::to_string(*result.summary.first_hit_step)
                                           : std::string("no hit"))
              << ", " << result.summary.final_species << " species, " << result.summary.evaluations
              << " evaluations\n";
    return 0;
}

int batch_command(const fs::path& path_a, const fs::path& path_b, std::size_t runs, std::uint64_t seed,
                  const fs::path& out_dir, std::size_t jobs) {
    const auto config_a = load_config(path_a);
    const auto config_b = load_config(path_b);
    fs::create_directories(out_dir / "runs");

    std::mutex io;
    coev::BatchOptions options;
    options.threads = jobs;
    options.on_run = [&](const coev::RunEntry& e, const coev::ExperimentConfig& cfg, const coev::ExperimentResult& r) {
        const auto name = "pair" + std::to_string(e.pair) + "_" + std::string(coev::to_string(e.algo)) + ".csv";
        std::ofstream csv(out_dir / "runs" / name);
        coev::write_run_csv(csv, r.log);
        if (cfg.problem == coev::ProblemKind::sensor) {
            const auto stem = "pair" + std::to_string(e.pair) + "_" + std::string(coev::to_string(e.algo));
            std::ofstream layout(out_dir / "runs" / (stem + "_layout.csv"));
            coev::write_layout_csv(layout, r.log);
        }
        const std::lock_guard lock(io);
        std::cerr << "pair " << e.pair << ' ' << coev::to_string(e.algo) << ": "
                  << (e.summary.success() ? std::to_string(*e.summary.first_hit_step) : std::string("-")) << '\n';
    };
    const auto entries = coev::batch_paired(config_a, config_b, runs, seed, options);

    write_file(out_dir / "summaries.json",
               coev::summaries_document(entries, config_a, coev::step_budget(config_a)).dump(2) + "\n");
    write_file(out_dir / "config_a.txt", coev::to_text(config_a));
    write_file(out_dir / "config_b.txt", coev::to_text(config_b));
    std::cout << entries.size() << " runs written to " << out_dir.string() << '\n';
    return 0;
}

int report_command(const fs::path& in_dir, const fs::path& out_path, double bin_width) {
    const auto report = coev::write_report(in_dir, out_path, bin_width);
    std::cout << report.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative coevolution with bandit-driven species scheduling"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    auto* run = app.add_subcommand("run", "Run one configuration");
    run->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory");

    std::string config_a;
    std::string config_b;
    std::size_t runs = 100;
    std::uint64_t seed = 1;
    std::size_t jobs = 0;
    std::string batch_out = "batch";
    auto* batch = app.add_subcommand("batch", "Paired runs of two configurations");
    batch->add_option("--config-a", config_a, "First config")->required()->check(CLI::ExistingFile);
    batch->add_option("--config-b", config_b, "Second config")->required()->check(CLI::ExistingFile);
    batch->add_option("--runs", runs, "Number of pairs")->check(CLI::PositiveNumber);
    batch->add_option("--seed", seed, "Base seed");
    batch->add_option("--out", batch_out, "Output directory");
    batch->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    std::string report_in;
    std::string report_out;
    double bin_width = 25.0;
    auto* report = app.add_subcommand("report", "Aggregate a run or batch directory");
    report->add_option("--in", report_in, "Directory holding summaries.json")->required()->check(CLI::ExistingDirectory);
    report->add_option("--out", report_out, "Report JSON path")->required();
    report->add_option("--bin-width", bin_width, "Histogram bin width")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_command(config_path, out_dir);
        }
        if (batch->parsed()) {
            return batch_command(config_a, config_b, runs, seed, batch_out, jobs);
        }
        return report_command(report_in, report_out, bin_width);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
