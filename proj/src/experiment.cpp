#include "coev/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "coev/scheduler.hpp"
#include "coev/sensor.hpp"
#include "coev/string_cover.hpp"

namespace coev {

namespace {

std::unique_ptr<Scheduler> make_scheduler(const ExperimentConfig& c) {
    if (c.algo == Algo::ccea) {
        return std::make_unique<RoundRobinScheduler>();
    }
    return std::make_unique<BanditScheduler>(DynamicBandit(c.window_size, c.exploration, c.decay),
                                             Rng(derive_seed(c.run_seed, 0, "bandit")));
}

template <class T>
std::string join(const std::vector<T>& items, const std::function<std::string(const T&)>& fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        out += fmt(items[i]);
    }
    return out;
}

std::string format_real(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string id_text(const SpeciesId& id) { return std::to_string(id); }

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::vector<std::string> algorithms_present(const std::vector<RunEntry>& runs) {
    std::vector<std::string> names;
    for (const auto& r : runs) {
        const std::string name(to_string(r.algo));
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            names.push_back(name);
        }
    }
    std::sort(names.begin(), names.end());
    return names;
}

std::vector<stats::RunSummary> summaries_for(const std::vector<RunEntry>& runs, const std::string& algo) {
    std::vector<stats::RunSummary> out;
    for (const auto& r : runs) {
        if (to_string(r.algo) == algo) {
            out.push_back(r.summary);
        }
    }
    return out;
}

nlohmann::json not_applicable(const std::string& reason) {
    return {{"applicable", false}, {"status", "not applicable"}, {"reason", reason}};
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const StepObserver& observer) {
    validate(config);
    const CoevParams params = to_coev_params(config);
    const auto scheduler = make_scheduler(config);
    Rng evolution(derive_seed(config.run_seed, 0, "evolution"));

    ExperimentResult result;
    result.budget = params.max_steps;
    if (config.problem == ProblemKind::string_cover) {
        Rng scenario_rng(config.scenario_seed);
        string_cover::StringCoverProblem problem(string_cover::generate_target(config.scenario, scenario_rng),
                                                 config.flip_bit_rate);
        for (const auto& s : problem.scenario().schemata) {
            result.schemata.push_back(s.to_string());
        }
        result.log = run(problem, params, *scheduler, evolution, observer);
    } else {
        sensor::SensorProblem problem(config.environment, config.sensor_variation);
        result.log = run(problem, params, *scheduler, evolution, observer);
    }
    result.summary.first_hit_step = result.log.first_hit_step;
    result.summary.evaluations = result.log.evaluations;
    result.summary.final_species = result.log.final_species;
    result.summary.seed = config.run_seed;
    return result;
}

std::uint64_t pair_scenario_seed(std::uint64_t seed0, std::size_t k) {
    return derive_seed(seed0, k, "scenario");
}

std::uint64_t pair_run_seed(std::uint64_t seed0, std::size_t k, Algo algo) {
    return derive_seed(seed0, k, to_string(algo));
}

std::vector<RunEntry> batch_paired(const ExperimentConfig& config_a, const ExperimentConfig& config_b,
                                   std::size_t n_runs, std::uint64_t seed0, const BatchOptions& options) {
    ExperimentConfig probe = config_b;
    probe.algo = config_a.algo;
    probe.scenario_seed = config_a.scenario_seed;
    probe.run_seed = config_a.run_seed;
    if (!(probe == config_a)) {
        throw std::invalid_argument("batch_paired: configurations may differ only in algo");
    }
    validate(config_a);
    validate(config_b);

    const std::size_t tasks = 2 * n_runs;
    std::vector<RunEntry> entries(tasks);
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t t = cursor++; t < tasks; t = cursor++) {
            try {
                const std::size_t pair = t / 2;
                ExperimentConfig cfg = (t % 2 == 0) ? config_a : config_b;
                cfg.scenario_seed = pair_scenario_seed(seed0, pair);
                cfg.run_seed = pair_run_seed(seed0, pair, cfg.algo);
                const ExperimentResult result = run_experiment(cfg);
                RunEntry& e = entries[t];
                e.pair = pair;
                e.algo = cfg.algo;
                e.scenario_seed = cfg.scenario_seed;
                e.run_seed = cfg.run_seed;
                e.summary = result.summary;
                e.schemata = result.schemata;
                if (options.on_run) {
                    options.on_run(e, cfg, result);
                }
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                cursor = tasks;
            }
        }
    };

    std::size_t threads = options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.threads;
    threads = std::min(threads, std::max<std::size_t>(tasks, 1));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return entries;
}

void write_run_csv(std::ostream& out, const RunLog& log) {
    out << "step,evaluations,species_count,species,chosen,reward,collaboration_fitness,contributions,"
           "representatives,added,removed\n";
    const std::function<std::string(const SpeciesId&)> ids = id_text;
    const std::function<std::string(const double&)> reals = [](const double& v) { return format_real(v); };
    const std::function<std::string(const std::string&)> text = [](const std::string& s) { return s; };
    for (const auto& r : log.steps) {
        out << r.step << ',' << r.evaluations << ',' << r.species.size() << ',' << join(r.species, ids) << ','
            << join(r.chosen, ids) << ',' << (r.reward ? std::to_string(*r.reward) : std::string()) << ','
            << format_real(r.collaboration_fitness) << ',' << join(r.contributions, reals) << ','
            << join(r.representatives, text) << ',' << join(r.added, ids) << ',' << join(r.removed, ids) << '\n';
    }
}

void write_layout_csv(std::ostream& out, const RunLog& log) {
    out << "x,y,theta\n";
    if (log.steps.empty()) {
        return;
    }
    for (const auto& rep : log.steps.back().representatives) {
        std::string row = rep;
        if (std::count(row.begin(), row.end(), ':') != 2) {
            throw std::invalid_argument("not a sensor representative: " + rep);
        }
        std::replace(row.begin(), row.end(), ':', ',');
        out << row << '\n';
    }
}

nlohmann::json to_json(const RunEntry& e) {
    return {
        {"pair", e.pair},
        {"algo", std::string(to_string(e.algo))},
        {"scenario_seed", e.scenario_seed},
        {"run_seed", e.run_seed},
        {"success", e.summary.success()},
        {"first_hit_step", e.summary.first_hit_step ? nlohmann::json(*e.summary.first_hit_step) : nlohmann::json(nullptr)},
        {"evaluations", e.summary.evaluations},
        {"final_species", e.summary.final_species},
        {"schemata", e.schemata},
    };
}

RunEntry run_entry_from_json(const nlohmann::json& j) {
    RunEntry e;
    e.pair = j.at("pair").get<std::size_t>();
    const auto algo = j.at("algo").get<std::string>();
    if (algo == "ccea") {
        e.algo = Algo::ccea;
    } else if (algo == "ccea-mab") {
        e.algo = Algo::ccea_mab;
    } else {
        throw std::invalid_argument("unknown algo '" + algo + "' in summaries");
    }
    e.scenario_seed = j.at("scenario_seed").get<std::uint64_t>();
    e.run_seed = j.at("run_seed").get<std::uint64_t>();
    e.summary.seed = e.run_seed;
    if (!j.at("first_hit_step").is_null()) {
        e.summary.first_hit_step = j.at("first_hit_step").get<std::size_t>();
    }
    e.summary.evaluations = j.at("evaluations").get<std::uint64_t>();
    e.summary.final_species = j.at("final_species").get<std::size_t>();
    e.schemata = j.value("schemata", std::vector<std::string>{});
    return e;
}

nlohmann::json summaries_document(const std::vector<RunEntry>& runs, const ExperimentConfig& config,
                                  std::size_t budget) {
    nlohmann::json doc;
    doc["problem"] = std::string(to_string(config.problem));
    doc["protocol"] = std::string(to_string(config.protocol));
    doc["scenario"] = config.scenario;
    doc["budget"] = budget;
    doc["runs"] = nlohmann::json::array();
    for (const auto& r : runs) {
        doc["runs"].push_back(to_json(r));
    }
    return doc;
}

nlohmann::json build_report(const std::vector<RunEntry>& runs, std::size_t budget, double bin_width) {
    nlohmann::json report;
    report["budget"] = budget;
    const auto names = algorithms_present(runs);
    for (const auto& name : names) {
        const auto summaries = summaries_for(runs, name);
        const auto agg = stats::summarize(summaries, budget, bin_width);
        report["algorithms"][name] = {
            {"runs", agg.runs},
            {"successes", agg.successes},
            {"success_rate", agg.success_rate},
            {"failure_rate", 1.0 - agg.success_rate},
            {"mean_first_hit", optional_number(agg.mean_first_hit)},
            {"median_first_hit", optional_number(agg.median_first_hit)},
            {"mean_final_species", agg.mean_final_species},
            {"mean_evaluations", agg.mean_evaluations},
        };
        report["histogram"]["bin_width"] = bin_width;
        report["histogram"]["lower_edges"] = agg.histogram.lower_edges;
        report["histogram"]["counts"][name] = agg.histogram.counts;
    }

    if (names.size() != 2) {
        const std::string reason = "requires exactly two algorithms, found " + std::to_string(names.size());
        report["tests"]["wilcoxon_signed_rank"] = not_applicable(reason);
        report["tests"]["mann_whitney_u"] = not_applicable(reason);
        return report;
    }

    std::map<std::size_t, std::pair<std::optional<double>, std::optional<double>>> by_pair;
    std::vector<double> first;
    std::vector<double> second;
    for (const auto& r : runs) {
        const double v = stats::censored_first_hit(r.summary, budget);
        if (to_string(r.algo) == names[0]) {
            by_pair[r.pair].first = v;
            first.push_back(v);
        } else {
            by_pair[r.pair].second = v;
            second.push_back(v);
        }
    }
    std::vector<std::pair<double, double>> pairs;
    for (const auto& [k, v] : by_pair) {
        if (v.first && v.second) {
            pairs.emplace_back(*v.first, *v.second);
        }
    }

    const nlohmann::json sides = {{"a", names[0]}, {"b", names[1]}, {"measure", "first_hit_step, failures at budget+1"}};
    if (pairs.empty()) {
        report["tests"]["wilcoxon_signed_rank"] = not_applicable("no complete pairs");
    } else {
        const auto w = stats::wilcoxon_signed_rank(pairs);
        report["tests"]["wilcoxon_signed_rank"] = {
            {"applicable", true}, {"test", "wilcoxon_signed_rank"}, {"pairs", pairs.size()},
            {"n_nonzero", w.n},   {"statistic", w.statistic},       {"w_plus", w.w_plus},
            {"w_minus", w.w_minus}, {"p", w.p_two_sided},           {"exact", w.exact},
            {"sides", sides},
        };
    }
    const auto u = stats::mann_whitney_u(first, second);
    report["tests"]["mann_whitney_u"] = {
        {"applicable", true}, {"test", "mann_whitney_u"}, {"statistic", std::min(u.u_a, u.u_b)},
        {"u_a", u.u_a},       {"u_b", u.u_b},             {"p", u.p_two_sided},
        {"exact", u.exact},   {"sides", sides},
    };
    return report;
}

void write_histogram_csv(std::ostream& out, const std::vector<RunEntry>& runs, std::size_t budget,
                         double bin_width) {
    const auto names = algorithms_present(runs);
    std::vector<stats::Aggregate> aggs;
    out << "bin_start,bin_end";
    for (const auto& name : names) {
        out << ',' << name;
        const auto summaries = summaries_for(runs, name);
        aggs.push_back(stats::summarize(summaries, budget, bin_width));
    }
    out << '\n';
    const stats::Aggregate empty = stats::summarize({}, budget, bin_width);
    const auto& edges = aggs.empty() ? empty.histogram.lower_edges : aggs.front().histogram.lower_edges;
    for (std::size_t b = 0; b < edges.size(); ++b) {
        out << format_real(edges[b]) << ',' << format_real(edges[b] + bin_width);
        for (const auto& agg : aggs) {
            out << ',' << agg.histogram.counts[b];
        }
        out << '\n';
    }
}

nlohmann::json write_report(const std::filesystem::path& in_dir, const std::filesystem::path& out_path,
                            double bin_width) {
    const auto source = in_dir / "summaries.json";
    std::ifstream in(source);
    if (!in) {
        throw std::runtime_error("cannot read " + source.string());
    }
    const nlohmann::json doc = nlohmann::json::parse(in);
    std::vector<RunEntry> runs;
    for (const auto& j : doc.at("runs")) {
        runs.push_back(run_entry_from_json(j));
    }
    const std::size_t budget = doc.at("budget").get<std::size_t>();

    nlohmann::json report = build_report(runs, budget, bin_width);
    report["problem"] = doc.value("problem", "");
    report["protocol"] = doc.value("protocol", "");
    report["scenario"] = doc.value("scenario", 0);

    std::ofstream out(out_path);
    if (!out) {
        throw std::runtime_error("cannot write " + out_path.string());
    }
    out << report.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("write failed for " + out_path.string());
    }

    auto hist_path = out_path;
    hist_path.replace_filename(out_path.stem().string() + "_histogram.csv");
    std::ofstream hist(hist_path);
    if (!hist) {
        throw std::runtime_error("cannot write " + hist_path.string());
    }
    write_histogram_csv(hist, runs, budget, bin_width);
    return report;
}

} // namespace coev
