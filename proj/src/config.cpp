#include "coev/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace coev {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::uint64_t parse_unsigned(std::string_view v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw std::invalid_argument("expected a non-negative integer, got '" + std::string(v) + "'");
    }
    return out;
}

double parse_plain_real(std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw std::invalid_argument("expected a real number, got '" + std::string(v) + "'");
    }
    return out;
}

/// Accepts plain reals and fractions such as 1/64.
double parse_real(std::string_view v) {
    const auto slash = v.find('/');
    if (slash == std::string_view::npos) {
        return parse_plain_real(v);
    }
    const double num = parse_plain_real(trim(v.substr(0, slash)));
    const double den = parse_plain_real(trim(v.substr(slash + 1)));
    if (den == 0.0) {
        throw std::invalid_argument("zero denominator in '" + std::string(v) + "'");
    }
    return num / den;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"algo",
         [](ExperimentConfig& c, std::string_view v) {
             if (v == "ccea") {
                 c.algo = Algo::ccea;
             } else if (v == "ccea-mab") {
                 c.algo = Algo::ccea_mab;
             } else {
                 throw std::invalid_argument("expected ccea or ccea-mab");
             }
         }},
        {"problem",
         [](ExperimentConfig& c, std::string_view v) {
             if (v == "string-cover") {
                 c.problem = ProblemKind::string_cover;
             } else if (v == "sensor") {
                 c.problem = ProblemKind::sensor;
             } else {
                 throw std::invalid_argument("expected string-cover or sensor");
             }
         }},
        {"protocol",
         [](ExperimentConfig& c, std::string_view v) {
             if (v == "adaptation") {
                 c.protocol = Protocol::adaptation;
             } else if (v == "open-ended") {
                 c.protocol = Protocol::open_ended;
             } else {
                 throw std::invalid_argument("expected adaptation or open-ended");
             }
         }},
        {"scenario", [](ExperimentConfig& c, std::string_view v) { c.scenario = static_cast<int>(parse_unsigned(v)); }},
        {"add_interval", [](ExperimentConfig& c, std::string_view v) { c.add_interval = parse_unsigned(v); }},
        {"max_steps", [](ExperimentConfig& c, std::string_view v) { c.max_steps = parse_unsigned(v); }},
        {"scenario_seed", [](ExperimentConfig& c, std::string_view v) { c.scenario_seed = parse_unsigned(v); }},
        {"run_seed", [](ExperimentConfig& c, std::string_view v) { c.run_seed = parse_unsigned(v); }},
        {"species_size", [](ExperimentConfig& c, std::string_view v) { c.species_size = parse_unsigned(v); }},
        {"initial_species", [](ExperimentConfig& c, std::string_view v) { c.initial_species = parse_unsigned(v); }},
        {"crossover_rate", [](ExperimentConfig& c, std::string_view v) { c.crossover_rate = parse_real(v); }},
        {"mutation_rate", [](ExperimentConfig& c, std::string_view v) { c.mutation_rate = parse_real(v); }},
        {"flip_bit_rate", [](ExperimentConfig& c, std::string_view v) { c.flip_bit_rate = parse_real(v); }},
        {"tournament_size", [](ExperimentConfig& c, std::string_view v) { c.tournament_size = parse_unsigned(v); }},
        {"W", [](ExperimentConfig& c, std::string_view v) { c.window_size = parse_unsigned(v); }},
        {"d", [](ExperimentConfig& c, std::string_view v) { c.decay = parse_real(v); }},
        {"C", [](ExperimentConfig& c, std::string_view v) { c.exploration = parse_real(v); }},
        {"I", [](ExperimentConfig& c, std::string_view v) { c.improvement_length = parse_unsigned(v); }},
        {"T_i", [](ExperimentConfig& c, std::string_view v) { c.improvement_threshold = parse_real(v); }},
        {"T_c", [](ExperimentConfig& c, std::string_view v) { c.extinction_threshold = parse_real(v); }},
        {"env_radius", [](ExperimentConfig& c, std::string_view v) { c.environment.radius = parse_real(v); }},
        {"env_samples", [](ExperimentConfig& c, std::string_view v) { c.environment.samples = parse_unsigned(v); }},
        {"sensor_fov", [](ExperimentConfig& c, std::string_view v) { c.environment.fov = parse_real(v); }},
        {"error_threshold",
         [](ExperimentConfig& c, std::string_view v) { c.environment.error_threshold = parse_real(v); }},
        {"sbx_eta", [](ExperimentConfig& c, std::string_view v) { c.sensor_variation.sbx_eta = parse_real(v); }},
        {"position_sigma",
         [](ExperimentConfig& c, std::string_view v) { c.sensor_variation.position_sigma = parse_real(v); }},
        {"angle_sigma", [](ExperimentConfig& c, std::string_view v) { c.sensor_variation.angle_sigma = parse_real(v); }},
        {"gaussian_rate",
         [](ExperimentConfig& c, std::string_view v) { c.sensor_variation.per_dim_rate = parse_real(v); }},
    };
    return table;
}

void check(bool ok, const char* key, const std::string& message) {
    if (!ok) {
        throw ConfigError(0, key, message);
    }
}

bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

std::size_t schema_count(int scenario) { return scenario == 1 ? 3 : 5; }

} // namespace

std::string_view to_string(Algo a) noexcept { return a == Algo::ccea ? "ccea" : "ccea-mab"; }

std::string_view to_string(ProblemKind p) noexcept { return p == ProblemKind::string_cover ? "string-cover" : "sensor"; }

std::string_view to_string(Protocol p) noexcept { return p == Protocol::adaptation ? "adaptation" : "open-ended"; }

ConfigError::ConfigError(std::size_t line, std::string key, const std::string& message)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ", key '" + key + "': " + message
                                  : "config key '" + key + "': " + message),
      line_(line),
      key_(std::move(key)) {}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::set<std::string, std::less<>> seen;
    std::vector<std::pair<std::size_t, std::string>> assignments;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(line_no, std::string(line), "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError(line_no, key, "unknown key");
        }
        if (!seen.insert(key).second) {
            throw ConfigError(line_no, key, "duplicate key");
        }
        if (value.empty()) {
            throw ConfigError(line_no, key, "missing value");
        }
        try {
            it->second(cfg, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(line_no, key, e.what());
        }
        assignments.emplace_back(line_no, key);
    }

    std::string missing;
    for (const char* required : {"algo", "problem"}) {
        if (!seen.contains(required)) {
            missing += missing.empty() ? required : std::string(", ") + required;
        }
    }
    if (!missing.empty()) {
        throw ConfigError(0, missing, "required key(s) missing");
    }

    if (cfg.problem == ProblemKind::sensor) {
        if (!seen.contains("T_i")) {
            cfg.improvement_threshold = sensor_improvement_threshold;
        }
        if (!seen.contains("T_c")) {
            cfg.extinction_threshold = sensor_extinction_threshold;
        }
        if (!seen.contains("max_steps")) {
            cfg.max_steps = sensor_max_steps;
        }
    }

    try {
        validate(cfg);
    } catch (const ConfigError& e) {
        const auto it = std::find_if(assignments.begin(), assignments.end(),
                                     [&](const auto& a) { return a.second == e.key(); });
        if (it != assignments.end()) {
            std::string message = e.what();
            message = message.substr(message.find(": ") + 2);
            throw ConfigError(it->first, e.key(), message);
        }
        throw;
    }
    return cfg;
}

void validate(const ExperimentConfig& c) {
    check(c.problem == ProblemKind::sensor || (c.scenario >= 1 && c.scenario <= 3), "scenario", "must be 1, 2 or 3");
    check(c.problem == ProblemKind::string_cover || c.protocol == Protocol::open_ended, "protocol",
          "the sensor problem supports only the open-ended protocol");
    check(c.protocol == Protocol::open_ended || c.add_interval >= 1, "add_interval", "must be >= 1");
    check(c.max_steps >= 1, "max_steps", "must be >= 1");
    check(c.species_size >= 2, "species_size", "must be >= 2");
    check(c.initial_species >= 1, "initial_species", "must be >= 1");
    check(c.protocol == Protocol::open_ended || c.problem == ProblemKind::sensor ||
              c.initial_species <= schema_count(c.scenario),
          "initial_species", "exceeds the number of schemata");
    check(unit_interval(c.crossover_rate), "crossover_rate", "must lie in [0, 1]");
    check(unit_interval(c.mutation_rate), "mutation_rate", "must lie in [0, 1]");
    check(unit_interval(c.flip_bit_rate), "flip_bit_rate", "must lie in [0, 1]");
    check(c.tournament_size >= 1, "tournament_size", "must be >= 1");
    check(c.window_size >= 1, "W", "must be >= 1");
    check(unit_interval(c.decay), "d", "must lie in [0, 1]");
    check(c.exploration >= 0.0, "C", "must be >= 0");
    check(c.improvement_length >= 1, "I", "must be >= 1");
    check(c.improvement_threshold >= 0.0, "T_i", "must be >= 0");
    check(c.extinction_threshold >= 0.0, "T_c", "must be >= 0");
    check(c.environment.radius > 0.0, "env_radius", "must be positive");
    check(c.environment.samples >= 8, "env_samples", "must be >= 8");
    check(c.environment.fov > 0.0 && c.environment.fov <= 2.0 * std::numbers::pi, "sensor_fov",
          "must lie in (0, 2pi]");
    check(c.environment.error_threshold >= 0.0, "error_threshold", "must be >= 0");
    check(c.sensor_variation.sbx_eta > 0.0, "sbx_eta", "must be positive");
    check(c.sensor_variation.position_sigma >= 0.0, "position_sigma", "must be >= 0");
    check(c.sensor_variation.angle_sigma >= 0.0, "angle_sigma", "must be >= 0");
    check(unit_interval(c.sensor_variation.per_dim_rate), "gaussian_rate", "must lie in [0, 1]");
}

std::string to_text(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "algo = " << to_string(c.algo) << '\n';
    out << "problem = " << to_string(c.problem) << '\n';
    out << "scenario = " << c.scenario << '\n';
    out << "protocol = " << to_string(c.protocol) << '\n';
    out << "add_interval = " << c.add_interval << '\n';
    out << "max_steps = " << c.max_steps << '\n';
    out << "scenario_seed = " << c.scenario_seed << '\n';
    out << "run_seed = " << c.run_seed << '\n';
    out << "species_size = " << c.species_size << '\n';
    out << "initial_species = " << c.initial_species << '\n';
    out << "crossover_rate = " << format_real(c.crossover_rate) << '\n';
    out << "mutation_rate = " << format_real(c.mutation_rate) << '\n';
    out << "flip_bit_rate = " << format_real(c.flip_bit_rate) << '\n';
    out << "tournament_size = " << c.tournament_size << '\n';
    out << "W = " << c.window_size << '\n';
    out << "d = " << format_real(c.decay) << '\n';
    out << "C = " << format_real(c.exploration) << '\n';
    out << "I = " << c.improvement_length << '\n';
    out << "T_i = " << format_real(c.improvement_threshold) << '\n';
    out << "T_c = " << format_real(c.extinction_threshold) << '\n';
    out << "env_radius = " << format_real(c.environment.radius) << '\n';
    out << "env_samples = " << c.environment.samples << '\n';
    out << "sensor_fov = " << format_real(c.environment.fov) << '\n';
    out << "error_threshold = " << format_real(c.environment.error_threshold) << '\n';
    out << "sbx_eta = " << format_real(c.sensor_variation.sbx_eta) << '\n';
    out << "position_sigma = " << format_real(c.sensor_variation.position_sigma) << '\n';
    out << "angle_sigma = " << format_real(c.sensor_variation.angle_sigma) << '\n';
    out << "gaussian_rate = " << format_real(c.sensor_variation.per_dim_rate) << '\n';
    return out.str();
}

std::size_t step_budget(const ExperimentConfig& c) {
    if (c.protocol == Protocol::adaptation) {
        return c.add_interval * schema_count(c.scenario);
    }
    return c.max_steps;
}

CoevParams to_coev_params(const ExperimentConfig& c) {
    CoevParams p;
    p.species_size = c.species_size;
    p.initial_species = c.initial_species;
    p.crossover_rate = c.crossover_rate;
    p.mutation_rate = c.mutation_rate;
    p.tournament_size = c.tournament_size;
    p.improvement_length = c.improvement_length;
    p.improvement_threshold = c.improvement_threshold;
    p.extinction_threshold = c.extinction_threshold;
    p.max_steps = step_budget(c);
    if (c.protocol == Protocol::adaptation) {
        p.add_interval = c.add_interval;
        p.max_species = schema_count(c.scenario);
    }
    return p;
}

} // namespace coev
