#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "coev/coevolution.hpp"
#include "coev/sensor.hpp"

namespace coev {

enum class Algo { ccea, ccea_mab };
enum class ProblemKind { string_cover, sensor };
enum class Protocol { adaptation, open_ended };

std::string_view to_string(Algo a) noexcept;
std::string_view to_string(ProblemKind p) noexcept;
std::string_view to_string(Protocol p) noexcept;

/// Sensor runs use thresholds on the scale of the sensor error (a full miss
/// costs 2pi) instead of the match-strength scale of the string benchmark.
inline constexpr double sensor_improvement_threshold = 0.05;
inline constexpr double sensor_extinction_threshold = 0.1;
inline constexpr std::size_t sensor_max_steps = 1000;

struct ExperimentConfig {
    Algo algo = Algo::ccea;
    ProblemKind problem = ProblemKind::string_cover;
    int scenario = 1;
    Protocol protocol = Protocol::open_ended;
    std::size_t add_interval = 100;
    std::size_t max_steps = 500;
    std::uint64_t scenario_seed = 1;
    std::uint64_t run_seed = 1;

    std::size_t species_size = 50;
    std::size_t initial_species = 1;
    double crossover_rate = 0.6;
    double mutation_rate = 1.0;
    double flip_bit_rate = 1.0 / 64.0;
    std::size_t tournament_size = 3;

    std::size_t window_size = 50;
    double decay = 1.0;
    double exploration = 1.0;

    std::size_t improvement_length = 5;
    double improvement_threshold = 0.5;
    double extinction_threshold = 5.0;

    sensor::EnvironmentModel environment;
    sensor::VariationParams sensor_variation;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Malformed config text. Carries the offending line (1-based, 0 when the
/// problem is not tied to a line) and key.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::size_t line, std::string key, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

  private:
    std::size_t line_;
    std::string key_;
};

/// Parses flat `key = value` lines; `#` starts a comment. Unknown keys and
/// out-of-range values are rejected. `algo` and `problem` are required; all
/// other keys default to the published parameter table, with sensor-scale
/// thresholds and budget when problem = sensor.
ExperimentConfig parse_config(std::string_view text);

/// Fully resolved config in the same key = value format.
std::string to_text(const ExperimentConfig& config);

/// Throws ConfigError (line 0) on inconsistent or out-of-range settings.
void validate(const ExperimentConfig& config);

/// Number of outer-loop steps the run may take.
std::size_t step_budget(const ExperimentConfig& config);

CoevParams to_coev_params(const ExperimentConfig& config);

} // namespace coev
