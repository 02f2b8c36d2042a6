#include <doctest.h>

#include <string>

#include "coev/config.hpp"

using namespace coev;

namespace {

std::size_t error_line(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return ~std::size_t{0};
}

} // namespace

TEST_CASE("defaults follow the parameter table") {
    const auto c = parse_config("algo = ccea-mab\nproblem = string-cover\n");
    CHECK(c.algo == Algo::ccea_mab);
    CHECK(c.scenario == 1);
    CHECK(c.protocol == Protocol::open_ended);
    CHECK(c.max_steps == 500);
    CHECK(c.species_size == 50);
    CHECK(c.initial_species == 1);
    CHECK(c.crossover_rate == 0.6);
    CHECK(c.mutation_rate == 1.0);
    CHECK(c.flip_bit_rate == 1.0 / 64.0);
    CHECK(c.tournament_size == 3);
    CHECK(c.window_size == 50);
    CHECK(c.decay == 1.0);
    CHECK(c.exploration == 1.0);
    CHECK(c.improvement_length == 5);
    CHECK(c.improvement_threshold == 0.5);
    CHECK(c.extinction_threshold == 5.0);
}

TEST_CASE("sensor runs take sensor-scale defaults unless overridden") {
    const auto c = parse_config("algo = ccea\nproblem = sensor\n");
    CHECK(c.improvement_threshold == sensor_improvement_threshold);
    CHECK(c.extinction_threshold == sensor_extinction_threshold);
    CHECK(c.max_steps == sensor_max_steps);
    const auto o = parse_config("algo = ccea\nproblem = sensor\nT_c = 0.3\nmax_steps = 20\n");
    CHECK(o.extinction_threshold == 0.3);
    CHECK(o.max_steps == 20);
}

TEST_CASE("syntax") {
    const auto c = parse_config(
        "# comment line\n"
        "  algo=ccea   # trailing comment\n"
        "\n"
        "problem = string-cover\r\n"
        "flip_bit_rate = 1/32\n"
        "protocol = adaptation\n"
        "add_interval = 75\n"
        "scenario = 3\n"
        "scenario_seed = 18446744073709551615\n");
    CHECK(c.flip_bit_rate == 1.0 / 32.0);
    CHECK(c.add_interval == 75);
    CHECK(c.scenario_seed == 18446744073709551615ULL);
    CHECK(step_budget(c) == 375);
    const auto p = to_coev_params(c);
    CHECK(p.add_interval == 75);
    CHECK(p.max_species == 5);
    CHECK(p.max_steps == 375);
}

TEST_CASE("errors carry the offending line") {
    CHECK(error_line("algo = ccea\nproblem = string-cover\nbogus = 1\n") == 3);
    CHECK(error_line("algo = ccea\nalgo = ccea\nproblem = sensor\n") == 2);
    CHECK(error_line("algo = ccea\nproblem string-cover\n") == 2);
    CHECK(error_line("algo = ga\nproblem = sensor\n") == 1);
    CHECK(error_line("algo = ccea\nproblem = string-cover\nscenario = 4\n") == 3);
    CHECK(error_line("algo = ccea\nproblem = string-cover\ncrossover_rate = 1.5\n") == 3);
    CHECK(error_line("algo = ccea\nproblem = string-cover\nspecies_size = -3\n") == 3);
    CHECK(error_line("algo = ccea\nproblem = string-cover\nflip_bit_rate = 1/0\n") == 3);
    CHECK(error_line("algo = ccea\nproblem = sensor\nprotocol = adaptation\n") == 3);
    CHECK(error_line("algo = ccea\nproblem = string-cover\nW =\n") == 3);
    CHECK(error_line("problem = sensor\n") == 0);
    CHECK_THROWS_WITH_AS(parse_config(""), doctest::Contains("algo, problem"), ConfigError);
}

TEST_CASE("resolved text parses back to the same config") {
    auto c = parse_config("algo = ccea-mab\nproblem = sensor\nposition_sigma = 0.25\nrun_seed = 77\n");
    CHECK(parse_config(to_text(c)) == c);
    auto s = parse_config("algo = ccea\nproblem = string-cover\nscenario = 2\nflip_bit_rate = 1/64\n");
    CHECK(parse_config(to_text(s)) == s);
}

TEST_CASE("open-ended budget") {
    const auto c = parse_config("algo = ccea\nproblem = string-cover\nmax_steps = 123\n");
    CHECK(step_budget(c) == 123);
    CHECK(to_coev_params(c).add_interval == 0);
}
