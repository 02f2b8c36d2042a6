#pragma once

/// Simplified directional-sensor placement on a disc.
///
/// The boundary circle is sampled at K points. A sensor sees a sample when the
/// direction to it lies in the half-open wedge [theta - fov/2, theta + fov/2),
/// with resolution cos(incidence)/distance, where incidence is measured from
/// the outward boundary normal and distance is floored at R/1000. Each sample
/// needs the resolution an omnidirectional sensor at the centre would give, 1/R.
/// The error of a group is the arc-length-weighted sum of unmet resolution;
/// lower is better.

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "coev/genome.hpp"
#include "coev/problem.hpp"
#include "coev/rng.hpp"

namespace coev::sensor {

struct SensorPose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

/// Default epsilon: half the smallest error found for seven sensors by a
/// coarse structured search (see tests/sensor_grid_oracle.cpp).
inline constexpr double default_error_threshold = 0.38250946032612375;

struct EnvironmentModel {
    double radius = 10.0;
    std::size_t samples = 256;
    double fov = std::numbers::pi / 4.0;
    double error_threshold = default_error_threshold;

    void validate() const;

    double required_resolution() const noexcept { return 1.0 / radius; }
    double sample_spacing() const noexcept { return 2.0 * std::numbers::pi * radius / static_cast<double>(samples); }
    double sample_angle(std::size_t k) const noexcept {
        return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
    }

    friend bool operator==(const EnvironmentModel&, const EnvironmentModel&) = default;
};

/// Resolution delivered by one sensor at every boundary sample.
std::vector<double> sensor_visibility(const SensorPose& s, const EnvironmentModel& env);

/// Error of a group given the best resolution per sample.
double error_from_best(std::span<const double> best, const EnvironmentModel& env);

double collaboration_error(std::span<const SensorPose> reps, const EnvironmentModel& env);

/// Error without sensor i minus error with it; +inf when i is the only sensor.
double sensor_contribution(std::size_t i, std::span<const SensorPose> reps, const EnvironmentModel& env);

bool perfect(std::span<const SensorPose> reps, const EnvironmentModel& env);

/// Genome layout: (x, y, theta) with x, y in [-R, R] and theta periodic on [0, 2pi).
RealGenome to_genome(const SensorPose& pose, const EnvironmentModel& env);
SensorPose to_pose(const RealGenome& g);

/// Pulls (x, y) back onto the disc by clamping its radius.
RealGenome repair(const RealGenome& g, const EnvironmentModel& env);

struct VariationParams {
    double sbx_eta = 20.0;
    double position_sigma = 0.5;
    double angle_sigma = 0.1;
    double per_dim_rate = 1.0 / 3.0;

    friend bool operator==(const VariationParams&, const VariationParams&) = default;
};

class SensorProblem final : public Problem<RealGenome> {
  public:
    SensorProblem(EnvironmentModel env, VariationParams variation = {});

    Sense sense() const override { return Sense::minimize; }
    RealGenome random_genome(Rng& rng) const override;
    std::pair<RealGenome, RealGenome> crossover(const RealGenome& a, const RealGenome& b, Rng& rng) const override;
    RealGenome mutate(const RealGenome& g, Rng& rng) const override;
    double individual_fitness(const RealGenome& genome, std::span<const RealGenome> partners) const override;
    double collaboration_fitness(std::span<const RealGenome> reps) const override;
    double contribution(std::size_t i, std::span<const RealGenome> reps) const override;
    bool perfect(std::span<const RealGenome> reps) const override;
    std::string serialize(const RealGenome& g) const override;
    void evaluate(std::span<Individual<RealGenome>> population, std::span<const RealGenome> partners) const override;

    const EnvironmentModel& environment() const noexcept { return env_; }

  private:
    std::vector<SensorPose> poses(std::span<const RealGenome> genomes) const;

    EnvironmentModel env_;
    VariationParams variation_;
};

} // namespace coev::sensor
