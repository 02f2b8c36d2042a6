#include "coev/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "coev/operators.hpp"

namespace coev::sensor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Absorbs rounding when a wedge edge falls exactly on a sample.
constexpr double kAngleTolerance = 1e-9;

double wrap_signed(double angle) {
    double a = std::fmod(angle + std::numbers::pi, kTwoPi);
    if (a < 0.0) {
        a += kTwoPi;
    }
    return a - std::numbers::pi;
}

void accumulate_best(const SensorPose& s, const EnvironmentModel& env, std::vector<double>& best) {
    const std::vector<double> vis = sensor_visibility(s, env);
    for (std::size_t k = 0; k < best.size(); ++k) {
        best[k] = std::max(best[k], vis[k]);
    }
}

} // namespace

void EnvironmentModel::validate() const {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("EnvironmentModel: radius must be positive");
    }
    if (samples < 8) {
        throw std::invalid_argument("EnvironmentModel: at least 8 boundary samples required");
    }
    if (!(fov > 0.0 && fov <= kTwoPi)) {
        throw std::invalid_argument("EnvironmentModel: field of view outside (0, 2pi]");
    }
    if (!(error_threshold >= 0.0)) {
        throw std::invalid_argument("EnvironmentModel: error threshold must be >= 0");
    }
}

std::vector<double> sensor_visibility(const SensorPose& s, const EnvironmentModel& env) {
    std::vector<double> vis(env.samples, 0.0);
    const double half = env.fov / 2.0;
    const bool omni = env.fov >= kTwoPi;
    const double min_distance = env.radius / 1000.0;
    for (std::size_t k = 0; k < env.samples; ++k) {
        const double angle = env.sample_angle(k);
        const double dx = env.radius * std::cos(angle) - s.x;
        const double dy = env.radius * std::sin(angle) - s.y;
        const double diff = wrap_signed(std::atan2(dy, dx) - s.theta);
        if (omni || (diff >= -half - kAngleTolerance && diff < half - kAngleTolerance)) {
            const double distance = std::max(std::hypot(dx, dy), min_distance);
            // Cosine between the viewing ray and the outward boundary normal.
            const double facing = std::max(0.0, (dx * std::cos(angle) + dy * std::sin(angle)) / distance);
            vis[k] = facing / distance;
        }
    }
    return vis;
}

double error_from_best(std::span<const double> best, const EnvironmentModel& env) {
    const double required = env.required_resolution();
    double deficit = 0.0;
    for (const double b : best) {
        deficit += std::max(0.0, required - b);
    }
    return deficit * env.sample_spacing();
}

double collaboration_error(std::span<const SensorPose> reps, const EnvironmentModel& env) {
    std::vector<double> best(env.samples, 0.0);
    for (const auto& s : reps) {
        accumulate_best(s, env, best);
    }
    return error_from_best(best, env);
}

double sensor_contribution(std::size_t i, std::span<const SensorPose> reps, const EnvironmentModel& env) {
    if (i >= reps.size()) {
        throw std::out_of_range("sensor_contribution: index out of range");
    }
    if (reps.size() == 1) {
        return std::numeric_limits<double>::infinity();
    }
    std::vector<SensorPose> without(reps.begin(), reps.end());
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    return collaboration_error(without, env) - collaboration_error(reps, env);
}

bool perfect(std::span<const SensorPose> reps, const EnvironmentModel& env) {
    return collaboration_error(reps, env) < env.error_threshold;
}

RealGenome to_genome(const SensorPose& pose, const EnvironmentModel& env) {
    return RealGenome({pose.x, pose.y, pose.theta},
                      {Bound{-env.radius, env.radius}, Bound{-env.radius, env.radius}, Bound{0.0, kTwoPi, true}});
}

SensorPose to_pose(const RealGenome& g) {
    if (g.size() != 3) {
        throw std::invalid_argument("to_pose: sensor genome must have 3 dimensions");
    }
    return SensorPose{g[0], g[1], g[2]};
}

RealGenome repair(const RealGenome& g, const EnvironmentModel& env) {
    SensorPose p = to_pose(g);
    const double r = std::hypot(p.x, p.y);
    if (r > env.radius) {
        p.x *= env.radius / r;
        p.y *= env.radius / r;
    }
    return to_genome(p, env);
}

SensorProblem::SensorProblem(EnvironmentModel env, VariationParams variation)
    : env_(env), variation_(variation) {
    env_.validate();
    if (!(variation_.sbx_eta > 0.0)) {
        throw std::invalid_argument("SensorProblem: sbx eta must be positive");
    }
    if (!(variation_.position_sigma >= 0.0 && variation_.angle_sigma >= 0.0)) {
        throw std::invalid_argument("SensorProblem: negative mutation sigma");
    }
}

RealGenome SensorProblem::random_genome(Rng& rng) const {
    const double x = rng.uniform_real(-env_.radius, env_.radius);
    const double y = rng.uniform_real(-env_.radius, env_.radius);
    const double theta = rng.uniform_real(0.0, kTwoPi);
    return repair(to_genome(SensorPose{x, y, theta}, env_), env_);
}

std::pair<RealGenome, RealGenome> SensorProblem::crossover(const RealGenome& a, const RealGenome& b,
                                                           Rng& rng) const {
    auto [c1, c2] = sbx_crossover(a, b, variation_.sbx_eta, rng);
    return {repair(c1, env_), repair(c2, env_)};
}

RealGenome SensorProblem::mutate(const RealGenome& g, Rng& rng) const {
    const double sigma[] = {variation_.position_sigma, variation_.position_sigma, variation_.angle_sigma};
    return repair(gaussian_mutation(g, sigma, variation_.per_dim_rate, rng), env_);
}

std::vector<SensorPose> SensorProblem::poses(std::span<const RealGenome> genomes) const {
    std::vector<SensorPose> out;
    out.reserve(genomes.size());
    for (const auto& g : genomes) {
        out.push_back(to_pose(g));
    }
    return out;
}

double SensorProblem::individual_fitness(const RealGenome& genome, std::span<const RealGenome> partners) const {
    std::vector<SensorPose> group = poses(partners);
    group.insert(group.begin(), to_pose(genome));
    return collaboration_error(group, env_);
}

double SensorProblem::collaboration_fitness(std::span<const RealGenome> reps) const {
    return collaboration_error(poses(reps), env_);
}

double SensorProblem::contribution(std::size_t i, std::span<const RealGenome> reps) const {
    return sensor_contribution(i, poses(reps), env_);
}

bool SensorProblem::perfect(std::span<const RealGenome> reps) const {
    return sensor::perfect(poses(reps), env_);
}

std::string SensorProblem::serialize(const RealGenome& g) const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g:%.17g:%.17g", g[0], g[1], g[2]);
    return buf;
}

void SensorProblem::evaluate(std::span<Individual<RealGenome>> population,
                             std::span<const RealGenome> partners) const {
    std::vector<double> partner_best(env_.samples, 0.0);
    for (const auto& p : partners) {
        accumulate_best(to_pose(p), env_, partner_best);
    }
    std::vector<double> best;
    for (auto& ind : population) {
        best = partner_best;
        accumulate_best(to_pose(ind.genome), env_, best);
        ind.fitness = error_from_best(best, env_);
    }
}

} // namespace coev::sensor
