#include "hgr/seesaw_sim.hpp"

#include <algorithm>
#include <cmath>

#include "hgr/error.hpp"
#include "hgr/rng.hpp"

namespace hgr {

namespace {

double clamp01(double v) {
    return std::clamp(v, 0.0, 1.0);
}

} // namespace

void SimConfig::check() const {
    if (steps < 1)
        throw ValidationError("sim: steps must be >= 1");
    if (group_size < 2)
        throw ValidationError("sim: group_size must be >= 2");
    if (!(learning_rate > 0.0))
        throw ValidationError("sim: learning_rate must be > 0");
    if (!(perturbation > 0.0))
        throw ValidationError("sim: perturbation must be > 0");
    if (initial_params.size() != 3)
        throw ValidationError("sim: initial_params must have dimension 3");
    if (!(temperature > 0.0))
        throw ValidationError("sim: temperature must be > 0");
    if (window < 2)
        throw ValidationError("sim: window must be >= 2");
}

RewardVector synthetic_rewards(const std::vector<double>& params, const std::vector<double>& sample,
                               const SimConfig& config) {
    if (params.size() != config.initial_params.size() || sample.size() != params.size())
        throw ValidationError("synthetic_rewards: dimension mismatch");
    double x0 = params[0] + sample[0];
    double x1 = params[1] + sample[1];
    double x2 = params[2] + sample[2];
    const SimObjectives& obj = config.objectives;

    RewardVector r;
    double d0 = x0 - obj.easy_optimum;
    r.rel = clamp01(1.0 - obj.easy_curvature * d0 * d0);
    double penalty = obj.conflict_depth /
                     (1.0 + std::exp(-obj.conflict_sharpness * (x0 - obj.conflict_mid)));
    r.faith = clamp01(obj.hard_base[0] + obj.hard_gain * x1 - penalty);
    r.conc = clamp01(obj.hard_base[1] + obj.hard_gain * x2 - penalty);
    return r;
}

SimTrajectory run_sim(const SimConfig& config) {
    config.check();

    rng::Rng rng(config.seed);
    std::vector<double> params = config.initial_params;
    std::size_t dim = params.size();
    std::size_t group = static_cast<std::size_t>(config.group_size);

    RewardWindow window(config.window);
    WeightState state;
    state.temperature = config.temperature;

    SimTrajectory trajectory;
    trajectory.steps.reserve(static_cast<std::size_t>(config.steps));

    std::vector<double> zero(dim, 0.0);
    std::vector<std::vector<double>> noise(group, std::vector<double>(dim));

    for (int step = 0; step < config.steps; ++step) {
        RolloutGroup rollout;
        rollout.rewards.reserve(group);
        ObjVec means{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < group; ++i) {
            for (std::size_t d = 0; d < dim; ++d)
                noise[i][d] = rng.normal();
            std::vector<double> sample(dim);
            for (std::size_t d = 0; d < dim; ++d)
                sample[d] = config.perturbation * noise[i][d];
            RewardVector r = synthetic_rewards(params, sample, config);
            rollout.rewards.push_back(r);
            ObjVec arr = r.as_array();
            for (int j = 0; j < kObjectives; ++j)
                means[j] += arr[j] / static_cast<double>(group);
        }

        ObjVec weights = state.weights;
        weighted_advantage(rollout, weights);

        double scale = config.learning_rate / static_cast<double>(group);
        for (std::size_t i = 0; i < group; ++i)
            for (std::size_t d = 0; d < dim; ++d)
                params[d] += scale * rollout.advantages[i] * noise[i][d];

        trajectory.steps.push_back({means, weights});

        if (config.mode == SimMode::dynamic_weights)
            std::tie(window, state) = step_scheduler(std::move(window), state, means);
    }

    trajectory.final_params = params;
    trajectory.final_rewards = synthetic_rewards(params, zero, config).as_array();
    return trajectory;
}

} // namespace hgr
