#pragma once

#include <filesystem>
#include <functional>
#include <optional>

#include "rebrick/policy_net.hpp"

namespace rebrick {

int observation_dim(int h, int w, int d, int n_types);

// [v_cur bits, v_tar bits, inventory / initial counts]
void encode_observation(const AssemblyEnv& env, Eigen::Ref<Eigen::VectorXf> out);

enum class PolicyKind { greedy, random_valid, net_argmax };

struct TraceRecord {
    int step = 0;
    Action action;
    double reward = 0.0;
    double s_com = 0.0;
    size_t overlap = 0;
    int64_t valid_count = 0;
};
using TraceSink = std::function<void(const TraceRecord&)>;

struct EpisodeReport {
    double initial_s_com = 0.0;
    double final_s_com = 0.0;
    int steps = 0;
    double wall_seconds = 0.0;
    bool grounded = false;
    double total_reward = 0.0;
    DoneReason done_reason = DoneReason::none;
};

// Roll the environment to termination under the chosen policy. `net` is
// required for net_argmax, `rng` for random_valid.
EpisodeReport run_episode(AssemblyEnv& env, PolicyKind kind, const PolicyNet* net,
                          Rng* rng, const TraceSink& sink = {});

// Everything a training run mutates; checkpoints serialize this whole struct.
struct TrainerState {
    PolicyNet net;
    AdamState<float> adam;
    Rng rollout_rng{0};
    Rng shuffle_rng{0};
    int64_t env_steps = 0;
    int64_t updates = 0;

    static TrainerState fresh(int obs_dim, int act_dim, const TrainConfig& cfg);
};

struct CurveRow {
    int64_t update = 0;
    int64_t env_steps = 0;
    double mean_final_scom = 0.0;  // over episodes finished in this window
    double mean_reward = 0.0;      // per step over the rollout
};

struct TrainHooks {
    // Called after checkpoint-worthy updates and at the end.
    std::function<void(const TrainerState&)> on_checkpoint;
};

struct TrainResult {
    std::vector<CurveRow> curve;  // one row per update
    std::vector<LossReport> losses;
};

// Single-worker PPO: rollout -> GAE -> minibatched clipped updates, repeated
// until cfg.total_env_steps. Bit-reproducible for a fixed seed.
TrainResult train(const std::function<AssemblyEnv()>& env_factory, TrainerState& state,
                  const TrainConfig& cfg, const TrainHooks& hooks = {});

// Versioned binary checkpoint of TrainerState + the config hash.
void save_checkpoint(const std::filesystem::path& path, const TrainerState& state,
                     const TrainConfig& cfg);
TrainerState load_checkpoint(const std::filesystem::path& path, const TrainConfig& cfg);
// Net-only load for rollouts; skips the config-hash check.
PolicyNet load_policy_net(const std::filesystem::path& path);

} // namespace rebrick
