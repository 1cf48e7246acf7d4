#include "rebrick/policy.hpp"

#include <chrono>
#include <cstring>
#include <fstream>
#include <numeric>

namespace rebrick {

int observation_dim(int h, int w, int d, int n_types) {
    return 2 * h * w * d + n_types;
}

void encode_observation(const AssemblyEnv& env, Eigen::Ref<Eigen::VectorXf> out) {
    const EnvState& s = env.state();
    const int64_t volume = s.v_cur.volume();
    for (int64_t i = 0; i < volume; ++i) {
        out(i) = s.v_cur.at(static_cast<int32_t>(i)) ? 1.0f : 0.0f;
        out(volume + i) = s.v_tar.at(static_cast<int32_t>(i)) ? 1.0f : 0.0f;
    }
    const int n = env.catalog().size();
    for (int t = 0; t < n; ++t) {
        const int initial = env.initial_inventory().count(t);
        out(2 * volume + t) =
            initial > 0 ? static_cast<float>(s.inventory.count(t)) / initial : 0.0f;
    }
}

EpisodeReport run_episode(AssemblyEnv& env, PolicyKind kind, const PolicyNet* net,
                          Rng* rng, const TraceSink& sink) {
    if (kind == PolicyKind::net_argmax && net == nullptr)
        throw ConfigError("net_argmax policy needs a network");
    if (kind == PolicyKind::random_valid && rng == nullptr)
        throw ConfigError("random_valid policy needs an rng");

    const auto t0 = std::chrono::steady_clock::now();
    EpisodeReport report;
    report.initial_s_com = env.initial_s_com();
    report.final_s_com = env.state().s_com_cur;

    Eigen::VectorXf obs;
    if (kind == PolicyKind::net_argmax) {
        const auto& g = env.state().v_cur;
        obs.resize(observation_dim(g.h(), g.w(), g.d(), env.catalog().size()));
    }

    while (!env.done()) {
        int64_t action;
        switch (kind) {
            case PolicyKind::greedy:
                action = env.action_space().index_of(greedy_action(env));
                break;
            case PolicyKind::random_valid: {
                const std::vector<int64_t> valid = env.mask().valid_indices();
                action = valid[rng->uniform_index(valid.size())];
                break;
            }
            case PolicyKind::net_argmax: {
                encode_observation(env, obs);
                const auto fwd = net->forward(obs);
                action = MaskedCategorical::from_logits(fwd.logits, env.mask()).argmax();
                break;
            }
        }
        const Action decoded = env.action_space().decode(action);
        const StepResult step = env.step(action);
        report.total_reward += step.reward;
        report.final_s_com = step.s_com;
        ++report.steps;
        if (sink)
            sink(TraceRecord{env.state().step, decoded, step.reward, step.s_com,
                             step.overlap, step.valid_count});
    }

    report.done_reason = env.done_reason();
    report.grounded = is_grounded(env.assembly(), env.catalog());
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

TrainerState TrainerState::fresh(int obs_dim, int act_dim, const TrainConfig& cfg) {
    TrainerState state;
    state.net = PolicyNet::init(obs_dim, act_dim, cfg.hidden_width,
                                derive_seed(cfg.seed, 0));
    state.adam = AdamState<float>::init(state.net.param_count());
    state.rollout_rng = Rng(derive_seed(cfg.seed, 1));
    state.shuffle_rng = Rng(derive_seed(cfg.seed, 2));
    return state;
}

namespace {

struct Rollout {
    Eigen::MatrixXf obs;                      // obs_dim x T
    std::vector<int64_t> actions;
    std::vector<std::vector<uint8_t>> masks;  // per-step copy of the mask bits
    std::vector<double> logp, values, rewards;
    std::vector<uint8_t> dones;
    double bootstrap_value = 0.0;
};

} // namespace

TrainResult train(const std::function<AssemblyEnv()>& env_factory, TrainerState& state,
                  const TrainConfig& cfg, const TrainHooks& hooks) {
    cfg.validate();
    TrainResult result;
    if (cfg.total_env_steps <= state.env_steps) return result;  // nothing to do

    std::optional<AssemblyEnv> env(env_factory());
    if (env->done())
        throw TrainingError("training scenario has no valid initial actions");
    const auto& g0 = env->state().v_cur;
    const int obs_dim = observation_dim(g0.h(), g0.w(), g0.d(), env->catalog().size());
    const int act_dim = static_cast<int>(env->action_space().size());
    if (state.net.obs_dim != obs_dim || state.net.act_dim != act_dim)
        throw TrainingError("network shape does not match the environment");

    Eigen::VectorXf obs(obs_dim);
    encode_observation(*env, obs);

    // Window stats for the learning curve.
    double window_scom_sum = 0.0;
    int window_episodes = 0;
    double last_mean_scom = env->initial_s_com();

    Rollout roll;
    while (state.env_steps < cfg.total_env_steps) {
        const int horizon = static_cast<int>(std::min<int64_t>(
            cfg.rollout_horizon, cfg.total_env_steps - state.env_steps));
        roll.obs.resize(obs_dim, horizon);
        roll.actions.assign(horizon, 0);
        roll.masks.assign(horizon, {});
        roll.logp.assign(horizon, 0.0);
        roll.values.assign(horizon, 0.0);
        roll.rewards.assign(horizon, 0.0);
        roll.dones.assign(horizon, 0);

        double reward_sum = 0.0;
        for (int t = 0; t < horizon; ++t) {
            roll.obs.col(t) = obs;
            const auto fwd = state.net.forward(obs);
            const MaskedCategorical dist =
                MaskedCategorical::from_logits(fwd.logits, env->mask());
            const int64_t action = dist.sample(state.rollout_rng);

            roll.actions[t] = action;
            roll.masks[t] = env->mask().bits;
            roll.logp[t] = dist.log_prob(fwd.logits, action);
            roll.values[t] = static_cast<double>(fwd.value);

            const StepResult step = env->step(action);
            roll.rewards[t] = step.reward;
            roll.dones[t] = step.done ? 1 : 0;
            reward_sum += step.reward;

            if (step.done) {
                window_scom_sum += step.s_com;
                ++window_episodes;
                env.emplace(env_factory());
                if (env->done())
                    throw TrainingError("training scenario has no valid initial actions");
            }
            encode_observation(*env, obs);
            ++state.env_steps;
        }

        // Bootstrap from the state after the last transition.
        if (roll.dones[horizon - 1]) {
            roll.bootstrap_value = 0.0;
        } else {
            roll.bootstrap_value = static_cast<double>(state.net.forward(obs).value);
        }

        std::vector<double> values_ext = roll.values;
        values_ext.push_back(roll.bootstrap_value);
        const GaeResult gae =
            gae_advantages(roll.rewards, values_ext, roll.dones, cfg.gamma, cfg.gae_lambda);

        std::vector<int> order(horizon);
        std::iota(order.begin(), order.end(), 0);
        LossReport last_loss;
        for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
            // Fisher-Yates with the shuffle stream.
            for (int i = horizon - 1; i > 0; --i) {
                const int j = static_cast<int>(state.shuffle_rng.uniform_index(i + 1));
                std::swap(order[i], order[j]);
            }
            for (int start = 0; start < horizon; start += cfg.minibatch_size) {
                const int count = std::min(cfg.minibatch_size, horizon - start);
                Batch<float> batch;
                batch.obs.resize(obs_dim, count);
                batch.actions.resize(count);
                batch.mask_bits.resize(count);
                batch.old_logp.resize(count);
                batch.advantages.resize(count);
                batch.returns.resize(count);
                for (int k = 0; k < count; ++k) {
                    const int src = order[start + k];
                    batch.obs.col(k) = roll.obs.col(src);
                    batch.actions[k] = roll.actions[src];
                    batch.mask_bits[k] = roll.masks[src].data();
                    batch.old_logp[k] = roll.logp[src];
                    batch.advantages[k] = gae.advantages[src];
                    batch.returns[k] = gae.returns[src];
                }
                last_loss = ppo_update(state.net, state.adam, batch, cfg);
            }
        }

        ++state.updates;
        if (window_episodes > 0) {
            last_mean_scom = window_scom_sum / window_episodes;
            window_scom_sum = 0.0;
            window_episodes = 0;
        }
        result.curve.push_back(CurveRow{state.updates, state.env_steps, last_mean_scom,
                                        reward_sum / horizon});
        result.losses.push_back(last_loss);

        if (hooks.on_checkpoint && cfg.checkpoint_every_updates > 0 &&
            state.updates % cfg.checkpoint_every_updates == 0)
            hooks.on_checkpoint(state);
    }
    if (hooks.on_checkpoint) hooks.on_checkpoint(state);
    return result;
}

namespace {

constexpr char kMagic[8] = {'R', 'B', 'C', 'K', 'P', 'T', '0', '1'};

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
void write_floats(std::ostream& os, const float* data, int64_t n) {
    os.write(reinterpret_cast<const char*>(data), n * sizeof(float));
}
void read_floats(std::istream& is, float* data, int64_t n) {
    is.read(reinterpret_cast<char*>(data), n * sizeof(float));
}
void write_string(std::ostream& os, const std::string& s) {
    write_pod<int64_t>(os, static_cast<int64_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}
std::string read_string(std::istream& is) {
    const int64_t n = read_pod<int64_t>(is);
    std::string s(static_cast<size_t>(n), '\0');
    is.read(s.data(), n);
    return s;
}

} // namespace

void save_checkpoint(const std::filesystem::path& path, const TrainerState& state,
                     const TrainConfig& cfg) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write checkpoint " + path.string());
    os.write(kMagic, sizeof(kMagic));
    write_pod<uint64_t>(os, cfg.config_hash());
    write_pod<int64_t>(os, state.env_steps);
    write_pod<int64_t>(os, state.updates);
    write_pod<int32_t>(os, state.net.obs_dim);
    write_pod<int32_t>(os, state.net.act_dim);
    write_pod<int32_t>(os, state.net.hidden);

    const auto params = state.net.flat_params();
    write_pod<int64_t>(os, params.size());
    write_floats(os, params.data(), params.size());
    write_pod<int64_t>(os, state.adam.t);
    write_floats(os, state.adam.m.data(), state.adam.m.size());
    write_floats(os, state.adam.v.data(), state.adam.v.size());
    write_string(os, state.rollout_rng.serialize());
    write_string(os, state.shuffle_rng.serialize());
    if (!os) throw IoError("short write on checkpoint " + path.string());
}

namespace {

TrainerState load_checkpoint_impl(const std::filesystem::path& path, uint64_t* hash_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open checkpoint " + path.string());
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError(path.string() + " is not a checkpoint file");
    const uint64_t hash = read_pod<uint64_t>(is);
    if (hash_out) *hash_out = hash;

    TrainerState state;
    state.env_steps = read_pod<int64_t>(is);
    state.updates = read_pod<int64_t>(is);
    const int obs_dim = read_pod<int32_t>(is);
    const int act_dim = read_pod<int32_t>(is);
    const int hidden = read_pod<int32_t>(is);
    state.net = PolicyNet::init(obs_dim, act_dim, hidden, 0);

    const int64_t n_params = read_pod<int64_t>(is);
    if (n_params != state.net.param_count())
        throw IoError("checkpoint parameter count mismatch");
    Eigen::VectorXf params(n_params);
    read_floats(is, params.data(), n_params);
    state.net.set_flat_params(params);

    state.adam = AdamState<float>::init(n_params);
    state.adam.t = read_pod<int64_t>(is);
    read_floats(is, state.adam.m.data(), n_params);
    read_floats(is, state.adam.v.data(), n_params);
    state.rollout_rng.deserialize(read_string(is));
    state.shuffle_rng.deserialize(read_string(is));
    if (!is) throw IoError("truncated checkpoint " + path.string());
    return state;
}

} // namespace

TrainerState load_checkpoint(const std::filesystem::path& path, const TrainConfig& cfg) {
    uint64_t hash = 0;
    TrainerState state = load_checkpoint_impl(path, &hash);
    if (hash != cfg.config_hash())
        throw ConfigError("checkpoint was produced with a different train config");
    return state;
}

PolicyNet load_policy_net(const std::filesystem::path& path) {
    return load_checkpoint_impl(path, nullptr).net;
}

} // namespace rebrick
