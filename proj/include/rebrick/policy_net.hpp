#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "rebrick/env.hpp"
#include "rebrick/rng.hpp"

namespace rebrick {

// Two tanh layers feeding a policy-logits head and a scalar value head.
// Scalar is float for training; the double instantiation backs the
// finite-difference gradient checks.
template <typename Scalar>
struct Mlp {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    int obs_dim = 0, act_dim = 0, hidden = 0;
    Mat w1, w2, w_pi, w_v;  // hidden x obs, hidden x hidden, act x hidden, 1 x hidden
    Vec b1, b2, b_pi;
    Scalar b_v = Scalar(0);

    static Mlp init(int obs_dim, int act_dim, int hidden, uint64_t seed) {
        Mlp net;
        net.obs_dim = obs_dim;
        net.act_dim = act_dim;
        net.hidden = hidden;
        Rng rng(seed);
        auto fill = [&](Mat& m, int rows, int cols, double scale) {
            m.resize(rows, cols);
            for (int c = 0; c < cols; ++c)
                for (int r = 0; r < rows; ++r)
                    m(r, c) = static_cast<Scalar>(rng.normal() * scale);
        };
        fill(net.w1, hidden, obs_dim, 1.0 / std::sqrt(static_cast<double>(obs_dim)));
        fill(net.w2, hidden, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)));
        // Near-uniform initial policy; conventional small head init.
        fill(net.w_pi, act_dim, hidden, 0.01 / std::sqrt(static_cast<double>(hidden)));
        fill(net.w_v, 1, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)));
        net.b1 = Vec::Zero(hidden);
        net.b2 = Vec::Zero(hidden);
        net.b_pi = Vec::Zero(act_dim);
        net.b_v = Scalar(0);
        return net;
    }

    struct Forward {
        Vec h1, h2, logits;
        Scalar value = Scalar(0);
    };

    Forward forward(const Eigen::Ref<const Vec>& obs) const {
        Forward f;
        f.h1 = ((w1 * obs) + b1).array().tanh();
        f.h2 = ((w2 * f.h1) + b2).array().tanh();
        f.logits = (w_pi * f.h2) + b_pi;
        f.value = (w_v * f.h2)(0) + b_v;
        return f;
    }

    int64_t param_count() const {
        return w1.size() + b1.size() + w2.size() + b2.size() + w_pi.size() + b_pi.size() +
               w_v.size() + 1;
    }

    Vec flat_params() const {
        Vec out(param_count());
        int64_t off = 0;
        auto put = [&](const auto& m) {
            out.segment(off, m.size()) = Eigen::Map<const Vec>(m.data(), m.size());
            off += m.size();
        };
        put(w1); put(b1); put(w2); put(b2); put(w_pi); put(b_pi); put(w_v);
        out(off++) = b_v;
        return out;
    }

    void set_flat_params(const Eigen::Ref<const Vec>& flat) {
        int64_t off = 0;
        auto take = [&](auto& m) {
            Eigen::Map<Vec>(m.data(), m.size()) = flat.segment(off, m.size());
            off += m.size();
        };
        take(w1); take(b1); take(w2); take(b2); take(w_pi); take(b_pi); take(w_v);
        b_v = flat(off++);
    }
};

using PolicyNet = Mlp<float>;

template <typename Scalar>
struct AdamState {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    Vec m, v;
    int64_t t = 0;

    static AdamState init(int64_t n) {
        AdamState s;
        s.m = Vec::Zero(n);
        s.v = Vec::Zero(n);
        return s;
    }

    void apply(Eigen::Ref<Vec> params, const Eigen::Ref<const Vec>& grad, double lr) {
        constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
        ++t;
        m = (beta1 * m.template cast<double>() + (1 - beta1) * grad.template cast<double>())
                .template cast<Scalar>();
        v = (beta2 * v.template cast<double>() +
             (1 - beta2) * grad.template cast<double>().cwiseAbs2())
                .template cast<Scalar>();
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        params -= (lr / c1 * m.template cast<double>().array() /
                   ((v.template cast<double>().array() / c2).sqrt() + eps))
                      .template cast<Scalar>()
                      .matrix();
    }
};

// Categorical over mask-valid actions; invalid actions carry exactly zero
// probability. Probability math is done in double regardless of net scalar.
struct MaskedCategorical {
    std::vector<int64_t> valid;  // ascending
    std::vector<double> probs;   // aligned with valid, sums to 1
    double log_z = 0.0;          // logsumexp over valid logits

    template <typename Derived>
    static MaskedCategorical from_logits(const Eigen::MatrixBase<Derived>& logits,
                                         const ActionMask& mask) {
        if (mask.valid_count == 0)
            throw InvalidActionError("masked distribution over zero valid actions");
        MaskedCategorical dist;
        dist.valid.reserve(static_cast<size_t>(mask.valid_count));
        double max_logit = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < mask.bits.size(); ++i) {
            if (!mask.bits[i]) continue;
            dist.valid.push_back(static_cast<int64_t>(i));
            max_logit = std::max(max_logit, static_cast<double>(logits(i)));
        }
        double z = 0.0;
        dist.probs.reserve(dist.valid.size());
        for (int64_t idx : dist.valid) {
            const double e = std::exp(static_cast<double>(logits(idx)) - max_logit);
            dist.probs.push_back(e);
            z += e;
        }
        for (double& p : dist.probs) p /= z;
        dist.log_z = max_logit + std::log(z);
        return dist;
    }

    int64_t sample(Rng& rng) const {
        const double u = rng.uniform();
        double acc = 0.0;
        for (size_t k = 0; k < valid.size(); ++k) {
            acc += probs[k];
            if (u < acc) return valid[k];
        }
        return valid.back();
    }

    int64_t argmax() const {
        size_t best = 0;
        for (size_t k = 1; k < probs.size(); ++k)
            if (probs[k] > probs[best]) best = k;
        return valid[best];
    }

    // log pi(action); the action must be valid.
    template <typename Derived>
    double log_prob(const Eigen::MatrixBase<Derived>& logits, int64_t action) const {
        return static_cast<double>(logits(action)) - log_z;
    }

    double entropy() const {
        double h = 0.0;
        for (double p : probs)
            if (p > 0) h -= p * std::log(p);
        return h;
    }
};

// GAE over one rollout. values has T+1 entries (bootstrap last); dones marks
// environment-terminal steps, which cut the accumulation.
struct GaeResult {
    std::vector<double> advantages;
    std::vector<double> returns;
};
inline GaeResult gae_advantages(const std::vector<double>& rewards,
                                const std::vector<double>& values,
                                const std::vector<uint8_t>& dones, double gamma,
                                double lambda) {
    const size_t T = rewards.size();
    if (values.size() != T + 1 || dones.size() != T)
        throw ConfigError("gae_advantages: inconsistent rollout sizes");
    GaeResult out;
    out.advantages.assign(T, 0.0);
    out.returns.assign(T, 0.0);
    double tail = 0.0;
    for (size_t i = T; i-- > 0;) {
        const double not_done = dones[i] ? 0.0 : 1.0;
        const double delta = rewards[i] + gamma * values[i + 1] * not_done - values[i];
        tail = delta + gamma * lambda * not_done * tail;
        out.advantages[i] = tail;
        out.returns[i] = tail + values[i];
    }
    return out;
}

struct TrainConfig {
    double gamma = 0.99;
    double gae_lambda = 0.95;
    double clip_epsilon = 0.2;
    double learning_rate = 3e-4;
    int rollout_horizon = 512;
    int minibatch_size = 128;
    int epochs_per_update = 4;
    double entropy_coef = 0.01;
    double value_coef = 0.5;
    int64_t total_env_steps = 0;
    uint64_t seed = 0;
    int hidden_width = 256;
    int checkpoint_every_updates = 50;

    void validate() const {
        if (gamma < 0 || gamma >= 1) throw ConfigError("gamma must be in [0,1)");
        if (gae_lambda < 0 || gae_lambda > 1) throw ConfigError("gae_lambda must be in [0,1]");
        if (clip_epsilon <= 0) throw ConfigError("clip_epsilon must be > 0");
        if (learning_rate <= 0) throw ConfigError("learning_rate must be > 0");
        if (rollout_horizon < 1) throw ConfigError("rollout_horizon must be >= 1");
        if (minibatch_size < 1) throw ConfigError("minibatch_size must be >= 1");
        if (epochs_per_update < 1) throw ConfigError("epochs_per_update must be >= 1");
        if (entropy_coef < 0) throw ConfigError("entropy_coef must be >= 0");
        if (value_coef < 0) throw ConfigError("value_coef must be >= 0");
        if (total_env_steps < 0) throw ConfigError("total_env_steps must be >= 0");
        if (hidden_width < 1) throw ConfigError("hidden_width must be >= 1");
    }

    // Stable across resumes: total_env_steps may be raised to continue.
    uint64_t config_hash() const {
        std::string repr;
        auto add = [&](double v) { repr += std::to_string(v) + "|"; };
        add(gamma); add(gae_lambda); add(clip_epsilon); add(learning_rate);
        add(rollout_horizon); add(minibatch_size); add(epochs_per_update);
        add(entropy_coef); add(value_coef);
        add(static_cast<double>(seed)); add(hidden_width);
        return fnv1a64(repr);
    }
};

// One PPO minibatch.
template <typename Scalar>
struct Batch {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> obs;  // obs_dim x B
    std::vector<int64_t> actions;
    std::vector<const uint8_t*> mask_bits;  // act_dim flags per sample
    std::vector<double> old_logp;
    std::vector<double> advantages;  // raw; normalized inside ppo_update
    std::vector<double> returns;

    int size() const { return static_cast<int>(actions.size()); }
};

struct LossReport {
    double policy_loss = 0.0;  // -surrogate
    double value_loss = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
    double total = 0.0;
};

// Gradient of the negated PPO objective (the quantity the optimizer
// minimizes). Shared by ppo_update and the finite-difference checks.
template <typename Scalar>
typename Mlp<Scalar>::Vec ppo_gradient(const Mlp<Scalar>& net, const Batch<Scalar>& batch,
                                       const TrainConfig& cfg, LossReport& report) {
    using Mat = typename Mlp<Scalar>::Mat;
    using Vec = typename Mlp<Scalar>::Vec;
    const int B = batch.size();
    if (B == 0) throw ConfigError("ppo_update on empty batch");

    // Normalize advantages (mean 0, std 1, guarded).
    std::vector<double> adv(batch.advantages);
    double mean = 0.0;
    for (double a : adv) mean += a;
    mean /= B;
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    const double stdev = std::sqrt(var / B);
    // Degenerate batches (std ~ 0, e.g. a single sample) keep their raw
    // advantages; zeroing them would erase the learning signal entirely.
    if (stdev >= 1e-8)
        for (double& a : adv) a = (a - mean) / stdev;

    // Forward pass, whole batch.
    const Mat& x = batch.obs;
    Mat h1 = ((net.w1 * x).colwise() + net.b1).array().tanh();
    Mat h2 = ((net.w2 * h1).colwise() + net.b2).array().tanh();
    Mat logits = (net.w_pi * h2).colwise() + net.b_pi;
    Eigen::RowVectorXd values =
        ((net.w_v * h2).array() + net.b_v).template cast<double>();

    Mat g_logits = Mat::Zero(net.act_dim, B);
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> g_value(1, B);

    double surrogate = 0.0, value_loss = 0.0, entropy_sum = 0.0;
    int clipped_count = 0;
    const double inv_b = 1.0 / static_cast<double>(B);

    std::vector<int> valid;
    std::vector<double> probs;
    for (int i = 0; i < B; ++i) {
        const uint8_t* mask = batch.mask_bits[i];
        valid.clear();
        double max_logit = -std::numeric_limits<double>::infinity();
        for (int jj = 0; jj < net.act_dim; ++jj)
            if (mask[jj]) {
                valid.push_back(jj);
                max_logit = std::max(max_logit, static_cast<double>(logits(jj, i)));
            }
        probs.resize(valid.size());
        double z = 0.0;
        for (size_t k = 0; k < valid.size(); ++k) {
            probs[k] = std::exp(static_cast<double>(logits(valid[k], i)) - max_logit);
            z += probs[k];
        }
        const double log_z = max_logit + std::log(z);
        for (double& p : probs) p /= z;

        const int64_t a = batch.actions[i];
        const double logp = static_cast<double>(logits(a, i)) - log_z;
        const double ratio = std::exp(logp - batch.old_logp[i]);
        const double a_hat = adv[i];

        const double unclipped = ratio * a_hat;
        const double clipped =
            std::clamp(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon) * a_hat;
        surrogate += std::min(unclipped, clipped);
        if (std::abs(ratio - 1.0) > cfg.clip_epsilon) ++clipped_count;

        double h = 0.0;
        for (double p : probs)
            if (p > 0) h -= p * std::log(p);
        entropy_sum += h;

        const bool flow = unclipped <= clipped;
        for (size_t k = 0; k < valid.size(); ++k) {
            const int jj = valid[k];
            const double pj = probs[k];
            double g = 0.0;
            if (flow) g += ratio * a_hat * ((jj == a ? 1.0 : 0.0) - pj);
            if (pj > 0) g -= cfg.entropy_coef * pj * (std::log(pj) + h);
            // minimize -J
            g_logits(jj, i) = static_cast<Scalar>(-g * inv_b);
        }

        const double verr = values(i) - batch.returns[i];
        value_loss += verr * verr;
        g_value(0, i) = static_cast<Scalar>(cfg.value_coef * 2.0 * verr * inv_b);
    }
    surrogate *= inv_b;
    value_loss *= inv_b;
    const double entropy = entropy_sum * inv_b;

    report.policy_loss = -surrogate;
    report.value_loss = value_loss;
    report.entropy = entropy;
    report.clip_fraction = static_cast<double>(clipped_count) * inv_b;
    report.total = report.policy_loss + cfg.value_coef * value_loss -
                   cfg.entropy_coef * entropy;
    if (!std::isfinite(report.total))
        throw TrainingError("non-finite PPO loss (policy=" +
                            std::to_string(report.policy_loss) +
                            ", value=" + std::to_string(value_loss) + ")");

    // Backward.
    Mat d_h2 = net.w_pi.transpose() * g_logits + net.w_v.transpose() * g_value;
    Mat d_z2 = d_h2.array() * (Scalar(1) - h2.array().square());
    Mat d_h1 = net.w2.transpose() * d_z2;
    Mat d_z1 = d_h1.array() * (Scalar(1) - h1.array().square());

    Mat d_w_pi = g_logits * h2.transpose();
    Vec d_b_pi = g_logits.rowwise().sum();
    Mat d_w_v = g_value * h2.transpose();
    const Scalar d_b_v = g_value.sum();
    Mat d_w2 = d_z2 * h1.transpose();
    Vec d_b2 = d_z2.rowwise().sum();
    Mat d_w1 = d_z1 * x.transpose();
    Vec d_b1 = d_z1.rowwise().sum();

    Vec grad(net.param_count());
    int64_t off = 0;
    auto put = [&](const auto& m) {
        grad.segment(off, m.size()) = Eigen::Map<const Vec>(m.data(), m.size());
        off += m.size();
    };
    put(d_w1); put(d_b1); put(d_w2); put(d_b2); put(d_w_pi); put(d_b_pi); put(d_w_v);
    grad(off++) = d_b_v;
    return grad;
}

// Clipped-surrogate PPO step (maximizes surrogate - value_coef * value loss
// + entropy_coef * entropy) with one Adam update. Advantages are normalized
// over the batch here. Throws TrainingError on a non-finite loss.
template <typename Scalar>
LossReport ppo_update(Mlp<Scalar>& net, AdamState<Scalar>& adam, const Batch<Scalar>& batch,
                      const TrainConfig& cfg) {
    LossReport report;
    const auto grad = ppo_gradient(net, batch, cfg, report);
    auto params = net.flat_params();
    adam.apply(params, grad, cfg.learning_rate);
    net.set_flat_params(params);
    return report;
}

// Objective value alone (no update) — the finite-difference oracle target.
template <typename Scalar>
double ppo_objective(const Mlp<Scalar>& net, const Batch<Scalar>& batch,
                     const TrainConfig& cfg) {
    const int B = batch.size();
    std::vector<double> adv(batch.advantages);
    double mean = 0.0;
    for (double a : adv) mean += a;
    mean /= B;
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    const double stdev = std::sqrt(var / B);
    // Degenerate batches (std ~ 0, e.g. a single sample) keep their raw
    // advantages; zeroing them would erase the learning signal entirely.
    if (stdev >= 1e-8)
        for (double& a : adv) a = (a - mean) / stdev;

    double total = 0.0;
    for (int i = 0; i < B; ++i) {
        const auto f = net.forward(batch.obs.col(i));
        const uint8_t* mask = batch.mask_bits[i];
        double max_logit = -std::numeric_limits<double>::infinity();
        for (int jj = 0; jj < net.act_dim; ++jj)
            if (mask[jj]) max_logit = std::max(max_logit, static_cast<double>(f.logits(jj)));
        double z = 0.0;
        for (int jj = 0; jj < net.act_dim; ++jj)
            if (mask[jj]) z += std::exp(static_cast<double>(f.logits(jj)) - max_logit);
        const double log_z = max_logit + std::log(z);
        const double logp = static_cast<double>(f.logits(batch.actions[i])) - log_z;
        const double ratio = std::exp(logp - batch.old_logp[i]);
        const double clipped =
            std::clamp(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon) * adv[i];
        double h = 0.0;
        for (int jj = 0; jj < net.act_dim; ++jj) {
            if (!mask[jj]) continue;
            const double pj = std::exp(static_cast<double>(f.logits(jj)) - log_z);
            if (pj > 0) h -= pj * std::log(pj);
        }
        const double verr = static_cast<double>(f.value) - batch.returns[i];
        total += std::min(ratio * adv[i], clipped) - cfg.value_coef * verr * verr +
                 cfg.entropy_coef * h;
    }
    return total / B;
}

} // namespace rebrick
