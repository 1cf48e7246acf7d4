#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rebrick/similarity.hpp"
#include "rebrick/voxel.hpp"

namespace rebrick {

// One assembly decision: brick type, lowest-corner position, orientation.
struct Action {
    int type_id = 0;
    int x = 0, y = 0, z = 0;
    int orientation = 0;
    friend bool operator==(const Action&, const Action&) = default;
};

// Flattened-index mapping over h*w*d*N*2 actions.
struct ActionSpace {
    int h = 0, w = 0, d = 0, n_types = 0;

    int64_t size() const {
        return static_cast<int64_t>(h) * w * d * n_types * 2;
    }
    int64_t index_of(const Action& a) const;  // throws IndexError out of range
    Action decode(int64_t index) const;       // throws IndexError out of range
};

struct MaskConfig {
    int boundary_tol = 2;        // X: dilation reach around the target, in cells
    double sim_tolerance = 0.0;  // required S_com gain per placement
    bool dedupe_square_orientations = true;

    void validate() const {
        if (boundary_tol < 0) throw ConfigError("boundary_tol must be >= 0");
    }
};

struct RewardConfig {
    double c = 1.0;      // weight on target overlap
    double d = 10.0;     // weight on combined similarity
    double gamma = 0.99; // discount, consumed by training

    void validate() const {
        if (c < 0 || d < 0 || (c == 0 && d == 0))
            throw ConfigError("reward weights must be >= 0 and not both zero");
        if (gamma < 0 || gamma >= 1) throw ConfigError("gamma must be in [0,1)");
    }
};

struct ActionMask {
    std::vector<uint8_t> bits;
    int64_t valid_count = 0;

    bool get(int64_t i) const { return bits[static_cast<size_t>(i)] != 0; }
    std::vector<int64_t> valid_indices() const;
    friend bool operator==(const ActionMask&, const ActionMask&) = default;
};

struct EnvState {
    VoxelGrid v_cur;
    VoxelGrid v_tar;
    Inventory inventory;
    int step = 0;
    // Cached S_com(v_cur, v_tar); 0.0 while v_cur is empty (any first
    // placement scores above it).
    double s_com_cur = 0.0;
};

// --- Validity predicates (evaluated from scratch; the oracle path) ---------
// Boundary: every brick cell inside the target or its X-cell dilation
// (6-direction dilation applied X times, clipped to the grid).
bool predicate_boundary(const Action& a, const EnvState& s, const BrickCatalog& catalog,
                        const MaskConfig& cfg);
// Collision: all cells in bounds and unoccupied.
bool predicate_collision(const Action& a, const EnvState& s, const BrickCatalog& catalog);
bool predicate_inventory(const Action& a, const EnvState& s);
// Hooking: baseplate (z=0), support below, or a brick above to hang from.
bool predicate_hooking(const Action& a, const EnvState& s, const BrickCatalog& catalog);
// Strict S_com improvement over the state's score by more than sim_tolerance.
bool predicate_similarity(const Action& a, const EnvState& s, const BrickCatalog& catalog,
                          const SimilarityConfig& sim_cfg, const MaskConfig& mask_cfg);

// Fast masked enumeration. Bit i is the conjunction of the five predicates for
// decode(i), with square-brick orientation 1 forced off when deduping.
ActionMask compute_mask(const EnvState& s, const BrickCatalog& catalog,
                        const SimilarityConfig& sim_cfg, const MaskConfig& mask_cfg);

// Testing oracle: naive loop over every index with every predicate evaluated
// from scratch. Must equal compute_mask bit-for-bit.
ActionMask brute_force_mask(const EnvState& s, const BrickCatalog& catalog,
                            const SimilarityConfig& sim_cfg, const MaskConfig& mask_cfg);

enum class DoneReason { none, no_valid_actions, max_steps };

struct StepResult {
    double reward = 0.0;
    bool done = false;
    DoneReason done_reason = DoneReason::none;
    double s_com = 0.0;         // post-step
    size_t overlap = 0;         // post-step overlap with the target
    int64_t valid_count = 0;    // of the next mask (0 when done by max_steps)
};

// The episode MDP. Owns the state, keeps the mask and similarity contexts
// cached; rejects actions whose mask bit is false.
class AssemblyEnv {
public:
    AssemblyEnv(Assembly incomplete, VoxelGrid v_tar, Inventory inventory,
                BrickCatalog catalog, MaskConfig mask_cfg, RewardConfig reward_cfg,
                SimilarityConfig sim_cfg, int max_steps = 0);

    const EnvState& state() const { return state_; }
    const Assembly& assembly() const { return assembly_; }
    const BrickCatalog& catalog() const { return catalog_; }
    const ActionSpace& action_space() const { return space_; }
    const ActionMask& mask() const;
    const Inventory& initial_inventory() const { return initial_inventory_; }
    const MaskConfig& mask_config() const { return mask_cfg_; }
    const RewardConfig& reward_config() const { return reward_cfg_; }
    const SimilarityConfig& sim_config() const { return sim_cfg_; }
    int max_steps() const { return max_steps_; }

    bool done() const { return done_; }
    DoneReason done_reason() const { return done_reason_; }
    double initial_s_com() const { return initial_s_com_; }
    size_t overlap() const { return overlap_; }

    StepResult step(const Action& a);
    StepResult step(int64_t action_index);

    // Immediate reward of a hypothetical placement (Eq.-4 style); the action
    // must be mask-valid.
    double action_reward(int64_t action_index) const;

private:
    void compute_mask_cached() const;
    double eval_action_scom(const Action& a, std::vector<int32_t>& cells_out) const;

    EnvState state_;
    Assembly assembly_;
    Inventory initial_inventory_;
    BrickCatalog catalog_;
    MaskConfig mask_cfg_;
    RewardConfig reward_cfg_;
    SimilarityConfig sim_cfg_;
    ActionSpace space_;
    int max_steps_ = 0;

    simx::TargetContext tar_ctx_;
    simx::CurrentContext cur_ctx_;
    std::vector<uint8_t> allowed_;  // boundary-dilated target cells

    mutable ActionMask mask_;
    mutable bool mask_fresh_ = false;

    bool done_ = false;
    DoneReason done_reason_ = DoneReason::none;
    double initial_s_com_ = 0.0;
    size_t overlap_ = 0;
};

// compute_mask with caller-provided (cached) contexts; the env's hot path.
ActionMask compute_mask_with_contexts(const EnvState& s, const BrickCatalog& catalog,
                                      const SimilarityConfig& sim_cfg,
                                      const MaskConfig& mask_cfg,
                                      const simx::TargetContext& tar,
                                      const simx::CurrentContext& cur,
                                      const std::vector<uint8_t>& allowed);

// 6-direction dilation of the target's occupied set, applied tol times.
std::vector<uint8_t> dilated_target(const VoxelGrid& v_tar, int tol);

// Greedy baseline: the mask-valid action with the highest immediate reward,
// ties broken by the lowest flattened index. Requires a non-empty mask.
Action greedy_action(const AssemblyEnv& env);

// Split a complete assembly into (incomplete, complete) by removing the last
// ceil(fraction * n) bricks in reverse placement order. The remainder must
// stay grounded (complete assemblies are expected to be ordered bottom-up).
std::pair<Assembly, Assembly> make_scenario(const Assembly& complete,
                                            double removal_fraction, uint64_t seed,
                                            const BrickCatalog& catalog);

} // namespace rebrick
