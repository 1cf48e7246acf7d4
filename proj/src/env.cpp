#include "rebrick/env.hpp"

#include <algorithm>
#include <cmath>

namespace rebrick {

int64_t ActionSpace::index_of(const Action& a) const {
    if (a.type_id < 0 || a.type_id >= n_types || a.x < 0 || a.x >= h || a.y < 0 ||
        a.y >= w || a.z < 0 || a.z >= d || (a.orientation != 0 && a.orientation != 1))
        throw IndexError("action component out of range");
    return ((((static_cast<int64_t>(a.x) * w + a.y) * d + a.z) * n_types + a.type_id) * 2 +
            a.orientation);
}

Action ActionSpace::decode(int64_t index) const {
    if (index < 0 || index >= size()) throw IndexError("action index out of range");
    Action a;
    a.orientation = static_cast<int>(index % 2);
    index /= 2;
    a.type_id = static_cast<int>(index % n_types);
    index /= n_types;
    a.z = static_cast<int>(index % d);
    index /= d;
    a.y = static_cast<int>(index % w);
    a.x = static_cast<int>(index / w);
    return a;
}

std::vector<int64_t> ActionMask::valid_indices() const {
    std::vector<int64_t> out;
    out.reserve(static_cast<size_t>(valid_count));
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out.push_back(static_cast<int64_t>(i));
    return out;
}

AssemblyEnv::AssemblyEnv(Assembly incomplete, VoxelGrid v_tar, Inventory inventory,
                         BrickCatalog catalog, MaskConfig mask_cfg, RewardConfig reward_cfg,
                         SimilarityConfig sim_cfg, int max_steps)
    : assembly_(std::move(incomplete)),
      catalog_(std::move(catalog)),
      mask_cfg_(mask_cfg),
      reward_cfg_(reward_cfg),
      sim_cfg_(sim_cfg) {
    mask_cfg_.validate();
    reward_cfg_.validate();
    sim_cfg_.validate();
    if (v_tar.empty()) throw EmptyInputError("target grid has no occupied cells");
    if (!assembly_.grid().same_dims(v_tar))
        throw ShapeError("incomplete assembly and target must share grid dims");

    state_.v_cur = assembly_.grid();
    state_.v_tar = std::move(v_tar);
    state_.inventory = std::move(inventory);
    initial_inventory_ = state_.inventory;
    space_ = ActionSpace{state_.v_cur.h(), state_.v_cur.w(), state_.v_cur.d(),
                         catalog_.size()};
    max_steps_ = max_steps > 0
                     ? max_steps
                     : 2 * static_cast<int>(state_.v_tar.occupied_count());

    tar_ctx_ = simx::TargetContext::build(state_.v_tar);
    cur_ctx_ = simx::CurrentContext::build(state_.v_cur, tar_ctx_);
    allowed_ = dilated_target(state_.v_tar, mask_cfg_.boundary_tol);

    state_.s_com_cur =
        state_.v_cur.empty() ? 0.0 : simx::eval_current(tar_ctx_, cur_ctx_, sim_cfg_);
    initial_s_com_ = state_.s_com_cur;
    overlap_ = overlap_count(state_.v_cur, state_.v_tar);

    compute_mask_cached();
    if (mask_.valid_count == 0) {
        done_ = true;
        done_reason_ = DoneReason::no_valid_actions;
    }
}

void AssemblyEnv::compute_mask_cached() const {
    mask_ = compute_mask_with_contexts(state_, catalog_, sim_cfg_, mask_cfg_, tar_ctx_,
                                       cur_ctx_, allowed_);
    mask_fresh_ = true;
}

const ActionMask& AssemblyEnv::mask() const {
    if (!mask_fresh_) compute_mask_cached();
    return mask_;
}

double AssemblyEnv::eval_action_scom(const Action& a, std::vector<int32_t>& cells_out) const {
    cells_out.clear();
    for (const Cell& c :
         cells_of(BrickInstance{a.type_id, a.x, a.y, a.z, a.orientation}, catalog_))
        cells_out.push_back(state_.v_cur.index_of(c.x, c.y, c.z));
    std::sort(cells_out.begin(), cells_out.end());
    return simx::eval_with_cells(tar_ctx_, cur_ctx_, cells_out, sim_cfg_);
}

double AssemblyEnv::action_reward(int64_t action_index) const {
    if (!mask().get(action_index))
        throw InvalidActionError("action " + std::to_string(action_index) + " is masked out");
    const Action a = space_.decode(action_index);
    std::vector<int32_t> cells;
    const double s_com = eval_action_scom(a, cells);
    size_t overlap = overlap_;
    for (int32_t id : cells)
        if (state_.v_tar.at(id)) ++overlap;
    return reward_cfg_.c * static_cast<double>(overlap) + reward_cfg_.d * s_com;
}

StepResult AssemblyEnv::step(const Action& a) { return step(space_.index_of(a)); }

StepResult AssemblyEnv::step(int64_t action_index) {
    if (done_) throw InvalidActionError("episode is done");
    if (!mask().get(action_index))
        throw InvalidActionError("action " + std::to_string(action_index) +
                                 " is masked out (invalid)");
    const Action a = space_.decode(action_index);

    std::vector<int32_t> cells;
    const double s_com_next = eval_action_scom(a, cells);

    assembly_.place(BrickInstance{a.type_id, a.x, a.y, a.z, a.orientation}, catalog_);
    for (int32_t id : cells) state_.v_cur.set(id, true);
    state_.inventory.consume(a.type_id);
    state_.step += 1;

    cur_ctx_.add_cells(cells, tar_ctx_, state_.v_cur);
    state_.s_com_cur = s_com_next;
    for (int32_t id : cells)
        if (state_.v_tar.at(id)) ++overlap_;

    StepResult result;
    result.s_com = s_com_next;
    result.overlap = overlap_;
    result.reward = reward_cfg_.c * static_cast<double>(overlap_) +
                    reward_cfg_.d * s_com_next;

    if (state_.step >= max_steps_) {
        // Terminal by budget; skip the (possibly large) final mask build.
        mask_.bits.assign(mask_.bits.size(), 0);
        mask_.valid_count = 0;
        mask_fresh_ = true;
        done_ = true;
        done_reason_ = DoneReason::max_steps;
    } else {
        compute_mask_cached();
        if (mask_.valid_count == 0) {
            done_ = true;
            done_reason_ = DoneReason::no_valid_actions;
        }
    }
    result.valid_count = mask_.valid_count;
    result.done = done_;
    result.done_reason = done_reason_;
    return result;
}

Action greedy_action(const AssemblyEnv& env) {
    const ActionMask& mask = env.mask();
    if (mask.valid_count == 0) throw InvalidActionError("no valid actions for greedy");
    double best = -std::numeric_limits<double>::infinity();
    int64_t best_idx = -1;
    for (size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i]) continue;
        const double r = env.action_reward(static_cast<int64_t>(i));
        if (r > best) {
            best = r;
            best_idx = static_cast<int64_t>(i);
        }
    }
    return env.action_space().decode(best_idx);
}

std::pair<Assembly, Assembly> make_scenario(const Assembly& complete,
                                            double removal_fraction, uint64_t /*seed*/,
                                            const BrickCatalog& catalog) {
    if (removal_fraction < 0.0 || removal_fraction > 1.0)
        throw ConfigError("removal_fraction must be in [0,1]");
    const size_t n = complete.bricks().size();
    const size_t remove =
        static_cast<size_t>(std::ceil(removal_fraction * static_cast<double>(n)));
    const size_t keep = n - std::min(remove, n);

    const VoxelGrid& g = complete.grid();
    Assembly incomplete(g.h(), g.w(), g.d());
    for (size_t i = 0; i < keep; ++i) incomplete.place(complete.bricks()[i], catalog);
    if (!is_grounded(incomplete, catalog))
        throw ConfigError(
            "removal left floating bricks; complete assemblies must be ordered bottom-up");
    return {std::move(incomplete), complete};
}

} // namespace rebrick
