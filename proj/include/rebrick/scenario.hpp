#pragma once

#include <filesystem>
#include <optional>

#include "rebrick/env.hpp"
#include "rebrick/library.hpp"

namespace rebrick {

// On-disk episode description. "target" pins the aligned reference directly;
// otherwise "library" is queried to infer it.
struct ScenarioSpec {
    std::filesystem::path path;  // where it was loaded from
    std::filesystem::path incomplete;
    std::optional<std::filesystem::path> library;
    std::optional<std::filesystem::path> target;
    Inventory inventory;
    MaskConfig mask;
    RewardConfig reward;
    SimilarityConfig sim;
    int max_steps = 0;  // 0 -> 2 * |target cells|
    uint64_t seed = 0;
    int catalog_n = 8;  // prefix of the standard catalog

    static ScenarioSpec load(const std::filesystem::path& file);
    BrickCatalog catalog() const { return BrickCatalog::standard_prefix(catalog_n); }
};

struct BuiltScenario {
    AssemblyEnv env;
    std::optional<MatchResult> match;  // engaged when the library was queried
};

// Load the incomplete assembly, resolve the target (pinned or matched), and
// build the episode environment. seed_override replaces the spec seed when
// set (the CLI --seed flag).
BuiltScenario build_scenario(const ScenarioSpec& spec, const RegistrationConfig& reg_base,
                             std::optional<uint64_t> seed_override = {});

} // namespace rebrick
