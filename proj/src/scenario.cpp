#include "rebrick/scenario.hpp"

#include "rebrick/json_io.hpp"

namespace rebrick {

using nlohmann::json;

ScenarioSpec ScenarioSpec::load(const std::filesystem::path& file) {
    const json j = read_json_file(file);
    const std::filesystem::path base = file.parent_path();

    ScenarioSpec spec;
    spec.path = file;
    if (!j.contains("incomplete"))
        throw ConfigError("scenario: missing \"incomplete\" (assembly json path)");
    spec.incomplete = base / j["incomplete"].get<std::string>();
    if (j.contains("library")) spec.library = base / j["library"].get<std::string>();
    if (j.contains("target")) spec.target = base / j["target"].get<std::string>();
    if (!spec.library && !spec.target)
        throw ConfigError("scenario: need \"library\" or a pinned \"target\"");

    if (!j.contains("inventory")) throw ConfigError("scenario: missing \"inventory\"");
    spec.inventory = inventory_from_json(j["inventory"]);

    if (j.contains("mask")) {
        const json& m = j["mask"];
        if (m.contains("X")) spec.mask.boundary_tol = m["X"].get<int>();
        if (m.contains("eps_sim")) spec.mask.sim_tolerance = m["eps_sim"].get<double>();
        if (m.contains("dedupe_square_orientations"))
            spec.mask.dedupe_square_orientations =
                m["dedupe_square_orientations"].get<bool>();
    }
    if (j.contains("reward")) {
        const json& r = j["reward"];
        if (r.contains("c")) spec.reward.c = r["c"].get<double>();
        if (r.contains("d")) spec.reward.d = r["d"].get<double>();
        if (r.contains("gamma")) spec.reward.gamma = r["gamma"].get<double>();
    }
    if (j.contains("sim")) {
        const json& s = j["sim"];
        if (s.contains("alpha")) spec.sim.alpha = s["alpha"].get<double>();
        if (s.contains("beta")) spec.sim.beta = s["beta"].get<double>();
    }
    if (j.contains("max_steps")) spec.max_steps = j["max_steps"].get<int>();
    if (j.contains("seed")) spec.seed = j["seed"].get<uint64_t>();
    if (j.contains("catalog")) spec.catalog_n = j["catalog"].get<int>();

    spec.mask.validate();
    spec.reward.validate();
    spec.sim.validate();
    if (spec.max_steps < 0) throw ConfigError("scenario: max_steps must be >= 0");
    return spec;
}

BuiltScenario build_scenario(const ScenarioSpec& spec, const RegistrationConfig& reg_base,
                             std::optional<uint64_t> seed_override) {
    const BrickCatalog catalog = spec.catalog();
    Assembly incomplete = assembly_from_json(read_json_file(spec.incomplete), catalog);

    VoxelGrid v_tar;
    std::optional<MatchResult> match;
    if (spec.target) {
        v_tar = voxel_from_json(read_json_file(*spec.target));
    } else {
        const ObjectLibrary library = ObjectLibrary::load(*spec.library, catalog);
        RegistrationConfig reg = reg_base;
        reg.rng_seed = seed_override.value_or(spec.seed);
        match = match_library(incomplete.grid(), library, reg, spec.sim);
        v_tar = match->aligned_target;
    }

    AssemblyEnv env(std::move(incomplete), std::move(v_tar), spec.inventory, catalog,
                    spec.mask, spec.reward, spec.sim, spec.max_steps);
    return BuiltScenario{std::move(env), std::move(match)};
}

} // namespace rebrick
