// rebrick — infer what an unfinished brick assembly was meant to be and
// finish building it.
//
// Subcommands: match, complete, train, mask-audit, export.
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rebrick/json_io.hpp"
#include "rebrick/library.hpp"
#include "rebrick/policy.hpp"
#include "rebrick/scenario.hpp"

using namespace rebrick;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kSchemaVersion = 1;

int log_level() {  // 0 quiet, 1 info, 2 debug
    const char* env = std::getenv("REBRICK_LOG");
    if (!env) return 1;
    const std::string v = env;
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[rebrick] " << msg << "\n";
}

void require_file(const fs::path& p) {
    if (!fs::exists(p)) throw ConfigError("no such file: " + p.string());
}

// cmd_match accepts either a bare voxel grid or a full assembly file.
VoxelGrid load_any_grid(const fs::path& p, const BrickCatalog& catalog) {
    const json j = read_json_file(p);
    if (j.contains("bricks")) return assembly_from_json(j, catalog).grid();
    return voxel_from_json(j);
}

json transform_to_json(const RigidTransform& t) {
    json rot = json::array();
    for (int r = 0; r < 3; ++r)
        rot.push_back({t.rotation(r, 0), t.rotation(r, 1), t.rotation(r, 2)});
    return json{{"rotation", rot},
                {"translation", {t.translation(0), t.translation(1), t.translation(2)}}};
}

json match_report_json(const MatchResult& r, const SimilarityConfig& sim, uint64_t seed) {
    json per_entry = json::array();
    for (const EntryScore& es : r.per_entry) {
        json e{{"name", es.name}, {"ok", es.ok}, {"millis", es.millis}};
        if (es.ok) {
            e["score"] = es.score;
            e["score_percent"] = scom_percent(es.score, sim);
            e["scale"] = es.scale;
            e["chamfer"] = es.chamfer;
        } else {
            e["error"] = es.error;
        }
        per_entry.push_back(std::move(e));
    }
    return json{{"schema_version", kSchemaVersion},
                {"best",
                 {{"name", r.name},
                  {"scale", r.scale},
                  {"score", r.score},
                  {"score_percent", scom_percent(r.score, sim)},
                  {"transform", transform_to_json(r.transform)}}},
                {"per_entry", std::move(per_entry)},
                {"seed", seed}};
}

int cmd_match(const fs::path& incomplete_path, const fs::path& library_path,
              uint64_t seed, double alpha, double beta, const fs::path& out_dir) {
    require_file(incomplete_path);
    require_file(library_path);
    const BrickCatalog catalog = BrickCatalog::standard();
    const VoxelGrid incomplete = load_any_grid(incomplete_path, catalog);
    const ObjectLibrary library = ObjectLibrary::load(library_path, catalog);

    const SimilarityConfig sim{alpha, beta};
    sim.validate();
    RegistrationConfig reg;
    reg.rng_seed = seed;

    const MatchResult result = match_library(incomplete, library, reg, sim);
    fs::create_directories(out_dir);
    write_json_file(out_dir / "match_report.json", match_report_json(result, sim, seed));
    write_json_file(out_dir / "aligned_target.json", voxel_to_json(result.aligned_target));
    info("matched \"" + result.name + "\" at " +
         std::to_string(scom_percent(result.score, sim)) + "%");
    std::cout << result.name << "\n";
    return 0;
}

int cmd_complete(const fs::path& scenario_path, const std::string& policy,
                 const fs::path& out_dir, std::optional<uint64_t> seed_override) {
    require_file(scenario_path);
    const ScenarioSpec spec = ScenarioSpec::load(scenario_path);
    const uint64_t seed = seed_override.value_or(spec.seed);

    PolicyKind kind = PolicyKind::greedy;
    PolicyNet net;
    if (policy == "greedy") {
        kind = PolicyKind::greedy;
    } else if (policy == "random") {
        kind = PolicyKind::random_valid;
    } else {
        require_file(policy);
        net = load_policy_net(policy);
        kind = PolicyKind::net_argmax;
    }

    const auto t0 = std::chrono::steady_clock::now();
    BuiltScenario built = build_scenario(spec, RegistrationConfig{}, seed);
    AssemblyEnv& env = built.env;
    if (kind == PolicyKind::net_argmax) {
        const int obs = observation_dim(env.state().v_cur.h(), env.state().v_cur.w(),
                                        env.state().v_cur.d(), env.catalog().size());
        if (net.obs_dim != obs || net.act_dim != env.action_space().size())
            throw ConfigError("checkpoint network does not fit this scenario");
    }

    fs::create_directories(out_dir);
    std::string trace;
    Rng rng(derive_seed(seed, 101));
    const EpisodeReport episode = run_episode(
        env, kind, kind == PolicyKind::net_argmax ? &net : nullptr,
        kind == PolicyKind::random_valid ? &rng : nullptr, [&](const TraceRecord& rec) {
            const json line{{"step", rec.step},
                            {"action",
                             {{"B", rec.action.type_id},
                              {"pos", {rec.action.x, rec.action.y, rec.action.z}},
                              {"orient", rec.action.orientation}}},
                            {"reward", rec.reward},
                            {"s_com", rec.s_com},
                            {"overlap", rec.overlap},
                            {"valid_count", rec.valid_count}};
            trace += line.dump() + "\n";
        });
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_file_atomic(out_dir / "trace.jsonl", trace);
    write_json_file(out_dir / "assembly.json", assembly_to_json(env.assembly()));
    write_file_atomic(out_dir / "assembly.ply",
                      to_ply(voxel_to_pointcloud(env.state().v_cur)));
    write_json_file(out_dir / "aligned_target.json", voxel_to_json(env.state().v_tar));
    if (built.match)
        write_json_file(out_dir / "match_report.json",
                        match_report_json(*built.match, spec.sim, seed));

    const bool flagged_empty_start = episode.steps == 0;
    json report{{"schema_version", kSchemaVersion},
                {"scenario", scenario_path.string()},
                {"policy", policy},
                {"seed", seed},
                {"initial_scom_percent", scom_percent(episode.initial_s_com, spec.sim)},
                {"final_scom_percent", scom_percent(episode.final_s_com, spec.sim)},
                {"steps", episode.steps},
                {"wall_time_seconds", wall},
                {"grounded", episode.grounded},
                {"total_reward", episode.total_reward},
                {"done_reason", env.done_reason() == DoneReason::max_steps
                                    ? "max_steps"
                                    : "no_valid_actions"},
                {"no_valid_action_at_start", flagged_empty_start},
                {"success", true},
                {"exports",
                 {{"trace", "trace.jsonl"},
                  {"assembly", "assembly.json"},
                  {"ply", "assembly.ply"},
                  {"aligned_target", "aligned_target.json"}}}};
    if (built.match) {
        report["match"] = {{"name", built.match->name},
                           {"score_percent", scom_percent(built.match->score, spec.sim)}};
        report["exports"]["match_report"] = "match_report.json";
    }
    write_json_file(out_dir / "run_report.json", report);
    info("completed " + std::to_string(episode.steps) + " steps, " +
         std::to_string(scom_percent(episode.initial_s_com, spec.sim)) + "% -> " +
         std::to_string(scom_percent(episode.final_s_com, spec.sim)) + "%");
    return 0;
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig cfg;
    auto take_num = [&](const char* key, auto& field) {
        if (!j.contains(key)) return;
        if (!j[key].is_number())
            throw ConfigError(std::string("train.") + key + ": expected a number");
        field = j[key].get<std::decay_t<decltype(field)>>();
    };
    take_num("gamma", cfg.gamma);
    take_num("gae_lambda", cfg.gae_lambda);
    take_num("clip_epsilon", cfg.clip_epsilon);
    take_num("learning_rate", cfg.learning_rate);
    take_num("rollout_horizon", cfg.rollout_horizon);
    take_num("minibatch_size", cfg.minibatch_size);
    take_num("epochs_per_update", cfg.epochs_per_update);
    take_num("entropy_coef", cfg.entropy_coef);
    take_num("value_coef", cfg.value_coef);
    take_num("total_env_steps", cfg.total_env_steps);
    take_num("seed", cfg.seed);
    take_num("hidden_width", cfg.hidden_width);
    take_num("checkpoint_every_updates", cfg.checkpoint_every_updates);
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("train config: ") + e.what());
    }
    return cfg;
}

int cmd_train(const fs::path& scenario_path, const fs::path& config_path,
              const fs::path& out_dir, const std::optional<fs::path>& resume) {
    require_file(scenario_path);
    require_file(config_path);
    const ScenarioSpec spec = ScenarioSpec::load(scenario_path);
    const TrainConfig cfg = train_config_from_json(read_json_file(config_path));
    fs::create_directories(out_dir);

    auto factory = [&]() {
        BuiltScenario built = build_scenario(spec, RegistrationConfig{}, spec.seed);
        return std::move(built.env);
    };

    AssemblyEnv probe = factory();
    const int obs_dim = observation_dim(probe.state().v_cur.h(), probe.state().v_cur.w(),
                                        probe.state().v_cur.d(), probe.catalog().size());
    const int act_dim = static_cast<int>(probe.action_space().size());

    TrainerState state = resume ? load_checkpoint(*resume, cfg)
                                : TrainerState::fresh(obs_dim, act_dim, cfg);
    if (!resume) save_checkpoint(out_dir / "checkpoint-0.bin", state, cfg);

    const fs::path curve_path = out_dir / "curve.csv";
    std::ofstream curve(curve_path, resume ? std::ios::app : std::ios::trunc);
    if (!curve) throw IoError("cannot write " + curve_path.string());
    if (!resume) curve << "update,env_steps,mean_final_scom,mean_reward\n";

    TrainHooks hooks;
    hooks.on_checkpoint = [&](const TrainerState& s) {
        save_checkpoint(out_dir / ("checkpoint-" + std::to_string(s.updates) + ".bin"),
                        s, cfg);
        save_checkpoint(out_dir / "checkpoint-final.bin", s, cfg);
    };

    info("training to " + std::to_string(cfg.total_env_steps) + " env steps");
    const TrainResult result = train(factory, state, cfg, hooks);
    for (const CurveRow& row : result.curve)
        curve << row.update << "," << row.env_steps << "," << row.mean_final_scom << ","
              << row.mean_reward << "\n";
    curve.flush();
    save_checkpoint(out_dir / "checkpoint-final.bin", state, cfg);
    info("done: " + std::to_string(state.updates) + " updates, " +
         std::to_string(state.env_steps) + " env steps");
    return 0;
}

int cmd_mask_audit(const fs::path& scenario_path, int samples, uint64_t seed,
                   const std::optional<fs::path>& out_file) {
    require_file(scenario_path);
    const ScenarioSpec spec = ScenarioSpec::load(scenario_path);
    Rng rng(seed);

    int64_t mismatches = 0;
    json mismatch_list = json::array();
    std::vector<int64_t> valid_counts;
    // rejection tallies over all sampled states, by predicate
    int64_t rej_inventory = 0, rej_boundary = 0, rej_collision = 0, rej_hooking = 0,
            rej_similarity = 0, rej_dedupe = 0;

    int sampled = 0;
    while (sampled < samples) {
        BuiltScenario built = build_scenario(spec, RegistrationConfig{}, spec.seed);
        AssemblyEnv& env = built.env;
        // random walk to a random reachable depth
        const int depth = static_cast<int>(rng.uniform_index(8));
        for (int i = 0; i < depth && !env.done(); ++i) {
            const auto valid = env.mask().valid_indices();
            env.step(valid[rng.uniform_index(valid.size())]);
        }
        const EnvState& state = env.state();
        const ActionMask fast =
            compute_mask(state, env.catalog(), env.sim_config(), env.mask_config());
        const ActionMask slow =
            brute_force_mask(state, env.catalog(), env.sim_config(), env.mask_config());
        valid_counts.push_back(fast.valid_count);
        for (size_t i = 0; i < fast.bits.size(); ++i) {
            if (fast.bits[i] != slow.bits[i]) {
                ++mismatches;
                if (mismatch_list.size() < 64)
                    mismatch_list.push_back(static_cast<int64_t>(i));
            }
        }
        // per-predicate tallies (each predicate judged independently)
        const ActionSpace& space = env.action_space();
        for (int64_t i = 0; i < space.size(); ++i) {
            const Action a = space.decode(i);
            if (a.orientation == 1 && env.mask_config().dedupe_square_orientations &&
                env.catalog().is_square(a.type_id)) {
                ++rej_dedupe;
                continue;
            }
            if (!predicate_inventory(a, state)) ++rej_inventory;
            if (!predicate_boundary(a, state, env.catalog(), env.mask_config()))
                ++rej_boundary;
            if (!predicate_collision(a, state, env.catalog())) ++rej_collision;
            if (!predicate_hooking(a, state, env.catalog())) ++rej_hooking;
            if (!predicate_similarity(a, state, env.catalog(), env.sim_config(),
                                      env.mask_config()))
                ++rej_similarity;
        }
        ++sampled;
    }

    json report{{"schema_version", kSchemaVersion},
                {"scenario", scenario_path.string()},
                {"samples", samples},
                {"seed", seed},
                {"mismatches", mismatches},
                {"mismatched_indices", mismatch_list},
                {"valid_counts", valid_counts},
                {"rejections",
                 {{"inventory", rej_inventory},
                  {"boundary", rej_boundary},
                  {"collision", rej_collision},
                  {"hooking", rej_hooking},
                  {"similarity", rej_similarity},
                  {"square_dedupe", rej_dedupe}}}};
    if (out_file) write_json_file(*out_file, report);
    std::cout << report.dump(2) << "\n";
    if (mismatches != 0) {
        info("MASK MISMATCH: " + std::to_string(mismatches) + " bits differ");
        return 1;
    }
    return 0;
}

int cmd_export(const fs::path& assembly_path, const std::string& format,
               const fs::path& out_file) {
    require_file(assembly_path);
    const BrickCatalog catalog = BrickCatalog::standard();
    const Assembly assembly =
        assembly_from_json(read_json_file(assembly_path), catalog);
    if (format == "ply") {
        write_file_atomic(out_file, to_ply(voxel_to_pointcloud(assembly.grid())));
    } else if (format == "voxel") {
        write_json_file(out_file, voxel_to_json(assembly.grid()));
    } else {
        throw ConfigError("unknown export format: " + format + " (want ply|voxel)");
    }
    info("wrote " + out_file.string());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"brick assembly completion: infer the intended object and finish it"};
    app.require_subcommand(1);

    // match
    auto* match = app.add_subcommand("match", "match an incomplete structure against a library");
    fs::path m_incomplete, m_library, m_out = ".";
    uint64_t m_seed = 0;
    double m_alpha = 0.5, m_beta = 0.5;
    match->add_option("--incomplete", m_incomplete, "voxel or assembly json")->required();
    match->add_option("--library", m_library, "library manifest json")->required();
    match->add_option("--seed", m_seed, "rng seed");
    match->add_option("--alpha", m_alpha, "geometric similarity weight");
    match->add_option("--beta", m_beta, "structural similarity weight");
    match->add_option("--out", m_out, "output directory");

    // complete
    auto* complete = app.add_subcommand("complete", "run the full inference + completion pipeline");
    fs::path c_scenario, c_out = ".";
    std::string c_policy = "greedy";
    std::optional<uint64_t> c_seed;
    complete->add_option("--scenario", c_scenario, "scenario json")->required();
    complete->add_option("--policy", c_policy, "greedy | random | checkpoint path");
    complete->add_option("--out", c_out, "output directory")->required();
    complete->add_option("--seed", c_seed, "override the scenario seed");

    // train
    auto* train_cmd = app.add_subcommand("train", "train the masked PPO policy");
    fs::path t_scenario, t_config, t_out = ".";
    std::optional<fs::path> t_resume;
    train_cmd->add_option("--scenario", t_scenario, "scenario json")->required();
    train_cmd->add_option("--config", t_config, "train config json")->required();
    train_cmd->add_option("--out", t_out, "output directory")->required();
    train_cmd->add_option("--resume", t_resume, "checkpoint to continue from");

    // mask-audit
    auto* audit = app.add_subcommand("mask-audit", "compare the fast mask against the brute-force oracle");
    fs::path a_scenario;
    std::optional<fs::path> a_out;
    int a_samples = 20;
    uint64_t a_seed = 0;
    audit->add_option("--scenario", a_scenario, "scenario json")->required();
    audit->add_option("--samples", a_samples, "number of random reachable states");
    audit->add_option("--seed", a_seed, "rng seed");
    audit->add_option("--out", a_out, "also write the report here");

    // export
    auto* export_cmd = app.add_subcommand("export", "export an assembly as ply or voxel json");
    fs::path e_assembly, e_out;
    std::string e_format = "ply";
    export_cmd->add_option("--assembly", e_assembly, "assembly json")->required();
    export_cmd->add_option("--format", e_format, "ply | voxel");
    export_cmd->add_option("--out", e_out, "output file")->required();

    try {
        app.parse(argc, argv);
        if (match->parsed())
            return cmd_match(m_incomplete, m_library, m_seed, m_alpha, m_beta, m_out);
        if (complete->parsed()) return cmd_complete(c_scenario, c_policy, c_out, c_seed);
        if (train_cmd->parsed()) return cmd_train(t_scenario, t_config, t_out, t_resume);
        if (audit->parsed()) return cmd_mask_audit(a_scenario, a_samples, a_seed, a_out);
        if (export_cmd->parsed()) return cmd_export(e_assembly, e_format, e_out);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
