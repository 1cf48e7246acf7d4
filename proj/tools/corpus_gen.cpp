// Regenerates the bundled object corpus and scenarios under data/.
// Usage: corpus_gen [output_dir]   (default: ./data)

#include <cstdio>
#include <filesystem>

#include "corpus.hpp"
#include "json.hpp"
#include "rebrick/env.hpp"
#include "rebrick/json_io.hpp"

using namespace rebrick;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct ObjectSpec {
    std::string name;
    Assembly complete;
    size_t scenario_removed;  // bricks removed for the headline scenario
};

json scenario_json(const std::string& incomplete_rel, const json& inventory,
                   int max_steps, uint64_t seed) {
    return json{{"incomplete", incomplete_rel},
                {"library", "../library/manifest.json"},
                {"inventory", inventory},
                {"mask", {{"X", 2}, {"eps_sim", 0.0}}},
                {"reward", {{"c", 1.0}, {"d", 10.0}}},
                {"max_steps", max_steps},
                {"seed", seed}};
}

} // namespace

int main(int argc, char** argv) {
    const fs::path out = argc > 1 ? argv[1] : "data";
    const BrickCatalog cat = BrickCatalog::standard();

    fs::create_directories(out / "library");
    fs::create_directories(out / "incomplete");
    fs::create_directories(out / "targets");
    fs::create_directories(out / "scenarios");
    fs::create_directories(out / "train");

    std::vector<ObjectSpec> objects;
    objects.push_back({"bench", corpus::build_bench(), 2});
    objects.push_back({"chair", corpus::build_chair(), 2});
    objects.push_back({"house", corpus::build_house(), 4});
    objects.push_back({"table", corpus::build_table(), 6});

    json manifest{{"entries", json::array()}};
    for (const ObjectSpec& o : objects) {
        write_json_file(out / "library" / (o.name + ".json"), assembly_to_json(o.complete));
        manifest["entries"].push_back({{"name", o.name}, {"file", o.name + ".json"}});
    }
    write_json_file(out / "library" / "manifest.json", manifest);

    // a roomy shared inventory: plenty of every type
    json inventory = json::object();
    for (int t = 0; t < cat.size(); ++t) inventory[std::to_string(t)] = 30;

    for (const ObjectSpec& o : objects) {
        const double fraction =
            static_cast<double>(o.scenario_removed) / o.complete.bricks().size();
        const auto [incomplete, complete] = make_scenario(o.complete, fraction, 1, cat);
        write_json_file(out / "incomplete" / (o.name + ".json"),
                        assembly_to_json(incomplete));
        write_json_file(out / "scenarios" / (o.name + ".json"),
                        scenario_json("../incomplete/" + o.name + ".json", inventory,
                                      400, 7));
        std::printf("%-6s: %2zu bricks complete, %2zu incomplete\n", o.name.c_str(),
                    o.complete.bricks().size(), incomplete.bricks().size());
    }

    // multi-missing-feature study: the table at increasing removal, all against
    // the pinned complete reference
    const Assembly& table = objects[3].complete;
    write_json_file(out / "targets" / "table.json", voxel_to_json(table.grid()));
    for (int pct : {10, 25, 50, 75}) {
        const auto [incomplete, complete] =
            make_scenario(table, pct / 100.0, 1, cat);
        const std::string stem = "table_missing_" + std::to_string(pct);
        write_json_file(out / "incomplete" / (stem + ".json"),
                        assembly_to_json(incomplete));
        json s = scenario_json("../incomplete/" + stem + ".json", inventory, 400, 7);
        s.erase("library");
        s["target"] = "../targets/table.json";
        write_json_file(out / "scenarios" / (stem + ".json"), s);
    }

    // desk-scale trainer (10x10x10, 3 brick types, pinned target)
    {
        const BrickCatalog cat3 = BrickCatalog::standard_prefix(3);
        const Assembly trainer = corpus::build_train_table();
        const auto [incomplete, complete] = make_scenario(trainer, 12.0 / 20.0, 1, cat3);
        write_json_file(out / "incomplete" / "train_table.json",
                        assembly_to_json(incomplete));
        write_json_file(out / "targets" / "train_table.json",
                        voxel_to_json(trainer.grid()));

        json s{{"incomplete", "../incomplete/train_table.json"},
               {"target", "../targets/train_table.json"},
               {"inventory", {{"0", 4}, {"1", 8}, {"2", 7}}},
               {"mask", {{"X", 1}, {"eps_sim", 0.0}}},
               {"reward", {{"c", 1.0}, {"d", 10.0}}},
               {"max_steps", 64},
               {"seed", 7},
               {"catalog", 3}};
        write_json_file(out / "scenarios" / "train_table.json", s);

        json train_cfg{{"gamma", 0.99},          {"gae_lambda", 0.95},
                       {"clip_epsilon", 0.2},    {"learning_rate", 3e-4},
                       {"rollout_horizon", 512}, {"minibatch_size", 128},
                       {"epochs_per_update", 4}, {"entropy_coef", 0.01},
                       {"value_coef", 0.5},      {"total_env_steps", 200000},
                       {"seed", 1},              {"hidden_width", 256},
                       {"checkpoint_every_updates", 100}};
        write_json_file(out / "train" / "ppo_train_table.json", train_cfg);
        std::printf("trainer: %2zu bricks complete, %2zu incomplete\n",
                    trainer.bricks().size(), incomplete.bricks().size());
    }

    // mask-audit scenario at oracle-check size: 8x8x8, 3 types, X=1
    {
        const BrickCatalog cat3 = BrickCatalog::standard_prefix(3);
        Assembly stool(8, 8, 8);
        stool.place({2, 2, 2, 0, 1}, cat3);  // 1x4 wall along x at y=2
        stool.place({2, 2, 5, 0, 1}, cat3);  // 1x4 wall along x at y=5
        for (int x = 2; x <= 5; ++x) stool.place({2, x, 2, 1, 0}, cat3);  // 4x4 top

        const auto [incomplete, complete] = make_scenario(stool, 3.0 / 6.0, 1, cat3);
        write_json_file(out / "incomplete" / "stool.json", assembly_to_json(incomplete));
        write_json_file(out / "targets" / "stool.json", voxel_to_json(stool.grid()));
        json s{{"incomplete", "../incomplete/stool.json"},
               {"target", "../targets/stool.json"},
               {"inventory", {{"0", 6}, {"1", 6}, {"2", 6}}},
               {"mask", {{"X", 1}, {"eps_sim", 0.0}}},
               {"reward", {{"c", 1.0}, {"d", 10.0}}},
               {"max_steps", 32},
               {"seed", 7},
               {"catalog", 3}};
        write_json_file(out / "scenarios" / "stool.json", s);
    }

    std::printf("corpus written to %s\n", out.string().c_str());
    return 0;
}
