#include "rebrick/json_io.hpp"

#include <fstream>

namespace rebrick {

using nlohmann::json;

namespace {

void expect(bool cond, const std::string& what) {
    if (!cond) throw IoError(what);
}

std::array<int, 3> dims_from(const json& j) {
    expect(j.contains("dims") && j["dims"].is_array() && j["dims"].size() == 3,
           "expected \"dims\":[h,w,d]");
    return {j["dims"][0].get<int>(), j["dims"][1].get<int>(), j["dims"][2].get<int>()};
}

} // namespace

json voxel_to_json(const VoxelGrid& grid) {
    json occ = json::array();
    for (const Cell& c : grid.occupied_cells()) occ.push_back({c.x, c.y, c.z});
    return json{{"dims", {grid.h(), grid.w(), grid.d()}}, {"occupied", std::move(occ)}};
}

VoxelGrid voxel_from_json(const json& j) {
    const auto [h, w, d] = dims_from(j);
    VoxelGrid grid(h, w, d);
    expect(j.contains("occupied") && j["occupied"].is_array(), "expected \"occupied\" array");
    for (const auto& cell : j["occupied"]) {
        expect(cell.is_array() && cell.size() == 3, "occupied entries must be [x,y,z]");
        const int x = cell[0].get<int>(), y = cell[1].get<int>(), z = cell[2].get<int>();
        expect(grid.in_bounds(x, y, z), "occupied cell out of bounds");
        grid.set(x, y, z, true);
    }
    return grid;
}

json assembly_to_json(const Assembly& assembly) {
    json bricks = json::array();
    for (const BrickInstance& b : assembly.bricks())
        bricks.push_back(json{{"type", b.type_id},
                              {"pos", {b.x, b.y, b.z}},
                              {"orient", b.orientation}});
    const VoxelGrid& g = assembly.grid();
    return json{{"dims", {g.h(), g.w(), g.d()}}, {"bricks", std::move(bricks)}};
}

Assembly assembly_from_json(const json& j, const BrickCatalog& catalog) {
    const auto [h, w, d] = dims_from(j);
    Assembly assembly(h, w, d);
    expect(j.contains("bricks") && j["bricks"].is_array(), "expected \"bricks\" array");
    for (const auto& bj : j["bricks"]) {
        expect(bj.contains("type") && bj.contains("pos") && bj.contains("orient"),
               "brick entries need type/pos/orient");
        const auto& pos = bj["pos"];
        expect(pos.is_array() && pos.size() == 3, "brick pos must be [x,y,z]");
        BrickInstance b{bj["type"].get<int>(), pos[0].get<int>(), pos[1].get<int>(),
                        pos[2].get<int>(), bj["orient"].get<int>()};
        expect(b.orientation == 0 || b.orientation == 1, "orient must be 0 or 1");
        assembly.place(b, catalog);
    }
    return assembly;
}

json inventory_to_json(const Inventory& inv) {
    json j = json::object();
    for (const auto& [type_id, count] : inv.counts) j[std::to_string(type_id)] = count;
    return j;
}

Inventory inventory_from_json(const json& j) {
    expect(j.is_object(), "inventory must be an object of type_id -> count");
    Inventory inv;
    for (const auto& [key, value] : j.items()) {
        const int count = value.get<int>();
        expect(count >= 0, "inventory counts must be non-negative");
        inv.counts[std::stoi(key)] = count;
    }
    return inv;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw IoError("bad JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << contents;
    }
    std::filesystem::rename(tmp, path);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

} // namespace rebrick
