#include "../tools/corpus.hpp"
#include "doctest.h"
#include "rebrick/env.hpp"
#include "rebrick/library.hpp"
#include "rebrick/rng.hpp"

using namespace rebrick;

namespace {

ObjectLibrary small_library() {
    const BrickCatalog cat = BrickCatalog::standard();
    std::vector<LibraryEntry> entries;
    entries.push_back({"chair", corpus::build_chair()});
    entries.push_back({"house", corpus::build_house()});
    return ObjectLibrary(std::move(entries), cat);
}

} // namespace

TEST_SUITE("matching") {

TEST_CASE("library ingest validates groundedness and names") {
    const BrickCatalog cat = BrickCatalog::standard();
    Assembly floating(8, 8, 8);
    floating.place({0, 2, 2, 3, 0}, cat);
    std::vector<LibraryEntry> bad;
    bad.push_back({"float", std::move(floating)});
    CHECK_THROWS_AS(ObjectLibrary(std::move(bad), cat), ConfigError);

    std::vector<LibraryEntry> dup;
    dup.push_back({"chair", corpus::build_chair()});
    dup.push_back({"chair", corpus::build_chair()});
    CHECK_THROWS_AS(ObjectLibrary(std::move(dup), cat), ConfigError);
}

TEST_CASE("self-superset dominates an unrelated object") {
    const BrickCatalog cat = BrickCatalog::standard();
    const auto [incomplete, complete] =
        make_scenario(corpus::build_chair(), 2.0 / 14.0, 1, cat);

    RegistrationConfig reg;
    reg.rng_seed = 7;
    const MatchResult r =
        match_library(incomplete.grid(), small_library(), reg, SimilarityConfig{});
    CHECK(r.name == "chair");
    CHECK(r.score > 0.0);
    CHECK(r.per_entry.size() == 2);
    CHECK(r.aligned_target.same_dims(incomplete.grid()));
}

TEST_CASE("single-entry library wins by default") {
    const BrickCatalog cat = BrickCatalog::standard();
    const auto [incomplete, complete] =
        make_scenario(corpus::build_bench(), 2.0 / 7.0, 1, cat);
    std::vector<LibraryEntry> entries;
    entries.push_back({"house", corpus::build_house()});
    const ObjectLibrary lib(std::move(entries), cat);

    RegistrationConfig reg;
    reg.rng_seed = 3;
    const MatchResult r = match_library(incomplete.grid(), lib, reg, SimilarityConfig{});
    CHECK(r.name == "house");
}

TEST_CASE("match is deterministic for a fixed seed") {
    const BrickCatalog cat = BrickCatalog::standard();
    const auto [incomplete, complete] =
        make_scenario(corpus::build_chair(), 4.0 / 14.0, 1, cat);
    RegistrationConfig reg;
    reg.rng_seed = 42;
    const MatchResult a =
        match_library(incomplete.grid(), small_library(), reg, SimilarityConfig{});
    const MatchResult b =
        match_library(incomplete.grid(), small_library(), reg, SimilarityConfig{});
    CHECK(a.name == b.name);
    CHECK(a.score == b.score);
    CHECK(a.transform.rotation == b.transform.rotation);
    CHECK(a.transform.translation == b.transform.translation);
    CHECK(a.aligned_target == b.aligned_target);
    for (size_t i = 0; i < a.per_entry.size(); ++i)
        CHECK(a.per_entry[i].score == b.per_entry[i].score);
}

TEST_CASE("doubling an entry's geometric scale does not change selection") {
    const BrickCatalog cat = BrickCatalog::standard();
    const auto [incomplete, complete] =
        make_scenario(corpus::build_chair(), 2.0 / 14.0, 1, cat);

    std::vector<LibraryEntry> big;
    big.push_back({"chair", corpus::double_scale(corpus::build_chair(), cat)});
    big.push_back({"house", corpus::build_house()});
    const ObjectLibrary lib(std::move(big), cat);

    RegistrationConfig reg;
    reg.rng_seed = 9;
    const MatchResult r = match_library(incomplete.grid(), lib, reg, SimilarityConfig{});
    CHECK(r.name == "chair");
    // the doubled chair must be scaled back down
    CHECK(r.scale < 0.75);
}

TEST_CASE("deleting bricks never raises the score above the undeleted one") {
    const BrickCatalog cat = BrickCatalog::standard();
    std::vector<LibraryEntry> entries;
    entries.push_back({"table", corpus::build_table()});
    const ObjectLibrary lib(std::move(entries), cat);
    RegistrationConfig reg;
    reg.rng_seed = 11;

    const Assembly table = corpus::build_table();
    const MatchResult full = match_library(table.grid(), lib, reg, SimilarityConfig{});
    for (double f : {0.2, 0.4}) {
        const auto [incomplete, complete] = make_scenario(table, f, 1, cat);
        const MatchResult del =
            match_library(incomplete.grid(), lib, reg, SimilarityConfig{});
        CHECK(del.score <= full.score + 1e-9);
    }
}

TEST_CASE("rotated, scaled, 30%-deleted incompletes select the right object (20 trials)") {
    const BrickCatalog cat = BrickCatalog::standard();
    std::vector<LibraryEntry> entries;
    entries.push_back({"bench", corpus::build_bench()});
    entries.push_back({"chair", corpus::build_chair()});
    entries.push_back({"house", corpus::build_house()});
    entries.push_back({"table", corpus::build_table()});
    const ObjectLibrary lib(std::move(entries), cat);

    const auto [incomplete, complete] =
        make_scenario(corpus::build_chair(), 4.0 / 14.0, 1, cat);
    // reference cell count to detect accidental clipping
    const VoxelGrid unclipped = corpus::resample_grid_lattice(
        incomplete.grid(), 1, 3, 2, 30, 30, 0, 64, 64, 64);

    Rng rng(777);
    int hits = 0;
    for (int t = 0; t < 20; ++t) {
        const int tx = 14 + static_cast<int>(rng.uniform_index(6));
        const int ty = -2 + static_cast<int>(rng.uniform_index(6));
        const VoxelGrid moved = corpus::resample_grid_lattice(
            incomplete.grid(), 1, 3, 2, tx, ty, 0, 24, 24, 24);
        REQUIRE(moved.occupied_count() == unclipped.occupied_count());
        RegistrationConfig reg;
        reg.rng_seed = 9000 + t;
        const MatchResult r = match_library(moved, lib, reg, SimilarityConfig{});
        if (r.name == "chair") ++hits;
    }
    CHECK(hits >= 19);
}

TEST_CASE("failing entries are reported, not fatal") {
    const BrickCatalog cat = BrickCatalog::standard();
    Assembly dot(12, 12, 12);
    dot.place({0, 5, 5, 0, 0}, cat);  // single point: degenerate geometry

    std::vector<LibraryEntry> entries;
    entries.push_back({"chair", corpus::build_chair()});
    entries.push_back({"dot", std::move(dot)});
    const ObjectLibrary lib(std::move(entries), cat);

    const auto [incomplete, complete] =
        make_scenario(corpus::build_chair(), 4.0 / 14.0, 1, cat);
    RegistrationConfig reg;
    reg.rng_seed = 2;
    const MatchResult r = match_library(incomplete.grid(), lib, reg, SimilarityConfig{});
    CHECK(r.name == "chair");
    bool saw_failure = false;
    for (const EntryScore& es : r.per_entry)
        if (es.name == "dot") {
            CHECK_FALSE(es.ok);
            CHECK_FALSE(es.error.empty());
            saw_failure = true;
        }
    CHECK(saw_failure);
}

TEST_CASE("empty and all-failing libraries raise match failures") {
    const BrickCatalog cat = BrickCatalog::standard();
    const auto [incomplete, complete] =
        make_scenario(corpus::build_chair(), 4.0 / 14.0, 1, cat);
    RegistrationConfig reg;

    const ObjectLibrary empty(std::vector<LibraryEntry>{}, cat);
    CHECK_THROWS_AS(match_library(incomplete.grid(), empty, reg, SimilarityConfig{}),
                    MatchFailureError);

    Assembly dot(12, 12, 12);
    dot.place({0, 5, 5, 0, 0}, cat);
    std::vector<LibraryEntry> entries;
    entries.push_back({"dot", std::move(dot)});
    const ObjectLibrary bad(std::move(entries), cat);
    CHECK_THROWS_AS(match_library(incomplete.grid(), bad, reg, SimilarityConfig{}),
                    MatchFailureError);
}

} // TEST_SUITE
