#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include <brickplan/errors.hpp>
#include <brickplan/plan_format.hpp>

#include "fixtures.hpp"

using namespace brickplan;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

std::string golden_path() {
    return std::string(BRICKPLAN_SOURCE_DIR) + "/tests/golden/minimal.plan.json";
}

// Expect a SchemaError whose path is exactly `path`.
template <class Fn>
void expect_schema_error(Fn&& fn, const std::string& path) {
    try {
        fn();
        FAIL_CHECK("expected SchemaError at ", path);
    } catch (const SchemaError& e) {
        CHECK(e.path == path);
    }
}

} // namespace

TEST_CASE("serialization matches the checked-in golden bytes") {
    CHECK(serialize_plan(fixtures::small_plan()) == slurp(golden_path()));
}

TEST_CASE("serialization is canonical and stable") {
    InstructionPlan p = fixtures::reference_plan();
    std::string a = serialize_plan(p);
    std::string b = serialize_plan(p);
    CHECK(a == b);
    CHECK(a.back() == '\n');
    CHECK(a.find(" ") == std::string::npos); // no whitespace outside strings

    // Reordered keys and pretty-printing read back to the same plan.
    nlohmann::json j = nlohmann::json::parse(a);
    InstructionPlan q = deserialize_plan(j.dump(4));
    CHECK(q == p);
    CHECK(serialize_plan(q) == a);
}

TEST_CASE("plans round-trip through their canonical form") {
    for (const InstructionPlan& p : {fixtures::small_plan(), fixtures::reference_plan()}) {
        InstructionPlan q = deserialize_plan(serialize_plan(p));
        CHECK(q == p);
    }
}

TEST_CASE("phase lookup helpers") {
    InstructionPlan p = fixtures::reference_plan();
    CHECK(p.first_boundary() == 105);
    CHECK(p.phase_of(1) == 0);
    CHECK(p.phase_of(104) == 0);
    CHECK(p.phase_of(105) == 2);
    CHECK(p.phase_of(164) == 3);
    CHECK(p.phase_of(226) == 5);
    CHECK(p.phase_of(386) == 5);
    REQUIRE(p.phase_by_id(4) != nullptr);
    CHECK(p.phase_by_id(4)->start_step == 165);
    CHECK(p.phase_by_id(7) == nullptr);
}

TEST_CASE("schema errors carry the offending path") {
    nlohmann::json good = nlohmann::json::parse(serialize_plan(fixtures::small_plan()));

    auto parse_mutated = [&](auto&& mutate) {
        nlohmann::json j = good;
        mutate(j);
        return [j] { deserialize_plan(j.dump()); };
    };

    expect_schema_error(parse_mutated([](nlohmann::json& j) { j.erase("version"); }), "$");
    expect_schema_error(parse_mutated([](nlohmann::json& j) { j["version"] = 2; }), "$.version");
    expect_schema_error(parse_mutated([](nlohmann::json& j) { j["version"] = "1"; }),
                        "$.version");
    expect_schema_error(parse_mutated([](nlohmann::json& j) { j["surprise"] = 1; }),
                        "$.surprise");
    expect_schema_error(
        parse_mutated([](nlohmann::json& j) { j["phases"][1]["start_step"] = "x"; }),
        "$.phases[1].start_step");
    expect_schema_error(parse_mutated([](nlohmann::json& j) { j["phases"] = 7; }), "$.phases");
    expect_schema_error(
        parse_mutated([](nlohmann::json& j) { j["steps"][0]["extent"] = {1, 2}; }),
        "$.steps[0].extent");
    expect_schema_error(
        parse_mutated([](nlohmann::json& j) { j["steps"][0]["extent"][2] = 1.5; }),
        "$.steps[0].extent[2]");
    expect_schema_error(parse_mutated([](nlohmann::json& j) { j["bootstrap"]["mode"] = 3; }),
                        "$.bootstrap.mode");
    expect_schema_error(
        parse_mutated([](nlohmann::json& j) { j["viz"].erase("future"); }), "$.viz");

    expect_schema_error([] { deserialize_plan("{ not json"); }, "$");
    expect_schema_error([] { deserialize_plan("[1,2,3]"); }, "$");
}

TEST_CASE("semantic validation flags every malformed field") {
    const InstructionPlan good = fixtures::small_plan();
    CHECK(validate_plan(good).empty());

    // True when the first problem reported for the mutated plan mentions text.
    auto flags = [&](const char* text, auto&& mutate) {
        InstructionPlan p = good;
        mutate(p);
        auto problems = validate_plan(p);
        if (problems.empty()) {
            FAIL_CHECK("expected a problem mentioning '", text, "'");
            return false;
        }
        return problems.front().find(text) != std::string::npos;
    };

    CHECK(flags("64 hex", [](InstructionPlan& p) { p.model_hash = "abc"; }));
    CHECK(flags("lowercase hex", [](InstructionPlan& p) { p.model_hash[3] = 'G'; }));
    CHECK(flags("part_count", [](InstructionPlan& p) { p.part_count = 5; }));
    CHECK(flags("run 1..part_count", [](InstructionPlan& p) { p.steps[2].step = 9; }));
    CHECK(flags("appears twice",
                [](InstructionPlan& p) { p.steps[2].part = p.steps[1].part; }));
    CHECK(flags("out of range", [](InstructionPlan& p) { p.steps[2].part = 7; }));
    CHECK(flags("empty shape", [](InstructionPlan& p) { p.steps[0].shape_id.clear(); }));
    CHECK(flags("extent", [](InstructionPlan& p) { p.steps[0].extent.y = 0; }));
    CHECK(flags("unknown rotation", [](InstructionPlan& p) { p.steps[0].rot = "ry45"; }));
    CHECK(flags("color", [](InstructionPlan& p) { p.steps[0].color_id = -2; }));

    CHECK(flags("bootstrap mode", [](InstructionPlan& p) { p.bootstrap.mode = "marker"; }));
    CHECK(flags("start at step 1", [](InstructionPlan& p) { p.bootstrap.first_step = 0; }));
    CHECK(flags("at least step 1", [](InstructionPlan& p) { p.bootstrap.last_step = 0; }));

    CHECK(flags("at least one model-target phase",
                [](InstructionPlan& p) { p.phases.clear(); }));
    CHECK(flags("right after the bootstrap",
                [](InstructionPlan& p) { p.bootstrap.last_step = 3; }));
    CHECK(flags("end at the final step",
                [](InstructionPlan& p) { p.phases.back().end_step = 5; }));
    CHECK(flags("ascending", [](InstructionPlan& p) { p.phases[1].phase_id = 2; }));
    CHECK(flags("overlaps", [](InstructionPlan& p) {
        p.phases[1].start_step = 4;
        p.phases[1].target_prefix = 3;
        p.phases[1].pre_activate_at = 3;
    }));
    CHECK(flags("target_prefix", [](InstructionPlan& p) { p.phases[0].target_prefix = 3; }));
    CHECK(flags("pre-activation",
                [](InstructionPlan& p) { p.phases[0].pre_activate_at = 3; }));
}

TEST_CASE("serializing an invalid plan is refused") {
    InstructionPlan p = fixtures::small_plan();
    p.phases.clear();
    CHECK_THROWS_AS(serialize_plan(p), std::invalid_argument);
}

TEST_CASE("plan files save and load") {
    std::string path = "/tmp/brickplan_test_roundtrip.plan.json";
    InstructionPlan p = fixtures::small_plan();
    save_plan_file(p, path);
    CHECK(load_plan_file(path) == p);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_plan_file("/tmp/brickplan_no_such_file.plan.json"), SchemaError);
}

TEST_CASE("malformed input never crashes the reader") {
    const std::string base = serialize_plan(fixtures::reference_plan());
    std::mt19937_64 rng(99);

    // Byte-level corruption.
    for (int t = 0; t < 150; ++t) {
        std::string text = base;
        int edits = 1 + (int)(rng() % 4);
        for (int e = 0; e < edits; ++e) {
            size_t at = rng() % text.size();
            switch (rng() % 3) {
                case 0: text[at] = (char)(rng() % 256); break;
                case 1: text.erase(at, 1 + rng() % 5); break;
                case 2: text.insert(at, 1, (char)('0' + rng() % 10)); break;
            }
        }
        try {
            InstructionPlan p = deserialize_plan(text);
            validate_plan(p); // may or may not report problems
        } catch (const SchemaError&) {
            // fine: the reader noticed
        }
    }

    // Structured corruption: retype or drop a random field.
    nlohmann::json good = nlohmann::json::parse(base);
    std::vector<std::string> tops{"version", "model_hash", "part_count",
                                  "bootstrap", "phases", "steps", "viz"};
    for (int t = 0; t < 100; ++t) {
        nlohmann::json j = good;
        const std::string& key = tops[rng() % tops.size()];
        switch (rng() % 4) {
            case 0: j.erase(key); break;
            case 1: j[key] = nullptr; break;
            case 2: j[key] = -((int)(rng() % 1000)); break;
            case 3: j[key] = nlohmann::json::array(); break;
        }
        try {
            InstructionPlan p = deserialize_plan(j.dump());
            validate_plan(p);
        } catch (const SchemaError&) {
        }
    }
}
