#include <doctest.h>

#include <string>

#include <brickplan/errors.hpp>
#include <brickplan/model.hpp>

#include "fixtures.hpp"

using namespace brickplan;

TEST_CASE("catalog lookup by id and by LDraw number") {
    auto by_id = find_shape("brick2x4");
    auto by_num = find_shape("3001");
    REQUIRE(by_id.has_value());
    REQUIRE(by_num.has_value());
    CHECK(*by_id == *by_num);
    CHECK(by_id->width == 40);
    CHECK(by_id->depth == 80);
    CHECK(by_id->height == 24);
    CHECK(ldraw_number("plate2x8") == "3034");
    CHECK_FALSE(find_shape("brick9x9").has_value());
}

TEST_CASE("native text round-trips through the canonical form") {
    const std::string text = "# header comment\n"
                             "part plate2x8 7 identity 0 0 0\n"
                             "part brick2x4 4 identity 0 8 0\n"
                             "step\n"
                             "part brick1x2 1 ry90 0 32 20\n";
    AssemblyModel m = parse_model(text, ModelFormat::Native);
    REQUIRE(m.part_count() == 3);
    CHECK(m.part(3).source_step == 2);
    std::string canon = canonical_serialize(m);
    AssemblyModel again = parse_model(canon, ModelFormat::Native);
    CHECK(canonical_serialize(again) == canon);
    CHECK(again.model_hash == m.model_hash);
}

TEST_CASE("hash ignores comments and spacing but sees geometry") {
    AssemblyModel a = parse_model("part brick2x2 4 identity 0 0 0\n", ModelFormat::Native);
    AssemblyModel b = parse_model("# note\n  part   brick2x2  4  identity  0 0 0  \n",
                                  ModelFormat::Native);
    AssemblyModel c = parse_model("part brick2x2 5 identity 0 0 0\n", ModelFormat::Native);
    CHECK(a.model_hash == b.model_hash);
    CHECK(a.model_hash != c.model_hash);
    CHECK(a.model_hash.size() == 64);
}

TEST_CASE("interpenetrating parts are rejected with both indices") {
    const std::string text = "part brick2x4 4 identity 0 0 0\n"
                             "part brick2x4 4 identity 0 0 40\n"; // overlaps 40 LDU in z
    CHECK_THROWS_WITH_AS(parse_model(text, ModelFormat::Native),
                         doctest::Contains("parts 1 and 2 interpenetrate"), ParseError);
}

TEST_CASE("touching parts are not interpenetrating") {
    const std::string text = "part brick2x4 4 identity 0 0 0\n"
                             "part brick2x4 4 identity 0 0 80\n"; // shares one face
    CHECK_NOTHROW(parse_model(text, ModelFormat::Native));
}

TEST_CASE("native parser reports the offending line") {
    try {
        parse_model("part brick2x2 4 identity 0 0 0\npart brick9x9 1 identity 0 24 0\n",
                    ModelFormat::Native);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_model("part brick2x2 4 ry45 0 0 0\n", ModelFormat::Native),
                    ParseError);
    CHECK_THROWS_AS(parse_model("part brick2x2 4 identity 0 0\n", ModelFormat::Native),
                    ParseError);
    CHECK_THROWS_AS(parse_model("", ModelFormat::Native), ParseError);
}

TEST_CASE("ldraw reader flattens submodels with the referencing transform") {
    const std::string mpd = "0 FILE main.ldr\n"
                            "1 7 0 0 0 1 0 0 0 1 0 0 0 1 3034.dat\n"
                            "1 4 0 8 0 1 0 0 0 1 0 0 0 1 sub.ldr\n"
                            "0 STEP\n"
                            "1 4 0 8 140 0 0 1 0 1 0 -1 0 0 sub.ldr\n"
                            "0 FILE sub.ldr\n"
                            "1 16 0 0 0 1 0 0 0 1 0 0 0 1 3001.dat\n"
                            "1 16 0 24 0 1 0 0 0 1 0 0 0 1 3001.dat\n";
    AssemblyModel m = parse_model(mpd, ModelFormat::Ldraw);
    REQUIRE(m.part_count() == 5);
    CHECK(m.part(1).shape.shape_id == "plate2x8");
    // Identity submodel placement: stacked bricks at the reference point.
    CHECK(m.part(2).world_box() == Aabb{{0, 8, 0}, {40, 32, 80}});
    CHECK(m.part(3).world_box() == Aabb{{0, 32, 0}, {40, 56, 80}});
    // ry90 placement: the column's local +z runs along world -x... the box
    // lands rotated about the reference point.
    CHECK(m.part(4).rotation().name() == "ry90");
    CHECK(m.part(4).world_box() == Aabb{{0, 8, 100}, {80, 32, 140}});
    CHECK(m.part(5).world_box() == Aabb{{0, 32, 100}, {80, 56, 140}});
    // Top-level STEP groups: parts 1-3 in step 1, parts 4-5 in step 2.
    CHECK(m.part(3).source_step == 1);
    CHECK(m.part(4).source_step == 2);
    CHECK(m.part(5).source_step == 2);
}

TEST_CASE("ldraw reader rejects cycles, off-grid and junk") {
    const std::string cyc = "0 FILE a.ldr\n"
                            "1 4 0 0 0 1 0 0 0 1 0 0 0 1 b.ldr\n"
                            "0 FILE b.ldr\n"
                            "1 4 0 0 0 1 0 0 0 1 0 0 0 1 a.ldr\n";
    CHECK_THROWS_WITH_AS(parse_model(cyc, ModelFormat::Ldraw), doctest::Contains("cycle"),
                         ParseError);
    CHECK_THROWS_AS(parse_model("1 4 0.5 0 0 1 0 0 0 1 0 0 0 1 3001.dat\n", ModelFormat::Ldraw),
                    ParseError);
    CHECK_THROWS_AS(parse_model("2 4 0 0 0 1 1 0 0 3001.dat\n", ModelFormat::Ldraw), ParseError);
    CHECK_THROWS_AS(parse_model("1 4 0 0 0 1 0 0 0 1 0 0 0 1 nosuch.dat\n", ModelFormat::Ldraw),
                    ParseError);
    // 45-degree rotation is not an axis-aligned orientation.
    CHECK_THROWS_AS(parse_model("1 4 0 0 0 0.707 0 0.707 0 1 0 -0.707 0 0.707 3001.dat\n",
                                ModelFormat::Ldraw),
                    ParseError);
}

TEST_CASE("format is picked from the file extension") {
    CHECK(format_for_path("x.ldr") == ModelFormat::Ldraw);
    CHECK(format_for_path("x.mpd") == ModelFormat::Ldraw);
    CHECK(format_for_path("x.dat") == ModelFormat::Ldraw);
    CHECK(format_for_path("x.txt") == ModelFormat::Native);
    CHECK(format_for_path("model") == ModelFormat::Native);
}

TEST_CASE("ground level is the model-wide minimum") {
    AssemblyModel m = parse_model("part brick2x2 4 identity 0 48 0\n"
                                  "part brick2x2 4 identity 0 72 0\n",
                                  ModelFormat::Native);
    CHECK(m.ground_y() == 48);
}

TEST_CASE("programmatic fixtures build and hash") {
    AssemblyModel t = fixtures::tower(5);
    CHECK(t.part_count() == 5);
    CHECK(t.model_hash.size() == 64);
    CHECK(fixtures::pyramid6().part_count() == 6);
    CHECK(fixtures::bridge5().part_count() == 5);
    CHECK(fixtures::aqueduct12().part_count() == 12);
}
