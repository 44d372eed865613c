#include <doctest.h>

#include <array>
#include <set>
#include <string>

#include <brickplan/geom.hpp>

using namespace brickplan;

TEST_CASE("rotation group has 24 distinct matrices") {
    std::set<std::array<int, 9>> mats;
    for (int i = 0; i < Rotation::kCount; ++i) mats.insert(Rotation::by_id(i).matrix());
    CHECK(mats.size() == 24);
    for (int i = 0; i < Rotation::kCount; ++i) {
        const auto& m = Rotation::by_id(i).matrix();
        // Determinant +1: proper rotations only.
        int det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                  m[2] * (m[3] * m[7] - m[4] * m[6]);
        CHECK(det == 1);
    }
}

TEST_CASE("rotation composition closes and inverts") {
    for (int a = 0; a < Rotation::kCount; ++a) {
        const Rotation& ra = Rotation::by_id(a);
        CHECK((ra * ra.inverse()) == Rotation::identity());
        CHECK((ra.inverse() * ra) == Rotation::identity());
        for (int b = 0; b < Rotation::kCount; ++b) {
            Rotation c = ra * Rotation::by_id(b);
            CHECK(c.id() >= 0);
            CHECK(c.id() < 24);
            // Composition agrees with matrix application on a generic vector.
            Vec3i v{1, 2, 3};
            CHECK(c.apply(v) == ra.apply(Rotation::by_id(b).apply(v)));
        }
    }
}

TEST_CASE("rotation names parse back to the same element") {
    std::set<std::string> names;
    for (int i = 0; i < Rotation::kCount; ++i) {
        const Rotation& r = Rotation::by_id(i);
        names.insert(r.name());
        auto parsed = Rotation::parse(r.name());
        REQUIRE(parsed.has_value());
        CHECK(parsed->id() == r.id());
    }
    CHECK(names.size() == 24);
    CHECK(Rotation::identity().name() == "identity");
    CHECK_FALSE(Rotation::parse("ry45").has_value());
    CHECK_FALSE(Rotation::parse("rx90rx90").has_value()); // not a canonical name
}

TEST_CASE("from_matrix matches exact and near matrices") {
    for (int i = 0; i < Rotation::kCount; ++i) {
        const auto& m = Rotation::by_id(i).matrix();
        std::array<double, 9> d;
        for (int k = 0; k < 9; ++k) d[k] = m[k] + (k % 2 ? 1e-8 : -1e-8);
        auto r = Rotation::from_matrix(d, 1e-6);
        REQUIRE(r.has_value());
        CHECK(r->id() == i);
    }
    std::array<double, 9> skew{1, 0.01, 0, 0, 1, 0, 0, 0, 1};
    CHECK_FALSE(Rotation::from_matrix(skew, 1e-6).has_value());
}

TEST_CASE("ry90 turns a 1x2 brick footprint") {
    auto r = Rotation::parse("ry90");
    REQUIRE(r.has_value());
    // Local dims (x=20, y=24, z=40) at position (40, 0, 20).
    Aabb b = rotated_box({20, 24, 40}, *r, {40, 0, 20});
    CHECK(b.lo == Vec3i{40, 0, 0});
    CHECK(b.hi == Vec3i{80, 24, 20});
}

TEST_CASE("identity rotated_box is the translated local box") {
    Aabb b = rotated_box({40, 24, 80}, Rotation::identity(), {-10, 5, 7});
    CHECK(b.lo == Vec3i{-10, 5, 7});
    CHECK(b.hi == Vec3i{30, 29, 87});
}

TEST_CASE("rotated_box preserves volume for every orientation") {
    Vec3i dims{20, 24, 40};
    for (int i = 0; i < Rotation::kCount; ++i) {
        Aabb b = rotated_box(dims, Rotation::by_id(i), {3, -9, 12});
        CHECK(b.volume() == 1LL * dims.x * dims.y * dims.z);
        CHECK(b.lo.x <= b.hi.x);
        CHECK(b.lo.y <= b.hi.y);
        CHECK(b.lo.z <= b.hi.z);
    }
}

TEST_CASE("overlap volume and footprint overlap") {
    Aabb a{{0, 0, 0}, {40, 24, 80}};
    Aabb b{{20, 0, 40}, {60, 24, 120}};
    CHECK(overlap_volume(a, b) == 20LL * 24 * 40);
    CHECK(overlap_volume(b, a) == overlap_volume(a, b));
    CHECK(footprint_overlap(a, b) == 20LL * 40);

    Aabb touching{{40, 0, 0}, {80, 24, 80}};
    CHECK(overlap_volume(a, touching) == 0); // shared face only
    CHECK(footprint_overlap(a, touching) == 0);

    Aabb above{{0, 24, 0}, {40, 48, 80}};
    CHECK(overlap_volume(a, above) == 0);
    CHECK(footprint_overlap(a, above) == 40LL * 80); // full footprint, stacked
}
