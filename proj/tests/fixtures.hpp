#pragma once

// Shared models and plans for the suites. Models are built through the same
// finalize_model entry the parsers use, so they carry real hashes and obey
// the interpenetration rule.

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <brickplan/geom.hpp>
#include <brickplan/model.hpp>
#include <brickplan/plan_format.hpp>

namespace fixtures {

using namespace brickplan;

inline PartPlacement part(const std::string& shape, int color, const std::string& rot, int x,
                          int y, int z) {
    auto sh = find_shape(shape);
    auto r = Rotation::parse(rot);
    if (!sh || !r) throw std::logic_error("fixture part: bad shape or rotation");
    PartPlacement p;
    p.shape = *sh;
    p.color_id = color;
    p.rotation_id = r->id();
    p.position = {x, y, z};
    return p;
}

// n brick2x4 stacked straight up. Only one topological order exists.
inline AssemblyModel tower(int n) {
    std::vector<PartPlacement> parts;
    for (int i = 0; i < n; ++i) parts.push_back(part("brick2x4", 4, "identity", 0, 24 * i, 0));
    return finalize_model(std::move(parts));
}

// Plate base, three 2x2 feet, two bridging bricks on top. Layered build.
inline AssemblyModel pyramid6() {
    std::vector<PartPlacement> parts{
        part("plate2x8", 7, "identity", 0, 0, 0),  part("brick2x2", 4, "identity", 0, 8, 0),
        part("brick2x2", 4, "identity", 0, 8, 60), part("brick2x2", 4, "identity", 0, 8, 120),
        part("brick2x4", 1, "identity", 0, 32, 0), part("brick2x4", 1, "identity", 0, 32, 80),
    };
    return finalize_model(std::move(parts));
}

// Two free-standing piers and a deck drawn one plate too high, so it rests
// on nothing. No build order works: the piers never touch each other and the
// deck's component can never reach the ground.
inline AssemblyModel bridge5() {
    std::vector<PartPlacement> parts{
        part("brick2x2", 4, "identity", 0, 0, 0),   part("brick2x2", 4, "identity", 0, 24, 0),
        part("brick2x2", 4, "identity", 0, 0, 120), part("brick2x2", 4, "identity", 0, 24, 120),
        part("brick2x8", 7, "identity", 0, 56, 0),
    };
    return finalize_model(std::move(parts));
}

// Shared plate, two three-brick towers at opposite ends. 7 parts, small
// enough for exhaustive order enumeration.
inline AssemblyModel two_towers7() {
    std::vector<PartPlacement> parts{part("plate2x8", 7, "identity", 0, 0, 0)};
    for (int i = 0; i < 3; ++i) parts.push_back(part("brick2x2", 4, "identity", 0, 8 + 24 * i, 0));
    for (int i = 0; i < 3; ++i)
        parts.push_back(part("brick2x2", 1, "identity", 0, 8 + 24 * i, 120));
    return finalize_model(std::move(parts));
}

// Twelve parts: a one-stud-deep aqueduct. Three sideways 1x4 bricks form
// tall piers on a plate, two lintels bridge them, small bricks sit on top
// and inside the open bays. The through-arches keep side and diagonal
// silhouettes far from a plain rectangle and nothing mirrors, so the model
// plans under the default thresholds with no config overrides.
inline AssemblyModel aqueduct12() {
    std::vector<PartPlacement> parts{
        part("plate2x8", 7, "identity", 0, 0, 0),
        part("brick1x4", 4, "rx90", 0, 88, 0),
        part("brick1x4", 4, "rx90", 0, 88, 56),
        part("brick1x4", 4, "rx90", 0, 88, 112),
        part("brick1x4", 1, "identity", 0, 88, 0),
        part("brick1x4", 1, "identity", 0, 88, 80),
        part("brick1x1", 14, "identity", 0, 112, 24),
        part("brick1x1", 14, "identity", 0, 112, 88),
        part("brick1x2", 5, "identity", 0, 112, 120),
        part("brick1x1", 2, "identity", 0, 8, 32),
        part("brick1x1", 2, "identity", 0, 8, 88),
        part("brick1x1", 5, "identity", 0, 8, 140),
    };
    return finalize_model(std::move(parts));
}

// Perfectly mirror-symmetric about the z centre plane: symmetry must be 1.0.
// The full-length cap keeps it buildable, so planning fails on the metric
// thresholds rather than on ordering.
inline AssemblyModel mirror8() {
    std::vector<PartPlacement> parts{part("plate2x8", 7, "identity", 0, 0, 0)};
    for (int i = 0; i < 3; ++i) {
        parts.push_back(part("brick2x2", 4, "identity", 0, 8 + 24 * i, 0));
        parts.push_back(part("brick2x2", 4, "identity", 0, 8 + 24 * i, 120));
    }
    parts.push_back(part("brick2x8", 1, "identity", 0, 80, 0));
    return finalize_model(std::move(parts));
}

// Large regression schedule: 386 steps, ground-plane bootstrap through step
// 104, model-target phases starting at 105, 129, 165 and 226. Step geometry
// is a plain tall stack; the runtime only reads the schedule.
inline InstructionPlan reference_plan() {
    InstructionPlan plan;
    plan.version = 1;
    plan.model_hash = sha256_hex("reference schedule fixture");
    plan.part_count = 386;
    plan.bootstrap = {"ground_plane", 1, 104};
    const int starts[] = {105, 129, 165, 226};
    const int ends[] = {128, 164, 225, 386};
    for (int i = 0; i < 4; ++i) {
        PhaseSpan ph;
        ph.phase_id = 2 + i;
        ph.start_step = starts[i];
        ph.end_step = ends[i];
        ph.target_prefix = starts[i] - 1;
        ph.pre_activate_at = starts[i] - 1;
        plan.phases.push_back(ph);
    }
    for (int s = 1; s <= 386; ++s) {
        PlanStep st;
        st.step = s;
        st.part = s;
        st.shape_id = "brick2x4";
        st.extent = {40, 80, 24};
        st.rot = "identity";
        st.pos = {0, 24 * (s - 1), 0};
        st.color_id = 4;
        plan.steps.push_back(st);
    }
    return plan;
}

// Tiny fixed plan used for the golden-byte test.
inline InstructionPlan small_plan() {
    InstructionPlan plan;
    plan.version = 1;
    plan.model_hash = sha256_hex("golden fixture");
    plan.part_count = 6;
    plan.bootstrap = {"ground_plane", 1, 2};
    PhaseSpan a{2, 3, 4, 2, 2}, b{3, 5, 6, 4, 4};
    plan.phases = {a, b};
    const char* shapes[] = {"plate2x8", "brick2x2", "brick2x2",
                            "brick2x2", "brick2x4", "brick2x4"};
    const int zs[] = {0, 0, 60, 120, 0, 80};
    const int ys[] = {0, 8, 8, 8, 32, 32};
    for (int s = 1; s <= 6; ++s) {
        PlanStep st;
        st.step = s;
        st.part = s;
        st.shape_id = shapes[s - 1];
        auto sh = find_shape(shapes[s - 1]);
        st.extent = {sh->width, sh->depth, sh->height};
        st.rot = "identity";
        st.pos = {0, ys[s - 1], zs[s - 1]};
        st.color_id = s;
        plan.steps.push_back(st);
    }
    return plan;
}

// Random stacked-box model: part 1 on the ground, later parts either stacked
// on an existing part or dropped at ground level nearby (possibly creating a
// second component — the stability suites want infeasible cases too).
// Interpenetrating candidates are rejected and retried.
inline AssemblyModel random_blocky(std::mt19937_64& rng, int n) {
    const char* shapes[] = {"brick1x1", "brick1x2", "brick2x2", "brick2x4", "plate2x2"};
    const char* rots[] = {"identity", "ry90"};
    std::vector<PartPlacement> parts{
        part(shapes[rng() % 5], 1 + int(rng() % 14), rots[rng() % 2], 0, 0, 0)};
    auto collides = [&](const PartPlacement& cand) {
        Aabb cb = cand.world_box();
        for (const auto& q : parts)
            if (overlap_volume(cb, q.world_box()) > 1) return true;
        return false;
    };
    while ((int)parts.size() < n) {
        bool placed = false;
        for (int attempt = 0; attempt < 60 && !placed; ++attempt) {
            PartPlacement cand =
                part(shapes[rng() % 5], 1 + int(rng() % 14), rots[rng() % 2], 0, 0, 0);
            if (rng() % 3 == 0) {
                // Ground drop on the 20-LDU stud grid.
                cand.position = {int(rng() % 7) * 20, 0, int(rng() % 7) * 20};
            } else {
                const PartPlacement& base = parts[rng() % parts.size()];
                Aabb bb = base.world_box();
                cand.position = {bb.lo.x + (int(rng() % 3) - 1) * 20, bb.hi.y,
                                 bb.lo.z + (int(rng() % 3) - 1) * 20};
                Aabb cb = cand.world_box();
                long long ox = std::min(cb.hi.x, bb.hi.x) - std::max(cb.lo.x, bb.lo.x);
                long long oz = std::min(cb.hi.z, bb.hi.z) - std::max(cb.lo.z, bb.lo.z);
                if (ox <= 0 || oz <= 0) continue; // would hover next to the base
            }
            if (collides(cand)) continue;
            parts.push_back(cand);
            placed = true;
        }
        if (!placed) break; // crowded; a shorter model is still usable
    }
    return finalize_model(std::move(parts));
}

// Structurally valid plan with randomized phase layout, for fuzz suites.
inline InstructionPlan random_valid_plan(std::mt19937_64& rng) {
    InstructionPlan plan;
    const int n = 3 + int(rng() % 38);
    plan.version = 1;
    plan.model_hash = sha256_hex("fuzz " + std::to_string(rng()));
    plan.part_count = n;
    int b1 = 2 + int(rng() % (n - 1)); // first model-target phase start, 2..n
    plan.bootstrap = {"ground_plane", 1, b1 - 1};
    std::vector<int> starts{b1};
    while (true) {
        int next = starts.back() + 1 + int(rng() % 6);
        if (next > n) break;
        starts.push_back(next);
    }
    for (size_t i = 0; i < starts.size(); ++i) {
        PhaseSpan ph;
        ph.phase_id = 2 + (int)i;
        ph.start_step = starts[i];
        ph.end_step = i + 1 < starts.size() ? starts[i + 1] - 1 : n;
        ph.target_prefix = starts[i] - 1;
        ph.pre_activate_at = starts[i] - 1;
        plan.phases.push_back(ph);
    }
    const auto& catalog = shape_catalog();
    for (int s = 1; s <= n; ++s) {
        PlanStep st;
        st.step = s;
        st.part = s;
        const PartShape& sh = catalog[rng() % catalog.size()];
        st.shape_id = sh.shape_id;
        st.extent = {sh.width, sh.depth, sh.height};
        st.rot = Rotation::by_id(int(rng() % Rotation::kCount)).name();
        st.pos = {int(rng() % 200), 24 * (s - 1), int(rng() % 200)};
        st.color_id = int(rng() % 16);
        plan.steps.push_back(st);
    }
    return plan;
}

} // namespace fixtures
