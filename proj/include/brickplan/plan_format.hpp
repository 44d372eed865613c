#pragma once

#include <string>
#include <vector>

#include "brickplan/geom.hpp"

namespace brickplan {

// On-disk instruction plan (.plan.json). The plan is self-contained: each
// step carries the part's shape and pose so consumers (runtime, renderer,
// simulators) never need the original model file.

struct BootstrapSpan {
    std::string mode = "ground_plane";
    int first_step = 1;
    int last_step = 1;
    friend bool operator==(const BootstrapSpan&, const BootstrapSpan&) = default;
};

struct PhaseSpan {
    int phase_id = 0; // >= 2; phase 1 is the bootstrap segment
    int start_step = 0;
    int end_step = 0;
    int target_prefix = 0;    // recognition target: parts 1..target_prefix
    int pre_activate_at = 0;  // step at which this target turns on, start_step - 1
    friend bool operator==(const PhaseSpan&, const PhaseSpan&) = default;
};

struct PlanStep {
    int step = 0; // 1-based
    int part = 0; // part index in the source model
    std::string shape_id;
    Vec3i extent;   // (width, depth, height) LDU
    std::string rot;
    Vec3i pos;
    int color_id = 0;
    friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

struct VizPolicy {
    std::string current = "rendered";
    std::string previous = "wireframe";
    std::string future = "hidden";
    std::string occluder = "physical_prefix";
    friend bool operator==(const VizPolicy&, const VizPolicy&) = default;
};

struct InstructionPlan {
    int version = 1;
    std::string model_hash; // sha256 of the canonical model text
    int part_count = 0;
    BootstrapSpan bootstrap;
    std::vector<PhaseSpan> phases; // ascending, contiguous, cover the rest
    std::vector<PlanStep> steps;   // steps 1..part_count in order
    VizPolicy viz;
    friend bool operator==(const InstructionPlan&, const InstructionPlan&) = default;

    int first_boundary() const { return phases.empty() ? 0 : phases.front().start_step; }
    // 0 for bootstrap steps, else the owning phase id.
    int phase_of(int step) const;
    const PhaseSpan* phase_by_id(int phase_id) const;
};

// Canonical JSON: sorted keys, no whitespace, integer and string values only,
// one trailing newline. Equal plans serialize to equal bytes on any platform.
// Throws std::invalid_argument when the plan does not validate.
std::string serialize_plan(const InstructionPlan& plan);

// Strict reader: missing or mistyped fields and unknown keys raise
// SchemaError with a "$.phases[2].start_step" style path. Accepts any key
// order and whitespace. Does not run semantic validation.
InstructionPlan deserialize_plan(const std::string& text);

// Semantic checks (step coverage, phase contiguity, pre-activation offsets,
// hash shape). Returns human-readable problems; empty means the plan is good.
std::vector<std::string> validate_plan(const InstructionPlan& plan);

InstructionPlan load_plan_file(const std::string& path);
void save_plan_file(const InstructionPlan& plan, const std::string& path);

} // namespace brickplan
