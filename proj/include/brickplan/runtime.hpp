#pragma once

#include <string>
#include <utility>
#include <vector>

#include "brickplan/plan_format.hpp"

namespace brickplan {

// Instruction runtime: a small state machine an AR layer drives with user
// events. It owns the current step, the set of enabled recognition targets
// and the overlay visibility; directives tell the host what to change.
//
// Target activation is a pure function of the step: the ground plane while
// the step is in the bootstrap segment, the owning phase's target afterward,
// plus the next phase's target when the step is exactly one before its
// switch. Walking forward therefore pre-activates each target one step early
// and drops the old one one step late when walking backward, which keeps a
// recognition target usable on both sides of every phase switch.

enum class RunMode { AwaitingAnchor, Bootstrapped, Tracking, Lost };

std::string to_string(RunMode m);

struct VizState {
    int part_count = 0;
    int current_step = 0; // 0 = nothing shown yet (anchor not placed)
    bool wireframe_on = true;

    enum class PartState { Hidden, RenderedCurrent, WireframePrevious, OccluderOnly };
    // For the part placed at the given 1-based step.
    PartState part_state(int step) const;
    // Steps whose parts occlude virtual content: everything before the
    // current step, regardless of the wireframe toggle.
    std::vector<int> occluder_steps() const;
    friend bool operator==(const VizState&, const VizState&) = default;
};

struct RuntimeState {
    int step = 1;
    RunMode mode = RunMode::AwaitingAnchor;
    int mode_phase = 0; // phase id for Tracking/Lost, else 0
    bool ground_plane_active = false;
    std::vector<int> active_targets; // phase ids, ascending, at most 2
    VizState viz;
};

struct Directive {
    enum class Kind {
        ShowAnchorGuide,
        EnableGroundPlane,
        DisableGroundPlane,
        EnableTarget,
        DisableTarget,
        SetViz,
        Warn
    };
    Kind kind{};
    int phase = 0;    // EnableTarget / DisableTarget
    std::string text; // Warn
    VizState viz;     // SetViz
};

std::string describe(const Directive& d);

struct Event {
    enum class Kind { AnchorPlaced, Next, Prev, TargetRecognized, TrackingLost, ToggleWireframe };
    Kind kind{};
    int phase = 0; // TargetRecognized
};

std::string describe(const Event& e);

// Event script: one event per line (next, prev, anchor, recognized <phase>,
// lost, togglewf), '#' comments. Throws ParseError.
std::vector<Event> parse_event_script(const std::string& text);

// Throws std::invalid_argument when the plan fails validate_plan.
std::pair<RuntimeState, std::vector<Directive>> init_runtime(const InstructionPlan& plan);

// Applies one event. Returns the new state plus the directives the AR layer
// must execute, in order. Throws RuntimeViolation (state unchanged) for Prev
// at step 1 and for Next before the anchor is placed; impossible requests
// that are expected in normal use (Next at the last step, recognizing an
// inactive target) produce a Warn directive instead.
std::pair<RuntimeState, std::vector<Directive>> apply_event(const RuntimeState& state,
                                                            const Event& event,
                                                            const InstructionPlan& plan);

struct TraceEntry {
    std::string label; // "init" or the event in script syntax
    RuntimeState state;
    std::vector<Directive> directives;
};

// init + all events; RuntimeViolation is rethrown as TraceError carrying the
// 0-based index of the offending event.
std::vector<TraceEntry> run_trace(const InstructionPlan& plan, const std::vector<Event>& events);

// Structural invariants: step bounds, target set = the pure step function,
// at most two targets and only around a switch, occluders = placed prefix.
// Violations indicate a runtime bug, not a bad plan.
std::vector<std::string> check_runtime_invariants(const RuntimeState& state,
                                                  const InstructionPlan& plan);

} // namespace brickplan
