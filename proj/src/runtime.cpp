#include "brickplan/runtime.hpp"

#include <algorithm>
#include <sstream>

#include "brickplan/errors.hpp"

namespace brickplan {

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::AwaitingAnchor: return "awaiting_anchor";
        case RunMode::Bootstrapped: return "bootstrapped";
        case RunMode::Tracking: return "tracking";
        case RunMode::Lost: return "lost";
    }
    return "?";
}

VizState::PartState VizState::part_state(int step) const {
    if (current_step == 0 || step > current_step) return PartState::Hidden;
    if (step == current_step) return PartState::RenderedCurrent;
    return wireframe_on ? PartState::WireframePrevious : PartState::OccluderOnly;
}

std::vector<int> VizState::occluder_steps() const {
    std::vector<int> out;
    for (int s = 1; s < current_step; ++s) out.push_back(s);
    return out;
}

std::string describe(const Directive& d) {
    using K = Directive::Kind;
    switch (d.kind) {
        case K::ShowAnchorGuide: return "ShowAnchorGuide";
        case K::EnableGroundPlane: return "EnableGroundPlane";
        case K::DisableGroundPlane: return "DisableGroundPlane";
        case K::EnableTarget: return "EnableTarget(" + std::to_string(d.phase) + ")";
        case K::DisableTarget: return "DisableTarget(" + std::to_string(d.phase) + ")";
        case K::SetViz:
            return "SetViz(step " + std::to_string(d.viz.current_step) +
                   (d.viz.wireframe_on ? ", wireframe)" : ", opaque)");
        case K::Warn: return "Warn(" + d.text + ")";
    }
    return "?";
}

std::string describe(const Event& e) {
    using K = Event::Kind;
    switch (e.kind) {
        case K::AnchorPlaced: return "anchor";
        case K::Next: return "next";
        case K::Prev: return "prev";
        case K::TargetRecognized: return "recognized " + std::to_string(e.phase);
        case K::TrackingLost: return "lost";
        case K::ToggleWireframe: return "togglewf";
    }
    return "?";
}

std::vector<Event> parse_event_script(const std::string& text) {
    std::vector<Event> out;
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::istringstream ls(raw);
        std::string word;
        if (!(ls >> word)) continue;
        Event e;
        if (word == "next") {
            e.kind = Event::Kind::Next;
        } else if (word == "prev") {
            e.kind = Event::Kind::Prev;
        } else if (word == "anchor") {
            e.kind = Event::Kind::AnchorPlaced;
        } else if (word == "lost") {
            e.kind = Event::Kind::TrackingLost;
        } else if (word == "togglewf") {
            e.kind = Event::Kind::ToggleWireframe;
        } else if (word == "recognized") {
            e.kind = Event::Kind::TargetRecognized;
            if (!(ls >> e.phase))
                throw ParseError(line_no, "recognized needs a phase id");
        } else {
            throw ParseError(line_no, "unknown event '" + word + "'");
        }
        std::string extra;
        if (ls >> extra) throw ParseError(line_no, "trailing input '" + extra + "'");
        out.push_back(e);
    }
    return out;
}

namespace {

struct TargetSet {
    bool ground = false;
    std::vector<int> phases; // ascending
};

// The pure activation function of a step; see the header comment.
TargetSet targets_at(const InstructionPlan& plan, int step) {
    TargetSet t;
    int owner = plan.phase_of(step);
    if (owner == 0)
        t.ground = true;
    else
        t.phases.push_back(owner);
    for (const auto& ph : plan.phases)
        if (ph.start_step == step + 1 && ph.phase_id != owner) t.phases.push_back(ph.phase_id);
    std::sort(t.phases.begin(), t.phases.end());
    return t;
}

Directive make_dir(Directive::Kind kind, int phase = 0) {
    Directive d;
    d.kind = kind;
    d.phase = phase;
    return d;
}

void push_viz(std::vector<Directive>& dirs, const RuntimeState& st) {
    Directive d;
    d.kind = Directive::Kind::SetViz;
    d.viz = st.viz;
    dirs.push_back(std::move(d));
}

void push_warn(std::vector<Directive>& dirs, std::string text) {
    Directive d;
    d.kind = Directive::Kind::Warn;
    d.text = std::move(text);
    dirs.push_back(std::move(d));
}

// Moves the state to a step: reconciles the target set (enables first, then
// disables), updates the mode and emits the viz update.
void enter_step(RuntimeState& st, int step, const InstructionPlan& plan,
                std::vector<Directive>& dirs) {
    TargetSet want = targets_at(plan, step);
    auto active = [&](int phase) {
        return std::find(st.active_targets.begin(), st.active_targets.end(), phase) !=
               st.active_targets.end();
    };
    if (want.ground && !st.ground_plane_active)
        dirs.push_back(make_dir(Directive::Kind::EnableGroundPlane));
    for (int p : want.phases)
        if (!active(p)) dirs.push_back(make_dir(Directive::Kind::EnableTarget, p));
    if (!want.ground && st.ground_plane_active)
        dirs.push_back(make_dir(Directive::Kind::DisableGroundPlane));
    for (int p : st.active_targets)
        if (std::find(want.phases.begin(), want.phases.end(), p) == want.phases.end())
            dirs.push_back(make_dir(Directive::Kind::DisableTarget, p));

    st.step = step;
    st.ground_plane_active = want.ground;
    st.active_targets = want.phases;

    int owner = plan.phase_of(step);
    if (owner == 0) {
        st.mode = RunMode::Bootstrapped;
        st.mode_phase = 0;
    } else if (!(st.mode == RunMode::Tracking && st.mode_phase == owner)) {
        // Entering a phase we are not registered to; pre-recognition during
        // the activation window carries Tracking across the switch.
        st.mode = RunMode::Lost;
        st.mode_phase = owner;
    }
    st.viz.current_step = step;
    push_viz(dirs, st);
}

} // namespace

std::pair<RuntimeState, std::vector<Directive>> init_runtime(const InstructionPlan& plan) {
    auto problems = validate_plan(plan);
    if (!problems.empty()) throw std::invalid_argument("invalid plan: " + problems.front());
    RuntimeState st;
    st.step = 1;
    st.mode = RunMode::AwaitingAnchor;
    st.viz.part_count = plan.part_count;
    st.viz.current_step = 0;
    st.viz.wireframe_on = true;
    std::vector<Directive> dirs{make_dir(Directive::Kind::ShowAnchorGuide)};
    return {std::move(st), std::move(dirs)};
}

std::pair<RuntimeState, std::vector<Directive>> apply_event(const RuntimeState& state,
                                                            const Event& event,
                                                            const InstructionPlan& plan) {
    RuntimeState st = state;
    std::vector<Directive> dirs;
    using K = Event::Kind;

    switch (event.kind) {
        case K::AnchorPlaced: {
            if (st.mode != RunMode::AwaitingAnchor) {
                push_warn(dirs, "anchor is already placed");
                break;
            }
            enter_step(st, 1, plan, dirs);
            break;
        }
        case K::Next: {
            if (st.mode == RunMode::AwaitingAnchor)
                throw RuntimeViolation("anchor required before stepping");
            if (st.step == plan.part_count) {
                push_warn(dirs, "already at the final step");
                break;
            }
            enter_step(st, st.step + 1, plan, dirs);
            break;
        }
        case K::Prev: {
            if (st.step == 1) throw RuntimeViolation("cannot step back from step 1");
            enter_step(st, st.step - 1, plan, dirs);
            break;
        }
        case K::TargetRecognized: {
            bool is_active = std::find(st.active_targets.begin(), st.active_targets.end(),
                                       event.phase) != st.active_targets.end();
            if (!is_active) {
                push_warn(dirs, "target " + std::to_string(event.phase) + " is not active");
                break;
            }
            st.mode = RunMode::Tracking;
            st.mode_phase = event.phase;
            break;
        }
        case K::TrackingLost: {
            if (st.mode == RunMode::AwaitingAnchor) {
                push_warn(dirs, "nothing is being tracked yet");
                break;
            }
            int owner = plan.phase_of(st.step);
            if (owner == 0) {
                // Ground-plane registration is not affected by losing a
                // pre-recognized model target.
                st.mode = RunMode::Bootstrapped;
                st.mode_phase = 0;
            } else {
                st.mode = RunMode::Lost;
                st.mode_phase = owner;
            }
            break;
        }
        case K::ToggleWireframe: {
            st.viz.wireframe_on = !st.viz.wireframe_on;
            push_viz(dirs, st);
            break;
        }
    }
    return {std::move(st), std::move(dirs)};
}

std::vector<TraceEntry> run_trace(const InstructionPlan& plan, const std::vector<Event>& events) {
    std::vector<TraceEntry> out;
    auto [st, dirs] = init_runtime(plan);
    out.push_back({"init", st, dirs});
    for (size_t i = 0; i < events.size(); ++i) {
        try {
            auto [next, d] = apply_event(out.back().state, events[i], plan);
            out.push_back({describe(events[i]), std::move(next), std::move(d)});
        } catch (const RuntimeViolation& e) {
            throw TraceError((int)i, e.what());
        }
    }
    return out;
}

std::vector<std::string> check_runtime_invariants(const RuntimeState& st,
                                                  const InstructionPlan& plan) {
    std::vector<std::string> out;
    auto bad = [&](const std::string& m) { out.push_back(m); };

    if (st.step < 1 || st.step > plan.part_count) {
        bad("step " + std::to_string(st.step) + " out of range");
        return out;
    }
    if (st.active_targets.size() > 2) bad("more than two active targets");
    if (!std::is_sorted(st.active_targets.begin(), st.active_targets.end()))
        bad("active target list must be ascending");

    if (st.mode == RunMode::AwaitingAnchor) {
        if (st.step != 1) bad("awaiting anchor away from step 1");
        if (st.ground_plane_active) bad("ground plane active before the anchor");
        if (!st.active_targets.empty()) bad("targets active before the anchor");
        if (st.viz.current_step != 0) bad("overlay visible before the anchor");
    } else {
        TargetSet want = targets_at(plan, st.step);
        if (st.ground_plane_active != want.ground)
            bad(want.ground ? "ground plane must be active during bootstrap steps"
                            : "ground plane active past the bootstrap segment");
        if (st.active_targets != want.phases)
            bad("active targets do not match the step's activation set");
        if (st.viz.current_step != st.step) bad("overlay step out of sync");
        if (st.active_targets.size() == 2) {
            const PhaseSpan* hi = plan.phase_by_id(st.active_targets.back());
            if (!hi || hi->start_step != st.step + 1)
                bad("two targets active outside a switch window");
        }
        if (st.mode == RunMode::Tracking) {
            if (std::find(st.active_targets.begin(), st.active_targets.end(), st.mode_phase) ==
                st.active_targets.end())
                bad("tracking a target that is not active");
        }
        if (st.mode == RunMode::Lost && st.mode_phase != plan.phase_of(st.step))
            bad("lost mode must reference the current phase");
    }

    if (st.viz.part_count != plan.part_count) bad("viz part count mismatch");
    auto occ = st.viz.occluder_steps();
    int expect = st.viz.current_step > 0 ? st.viz.current_step - 1 : 0;
    if ((int)occ.size() != expect)
        bad("occluder set must be exactly the already-placed steps");
    for (int i = 0; i < (int)occ.size(); ++i)
        if (occ[i] != i + 1) {
            bad("occluder set must be exactly the already-placed steps");
            break;
        }
    return out;
}

} // namespace brickplan
