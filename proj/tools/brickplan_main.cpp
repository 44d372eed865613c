#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "brickplan/config_file.hpp"
#include "brickplan/errors.hpp"
#include "brickplan/model.hpp"
#include "brickplan/plan_format.hpp"
#include "brickplan/runtime.hpp"
#include "brickplan/sequencer.hpp"
#include "brickplan/svg_render.hpp"
#include "brickplan/tracking_sim.hpp"

// Exit codes: 0 ok, 1 bad input (parse/validation/planning/script), 2 usage,
// 3 unexpected internal failure.

namespace {

using namespace brickplan;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct Common {
    std::string config_path;
    std::optional<uint64_t> seed;
    SequencerConfig seq;
    tracking::TrackerParams trk;

    void finish() {
        if (!config_path.empty()) apply_config_file(config_path, seq, trk);
        if (seed) seq.seed = *seed;
    }
};

AssemblyModel load_model_arg(const std::string& path, const std::string& format) {
    if (format == "auto" || format.empty()) return load_model_file(path);
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_model(buf.str(), format == "ldraw" ? ModelFormat::Ldraw : ModelFormat::Native);
}

int cmd_plan(Common& c, const std::string& model_path, const std::string& out_path,
             const std::string& format) {
    AssemblyModel model = load_model_arg(model_path, format);
    PlanDraft draft;
    InstructionPlan plan = make_plan(model, c.seq, &draft);
    save_plan_file(plan, out_path);

    std::printf("parts: %d\n", plan.part_count);
    std::printf("bootstrap: steps 1..%d (ground plane)\n", plan.bootstrap.last_step);
    for (size_t i = 0; i < plan.phases.size(); ++i) {
        const PhaseSpan& ph = plan.phases[i];
        const BoundaryScores& sc = draft.scores[i];
        std::printf(
            "phase %d: steps %d..%d, target prefix %d, pre-activate at %d"
            " (sym %.3f, dist %.3f, conf %.3f)\n",
            ph.phase_id, ph.start_step, ph.end_step, ph.target_prefix, ph.pre_activate_at,
            sc.symmetry, sc.distinctness, sc.confusability);
    }
    std::printf("wrote %s\n", out_path.c_str());
    return kExitOk;
}

int cmd_validate(Common& c, const std::string& plan_path, bool check_spacing) {
    InstructionPlan plan = load_plan_file(plan_path);
    std::vector<std::string> problems = validate_plan(plan);
    if (check_spacing && problems.empty()) {
        std::vector<int> boundaries;
        for (const auto& ph : plan.phases) boundaries.push_back(ph.start_step);
        auto more = validate_schedule(plan.part_count, plan.bootstrap.last_step, boundaries,
                                      c.seq.t_max);
        problems.insert(problems.end(), more.begin(), more.end());
    }
    if (!problems.empty()) {
        for (const auto& p : problems) std::cerr << p << '\n';
        return kExitInput;
    }
    std::printf("ok: %d steps, bootstrap 1..%d, %zu model-target phases\n", plan.part_count,
                plan.bootstrap.last_step, plan.phases.size());
    return kExitOk;
}

nlohmann::json state_json(const std::string& label, const RuntimeState& st,
                          const std::vector<Directive>& dirs) {
    nlohmann::json j;
    j["event"] = label;
    j["step"] = st.step;
    j["mode"] = to_string(st.mode);
    j["mode_phase"] = st.mode_phase;
    j["ground_plane"] = st.ground_plane_active;
    j["targets"] = st.active_targets;
    j["wireframe"] = st.viz.wireframe_on;
    std::vector<std::string> ds;
    for (const auto& d : dirs) ds.push_back(describe(d));
    j["directives"] = ds;
    return j;
}

int cmd_simulate(const std::string& plan_path, const std::string& script_path) {
    InstructionPlan plan = load_plan_file(plan_path);
    std::ifstream f(script_path, std::ios::binary);
    if (!f) throw ParseError(0, "cannot open '" + script_path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    std::vector<Event> events = parse_event_script(buf.str());

    auto [st, dirs] = init_runtime(plan);
    std::cout << state_json("init", st, dirs).dump() << '\n';
    for (size_t i = 0; i < events.size(); ++i) {
        try {
            auto [next, d] = apply_event(st, events[i], plan);
            st = std::move(next);
            dirs = std::move(d);
        } catch (const RuntimeViolation& e) {
            std::cerr << "event " << i << " (" << describe(events[i]) << "): " << e.what()
                      << '\n';
            return kExitInput;
        }
        auto broken = check_runtime_invariants(st, plan);
        if (!broken.empty()) {
            for (const auto& b : broken)
                std::cerr << "internal invariant violated: " << b << '\n';
            return kExitInternal;
        }
        std::cout << state_json(describe(events[i]), st, dirs).dump() << '\n';
    }
    return kExitOk;
}

void print_step_status(const RuntimeState& st, const InstructionPlan& plan) {
    std::string targets;
    for (size_t i = 0; i < st.active_targets.size(); ++i)
        targets += (i ? "," : "") + std::to_string(st.active_targets[i]);
    int phase = plan.phase_of(st.step);
    std::string phase_str = phase == 0 ? "bootstrap" : std::to_string(phase);
    std::printf("step %d/%d  phase %s  mode %s  targets [%s]  ground %s  wireframe %s\n",
                st.step, plan.part_count, phase_str.c_str(), to_string(st.mode).c_str(),
                targets.c_str(), st.ground_plane_active ? "on" : "off",
                st.viz.wireframe_on ? "on" : "off");
}

int cmd_step(const std::string& plan_path) {
    InstructionPlan plan = load_plan_file(plan_path);
    auto [st, dirs] = init_runtime(plan);
    {
        auto [anchored, d] = apply_event(st, {Event::Kind::AnchorPlaced}, plan);
        st = std::move(anchored);
        for (const auto& dir : d) std::printf("  -> %s\n", describe(dir).c_str());
    }
    print_step_status(st, plan);
    std::printf("commands: n(ext) p(rev) w(ireframe) q(uit)\n");

    std::string line;
    while (std::getline(std::cin, line)) {
        char cmd = 0;
        for (char ch : line)
            if (!isspace((unsigned char)ch)) {
                cmd = ch;
                break;
            }
        if (cmd == 0) continue;
        if (cmd == 'q') break;
        Event ev;
        if (cmd == 'n') {
            ev.kind = Event::Kind::Next;
        } else if (cmd == 'p') {
            ev.kind = Event::Kind::Prev;
        } else if (cmd == 'w') {
            ev.kind = Event::Kind::ToggleWireframe;
        } else {
            std::printf("unknown command '%c' (n/p/w/q)\n", cmd);
            continue;
        }
        try {
            auto [next, d] = apply_event(st, ev, plan);
            st = std::move(next);
            for (const auto& dir : d) std::printf("  -> %s\n", describe(dir).c_str());
        } catch (const RuntimeViolation& e) {
            std::printf("error: %s\n", e.what());
        }
        print_step_status(st, plan);
    }
    return kExitOk;
}

int cmd_render(const std::string& plan_path, int step, const std::string& view,
               const std::string& out_path) {
    InstructionPlan plan = load_plan_file(plan_path);
    if (step < 1 || step > plan.part_count) {
        std::cerr << "step " << step << " out of range 1.." << plan.part_count << '\n';
        return kExitUsage;
    }
    std::string svg = render_step_svg(plan, step, view);
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + out_path + "'");
    f << svg;
    std::printf("wrote %s\n", out_path.c_str());
    return kExitOk;
}

tracking::Pose parse_pose_row(const std::vector<double>& v) {
    tracking::Pose p;
    for (int i = 0; i < 9; ++i) p.r[i] = v[i];
    p.t = {v[9], v[10], v[11]};
    // Orthonormal and right-handed; 1e-3 admits matrices rounded to ~4 decimals.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double dot = 0;
            for (int k = 0; k < 3; ++k) dot += p.r[k * 3 + i] * p.r[k * 3 + j];
            if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-3)
                throw ParseError(0, "pose rotation is not orthonormal");
        }
    double det = p.r[0] * (p.r[4] * p.r[8] - p.r[5] * p.r[7]) -
                 p.r[1] * (p.r[3] * p.r[8] - p.r[5] * p.r[6]) +
                 p.r[2] * (p.r[3] * p.r[7] - p.r[4] * p.r[6]);
    if (std::abs(det - 1.0) > 1e-3) throw ParseError(0, "pose rotation must be right-handed");
    return p;
}

int cmd_measure(const std::string& model_path, const std::string& format,
                const std::string& poses_path, int prefix, int samples,
                const tracking::CameraModel& cam) {
    AssemblyModel model = load_model_arg(model_path, format);
    std::ifstream f(poses_path, std::ios::binary);
    if (!f) throw ParseError(0, "cannot open '" + poses_path + "'");
    std::vector<std::vector<double>> rows;
    std::string raw;
    int line_no = 0;
    while (std::getline(f, raw)) {
        ++line_no;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::istringstream ls(raw);
        std::vector<double> nums;
        double x;
        while (ls >> x) nums.push_back(x);
        if (nums.empty()) continue;
        if (nums.size() != 12)
            throw ParseError(line_no, "pose rows need 12 numbers (9 rotation + 3 translation)");
        rows.push_back(std::move(nums));
    }
    if (rows.size() != 2)
        throw ParseError(0, "poses file needs exactly 2 rows: true pose, estimated pose");
    tracking::Pose true_pose = parse_pose_row(rows[0]);
    tracking::Pose est_pose = parse_pose_row(rows[1]);

    int n = prefix > 0 ? prefix : model.part_count();
    if (n > model.part_count())
        throw ParseError(0, "prefix exceeds the model's part count");
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i + 1;
    auto refs = metrics::prefix_refs(model, order, n);
    tracking::GapStats gap = tracking::reprojection_gap(true_pose, est_pose, cam, refs, samples);
    std::printf("mean %.3f max %.3f\n", gap.mean_px, gap.max_px);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"brick assembly instruction planner"};
    app.require_subcommand(1);

    Common common;
    app.add_option("--config", common.config_path, "key=value parameter overrides");
    uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "planner RNG seed");

    auto* plan_cmd = app.add_subcommand("plan", "compute an instruction plan for a model");
    std::string model_path, out_path, format = "auto";
    plan_cmd->add_option("model", model_path, "model file")->required();
    plan_cmd->add_option("-o,--out", out_path, "output .plan.json path")->required();
    plan_cmd->add_option("--format", format, "native|ldraw|auto")
        ->check(CLI::IsMember({"native", "ldraw", "auto"}));

    auto* validate_cmd = app.add_subcommand("validate", "check a plan file");
    std::string v_plan_path;
    validate_cmd->add_option("plan", v_plan_path, "plan file")->required();
    bool v_spacing = false;
    validate_cmd->add_flag("--spacing", v_spacing,
                           "also check boundary spacing against T_max");

    auto* sim_cmd = app.add_subcommand("simulate", "run an event script against a plan");
    std::string s_plan_path, s_script_path;
    sim_cmd->add_option("plan", s_plan_path, "plan file")->required();
    sim_cmd->add_option("script", s_script_path, "event script")->required();

    auto* step_cmd = app.add_subcommand("step", "interactive step-through of a plan");
    std::string t_plan_path;
    step_cmd->add_option("plan", t_plan_path, "plan file")->required();

    auto* render_cmd = app.add_subcommand("render", "render one step as SVG");
    std::string r_plan_path, r_view = "iso", r_out;
    int r_step = 1;
    render_cmd->add_option("plan", r_plan_path, "plan file")->required();
    render_cmd->add_option("--step", r_step, "step number")->required();
    render_cmd->add_option("--view", r_view, "front|back|left|right|top|iso")
        ->check(CLI::IsMember(render_view_names()));
    render_cmd->add_option("-o,--out", r_out, "output .svg path")->required();

    auto* measure_cmd =
        app.add_subcommand("measure", "reprojection gap between two poses of a model");
    std::string m_model_path, m_poses_path, m_format = "auto";
    int m_prefix = 0, m_samples = 8;
    tracking::CameraModel cam;
    measure_cmd->add_option("--model", m_model_path, "model file")->required();
    measure_cmd->add_option("--poses", m_poses_path, "two 12-number rows: true, estimated")
        ->required();
    measure_cmd->add_option("--format", m_format, "native|ldraw|auto")
        ->check(CLI::IsMember({"native", "ldraw", "auto"}));
    measure_cmd->add_option("--prefix", m_prefix, "use only the first K parts");
    measure_cmd->add_option("--samples", m_samples, "samples per box edge")
        ->check(CLI::Range(2, 1000));
    measure_cmd->add_option("--focal", cam.focal_px, "focal length in pixels");
    measure_cmd->add_option("--ppx", cam.ppx, "principal point x");
    measure_cmd->add_option("--ppy", cam.ppy, "principal point y");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (seed_opt->count()) common.seed = seed_val;
        common.finish();
        if (plan_cmd->parsed()) return cmd_plan(common, model_path, out_path, format);
        if (validate_cmd->parsed()) return cmd_validate(common, v_plan_path, v_spacing);
        if (sim_cmd->parsed()) return cmd_simulate(s_plan_path, s_script_path);
        if (step_cmd->parsed()) return cmd_step(t_plan_path);
        if (render_cmd->parsed()) return cmd_render(r_plan_path, r_step, r_view, r_out);
        if (measure_cmd->parsed())
            return cmd_measure(m_model_path, m_format, m_poses_path, m_prefix, m_samples, cam);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const UnplannableError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const CycleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
