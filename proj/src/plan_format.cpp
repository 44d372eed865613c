#include "brickplan/plan_format.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "brickplan/errors.hpp"

namespace brickplan {

using nlohmann::json;

int InstructionPlan::phase_of(int step) const {
    for (const auto& ph : phases)
        if (step >= ph.start_step && step <= ph.end_step) return ph.phase_id;
    return 0;
}

const PhaseSpan* InstructionPlan::phase_by_id(int phase_id) const {
    for (const auto& ph : phases)
        if (ph.phase_id == phase_id) return &ph;
    return nullptr;
}

namespace {

json to_json(const InstructionPlan& p) {
    json j;
    j["version"] = p.version;
    j["model_hash"] = p.model_hash;
    j["part_count"] = p.part_count;
    j["bootstrap"] = {{"mode", p.bootstrap.mode},
                      {"first_step", p.bootstrap.first_step},
                      {"last_step", p.bootstrap.last_step}};
    json phases = json::array();
    for (const auto& ph : p.phases)
        phases.push_back({{"phase_id", ph.phase_id},
                          {"start_step", ph.start_step},
                          {"end_step", ph.end_step},
                          {"target_prefix", ph.target_prefix},
                          {"pre_activate_at", ph.pre_activate_at}});
    j["phases"] = std::move(phases);
    json steps = json::array();
    for (const auto& st : p.steps)
        steps.push_back({{"step", st.step},
                         {"part", st.part},
                         {"shape", st.shape_id},
                         {"extent", {st.extent.x, st.extent.y, st.extent.z}},
                         {"rot", st.rot},
                         {"pos", {st.pos.x, st.pos.y, st.pos.z}},
                         {"color", st.color_id}});
    j["steps"] = std::move(steps);
    j["viz"] = {{"current", p.viz.current},
                {"previous", p.viz.previous},
                {"future", p.viz.future},
                {"occluder", p.viz.occluder}};
    return j;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw SchemaError(path, msg);
}

const json& field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing key '") + key + "'");
    return *it;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) fail(path + "." + k, "unknown key");
}

int get_int(const json& obj, const char* key, const std::string& path) {
    const json& v = field(obj, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    auto wide = v.get<int64_t>();
    if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max())
        fail(path + "." + key, "integer out of range");
    return (int)wide;
}

std::string get_str(const json& obj, const char* key, const std::string& path) {
    const json& v = field(obj, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

Vec3i get_vec3(const json& obj, const char* key, const std::string& path) {
    const json& v = field(obj, key, path);
    std::string p = path + "." + key;
    if (!v.is_array() || v.size() != 3) fail(p, "expected an array of 3 integers");
    for (int i = 0; i < 3; ++i)
        if (!v[i].is_number_integer()) fail(p + "[" + std::to_string(i) + "]", "expected an integer");
    return {v[0].get<int>(), v[1].get<int>(), v[2].get<int>()};
}

InstructionPlan from_json(const json& j) {
    InstructionPlan p;
    check_keys(j, {"version", "model_hash", "part_count", "bootstrap", "phases", "steps", "viz"},
               "$");
    p.version = get_int(j, "version", "$");
    if (p.version != 1)
        fail("$.version", "unsupported plan version " + std::to_string(p.version));
    p.model_hash = get_str(j, "model_hash", "$");
    p.part_count = get_int(j, "part_count", "$");

    const json& bs = field(j, "bootstrap", "$");
    check_keys(bs, {"mode", "first_step", "last_step"}, "$.bootstrap");
    p.bootstrap.mode = get_str(bs, "mode", "$.bootstrap");
    p.bootstrap.first_step = get_int(bs, "first_step", "$.bootstrap");
    p.bootstrap.last_step = get_int(bs, "last_step", "$.bootstrap");

    const json& phases = field(j, "phases", "$");
    if (!phases.is_array()) fail("$.phases", "expected an array");
    for (size_t i = 0; i < phases.size(); ++i) {
        std::string path = "$.phases[" + std::to_string(i) + "]";
        const json& e = phases[i];
        check_keys(e, {"phase_id", "start_step", "end_step", "target_prefix", "pre_activate_at"},
                   path);
        PhaseSpan ph;
        ph.phase_id = get_int(e, "phase_id", path);
        ph.start_step = get_int(e, "start_step", path);
        ph.end_step = get_int(e, "end_step", path);
        ph.target_prefix = get_int(e, "target_prefix", path);
        ph.pre_activate_at = get_int(e, "pre_activate_at", path);
        p.phases.push_back(ph);
    }

    const json& steps = field(j, "steps", "$");
    if (!steps.is_array()) fail("$.steps", "expected an array");
    for (size_t i = 0; i < steps.size(); ++i) {
        std::string path = "$.steps[" + std::to_string(i) + "]";
        const json& e = steps[i];
        check_keys(e, {"step", "part", "shape", "extent", "rot", "pos", "color"}, path);
        PlanStep st;
        st.step = get_int(e, "step", path);
        st.part = get_int(e, "part", path);
        st.shape_id = get_str(e, "shape", path);
        st.extent = get_vec3(e, "extent", path);
        st.rot = get_str(e, "rot", path);
        st.pos = get_vec3(e, "pos", path);
        st.color_id = get_int(e, "color", path);
        p.steps.push_back(std::move(st));
    }

    const json& viz = field(j, "viz", "$");
    check_keys(viz, {"current", "previous", "future", "occluder"}, "$.viz");
    p.viz.current = get_str(viz, "current", "$.viz");
    p.viz.previous = get_str(viz, "previous", "$.viz");
    p.viz.future = get_str(viz, "future", "$.viz");
    p.viz.occluder = get_str(viz, "occluder", "$.viz");
    return p;
}

} // namespace

std::string serialize_plan(const InstructionPlan& plan) {
    auto problems = validate_plan(plan);
    if (!problems.empty())
        throw std::invalid_argument("refusing to serialize an invalid plan: " + problems.front());
    // nlohmann's object keeps keys sorted; dump() emits no whitespace, so the
    // byte stream is canonical.
    return to_json(plan).dump() + "\n";
}

InstructionPlan deserialize_plan(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("not valid JSON: ") + e.what());
    }
    return from_json(j);
}

std::vector<std::string> validate_plan(const InstructionPlan& p) {
    std::vector<std::string> out;
    auto bad = [&](const std::string& m) { out.push_back(m); };

    if (p.version != 1) bad("unsupported plan version " + std::to_string(p.version));
    if (p.model_hash.size() != 64) {
        bad("model_hash must be 64 hex characters");
    } else {
        for (char c : p.model_hash)
            if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
                bad("model_hash must be lowercase hex");
                break;
            }
    }
    if (p.part_count < 1) bad("part_count must be at least 1");
    if ((int)p.steps.size() != p.part_count)
        bad("steps array must have exactly part_count entries");

    // A set, not a flag array: part_count is untrusted input here and must
    // not size an allocation.
    std::set<int> part_seen;
    for (size_t i = 0; i < p.steps.size(); ++i) {
        const PlanStep& st = p.steps[i];
        std::string where = "step " + std::to_string(i + 1) + ": ";
        if (st.step != (int)i + 1) bad(where + "step numbers must run 1..part_count in order");
        if (st.part < 1 || st.part > p.part_count) {
            bad(where + "part index out of range");
        } else if (!part_seen.insert(st.part).second) {
            bad(where + "part " + std::to_string(st.part) + " appears twice");
        }
        if (st.shape_id.empty()) bad(where + "empty shape id");
        if (st.extent.x < 1 || st.extent.y < 1 || st.extent.z < 1)
            bad(where + "extent entries must be positive");
        if (!Rotation::parse(st.rot)) bad(where + "unknown rotation '" + st.rot + "'");
        if (st.color_id < 0) bad(where + "negative color id");
    }

    if (p.bootstrap.mode != "ground_plane")
        bad("bootstrap mode must be \"ground_plane\"");
    if (p.bootstrap.first_step != 1) bad("bootstrap must start at step 1");
    if (p.bootstrap.last_step < 1) bad("bootstrap must cover at least step 1");

    if (p.phases.empty()) {
        bad("plan needs at least one model-target phase");
        return out;
    }
    if (p.phases.front().start_step != p.bootstrap.last_step + 1)
        bad("first phase must start right after the bootstrap segment");
    if (p.phases.back().end_step != p.part_count)
        bad("last phase must end at the final step");
    int prev_id = 1;
    for (size_t i = 0; i < p.phases.size(); ++i) {
        const PhaseSpan& ph = p.phases[i];
        std::string where = "phase " + std::to_string(ph.phase_id) + ": ";
        if (ph.phase_id <= prev_id)
            bad(where + "phase ids must be ascending and start above 1");
        prev_id = ph.phase_id;
        if (ph.start_step > ph.end_step) bad(where + "start_step is past end_step");
        if (i > 0) {
            const PhaseSpan& prv = p.phases[i - 1];
            if (ph.start_step <= prv.end_step)
                bad(where + "overlaps phase " + std::to_string(prv.phase_id));
            else if (ph.start_step != prv.end_step + 1)
                bad(where + "gap after phase " + std::to_string(prv.phase_id));
        }
        if (ph.target_prefix != ph.start_step - 1)
            bad(where + "target_prefix must be the step count before the switch");
        if (ph.pre_activate_at != ph.start_step - 1)
            bad(where + "pre-activation must happen one step before the switch");
    }
    return out;
}

InstructionPlan load_plan_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SchemaError("$", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return deserialize_plan(buf.str());
}

void save_plan_file(const InstructionPlan& plan, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << serialize_plan(plan);
}

} // namespace brickplan
