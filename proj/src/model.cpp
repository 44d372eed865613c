#include "brickplan/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <openssl/evp.h>

#include "brickplan/errors.hpp"

namespace brickplan {

namespace {

struct CatalogRow {
    const char* shape_id;
    int studs_w, studs_d, height;
    const char* ldraw;
};

// Stud pitch is 20 LDU; brick height 24, plate height 8.
constexpr CatalogRow kCatalog[] = {
    {"brick1x1", 1, 1, 24, "3005"}, {"brick1x2", 1, 2, 24, "3004"},
    {"brick1x3", 1, 3, 24, "3622"}, {"brick1x4", 1, 4, 24, "3010"},
    {"brick1x6", 1, 6, 24, "3009"}, {"brick1x8", 1, 8, 24, "3008"},
    {"brick2x2", 2, 2, 24, "3003"}, {"brick2x3", 2, 3, 24, "3002"},
    {"brick2x4", 2, 4, 24, "3001"}, {"brick2x6", 2, 6, 24, "2456"},
    {"brick2x8", 2, 8, 24, "3007"}, {"plate1x1", 1, 1, 8, "3024"},
    {"plate1x2", 1, 2, 8, "3023"},  {"plate1x3", 1, 3, 8, "3623"},
    {"plate1x4", 1, 4, 8, "3710"},  {"plate1x6", 1, 6, 8, "3666"},
    {"plate1x8", 1, 8, 8, "3460"},  {"plate2x2", 2, 2, 8, "3022"},
    {"plate2x3", 2, 3, 8, "3021"},  {"plate2x4", 2, 4, 8, "3020"},
    {"plate2x6", 2, 6, 8, "3795"},  {"plate2x8", 2, 8, 8, "3034"},
    {"tile1x2", 1, 2, 8, "3069"},   {"tile2x2", 2, 2, 8, "3068"},
};

std::string lower(std::string s) {
    for (char& c : s) c = (char)std::tolower((unsigned char)c);
    return s;
}

} // namespace

const std::vector<PartShape>& shape_catalog() {
    static const std::vector<PartShape> cat = [] {
        std::vector<PartShape> v;
        for (const auto& r : kCatalog)
            v.push_back({r.shape_id, r.studs_w * 20, r.studs_d * 20, r.height});
        return v;
    }();
    return cat;
}

std::optional<PartShape> find_shape(const std::string& id_or_ldraw) {
    static const std::map<std::string, int> index = [] {
        std::map<std::string, int> m;
        for (int i = 0; i < (int)std::size(kCatalog); ++i) {
            m[kCatalog[i].shape_id] = i;
            m[kCatalog[i].ldraw] = i;
        }
        return m;
    }();
    auto it = index.find(lower(id_or_ldraw));
    if (it == index.end()) return std::nullopt;
    return shape_catalog()[it->second];
}

const std::string& ldraw_number(const std::string& shape_id) {
    static const std::string empty;
    for (const auto& r : kCatalog)
        if (shape_id == r.shape_id) {
            static std::map<std::string, std::string> cache;
            return cache.emplace(shape_id, r.ldraw).first->second;
        }
    return empty;
}

int AssemblyModel::ground_y() const {
    int g = parts.empty() ? 0 : parts.front().world_box().lo.y;
    for (const auto& p : parts) g = std::min(g, p.world_box().lo.y);
    return g;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string canonical_serialize(const AssemblyModel& model) {
    std::ostringstream os;
    int cur_step = 1;
    for (const auto& p : model.parts) {
        for (; cur_step < p.source_step; ++cur_step) os << "step\n";
        os << "part " << p.shape.shape_id << ' ' << p.color_id << ' ' << p.rotation().name()
           << ' ' << p.position.x << ' ' << p.position.y << ' ' << p.position.z << '\n';
    }
    return os.str();
}

AssemblyModel finalize_model(std::vector<PartPlacement> placements) {
    if (placements.empty()) throw ParseError(0, "model has no parts");
    for (auto& p : placements) {
        if (p.shape.width <= 0 || p.shape.depth <= 0 || p.shape.height <= 0)
            throw ParseError(p.source_line, "shape '" + p.shape.shape_id + "' has empty extent");
        if (p.rotation_id < 0 || p.rotation_id >= Rotation::kCount)
            throw ParseError(p.source_line, "invalid rotation id");
        if (p.color_id < 0)
            throw ParseError(p.source_line, "negative color id");
    }
    for (int i = 0; i < (int)placements.size(); ++i) placements[i].index = i + 1;

    // Placements may touch but not share volume; 1 LDU^3 of slack absorbs
    // seam rounding in converted files.
    std::vector<Aabb> boxes;
    boxes.reserve(placements.size());
    for (const auto& p : placements) boxes.push_back(p.world_box());
    for (size_t i = 0; i < boxes.size(); ++i)
        for (size_t j = i + 1; j < boxes.size(); ++j) {
            long long v = overlap_volume(boxes[i], boxes[j]);
            if (v > 1)
                throw ParseError(placements[j].source_line,
                                 "parts " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                     " interpenetrate (overlap " + std::to_string(v) + " LDU^3)");
        }

    AssemblyModel m;
    m.parts = std::move(placements);
    m.model_hash = sha256_hex(canonical_serialize(m));
    return m;
}

namespace {

std::vector<std::string> tokenize(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

int parse_int(const std::string& t, int line, const char* what) {
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(t, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, std::string("expected integer ") + what + ", got '" + t + "'");
    }
    if (pos != t.size())
        throw ParseError(line, std::string("expected integer ") + what + ", got '" + t + "'");
    return v;
}

double parse_num(const std::string& t, int line, const char* what) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, std::string("expected number ") + what + ", got '" + t + "'");
    }
    if (pos != t.size())
        throw ParseError(line, std::string("expected number ") + what + ", got '" + t + "'");
    return v;
}

AssemblyModel parse_native(const std::string& text) {
    std::vector<PartPlacement> parts;
    int step = 1;
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        auto tok = tokenize(raw);
        if (tok.empty()) continue;
        if (tok[0] == "step") {
            if (tok.size() != 1) throw ParseError(line_no, "step takes no arguments");
            ++step;
            continue;
        }
        if (tok[0] != "part")
            throw ParseError(line_no, "unknown directive '" + tok[0] + "'");
        if (tok.size() != 7)
            throw ParseError(line_no, "part needs: shape color rotation x y z");
        auto shape = find_shape(tok[1]);
        if (!shape) throw ParseError(line_no, "unknown shape '" + tok[1] + "'");
        auto rot = Rotation::parse(tok[3]);
        if (!rot) throw ParseError(line_no, "unknown rotation '" + tok[3] + "'");
        PartPlacement p;
        p.shape = *shape;
        p.color_id = parse_int(tok[2], line_no, "color");
        if (p.color_id < 0) throw ParseError(line_no, "negative color id");
        p.rotation_id = rot->id();
        p.position = {parse_int(tok[4], line_no, "x"), parse_int(tok[5], line_no, "y"),
                      parse_int(tok[6], line_no, "z")};
        p.source_step = step;
        p.source_line = line_no;
        parts.push_back(std::move(p));
    }
    return finalize_model(std::move(parts));
}

// --- LDraw subset: line types 0 and 1, "0 STEP", MPD "0 FILE" sections. ---

struct LdrawLine {
    int line_no;
    std::vector<std::string> tok;
    std::string ref_name; // type 1 only, may contain spaces
};

struct LdrawSection {
    std::string name; // lowercased; "" = implicit main
    std::vector<LdrawLine> lines;
};

int round_int(double v, int line, const char* what) {
    double r = std::round(v);
    if (std::abs(v - r) > 1e-6)
        throw ParseError(line, std::string(what) + " is not on the integer grid: " +
                                   std::to_string(v));
    return (int)r;
}

class LdrawReader {
  public:
    explicit LdrawReader(const std::string& text) { split_sections(text); }

    AssemblyModel run() {
        if (sections_.empty() || sections_[0].lines.empty())
            throw ParseError(0, "model has no parts");
        std::vector<std::string> stack;
        emit(sections_[0], Rotation::identity(), {0, 0, 0}, -1, stack);
        return finalize_model(std::move(parts_));
    }

  private:
    std::vector<LdrawSection> sections_;
    std::vector<PartPlacement> parts_;
    int top_step_ = 1;

    void split_sections(const std::string& text) {
        std::istringstream is(text);
        std::string raw;
        int line_no = 0;
        bool after_nofile = false;
        while (std::getline(is, raw)) {
            ++line_no;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            auto tok = tokenize(raw);
            if (tok.empty()) continue;
            if (tok[0] == "0" && tok.size() >= 2 && lower(tok[1]) == "file") {
                if (tok.size() < 3) throw ParseError(line_no, "FILE needs a name");
                std::string name;
                for (size_t i = 2; i < tok.size(); ++i) {
                    if (i > 2) name += ' ';
                    name += tok[i];
                }
                sections_.push_back({lower(name), {}});
                after_nofile = false;
                continue;
            }
            if (tok[0] == "0" && tok.size() >= 2 && lower(tok[1]) == "nofile") {
                after_nofile = true;
                continue;
            }
            if (tok[0] != "0" && tok[0] != "1")
                throw ParseError(line_no, "unsupported line type '" + tok[0] + "'");
            if (after_nofile && tok[0] == "1")
                throw ParseError(line_no, "part line outside FILE section");
            if (sections_.empty()) sections_.push_back({"", {}});
            LdrawLine ln{line_no, tok, ""};
            if (tok[0] == "1") {
                if (tok.size() < 15)
                    throw ParseError(line_no, "type 1 line needs color, 12 numbers and a file");
                for (size_t i = 14; i < tok.size(); ++i) {
                    if (i > 14) ln.ref_name += ' ';
                    ln.ref_name += tok[i];
                }
            }
            sections_.back().lines.push_back(std::move(ln));
        }
    }

    const LdrawSection* find_section(const std::string& name) const {
        for (const auto& s : sections_)
            if (s.name == name) return &s;
        return nullptr;
    }

    // fixed_step < 0 means top level: "0 STEP" advances the counter there.
    // Inside a submodel all parts inherit the referencing line's step.
    void emit(const LdrawSection& sec, const Rotation& rot, Vec3i pos, int fixed_step,
              std::vector<std::string>& stack) {
        for (const auto& ln : sec.lines) {
            if (ln.tok[0] == "0") {
                if (ln.tok.size() >= 2 && lower(ln.tok[1]) == "step" && fixed_step < 0)
                    ++top_step_;
                continue;
            }
            int color = parse_int(ln.tok[1], ln.line_no, "color");
            if (color < 0) throw ParseError(ln.line_no, "negative color id");
            double n[12];
            for (int i = 0; i < 12; ++i)
                n[i] = parse_num(ln.tok[2 + i], ln.line_no, "pose");
            std::array<double, 9> m{n[3], n[4], n[5], n[6], n[7], n[8], n[9], n[10], n[11]};
            auto local_rot = Rotation::from_matrix(m, 1e-6);
            if (!local_rot)
                throw ParseError(ln.line_no, "rotation is not an axis-aligned quarter turn");
            Vec3i local_pos{round_int(n[0], ln.line_no, "x"), round_int(n[1], ln.line_no, "y"),
                            round_int(n[2], ln.line_no, "z")};
            Rotation world_rot = rot * *local_rot;
            Vec3i world_pos = rot.apply(local_pos) + pos;
            int step = fixed_step < 0 ? top_step_ : fixed_step;

            std::string ref = lower(ln.ref_name);
            if (const LdrawSection* sub = find_section(ref)) {
                if (std::find(stack.begin(), stack.end(), ref) != stack.end())
                    throw ParseError(ln.line_no, "submodel cycle through '" + ref + "'");
                stack.push_back(ref);
                emit(*sub, world_rot, world_pos, step, stack);
                stack.pop_back();
                continue;
            }
            std::string base = ref;
            if (base.size() > 4 && (base.ends_with(".dat") || base.ends_with(".ldr")))
                base.resize(base.size() - 4);
            auto shape = find_shape(base);
            if (!shape)
                throw ParseError(ln.line_no, "unknown part or submodel '" + ln.ref_name + "'");
            PartPlacement p;
            p.shape = *shape;
            p.color_id = color;
            p.rotation_id = world_rot.id();
            p.position = world_pos;
            p.source_step = step;
            p.source_line = ln.line_no;
            parts_.push_back(std::move(p));
        }
    }
};

} // namespace

AssemblyModel parse_model(const std::string& text, ModelFormat format) {
    return format == ModelFormat::Native ? parse_native(text) : LdrawReader(text).run();
}

ModelFormat format_for_path(const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot));
    if (ext == ".ldr" || ext == ".mpd" || ext == ".dat") return ModelFormat::Ldraw;
    return ModelFormat::Native;
}

AssemblyModel load_model_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_model(buf.str(), format_for_path(path));
}

} // namespace brickplan
