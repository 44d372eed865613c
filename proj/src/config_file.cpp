#include "brickplan/config_file.hpp"

#include <fstream>
#include <sstream>

#include "brickplan/errors.hpp"

namespace brickplan {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

template <class T>
T number(const std::string& v, int line) {
    std::istringstream is(v);
    T out;
    char extra;
    if (!(is >> out) || is >> extra)
        throw ParseError(line, "cannot parse value '" + v + "'");
    return out;
}

} // namespace

void apply_config_text(const std::string& text, SequencerConfig& seq,
                       tracking::TrackerParams& trk) {
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::string line = trim(raw);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "T_max") {
            int v = number<int>(val, line_no);
            if (v < 1) throw ParseError(line_no, "T_max must be at least 1");
            seq.t_max = v;
            trk.t_max = v;
        } else if (key == "theta_sym") {
            seq.theta_sym = number<double>(val, line_no);
        } else if (key == "theta_dist") {
            seq.theta_dist = number<double>(val, line_no);
        } else if (key == "theta_conf") {
            seq.theta_conf = number<double>(val, line_no);
        } else if (key == "b_min") {
            int v = number<int>(val, line_no);
            if (v < 1) throw ParseError(line_no, "b_min must be at least 1");
            seq.b_min = v;
        } else if (key == "w_local") {
            seq.w_local = number<double>(val, line_no);
        } else if (key == "seed") {
            seq.seed = number<uint64_t>(val, line_no);
        } else if (key == "iters") {
            int v = number<int>(val, line_no);
            if (v < 0) throw ParseError(line_no, "iters cannot be negative");
            seq.iters = v;
        } else if (key == "theta_iou") {
            trk.theta_iou = number<double>(val, line_no);
        } else if (key == "theta_amb") {
            trk.theta_amb = number<double>(val, line_no);
        } else if (key == "occlusion_limit") {
            trk.occlusion_limit = number<double>(val, line_no);
        } else if (key == "z_rotation_limit") {
            trk.z_rotation_limit = number<double>(val, line_no);
        } else {
            throw ParseError(line_no, "unknown config key '" + key + "'");
        }
    }
}

void apply_config_file(const std::string& path, SequencerConfig& seq,
                       tracking::TrackerParams& trk) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError(0, "cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    apply_config_text(buf.str(), seq, trk);
}

} // namespace brickplan
