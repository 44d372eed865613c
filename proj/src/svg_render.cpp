#include "brickplan/svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "brickplan/metrics.hpp"

namespace brickplan {

namespace {

struct View {
    const char* name;
    Vec3d dir;
};

const View kViews[] = {
    {"front", {0, 0, -1}}, {"back", {0, 0, 1}},  {"left", {1, 0, 0}},
    {"right", {-1, 0, 0}}, {"top", {0, -1, 0}},  {"iso", {-1, -1, -1}},
};

Vec3d view_dir(const std::string& name) {
    for (const auto& v : kViews)
        if (name == v.name) return normalized(v.dir);
    throw std::invalid_argument("unknown view '" + name + "'");
}

Aabb step_box(const PlanStep& st) {
    auto rot = Rotation::parse(st.rot);
    if (!rot) throw std::invalid_argument("plan step has unknown rotation '" + st.rot + "'");
    // extent is (width, depth, height); the local box is (width, height, depth).
    return rotated_box({st.extent.x, st.extent.z, st.extent.y}, *rot, st.pos);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

const std::vector<std::string>& render_view_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& v : kViews) n.push_back(v.name);
        return n;
    }();
    return names;
}

bool is_render_view(const std::string& name) {
    const auto& names = render_view_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::string render_step_svg(const InstructionPlan& plan, int step, const std::string& view) {
    if (step < 1 || step > plan.part_count)
        throw std::out_of_range("step " + std::to_string(step) + " out of range 1.." +
                                std::to_string(plan.part_count));
    Vec3d dir = view_dir(view);

    // SVG y grows downward, so v flips sign.
    std::vector<std::vector<std::array<double, 2>>> outlines;
    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    bool first = true;
    for (int k = 1; k <= step; ++k) {
        auto poly = metrics::project_box_outline(step_box(plan.steps[k - 1]), dir);
        for (auto& p : poly) {
            p[1] = -p[1];
            if (first || p[0] < min_x) min_x = p[0];
            if (first || p[0] > max_x) max_x = p[0];
            if (first || p[1] < min_y) min_y = p[1];
            if (first || p[1] > max_y) max_y = p[1];
            first = false;
        }
        outlines.push_back(std::move(poly));
    }

    const double margin = 10;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(min_x - margin) << ' '
       << fmt(min_y - margin) << ' ' << fmt(max_x - min_x + 2 * margin) << ' '
       << fmt(max_y - min_y + 2 * margin) << "\">\n";
    os << "<g class=\"prev\" fill=\"none\" stroke=\"#8a8a8a\" stroke-width=\"1\">\n";
    for (int k = 1; k < step; ++k) {
        os << "<polygon points=\"";
        const auto& poly = outlines[k - 1];
        for (size_t i = 0; i < poly.size(); ++i)
            os << (i ? " " : "") << fmt(poly[i][0]) << ',' << fmt(poly[i][1]);
        os << "\"/>\n";
    }
    os << "</g>\n";
    os << "<g class=\"current\" fill=\"#d54\" stroke=\"#401010\" stroke-width=\"1\">\n";
    {
        os << "<polygon points=\"";
        const auto& poly = outlines[step - 1];
        for (size_t i = 0; i < poly.size(); ++i)
            os << (i ? " " : "") << fmt(poly[i][0]) << ',' << fmt(poly[i][1]);
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

} // namespace brickplan
