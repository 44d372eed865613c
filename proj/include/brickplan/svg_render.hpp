#pragma once

#include <string>
#include <vector>

#include "brickplan/plan_format.hpp"

namespace brickplan {

// Fixed orthographic viewpoints for step images.
const std::vector<std::string>& render_view_names(); // front back left right top iso
bool is_render_view(const std::string& name);

// One instruction step as a standalone SVG: parts from earlier steps drawn
// as outlines, the step's part filled, later parts omitted. Uses only the
// geometry embedded in the plan. Throws std::out_of_range for a bad step and
// std::invalid_argument for an unknown view name.
std::string render_step_svg(const InstructionPlan& plan, int step, const std::string& view);

} // namespace brickplan
