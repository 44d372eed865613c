#pragma once

#include <string>

#include "brickplan/sequencer.hpp"
#include "brickplan/tracking_sim.hpp"

namespace brickplan {

// key=value overrides, one per line, '#' comments. Keys mirror the planner
// and tracker field names: T_max, theta_sym, theta_dist, theta_conf, b_min,
// w_local, seed, iters, theta_iou, theta_amb, occlusion_limit,
// z_rotation_limit. T_max feeds both the planner and the tracker. Unknown
// keys and unparsable values raise ParseError with the line number.
void apply_config_text(const std::string& text, SequencerConfig& seq,
                       tracking::TrackerParams& trk);
void apply_config_file(const std::string& path, SequencerConfig& seq,
                       tracking::TrackerParams& trk);

} // namespace brickplan
