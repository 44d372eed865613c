#pragma once

#include <stdexcept>
#include <string>

namespace brickplan {

// Malformed model input. line is 1-based, 0 when no single line is at fault.
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
          line(line_) {}
};

// Plan JSON that does not match the schema. path is a JSON pointer-ish
// locator like "$.phases[2].start_step".
struct SchemaError : std::runtime_error {
    std::string path;
    SchemaError(std::string path_, const std::string& msg)
        : std::runtime_error(path_ + ": " + msg), path(std::move(path_)) {}
};

// No phase schedule satisfies the thresholds. stuck_step is the boundary the
// planner could not advance past (0 when no first boundary exists at all).
struct UnplannableError : std::runtime_error {
    int stuck_step;
    UnplannableError(int stuck_step_, const std::string& msg)
        : std::runtime_error(msg), stuck_step(stuck_step_) {}
};

// Event rejected by the instruction runtime (step out of range, anchor
// missing). State is unchanged when this is thrown.
struct RuntimeViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// RuntimeViolation tagged with the 0-based index of the offending event in a
// scripted run.
struct TraceError : std::runtime_error {
    int event_index;
    TraceError(int idx, const std::string& msg)
        : std::runtime_error("event " + std::to_string(idx) + ": " + msg), event_index(idx) {}
};

} // namespace brickplan
