#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brickplan/graphs.hpp"
#include "brickplan/model.hpp"

namespace brickplan {

enum class StabilityViolation { FloatingPart, DisconnectedComponent };

std::string to_string(StabilityViolation v);

struct FeasibilityIssue {
    int step = 0; // 1-based prefix length at which the order first breaks
    StabilityViolation reason{};
};

struct FeasibilityReport {
    bool feasible = true;
    std::optional<FeasibilityIssue> first_violation;
};

// Checks that every prefix of the order is buildable: each placed component
// must contain a part resting on the ground plane, and the placed parts must
// form a single connected component of the contact graph (no detached
// subassemblies). order is a permutation of 1..N (throws std::invalid_argument
// otherwise). Floating wins over disconnection when both occur at one step.
FeasibilityReport prefix_feasible(const AssemblyModel& model, const ContactGraph& contacts,
                                  const std::vector<int>& order);

} // namespace brickplan
