#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "brickplan/model.hpp"

namespace brickplan {

// Two parts are in contact when the top face of one meets the bottom face of
// the other within eps LDU and their ground-plane footprints overlap with
// positive area. Indices are the 1-based part indices of the model.
struct ContactGraph {
    int part_count = 0;
    std::vector<std::pair<int, int>> edges; // i < j
    std::vector<std::vector<int>> adj;      // adj[index], entry 0 unused

    const std::vector<int>& neighbors(int index) const { return adj.at(index); }
};

ContactGraph contact_graph(const AssemblyModel& model, double eps_contact = 0.5);

struct CycleError : std::runtime_error {
    std::vector<int> cycle; // part indices, first == last
    CycleError(std::vector<int> cycle_, const std::string& msg)
        : std::runtime_error(msg), cycle(std::move(cycle_)) {}
};

// Directed "must be placed no later than" edges: lower -> upper for every
// contact pair where lower's top meets upper's bottom. Throws CycleError when
// the relation is cyclic (possible with oversized eps and thin parts).
struct PrecedenceGraph {
    int part_count = 0;
    std::vector<std::pair<int, int>> edges;  // (below, above)
    std::vector<std::vector<int>> preds;     // preds[index] must precede index
};

PrecedenceGraph precedence_graph(const AssemblyModel& model, double eps_contact = 0.5);

} // namespace brickplan
