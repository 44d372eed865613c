#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "brickplan/graphs.hpp"
#include "brickplan/metrics.hpp"
#include "brickplan/plan_format.hpp"

namespace brickplan {

struct SequencerConfig {
    int t_max = 40;           // max steps between consecutive recognition boundaries
    double theta_sym = 0.85;  // boundary prefixes must score at most this symmetry
    double theta_dist = 0.05; // and at least this distinctness
    double theta_conf = 0.90; // and confuse at most this much with the previous boundary
    int b_min = 8;            // minimum bootstrap length in steps
    double w_local = 1.0;     // weight of the step-locality term in the order cost
    uint64_t seed = 0;        // local search RNG seed
    int iters = 2000;         // local search candidate budget
    metrics::MetricParams metric{};
};

// Ordering objective, lower is better: w_local * total distance between
// consecutive part centroids, plus the symmetry score of every prefix
// (asymmetric early prefixes make recognition boundaries available sooner).
double order_cost(const AssemblyModel& model, const std::vector<int>& order,
                  const SequencerConfig& cfg);

// Build order construction: greedy lowest-incremental-cost with ties to the
// lowest part index, then seeded pairwise-swap descent. Every prefix of the
// result is buildable (grounded, single component, precedence respected).
// Deterministic for a fixed (model, config), whatever the thread count.
// Throws UnplannableError when no part can legally be placed next.
std::vector<int> order_steps(const AssemblyModel& model, const PrecedenceGraph& precedence,
                             const ContactGraph& contacts, const SequencerConfig& cfg);

struct BoundaryScores {
    int step = 0;
    double symmetry = 0;
    double distinctness = 0;
    double confusability = 0; // vs previous boundary prefix; 0 for the first
};

struct PlanDraft {
    std::vector<int> order;
    int bootstrap_end = 0;       // last ground-plane step, boundaries[0] - 1
    std::vector<int> boundaries; // start steps of the model-target phases
    std::vector<BoundaryScores> scores;
    int phase_count() const { return (int)boundaries.size() + 1; } // bootstrap included
};

// Boundary admissibility for step b given the previous boundary (0 = none).
// partition_phases uses the metric thresholds; tests can swap in arbitrary
// predicates (they only see prefix lengths, so any mask works).
using BoundaryPredicate = std::function<bool(int b, int prev_boundary)>;

struct Partition {
    int bootstrap_end = 0;
    std::vector<int> boundaries;
};

// Core split: first boundary = earliest admissible step past the bootstrap
// minimum, then repeatedly the farthest admissible step within t_max of the
// previous one, until the remaining tail fits in t_max. For a fixed first
// boundary this yields the fewest phases possible. Throws UnplannableError
// (stuck_step = previous boundary, 0 when no first boundary exists).
Partition partition_schedule(int part_count, int t_max, int b_min,
                             const BoundaryPredicate& admissible);

// Metric-driven partition of an ordered build. A boundary b is admissible
// when the prefix of b-1 parts has symmetry <= theta_sym, distinctness >=
// theta_dist, and confusability with the previous boundary prefix <=
// theta_conf. Unplannable errors name the failing constraint.
PlanDraft partition_phases(const AssemblyModel& model, const std::vector<int>& order,
                           const SequencerConfig& cfg);

// Spacing rules for an externally supplied schedule: ascending boundaries in
// range, first boundary right after the bootstrap, gaps between consecutive
// boundaries at most t_max. The closing phase may exceed t_max (its target
// stays registered to the end). Returns problems; empty = acceptable.
std::vector<std::string> validate_schedule(int part_count, int bootstrap_end,
                                           const std::vector<int>& boundaries, int t_max);

// Full pipeline: contact/precedence graphs, ordering, partitioning, plan
// assembly. The result always passes validate_plan. draft_out, when given,
// receives the order and boundary scores for reporting.
InstructionPlan make_plan(const AssemblyModel& model, const SequencerConfig& cfg,
                          PlanDraft* draft_out = nullptr);

} // namespace brickplan
