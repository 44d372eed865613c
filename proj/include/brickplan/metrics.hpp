#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "brickplan/model.hpp"

// Viewpoint-based shape metrics used by the phase planner. Scores are
// deterministic: parallel and serial paths share the identical per-view
// kernel and reduce in view order, so results do not depend on thread count.

namespace brickplan::metrics {

using PartRefs = std::vector<const PartPlacement*>;

// First k entries of order (part indices) as references into the model.
PartRefs prefix_refs(const AssemblyModel& model, const std::vector<int>& order, int k);
PartRefs all_refs(const AssemblyModel& model);

struct ViewpointSet {
    std::vector<Vec3d> directions; // unit vectors, camera toward scene
    // 8 equally spaced azimuths at 15 and 45 degree elevations.
    static const ViewpointSet& standard();
};

struct MetricParams {
    double cells_per_ldu = 0.5; // raster resolution, default one cell per 2 LDU
    double tau_sym = 1.0;       // symmetry match tolerance, LDU
    double gain = 0.25;         // distinctness gain
    const ViewpointSet* views = &ViewpointSet::standard();
};

// Orthographic silhouette on a square lattice. The lattice is anchored at the
// projected center of the part set's bounding box, so silhouettes of two part
// sets overlay cell-for-cell by lattice index (center-aligned comparison).
struct Silhouette {
    int i0 = 0, j0 = 0; // lattice coords of cells[0]
    int nx = 0, ny = 0;
    std::vector<uint8_t> cells; // row-major

    bool filled(int i, int j) const {
        if (i < i0 || j < j0 || i >= i0 + nx || j >= j0 + ny) return false;
        return cells[(size_t)(j - j0) * nx + (i - i0)] != 0;
    }
    int filled_count() const;
};

Silhouette rasterize(const PartRefs& parts, Vec3d view_dir, double cells_per_ldu);

// Convex outline of a box's orthographic projection, counterclockwise in
// view coordinates. Shared with the SVG step renderer.
std::vector<std::array<double, 2>> project_box_outline(const Aabb& box, Vec3d view_dir);

// Filled cells with a 4-neighbor outside the silhouette.
int boundary_cell_count(const Silhouette& s);
// Perimeter cell count of the bounding rectangle of the filled cells.
int rect_boundary_cell_count(const Silhouette& s);

// Plain PGM (P2), one cell per pixel, for eyeballing rasters.
void write_pgm(const Silhouette& s, std::ostream& os);

// How far a view's outline deviates from a plain rectangle, in [0,1]:
// clamp(gain * (boundary/rect_boundary - 1)). Empty silhouettes score 0.
double view_distinctness(const PartRefs& parts, Vec3d dir, const MetricParams& p);
// Mean over the viewpoint set.
double distinctness_score(const PartRefs& parts, const MetricParams& p);

// Center-aligned silhouette IoU for one view / averaged over the set.
// Two empty silhouettes count as identical (1.0).
double view_confusability(const PartRefs& a, const PartRefs& b, Vec3d dir,
                          const MetricParams& p);
double confusability_score(const PartRefs& a, const PartRefs& b, const MetricParams& p);

// Fraction of parts that map onto a compatible part (same shape and world box
// extents) within tau under the best of three self-maps of the bounding box:
// mirror across the two vertical center planes, half turn about the vertical
// center axis. Matching is greedy one-to-one in part order, nearest first.
struct SymmetryReport {
    double score = 0;
    std::string best_map; // "mirror_x" | "mirror_z" | "rot180_y"
    double mirror_x = 0, mirror_z = 0, rot180_y = 0;
};

SymmetryReport symmetry_score(const PartRefs& parts, double tau_sym = 1.0);

// Single-threaded reference implementations; must return bit-identical
// values to the parallel versions above (asserted by tests and the bench).
namespace serial_ref {
double distinctness_score(const PartRefs& parts, const MetricParams& p);
double confusability_score(const PartRefs& a, const PartRefs& b, const MetricParams& p);
} // namespace serial_ref

} // namespace brickplan::metrics
