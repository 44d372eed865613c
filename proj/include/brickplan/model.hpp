#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brickplan/geom.hpp"

namespace brickplan {

// Shape extents are (width, depth, height) in LDU: width along local x,
// depth along local z, height along local y. A 1x1 brick is 20x20x24.
struct PartShape {
    std::string shape_id;
    int width = 0, depth = 0, height = 0;
    Vec3i box_dims() const { return {width, height, depth}; } // (x,y,z) order
    friend bool operator==(const PartShape&, const PartShape&) = default;
};

// Static catalog of supported shapes. Lookup accepts either the native
// shape id ("brick2x4") or the corresponding LDraw part number ("3001").
const std::vector<PartShape>& shape_catalog();
std::optional<PartShape> find_shape(const std::string& id_or_ldraw);
// Reverse map used by the LDraw reader; empty when the shape has no number.
const std::string& ldraw_number(const std::string& shape_id);

struct PartPlacement {
    int index = 0; // 1-based, order of appearance in the source
    PartShape shape;
    int color_id = 0;
    int rotation_id = 0; // Rotation::by_id
    Vec3i position;      // world position of the local box origin, LDU
    int source_step = 1; // 1-based authoring step group
    int source_line = 0; // for diagnostics

    const Rotation& rotation() const { return Rotation::by_id(rotation_id); }
    Aabb world_box() const { return rotated_box(shape.box_dims(), rotation(), position); }
    Vec3d centroid() const { return world_box().center(); }
};

struct AssemblyModel {
    std::vector<PartPlacement> parts; // indexed by part index - 1
    std::string model_hash;           // sha256 of canonical_serialize

    int part_count() const { return (int)parts.size(); }
    const PartPlacement& part(int index) const { return parts.at(index - 1); }
    // Smallest world y over all parts; parts resting there count as grounded.
    int ground_y() const;
};

enum class ModelFormat { Native, Ldraw };

// Builds a model from already-validated placements: reindexes 1..N, checks
// pairwise interpenetration (> 1 LDU^3 overlap is an error) and computes the
// canonical hash. Throws ParseError.
AssemblyModel finalize_model(std::vector<PartPlacement> placements);

// Text readers. Both throw ParseError with a 1-based line number.
AssemblyModel parse_model(const std::string& text, ModelFormat format);
AssemblyModel load_model_file(const std::string& path); // format by extension
ModelFormat format_for_path(const std::string& path);

// Canonical text form (native format, normalized whitespace, step groups
// preserved). Equal models serialize to equal bytes; the model hash is the
// lowercase hex sha256 of exactly these bytes.
std::string canonical_serialize(const AssemblyModel& model);

std::string sha256_hex(const std::string& bytes);

} // namespace brickplan
