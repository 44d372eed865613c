#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

// Integer lattice geometry. The unit is the LDU (0.4 mm); all brick extents
// and positions are whole LDU, so poses and bounding boxes stay exact.

namespace brickplan {

inline constexpr double kMmPerLdu = 0.4;

struct Vec3i {
    int x = 0, y = 0, z = 0;
    friend bool operator==(const Vec3i&, const Vec3i&) = default;
    friend Vec3i operator+(Vec3i a, Vec3i b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3i operator-(Vec3i a, Vec3i b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

struct Vec3d {
    double x = 0, y = 0, z = 0;
    friend Vec3d operator+(Vec3d a, Vec3d b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3d operator-(Vec3d a, Vec3d b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3d operator*(double s, Vec3d v) { return {s * v.x, s * v.y, s * v.z}; }
};

inline double dot(Vec3d a, Vec3d b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3d cross(Vec3d a, Vec3d b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3d v) { return std::sqrt(dot(v, v)); }
inline Vec3d normalized(Vec3d v) {
    double n = norm(v);
    return n > 0 ? (1.0 / n) * v : v;
}

// Axis-aligned box with integer corners, min <= max per axis.
struct Aabb {
    Vec3i lo, hi;
    friend bool operator==(const Aabb&, const Aabb&) = default;
    Vec3i extent() const { return hi - lo; }
    Vec3d center() const {
        return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y), 0.5 * (lo.z + hi.z)};
    }
    long long volume() const {
        Vec3i e = extent();
        return 1LL * e.x * e.y * e.z;
    }
};

// Intersection volume of two boxes; zero when they only touch.
long long overlap_volume(const Aabb& a, const Aabb& b);

// Overlap area of the two boxes' footprints in the ground plane (x-z).
long long footprint_overlap(const Aabb& a, const Aabb& b);

// The 24 axis-aligned orientations (rotation matrices with entries in
// {-1,0,1} and determinant +1). An orientation is referenced by a dense
// id in [0,24). Names compose quarter-turns applied in x, y, z order:
// "identity", "ry90", "rx90ry180", ... The name of an orientation is the
// lexicographically first (x,y,z) angle triple that produces its matrix.
class Rotation {
  public:
    static constexpr int kCount = 24;

    static const Rotation& identity();
    static const Rotation& by_id(int id);
    // Returns nullopt for names that are not one of the 24 canonical forms.
    static std::optional<Rotation> parse(const std::string& name);
    // Matches an arbitrary row-major 3x3 against the group within tol.
    static std::optional<Rotation> from_matrix(const std::array<double, 9>& m, double tol);

    int id() const { return id_; }
    const std::string& name() const;
    const std::array<int, 9>& matrix() const;

    Vec3i apply(Vec3i v) const;
    Vec3d apply(Vec3d v) const;
    // Composition: (a * b) means apply b first, then a.
    Rotation operator*(const Rotation& rhs) const;
    Rotation inverse() const;

    friend bool operator==(const Rotation& a, const Rotation& b) { return a.id_ == b.id_; }

  private:
    explicit Rotation(int id) : id_(id) {}
    int id_;
};

// World-space box of a local box [0,dims] rotated by r and moved to pos.
Aabb rotated_box(Vec3i dims, const Rotation& r, Vec3i pos);

} // namespace brickplan
