#include "brickplan/geom.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace brickplan {

long long overlap_volume(const Aabb& a, const Aabb& b) {
    long long dx = std::min(a.hi.x, b.hi.x) - std::max(a.lo.x, b.lo.x);
    long long dy = std::min(a.hi.y, b.hi.y) - std::max(a.lo.y, b.lo.y);
    long long dz = std::min(a.hi.z, b.hi.z) - std::max(a.lo.z, b.lo.z);
    if (dx <= 0 || dy <= 0 || dz <= 0) return 0;
    return dx * dy * dz;
}

long long footprint_overlap(const Aabb& a, const Aabb& b) {
    long long dx = std::min(a.hi.x, b.hi.x) - std::max(a.lo.x, b.lo.x);
    long long dz = std::min(a.hi.z, b.hi.z) - std::max(a.lo.z, b.lo.z);
    if (dx <= 0 || dz <= 0) return 0;
    return dx * dz;
}

namespace {

using Mat = std::array<int, 9>;

Mat mat_mul(const Mat& a, const Mat& b) {
    Mat r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int s = 0;
            for (int k = 0; k < 3; ++k) s += a[i * 3 + k] * b[k * 3 + j];
            r[i * 3 + j] = s;
        }
    return r;
}

// cos/sin of k quarter turns.
int qcos(int k) { return std::array<int, 4>{1, 0, -1, 0}[k & 3]; }
int qsin(int k) { return std::array<int, 4>{0, 1, 0, -1}[k & 3]; }

Mat rot_x(int k) { return {1, 0, 0, 0, qcos(k), -qsin(k), 0, qsin(k), qcos(k)}; }
Mat rot_y(int k) { return {qcos(k), 0, qsin(k), 0, 1, 0, -qsin(k), 0, qcos(k)}; }
Mat rot_z(int k) { return {qcos(k), -qsin(k), 0, qsin(k), qcos(k), 0, 0, 0, 1}; }

struct GroupEntry {
    Mat m;
    std::string name;
    int inverse_id = -1;
};

struct GroupTable {
    std::vector<GroupEntry> entries;
    std::array<std::array<int, 24>, 24> compose; // compose[a][b] = id of a*b

    int find(const Mat& m) const {
        for (int i = 0; i < (int)entries.size(); ++i)
            if (entries[i].m == m) return i;
        return -1;
    }
};

GroupTable build_table() {
    GroupTable t;
    // Enumerate angle triples in lexicographic order so the first triple
    // hitting a matrix becomes its canonical name. Matrix applies the x
    // turn first: R = Rz * Ry * Rx.
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                Mat m = mat_mul(rot_z(c), mat_mul(rot_y(b), rot_x(a)));
                if (t.find(m) >= 0) continue;
                std::string name;
                if (a) name += "rx" + std::to_string(a * 90);
                if (b) name += "ry" + std::to_string(b * 90);
                if (c) name += "rz" + std::to_string(c * 90);
                if (name.empty()) name = "identity";
                t.entries.push_back({m, name, -1});
            }
    if (t.entries.size() != 24) throw std::logic_error("orientation group size");
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) {
            int k = t.find(mat_mul(t.entries[i].m, t.entries[j].m));
            if (k < 0) throw std::logic_error("orientation group not closed");
            t.compose[i][j] = k;
            if (k == 0) t.entries[i].inverse_id = j;
        }
    return t;
}

const GroupTable& table() {
    static const GroupTable t = build_table();
    return t;
}

} // namespace

const Rotation& Rotation::identity() { return by_id(0); }

const Rotation& Rotation::by_id(int id) {
    static const std::array<Rotation, 24> all = [] {
        std::array<Rotation, 24> a{
            Rotation(0),  Rotation(1),  Rotation(2),  Rotation(3),  Rotation(4),  Rotation(5),
            Rotation(6),  Rotation(7),  Rotation(8),  Rotation(9),  Rotation(10), Rotation(11),
            Rotation(12), Rotation(13), Rotation(14), Rotation(15), Rotation(16), Rotation(17),
            Rotation(18), Rotation(19), Rotation(20), Rotation(21), Rotation(22), Rotation(23)};
        return a;
    }();
    if (id < 0 || id >= kCount) throw std::out_of_range("rotation id");
    return all[id];
}

std::optional<Rotation> Rotation::parse(const std::string& name) {
    for (int i = 0; i < kCount; ++i)
        if (table().entries[i].name == name) return by_id(i);
    return std::nullopt;
}

std::optional<Rotation> Rotation::from_matrix(const std::array<double, 9>& m, double tol) {
    for (int i = 0; i < kCount; ++i) {
        const Mat& g = table().entries[i].m;
        bool ok = true;
        for (int k = 0; k < 9 && ok; ++k)
            if (std::abs(m[k] - g[k]) > tol) ok = false;
        if (ok) return by_id(i);
    }
    return std::nullopt;
}

const std::string& Rotation::name() const { return table().entries[id_].name; }
const std::array<int, 9>& Rotation::matrix() const { return table().entries[id_].m; }

Vec3i Rotation::apply(Vec3i v) const {
    const Mat& m = matrix();
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Vec3d Rotation::apply(Vec3d v) const {
    const Mat& m = matrix();
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Rotation Rotation::operator*(const Rotation& rhs) const {
    return by_id(table().compose[id_][rhs.id_]);
}

Rotation Rotation::inverse() const { return by_id(table().entries[id_].inverse_id); }

Aabb rotated_box(Vec3i dims, const Rotation& r, Vec3i pos) {
    Vec3i a = r.apply(Vec3i{0, 0, 0}) + pos;
    Vec3i b = r.apply(dims) + pos;
    return {{std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)},
            {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)}};
}

} // namespace brickplan
