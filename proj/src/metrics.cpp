#include "brickplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

namespace brickplan::metrics {

PartRefs prefix_refs(const AssemblyModel& model, const std::vector<int>& order, int k) {
    PartRefs refs;
    refs.reserve(k);
    for (int i = 0; i < k; ++i) refs.push_back(&model.part(order[i]));
    return refs;
}

PartRefs all_refs(const AssemblyModel& model) {
    PartRefs refs;
    refs.reserve(model.parts.size());
    for (const auto& p : model.parts) refs.push_back(&p);
    return refs;
}

const ViewpointSet& ViewpointSet::standard() {
    static const ViewpointSet set = [] {
        ViewpointSet s;
        const double deg = std::acos(-1.0) / 180.0;
        for (double elev : {15.0, 45.0})
            for (int k = 0; k < 8; ++k) {
                double az = 45.0 * k * deg, el = elev * deg;
                // Camera above the scene looking down at it.
                s.directions.push_back(normalized(
                    {std::cos(el) * std::cos(az), -std::sin(el), std::cos(el) * std::sin(az)}));
            }
        return s;
    }();
    return set;
}

namespace {

struct P2 {
    double x, y;
};

struct ViewBasis {
    Vec3d u, v;
};

ViewBasis basis_for(Vec3d dir) {
    Vec3d up{0, 1, 0};
    Vec3d u = cross(up, dir);
    if (norm(u) < 1e-9) u = {1, 0, 0};
    u = normalized(u);
    return {u, cross(dir, u)};
}

double cross2(P2 a, P2 b, P2 c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Monotone chain, CCW output. Collinear points are dropped.
std::vector<P2> convex_hull(std::vector<P2> p) {
    std::sort(p.begin(), p.end(), [](P2 a, P2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    size_t n = p.size(), k = 0;
    std::vector<P2> h(2 * n + 1);
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross2(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross2(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k > 0 ? k - 1 : 0);
    return h;
}

bool inside_hull(const std::vector<P2>& h, P2 p) {
    if (h.size() < 3) return false;
    for (size_t i = 0; i < h.size(); ++i) {
        if (cross2(h[i], h[(i + 1) % h.size()], p) < -1e-9) return false;
    }
    return true;
}

} // namespace

std::vector<std::array<double, 2>> project_box_outline(const Aabb& box, Vec3d view_dir) {
    ViewBasis vb = basis_for(normalized(view_dir));
    std::vector<P2> pts;
    pts.reserve(8);
    for (int m = 0; m < 8; ++m) {
        Vec3d corner{double(m & 1 ? box.hi.x : box.lo.x), double(m & 2 ? box.hi.y : box.lo.y),
                     double(m & 4 ? box.hi.z : box.lo.z)};
        pts.push_back({dot(corner, vb.u), dot(corner, vb.v)});
    }
    std::vector<std::array<double, 2>> out;
    for (const P2& p : convex_hull(pts)) out.push_back({p.x, p.y});
    return out;
}

int Silhouette::filled_count() const {
    int c = 0;
    for (uint8_t v : cells) c += v != 0;
    return c;
}

Silhouette rasterize(const PartRefs& parts, Vec3d view_dir, double cells_per_ldu) {
    Silhouette s;
    if (parts.empty()) return s;
    ViewBasis vb = basis_for(normalized(view_dir));
    const double h = 1.0 / cells_per_ldu;

    Aabb bounds = parts.front()->world_box();
    for (const auto* p : parts) {
        Aabb b = p->world_box();
        bounds.lo = {std::min(bounds.lo.x, b.lo.x), std::min(bounds.lo.y, b.lo.y),
                     std::min(bounds.lo.z, b.lo.z)};
        bounds.hi = {std::max(bounds.hi.x, b.hi.x), std::max(bounds.hi.y, b.hi.y),
                     std::max(bounds.hi.z, b.hi.z)};
    }
    Vec3d c = bounds.center();
    const double cu = dot(c, vb.u), cv = dot(c, vb.v);

    struct BoxHull {
        std::vector<P2> hull;
        double min_x, max_x, min_y, max_y;
    };
    std::vector<BoxHull> hulls;
    hulls.reserve(parts.size());
    double min_u = 0, max_u = 0, min_v = 0, max_v = 0;
    bool first = true;
    for (const auto* part : parts) {
        Aabb b = part->world_box();
        std::vector<P2> pts;
        pts.reserve(8);
        for (int m = 0; m < 8; ++m) {
            Vec3d corner{double(m & 1 ? b.hi.x : b.lo.x), double(m & 2 ? b.hi.y : b.lo.y),
                         double(m & 4 ? b.hi.z : b.lo.z)};
            pts.push_back({dot(corner, vb.u), dot(corner, vb.v)});
        }
        BoxHull bh;
        bh.hull = convex_hull(pts);
        bh.min_x = bh.max_x = pts[0].x;
        bh.min_y = bh.max_y = pts[0].y;
        for (const auto& q : pts) {
            bh.min_x = std::min(bh.min_x, q.x);
            bh.max_x = std::max(bh.max_x, q.x);
            bh.min_y = std::min(bh.min_y, q.y);
            bh.max_y = std::max(bh.max_y, q.y);
        }
        if (first || bh.min_x < min_u) min_u = bh.min_x;
        if (first || bh.max_x > max_u) max_u = bh.max_x;
        if (first || bh.min_y < min_v) min_v = bh.min_y;
        if (first || bh.max_y > max_v) max_v = bh.max_y;
        first = false;
        hulls.push_back(std::move(bh));
    }

    s.i0 = (int)std::floor((min_u - cu) / h);
    s.j0 = (int)std::floor((min_v - cv) / h);
    s.nx = std::max(1, (int)std::ceil((max_u - cu) / h) - s.i0);
    s.ny = std::max(1, (int)std::ceil((max_v - cv) / h) - s.j0);
    s.cells.assign((size_t)s.nx * s.ny, 0);

    for (const auto& bh : hulls) {
        int li0 = std::max(s.i0, (int)std::floor((bh.min_x - cu) / h));
        int li1 = std::min(s.i0 + s.nx, (int)std::ceil((bh.max_x - cu) / h));
        int lj0 = std::max(s.j0, (int)std::floor((bh.min_y - cv) / h));
        int lj1 = std::min(s.j0 + s.ny, (int)std::ceil((bh.max_y - cv) / h));
        for (int j = lj0; j < lj1; ++j)
            for (int i = li0; i < li1; ++i) {
                P2 center{cu + (i + 0.5) * h, cv + (j + 0.5) * h};
                if (inside_hull(bh.hull, center))
                    s.cells[(size_t)(j - s.j0) * s.nx + (i - s.i0)] = 1;
            }
    }
    return s;
}

int boundary_cell_count(const Silhouette& s) {
    int count = 0;
    for (int j = s.j0; j < s.j0 + s.ny; ++j)
        for (int i = s.i0; i < s.i0 + s.nx; ++i) {
            if (!s.filled(i, j)) continue;
            if (!s.filled(i - 1, j) || !s.filled(i + 1, j) || !s.filled(i, j - 1) ||
                !s.filled(i, j + 1))
                ++count;
        }
    return count;
}

int rect_boundary_cell_count(const Silhouette& s) {
    int bi0 = 0, bi1 = -1, bj0 = 0, bj1 = -1;
    bool any = false;
    for (int j = s.j0; j < s.j0 + s.ny; ++j)
        for (int i = s.i0; i < s.i0 + s.nx; ++i) {
            if (!s.filled(i, j)) continue;
            if (!any) {
                bi0 = bi1 = i;
                bj0 = bj1 = j;
                any = true;
            } else {
                bi0 = std::min(bi0, i);
                bi1 = std::max(bi1, i);
                bj0 = std::min(bj0, j);
                bj1 = std::max(bj1, j);
            }
        }
    if (!any) return 0;
    int w = bi1 - bi0 + 1, hgt = bj1 - bj0 + 1;
    if (w == 1) return hgt;
    if (hgt == 1) return w;
    return 2 * (w + hgt) - 4;
}

void write_pgm(const Silhouette& s, std::ostream& os) {
    os << "P2\n" << s.nx << ' ' << s.ny << "\n1\n";
    for (int j = s.j0 + s.ny; j-- > s.j0;) {
        for (int i = s.i0; i < s.i0 + s.nx; ++i)
            os << (s.filled(i, j) ? 0 : 1) << (i + 1 < s.i0 + s.nx ? ' ' : '\n');
    }
}

// Per-view kernels. noinline keeps one shared instantiation so the parallel
// and serial reductions see identical rounding.
[[gnu::noinline]] double view_distinctness(const PartRefs& parts, Vec3d dir,
                                           const MetricParams& p) {
    Silhouette s = rasterize(parts, dir, p.cells_per_ldu);
    int b = boundary_cell_count(s);
    if (b == 0) return 0.0;
    double ratio = double(b) / double(rect_boundary_cell_count(s));
    return std::clamp(p.gain * (ratio - 1.0), 0.0, 1.0);
}

[[gnu::noinline]] double view_confusability(const PartRefs& a, const PartRefs& b, Vec3d dir,
                                            const MetricParams& p) {
    Silhouette sa = rasterize(a, dir, p.cells_per_ldu);
    Silhouette sb = rasterize(b, dir, p.cells_per_ldu);
    int i0 = std::min(sa.i0, sb.i0), i1 = std::max(sa.i0 + sa.nx, sb.i0 + sb.nx);
    int j0 = std::min(sa.j0, sb.j0), j1 = std::max(sa.j0 + sa.ny, sb.j0 + sb.ny);
    long long inter = 0, uni = 0;
    for (int j = j0; j < j1; ++j)
        for (int i = i0; i < i1; ++i) {
            bool fa = sa.filled(i, j), fb = sb.filled(i, j);
            inter += fa && fb;
            uni += fa || fb;
        }
    if (uni == 0) return 1.0;
    return double(inter) / double(uni);
}

namespace {

template <class ViewFn>
double mean_over_views(const ViewpointSet& views, bool parallel, ViewFn&& fn) {
    const int n = (int)views.directions.size();
    if (n == 0) return 0.0;
    std::vector<double> scores((size_t)n, 0.0);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) scores[i] = fn(views.directions[i]);
    } else {
        for (int i = 0; i < n; ++i) scores[i] = fn(views.directions[i]);
    }
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += scores[i]; // fixed order on purpose
    return sum / n;
}

} // namespace

double distinctness_score(const PartRefs& parts, const MetricParams& p) {
    return mean_over_views(*p.views, true,
                           [&](Vec3d d) { return view_distinctness(parts, d, p); });
}

double confusability_score(const PartRefs& a, const PartRefs& b, const MetricParams& p) {
    return mean_over_views(*p.views, true,
                           [&](Vec3d d) { return view_confusability(a, b, d, p); });
}

namespace serial_ref {

double distinctness_score(const PartRefs& parts, const MetricParams& p) {
    return mean_over_views(*p.views, false,
                           [&](Vec3d d) { return view_distinctness(parts, d, p); });
}

double confusability_score(const PartRefs& a, const PartRefs& b, const MetricParams& p) {
    return mean_over_views(*p.views, false,
                           [&](Vec3d d) { return view_confusability(a, b, d, p); });
}

} // namespace serial_ref

SymmetryReport symmetry_score(const PartRefs& parts, double tau_sym) {
    SymmetryReport rep;
    const int k = (int)parts.size();
    if (k == 0) {
        rep.score = rep.mirror_x = rep.mirror_z = rep.rot180_y = 1.0;
        rep.best_map = "mirror_x";
        return rep;
    }

    Aabb bounds = parts.front()->world_box();
    std::vector<Vec3d> cent(k);
    std::vector<int> cls(k);
    std::map<std::tuple<std::string, int, int, int>, int> class_ids;
    for (int i = 0; i < k; ++i) {
        Aabb b = parts[i]->world_box();
        bounds.lo = {std::min(bounds.lo.x, b.lo.x), std::min(bounds.lo.y, b.lo.y),
                     std::min(bounds.lo.z, b.lo.z)};
        bounds.hi = {std::max(bounds.hi.x, b.hi.x), std::max(bounds.hi.y, b.hi.y),
                     std::max(bounds.hi.z, b.hi.z)};
        cent[i] = b.center();
        Vec3i e = b.extent();
        auto key = std::make_tuple(parts[i]->shape.shape_id, e.x, e.y, e.z);
        cls[i] = class_ids.emplace(key, (int)class_ids.size()).first->second;
    }
    Vec3d c = bounds.center();

    auto run = [&](auto&& map_fn) {
        std::vector<char> used(k, 0);
        int matched = 0;
        for (int i = 0; i < k; ++i) {
            Vec3d img = map_fn(cent[i]);
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (int j = 0; j < k; ++j) {
                if (used[j] || cls[j] != cls[i]) continue;
                double d = norm(img - cent[j]);
                if (d < best_d) {
                    best_d = d;
                    best = j;
                }
            }
            if (best >= 0 && best_d <= tau_sym) {
                used[best] = 1;
                ++matched;
            }
        }
        return double(matched) / k;
    };

    rep.mirror_x = run([&](Vec3d p) { return Vec3d{2 * c.x - p.x, p.y, p.z}; });
    rep.mirror_z = run([&](Vec3d p) { return Vec3d{p.x, p.y, 2 * c.z - p.z}; });
    rep.rot180_y = run([&](Vec3d p) { return Vec3d{2 * c.x - p.x, p.y, 2 * c.z - p.z}; });

    rep.score = rep.mirror_x;
    rep.best_map = "mirror_x";
    if (rep.mirror_z > rep.score) {
        rep.score = rep.mirror_z;
        rep.best_map = "mirror_z";
    }
    if (rep.rot180_y > rep.score) {
        rep.score = rep.rot180_y;
        rep.best_map = "rot180_y";
    }
    return rep;
}

} // namespace brickplan::metrics
