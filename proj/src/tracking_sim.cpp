#include "brickplan/tracking_sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace brickplan::tracking {

Pose pose_rot_z_deg(double degrees, Vec3d translation_mm) {
    double rad = degrees * std::acos(-1.0) / 180.0;
    double c = std::cos(rad), s = std::sin(rad);
    Pose p;
    p.r = {c, -s, 0, s, c, 0, 0, 0, 1};
    p.t = translation_mm;
    return p;
}

bool occlusion_stable(double occluded_fraction, const TrackerParams& params) {
    return occluded_fraction <= params.occlusion_limit;
}

RecognitionResult recognize(const AssemblyModel& model, const std::vector<int>& order,
                            int observed_step, double occluded_fraction, double z_rotation_deg,
                            const std::vector<TargetCandidate>& candidates,
                            const TrackerParams& params) {
    RecognitionResult res;
    if (observed_step < 1 || observed_step > (int)order.size())
        throw std::invalid_argument("observed step out of range");

    metrics::PartRefs observed = metrics::prefix_refs(model, order, observed_step);
    bool conditions_ok = occlusion_stable(occluded_fraction, params) &&
                         std::abs(z_rotation_deg) <= params.z_rotation_limit;

    std::vector<TargetCandidate> passed;
    for (const auto& cand : candidates) {
        if (cand.target_prefix < 1 || cand.target_prefix > (int)order.size())
            throw std::invalid_argument("candidate target prefix out of range");
        if (!conditions_ok) continue;
        if (std::abs(observed_step - cand.target_prefix) > params.t_max) continue;
        double agreement = metrics::confusability_score(
            observed, metrics::prefix_refs(model, order, cand.target_prefix), params.metric);
        res.scores.emplace_back(cand.phase_id, agreement);
        if (agreement < params.theta_iou) continue;
        passed.push_back(cand);
    }

    if (passed.empty()) return res;
    if (passed.size() == 1) {
        res.kind = RecognitionKind::Registered;
        res.phase = passed.front().phase_id;
        return res;
    }

    // Several targets look plausible. If any two of them cannot be told
    // apart, picking one would be a coin flip; report the clash instead.
    std::set<int> clashing;
    for (size_t i = 0; i < passed.size(); ++i)
        for (size_t j = i + 1; j < passed.size(); ++j) {
            double c = metrics::confusability_score(
                metrics::prefix_refs(model, order, passed[i].target_prefix),
                metrics::prefix_refs(model, order, passed[j].target_prefix), params.metric);
            if (c >= params.theta_amb) {
                clashing.insert(passed[i].phase_id);
                clashing.insert(passed[j].phase_id);
            }
        }
    if (!clashing.empty()) {
        res.kind = RecognitionKind::Ambiguous;
        res.ambiguous_with.assign(clashing.begin(), clashing.end());
        return res;
    }

    const TargetCandidate* best = &passed.front();
    for (const auto& cand : passed) {
        int d_best = std::abs(observed_step - best->target_prefix);
        int d_cand = std::abs(observed_step - cand.target_prefix);
        if (d_cand < d_best || (d_cand == d_best && cand.phase_id < best->phase_id))
            best = &cand;
    }
    res.kind = RecognitionKind::Registered;
    res.phase = best->phase_id;
    return res;
}

namespace {

struct P2 {
    double u, v;
};

inline Vec3d transform(const Pose& p, Vec3d x) {
    return {p.r[0] * x.x + p.r[1] * x.y + p.r[2] * x.z + p.t.x,
            p.r[3] * x.x + p.r[4] * x.y + p.r[5] * x.z + p.t.y,
            p.r[6] * x.x + p.r[7] * x.y + p.r[8] * x.z + p.t.z};
}

inline P2 project(const CameraModel& cam, Vec3d c) {
    return {cam.focal_px * c.x / c.z + cam.ppx, cam.focal_px * c.y / c.z + cam.ppy};
}

inline double dist_point_segment(P2 p, P2 a, P2 b) {
    double dx = b.u - a.u, dy = b.v - a.v;
    double len2 = dx * dx + dy * dy;
    if (len2 == 0) return std::hypot(p.u - a.u, p.v - a.v);
    double t = ((p.u - a.u) * dx + (p.v - a.v) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.u - (a.u + t * dx), p.v - (a.v + t * dy));
}

struct PartGap {
    double sum = 0, max = 0;
    long long samples = 0;
};

// The 12 edges of a box as corner index pairs (bit i selects hi on axis i).
constexpr int kEdges[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3},
                               {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

[[gnu::noinline]] PartGap part_gap(const Pose& true_pose, const Pose& est_pose,
                                   const CameraModel& cam, const PartPlacement& part,
                                   int samples_per_edge) {
    Aabb box = part.world_box();
    Vec3d corners[8];
    for (int m = 0; m < 8; ++m)
        corners[m] = {kMmPerLdu * (m & 1 ? box.hi.x : box.lo.x),
                      kMmPerLdu * (m & 2 ? box.hi.y : box.lo.y),
                      kMmPerLdu * (m & 4 ? box.hi.z : box.lo.z)};

    PartGap g;
    const int s = std::max(2, samples_per_edge);
    for (const auto& e : kEdges) {
        Vec3d a = corners[e[0]], b = corners[e[1]];
        Vec3d ea = transform(est_pose, a), eb = transform(est_pose, b);
        if (ea.z <= 0 || eb.z <= 0)
            throw std::domain_error("estimated pose places an edge behind the camera");
        P2 pa = project(cam, ea), pb = project(cam, eb);
        for (int i = 0; i < s; ++i) {
            double tau = double(i) / double(s - 1);
            Vec3d sample = a + tau * (b - a);
            Vec3d tc = transform(true_pose, sample);
            if (tc.z <= 0)
                throw std::domain_error("true pose places a sample behind the camera");
            P2 pt = project(cam, tc);
            Vec3d ec = transform(est_pose, sample);
            P2 pe = project(cam, ec);
            // Identical poses reproject the sample onto itself; skip the
            // segment arithmetic so the gap is exactly zero, not rounding
            // noise.
            double d = (pt.u == pe.u && pt.v == pe.v) ? 0.0 : dist_point_segment(pt, pa, pb);
            g.sum += d;
            g.max = std::max(g.max, d);
            ++g.samples;
        }
    }
    return g;
}

GapStats gap_impl(const Pose& true_pose, const Pose& est_pose, const CameraModel& cam,
                  const metrics::PartRefs& parts, int samples_per_edge, bool parallel) {
    const int n = (int)parts.size();
    if (n == 0) return {};
    std::vector<PartGap> slots(n);
    std::exception_ptr error;
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            try {
                slots[i] = part_gap(true_pose, est_pose, cam, *parts[i], samples_per_edge);
            } catch (...) {
#pragma omp critical
                if (!error) error = std::current_exception();
            }
        }
    } else {
        for (int i = 0; i < n; ++i)
            slots[i] = part_gap(true_pose, est_pose, cam, *parts[i], samples_per_edge);
    }
    if (error) std::rethrow_exception(error);

    GapStats out;
    double sum = 0;
    for (const PartGap& g : slots) { // fixed merge order
        sum += g.sum;
        out.max_px = std::max(out.max_px, g.max);
        out.samples += g.samples;
    }
    out.mean_px = out.samples ? sum / double(out.samples) : 0.0;
    return out;
}

} // namespace

GapStats reprojection_gap(const Pose& true_pose, const Pose& est_pose, const CameraModel& cam,
                          const metrics::PartRefs& parts, int samples_per_edge) {
    return gap_impl(true_pose, est_pose, cam, parts, samples_per_edge, true);
}

namespace serial_ref {

GapStats reprojection_gap(const Pose& true_pose, const Pose& est_pose, const CameraModel& cam,
                          const metrics::PartRefs& parts, int samples_per_edge) {
    return gap_impl(true_pose, est_pose, cam, parts, samples_per_edge, false);
}

} // namespace serial_ref

} // namespace brickplan::tracking
