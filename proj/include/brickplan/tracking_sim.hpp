#pragma once

#include <array>
#include <vector>

#include "brickplan/metrics.hpp"
#include "brickplan/model.hpp"

namespace brickplan::tracking {

struct CameraModel {
    double focal_px = 1400.0;
    double ppx = 896.0, ppy = 414.0; // principal point, default image center
    int width = 1792, height = 828;
};

// Rigid model-to-camera transform. Rotation is row-major; translation in mm.
// Camera looks along +z, so visible points need z > 0.
struct Pose {
    std::array<double, 9> r{1, 0, 0, 0, 1, 0, 0, 0, 1};
    Vec3d t{0, 0, 0};
};

Pose pose_rot_z_deg(double degrees, Vec3d translation_mm);

struct TrackerParams {
    int t_max = 40;                 // recognition tolerance in assembly steps
    double theta_iou = 0.5;         // min silhouette agreement to accept a target
    double theta_amb = 0.9;         // pairwise target confusability that blocks a pick
    double occlusion_limit = 0.66;  // max occluded fraction, inclusive
    double z_rotation_limit = 90.0; // max |roll about the camera axis|, degrees
    metrics::MetricParams metric{};
};

// True when registration survives the given occluded fraction.
bool occlusion_stable(double occluded_fraction, const TrackerParams& params);

struct TargetCandidate {
    int phase_id = 0;
    int target_prefix = 0; // the target is the prefix of this many steps
};

enum class RecognitionKind { Registered, Ambiguous, NotRecognized };

struct RecognitionResult {
    RecognitionKind kind = RecognitionKind::NotRecognized;
    int phase = 0;                    // Registered
    std::vector<int> ambiguous_with;  // Ambiguous: phases that confuse each other
    std::vector<std::pair<int, double>> scores; // (phase, silhouette agreement)
};

// Simulates one recognition attempt: the viewer has assembled observed_step
// steps of the ordered model under the given occlusion and camera-axis roll.
// A candidate passes when it is within t_max steps, the viewing conditions
// are inside the limits and its silhouette agrees with the observation. One
// passer registers; several register to the nearest target unless a pair of
// them is mutually confusable, which reports Ambiguous instead.
RecognitionResult recognize(const AssemblyModel& model, const std::vector<int>& order,
                            int observed_step, double occluded_fraction, double z_rotation_deg,
                            const std::vector<TargetCandidate>& candidates,
                            const TrackerParams& params);

struct GapStats {
    double mean_px = 0;
    double max_px = 0;
    long long samples = 0;
};

// Reprojection gap between two pose estimates of the same part set: points
// sampled on the box edges under the true pose, projected, and measured
// against the corresponding projected edge segments under the estimated
// pose. Part geometry is in LDU and converted to mm. Throws std::domain_error
// when a sampled point or segment endpoint has z <= 0 under either pose.
GapStats reprojection_gap(const Pose& true_pose, const Pose& est_pose, const CameraModel& cam,
                          const metrics::PartRefs& parts, int samples_per_edge = 8);

namespace serial_ref {
GapStats reprojection_gap(const Pose& true_pose, const Pose& est_pose, const CameraModel& cam,
                          const metrics::PartRefs& parts, int samples_per_edge = 8);
} // namespace serial_ref

} // namespace brickplan::tracking
