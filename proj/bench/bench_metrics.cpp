// Compares the parallel metric kernels against their serial reference: same
// inputs, results must be bit-identical, wall time reported per kernel.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "brickplan/metrics.hpp"
#include "brickplan/model.hpp"
#include "brickplan/tracking_sim.hpp"

using namespace brickplan;

namespace {

AssemblyModel synthetic_model(int parts) {
    std::vector<PartPlacement> ps;
    for (int i = 0; i < parts; ++i) {
        PartPlacement p;
        p.shape = *find_shape("brick1x1");
        p.color_id = i % 16;
        p.rotation_id = 0;
        // Distinct lattice cells, loosely staircase shaped so silhouettes
        // are not plain rectangles.
        int col = i % 8, row = (i / 8) % 8, layer = i / 64;
        p.position = {20 * col, 24 * (layer + (col * row) % 3), 20 * row};
        p.source_step = i + 1;
        p.source_line = i + 1;
        ps.push_back(std::move(p));
    }
    return finalize_model(std::move(ps));
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool bits_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof a) == 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"metric kernel benchmark: parallel vs serial reference"};
    int parts = 96, reps = 5;
    double cells_per_ldu = 0.5;
    app.add_option("--parts", parts, "synthetic model size")->check(CLI::Range(2, 4096));
    app.add_option("--reps", reps, "repetitions per kernel")->check(CLI::Range(1, 1000));
    app.add_option("--cells-per-ldu", cells_per_ldu, "raster resolution");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    AssemblyModel model = synthetic_model(parts);
    metrics::MetricParams mp;
    mp.cells_per_ldu = cells_per_ldu;
    auto all = metrics::all_refs(model);
    metrics::PartRefs half(all.begin(), all.begin() + all.size() / 2);

    int failures = 0;
    auto report = [&](const char* name, double serial_ms, double par_ms, bool equal) {
        std::printf("%-14s serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   %s\n", name,
                    serial_ms, par_ms, par_ms > 0 ? serial_ms / par_ms : 0.0,
                    equal ? "bit-equal" : "MISMATCH");
        if (!equal) ++failures;
    };

    {
        double s_ms = 0, p_ms = 0, s_val = 0, p_val = 0;
        for (int r = 0; r < reps; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            s_val = metrics::serial_ref::distinctness_score(all, mp);
            s_ms += ms_since(t0);
            t0 = std::chrono::steady_clock::now();
            p_val = metrics::distinctness_score(all, mp);
            p_ms += ms_since(t0);
        }
        report("distinctness", s_ms / reps, p_ms / reps, bits_equal(s_val, p_val));
    }
    {
        double s_ms = 0, p_ms = 0, s_val = 0, p_val = 0;
        for (int r = 0; r < reps; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            s_val = metrics::serial_ref::confusability_score(half, all, mp);
            s_ms += ms_since(t0);
            t0 = std::chrono::steady_clock::now();
            p_val = metrics::confusability_score(half, all, mp);
            p_ms += ms_since(t0);
        }
        report("confusability", s_ms / reps, p_ms / reps, bits_equal(s_val, p_val));
    }
    {
        tracking::CameraModel cam;
        tracking::Pose true_pose = tracking::pose_rot_z_deg(0.0, {0, 0, 800});
        tracking::Pose est_pose = tracking::pose_rot_z_deg(0.35, {1.5, -0.75, 802});
        double s_ms = 0, p_ms = 0;
        tracking::GapStats s_val{}, p_val{};
        for (int r = 0; r < reps; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            s_val = tracking::serial_ref::reprojection_gap(true_pose, est_pose, cam, all, 64);
            s_ms += ms_since(t0);
            t0 = std::chrono::steady_clock::now();
            p_val = tracking::reprojection_gap(true_pose, est_pose, cam, all, 64);
            p_ms += ms_since(t0);
        }
        report("reprojection", s_ms / reps, p_ms / reps,
               bits_equal(s_val.mean_px, p_val.mean_px) && bits_equal(s_val.max_px, p_val.max_px));
    }

    if (failures) {
        std::printf("%d kernel(s) diverged from the serial reference\n", failures);
        return 1;
    }
    return 0;
}
