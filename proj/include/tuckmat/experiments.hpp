#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tuckmat/compress.hpp"
#include "tuckmat/scene.hpp"

namespace tuckmat {

enum class ExperimentKind {
    Distance,
    Frequency,
    Mesh,
    Tolerance,
    Compress,
    MatvecBench,
};

// Everything a sweep or run needs. Each experiment kind starts from its own
// defaults (default_config), a JSON config file overrides those, and CLI
// flags override the file.
struct ExperimentConfig {
    // voxel grid
    Dims3 grid_dims{26, 26, 26};
    double spacing = 0.04; // meters
    Vector3 grid_center{0, 0, 0};
    // loop source
    double loop_radius = 0.5;
    int loop_segments = 60;
    Vector3 loop_center{0, 0.6, 0};
    // plate source
    double plate_side = 0.5;
    Vector3 plate_center{0, 0.55, 0};
    int plate_edges_per_side = 3;
    // kernel
    KernelOp kernel_op = KernelOp::EField;
    double frequency_mhz = 298.06;
    std::string source = "loop"; // "loop" | "plate"
    // sweep lists
    std::vector<double> distances;
    std::vector<double> frequencies_mhz;
    double freq_domain_side = 0.52; // fixed physical cube for frequency sweeps
    std::vector<int> mesh_refinements;
    std::vector<double> tolerances;
    // knobs
    double eps = 1e-8;
    int p = 8;
    int workers = 1;
    std::uint64_t seed = 1234;
    std::int64_t mem_cap_bytes = kDefaultMemCapBytes;
    std::string out;    // CSV / JSON report path ("" = stdout for reports)
    std::string file;   // CTC1/CTA1 container path (compress out, bench in)
    std::string format = "tucker"; // compress output: "tucker" | "aca"
};

ExperimentConfig default_config(ExperimentKind kind);

// Merges the JSON document at `path` onto cfg. Unknown keys are errors.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

void validate_config(const ExperimentConfig& cfg, ExperimentKind kind);

// Scene builders shared by the sweeps, the CLI and the tests.
SceneSpec loop_scene_at_distance(const ExperimentConfig& cfg, double d);
SceneSpec frequency_scene(const ExperimentConfig& cfg, double f_mhz);
SceneSpec plate_scene_with(const ExperimentConfig& cfg, int edges_per_side);
SceneSpec scene_from_config(const ExperimentConfig& cfg);

struct DistanceRow {
    double d = 0;
    Index max_rank = 0;
    std::int64_t compressed_bytes = 0;
    std::int64_t full_bytes = 0;
    double factor = 0;
};

struct FrequencyRow {
    double f_mhz = 0;
    double spacing = 0;
    Index n = 0; // cube edge, voxels
    Index max_rank = 0;
    std::int64_t compressed_bytes = 0;
};

struct MeshRow {
    int edges_per_side = 0;
    Index m = 0;
    double pitch = 0;
    Index max_rank = 0;
};

struct ToleranceRow {
    double eps = 0;
    Index r_c = 0;
    Index max_tucker_rank = 0;
    double matvec_rel_err = 0;
};

std::vector<DistanceRow> run_distance_sweep(const ExperimentConfig& cfg);
std::vector<FrequencyRow> run_frequency_sweep(const ExperimentConfig& cfg);
std::vector<MeshRow> run_mesh_sweep(const ExperimentConfig& cfg);
std::vector<ToleranceRow> run_tolerance_sweep(const ExperimentConfig& cfg);

std::string to_csv(const std::vector<DistanceRow>& rows);
std::string to_csv(const std::vector<FrequencyRow>& rows);
std::string to_csv(const std::vector<MeshRow>& rows);
std::string to_csv(const std::vector<ToleranceRow>& rows);

// Compresses the configured scene, writes the CTC1/CTA1 container to
// cfg.file and returns a JSON run summary.
std::string run_compress(const ExperimentConfig& cfg);

// Loads cfg.file, times forward/adjoint products with seeded random blocks
// and returns a JSON report. When the dense oracle of the configured scene
// fits the memory cap and matches the file metadata, relative errors vs the
// dense products are included.
std::string run_matvec_bench(const ExperimentConfig& cfg);

// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y);

// Shortest-round-trip double formatting used in all CSV/JSON output.
std::string format_double(double v);

} // namespace tuckmat
