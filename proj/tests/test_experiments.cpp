#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "oracles.hpp"
#include "tuckmat/experiments.hpp"
#include "tuckmat/io.hpp"
#include "tuckmat/matvec.hpp"

using namespace tuckmat;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_base(ExperimentKind kind) {
    ExperimentConfig cfg = default_config(kind);
    cfg.grid_dims = {8, 8, 8};
    cfg.spacing = 0.04;
    cfg.loop_segments = 8;
    cfg.workers = 1;
    return cfg;
}

std::string write_temp(const char* name, const std::string& text) {
    const std::string path = (fs::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    return path;
}

} // namespace

TEST_CASE("distance sweep: a far-zone point compresses harder than a near one") {
    ExperimentConfig cfg = tiny_base(ExperimentKind::Distance);
    cfg.distances = {0.7, 1.0, 4.0};
    const std::vector<DistanceRow> rows = run_distance_sweep(cfg);
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].factor > rows[0].factor);
    CHECK(rows[2].max_rank <= rows[1].max_rank);
    CHECK(rows[1].max_rank <= rows[0].max_rank);
    for (const DistanceRow& r : rows) {
        CHECK(std::isfinite(r.factor));
        CHECK(r.full_bytes == full_matrix_bytes(3, 512, 8));
    }
}

TEST_CASE("a one-point frequency sweep equals a direct compression run") {
    ExperimentConfig cfg = tiny_base(ExperimentKind::Frequency);
    cfg.freq_domain_side = 0.4;
    cfg.loop_center = Vector3(0, 0.7, 0);
    cfg.frequencies_mhz = {600.0};
    const std::vector<FrequencyRow> rows = run_frequency_sweep(cfg);
    REQUIRE(rows.size() == 1);

    const SceneSpec scene = frequency_scene(cfg, 600.0);
    const CompressedCoupling cc = compress_matrix(scene, cfg.eps, 1);
    const MemoryReport rep = memory_report(cc);
    CHECK(rows[0].compressed_bytes == rep.compressed_bytes);
    CHECK(rows[0].max_rank == rep.max_rank);
    CHECK(rows[0].n == scene.grid.dims[0]);
    CHECK(rows[0].spacing == scene.grid.spacing);
}

TEST_CASE("frequency scenes tie the spacing to lambda/20 over a fixed cube") {
    ExperimentConfig cfg = tiny_base(ExperimentKind::Frequency);
    cfg.freq_domain_side = 0.5;
    const SceneSpec low = frequency_scene(cfg, 300.0);
    const SceneSpec high = frequency_scene(cfg, 1200.0);
    CHECK(low.grid.spacing ==
          doctest::Approx(kSpeedOfLight / 300.0e6 / 20.0).epsilon(1e-15));
    CHECK(high.grid.spacing ==
          doctest::Approx(kSpeedOfLight / 1200.0e6 / 20.0).epsilon(1e-15));
    // four times the frequency, four times the voxels per edge
    CHECK(high.grid.dims[0] == 4 * low.grid.dims[0]);
    // the physical cube stays put
    CHECK(high.grid.dims[0] * high.grid.spacing ==
          doctest::Approx(low.grid.dims[0] * low.grid.spacing).epsilon(0.06));
}

TEST_CASE("mesh sweep at a single edge reduces to one column") {
    ExperimentConfig cfg = tiny_base(ExperimentKind::Mesh);
    cfg.spacing = 0.02;
    cfg.plate_center = Vector3(0, 0.4, 0);
    cfg.plate_side = 0.3;
    cfg.mesh_refinements = {1, 2};
    const std::vector<MeshRow> rows = run_mesh_sweep(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].m == 1);
    CHECK(rows[1].m == 4);
    CHECK(rows[0].pitch == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(rows[1].pitch == doctest::Approx(0.15).epsilon(1e-15));
}

TEST_CASE("a very loose ACA tolerance keeps the cross rank tiny") {
    ExperimentConfig cfg = tiny_base(ExperimentKind::Tolerance);
    cfg.loop_center = Vector3(0, 1.2, 0);
    cfg.tolerances = {0.5};
    const std::vector<ToleranceRow> rows = run_tolerance_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].r_c >= 1);
    CHECK(rows[0].r_c <= 3);
    CHECK(std::isfinite(rows[0].matvec_rel_err));
}

TEST_CASE("compress/aca format writes a CTA1 container the bench can load") {
    ExperimentConfig cfg = tiny_base(ExperimentKind::Compress);
    cfg.loop_center = Vector3(0, 1.0, 0);
    cfg.frequency_mhz = 123.0;
    cfg.eps = 1e-3;
    cfg.format = "aca";
    cfg.file = (fs::temp_directory_path() / "tuckmat_exp.cta1").string();
    const std::string summary = run_compress(cfg);
    const auto sj = nlohmann::json::parse(summary);
    CHECK(sj["format"] == "aca");
    CHECK(sj["r_c"].get<long long>() >= 1);

    const std::string report = run_matvec_bench(cfg);
    const auto rj = nlohmann::json::parse(report);
    CHECK(rj["kind"] == "aca");
    CHECK(rj["forward_seconds"].get<double>() > 0.0);
    // scene matches and the oracle is tiny, so the dense errors exist
    CHECK(rj["rel_err_forward"].get<double>() <= 10 * cfg.eps);
    fs::remove(cfg.file);
}

TEST_CASE("config files override defaults and flags stay strict") {
    const std::string path = write_temp("tuckmat_exp_cfg.json", R"({
      "grid": {"dims": [10, 11, 12], "spacing": 0.01},
      "loop": {"radius": 0.2, "segments": 9},
      "kernel": {"operator": "hfield", "frequency_mhz": 64.0},
      "eps": 1e-5,
      "seed": 4321,
      "workers": 3
    })");
    ExperimentConfig cfg = default_config(ExperimentKind::Compress);
    load_config_file(cfg, path);
    CHECK(cfg.grid_dims == Dims3{10, 11, 12});
    CHECK(cfg.spacing == 0.01);
    CHECK(cfg.loop_radius == 0.2);
    CHECK(cfg.loop_segments == 9);
    CHECK(cfg.kernel_op == KernelOp::HField);
    CHECK(cfg.frequency_mhz == 64.0);
    CHECK(cfg.eps == 1e-5);
    CHECK(cfg.seed == 4321);
    CHECK(cfg.workers == 3);
    // untouched keys keep their defaults
    CHECK(cfg.file == "coupling.ctc1");
    fs::remove(path);

    const std::string bad = write_temp("tuckmat_exp_bad.json",
                                       R"({"grid": {"spacng": 0.01}})");
    ExperimentConfig cfg2 = default_config(ExperimentKind::Compress);
    CHECK_THROWS_AS(load_config_file(cfg2, bad), ConfigError);
    fs::remove(bad);
}

TEST_CASE("config validation catches bad lists and enums") {
    ExperimentConfig cfg = default_config(ExperimentKind::Distance);
    cfg.distances.clear();
    CHECK_THROWS_AS(validate_config(cfg, ExperimentKind::Distance), ConfigError);

    ExperimentConfig cfg2 = default_config(ExperimentKind::Compress);
    cfg2.format = "zip";
    CHECK_THROWS_AS(validate_config(cfg2, ExperimentKind::Compress), ConfigError);

    ExperimentConfig cfg3 = default_config(ExperimentKind::Tolerance);
    cfg3.tolerances = {2.0};
    CHECK_THROWS_AS(validate_config(cfg3, ExperimentKind::Tolerance), ConfigError);
}

TEST_CASE("linear_fit_r2 recognizes perfect lines and flat scatter") {
    CHECK(linear_fit_r2({1, 2, 3, 4}, {2, 4, 6, 8}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(linear_fit_r2({1, 2, 3, 4}, {5, 5, 5, 5}) == 0.0);
    CHECK_THROWS_AS(linear_fit_r2({1}, {2}), ContractViolation);
}

TEST_CASE("format_double survives a parse round trip") {
    for (double v : {1.0 / 3.0, 2.2857142857142856, 1e-300, 298.06}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("tolerance sweeps are byte-reproducible at a fixed seed") {
    ExperimentConfig cfg = tiny_base(ExperimentKind::Tolerance);
    cfg.loop_center = Vector3(0, 1.1, 0);
    cfg.tolerances = {1e-2, 1e-3};
    cfg.seed = 2718;
    const std::string csv1 = to_csv(run_tolerance_sweep(cfg));
    const std::string csv2 = to_csv(run_tolerance_sweep(cfg));
    CHECK(csv1 == csv2);
    CHECK(csv1.rfind("eps,r_c,max_tucker_rank,matvec_rel_err\n", 0) == 0);
}
