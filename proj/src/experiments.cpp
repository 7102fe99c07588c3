#include "tuckmat/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include <json.hpp>

#include "tuckmat/aca.hpp"
#include "tuckmat/io.hpp"
#include "tuckmat/matvec.hpp"

namespace tuckmat {

namespace {

using nlohmann::json;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch())
        .count();
}

MultiVector random_multivector(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    MultiVector x(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) x(r, c) = Complex(dist(rng), dist(rng));
    return x;
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw Error(std::string("non-finite value in ") + what);
}

Vector3 vector3_from(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError("config key '" + key + "' must be a 3-element array");
    return Vector3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Dims3 dims3_from(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError("config key '" + key + "' must be a 3-element array");
    return Dims3{j[0].get<Index>(), j[1].get<Index>(), j[2].get<Index>()};
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) ok = true;
        if (!ok)
            throw ConfigError("unknown config key '" + where + item.key() + "'");
    }
}

KernelOp kernel_op_from(const std::string& name) {
    if (name == "efield") return KernelOp::EField;
    if (name == "hfield") return KernelOp::HField;
    throw ConfigError("kernel operator must be 'efield' or 'hfield', got '" +
                      name + "'");
}

const char* kernel_op_name(KernelOp op) {
    return op == KernelOp::EField ? "efield" : "hfield";
}

} // namespace

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig cfg;
    switch (kind) {
    case ExperimentKind::Distance:
        // wider than the reference geometry sweep: at this grid size the
        // far-field compression plateau needs a few extra radii
        cfg.distances = {0.60, 0.80, 1.00, 1.20, 1.40,
                         1.60, 1.80, 2.10, 2.40, 2.80};
        break;
    case ExperimentKind::Frequency:
        cfg.frequencies_mhz = {300, 600, 900, 1200, 1500};
        cfg.loop_center = Vector3(0, 0.65, 0);
        break;
    case ExperimentKind::Mesh:
        cfg.grid_dims = {26, 26, 26};
        cfg.spacing = 0.02;
        cfg.mesh_refinements = {3, 5, 7, 9, 11};
        cfg.source = "plate";
        break;
    case ExperimentKind::Tolerance:
        cfg.grid_dims = {16, 16, 16};
        cfg.spacing = 0.04;
        cfg.loop_center = Vector3(0, 1.0, 0);
        cfg.frequency_mhz = 123.0;
        cfg.tolerances = {1e-3, 1e-4, 1e-5, 1e-6};
        break;
    case ExperimentKind::Compress:
    case ExperimentKind::MatvecBench:
        cfg.grid_dims = {16, 16, 16};
        cfg.spacing = 0.04;
        cfg.loop_center = Vector3(0, 0.7, 0);
        cfg.file = "coupling.ctc1";
        break;
    }
    return cfg;
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::string text;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) text.append(buf, got);
    std::fclose(f);

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

    reject_unknown(doc,
                   {"grid", "loop", "plate", "kernel", "source", "distances",
                    "frequencies_mhz", "freq_domain_side", "mesh_refinements",
                    "tolerances", "eps", "p", "workers", "seed",
                    "mem_cap_bytes", "out", "file", "format"},
                   "");

    try {
        if (doc.contains("grid")) {
            const json& g = doc["grid"];
            reject_unknown(g, {"dims", "spacing", "center"}, "grid.");
            if (g.contains("dims")) cfg.grid_dims = dims3_from(g["dims"], "grid.dims");
            if (g.contains("spacing")) cfg.spacing = g["spacing"].get<double>();
            if (g.contains("center"))
                cfg.grid_center = vector3_from(g["center"], "grid.center");
        }
        if (doc.contains("loop")) {
            const json& l = doc["loop"];
            reject_unknown(l, {"radius", "segments", "center"}, "loop.");
            if (l.contains("radius")) cfg.loop_radius = l["radius"].get<double>();
            if (l.contains("segments"))
                cfg.loop_segments = l["segments"].get<int>();
            if (l.contains("center"))
                cfg.loop_center = vector3_from(l["center"], "loop.center");
        }
        if (doc.contains("plate")) {
            const json& pl = doc["plate"];
            reject_unknown(pl, {"side", "center", "edges_per_side"}, "plate.");
            if (pl.contains("side")) cfg.plate_side = pl["side"].get<double>();
            if (pl.contains("center"))
                cfg.plate_center = vector3_from(pl["center"], "plate.center");
            if (pl.contains("edges_per_side"))
                cfg.plate_edges_per_side = pl["edges_per_side"].get<int>();
        }
        if (doc.contains("kernel")) {
            const json& k = doc["kernel"];
            reject_unknown(k, {"operator", "frequency_mhz"}, "kernel.");
            if (k.contains("operator"))
                cfg.kernel_op = kernel_op_from(k["operator"].get<std::string>());
            if (k.contains("frequency_mhz"))
                cfg.frequency_mhz = k["frequency_mhz"].get<double>();
        }
        if (doc.contains("source")) cfg.source = doc["source"].get<std::string>();
        if (doc.contains("distances"))
            cfg.distances = doc["distances"].get<std::vector<double>>();
        if (doc.contains("frequencies_mhz"))
            cfg.frequencies_mhz =
                doc["frequencies_mhz"].get<std::vector<double>>();
        if (doc.contains("freq_domain_side"))
            cfg.freq_domain_side = doc["freq_domain_side"].get<double>();
        if (doc.contains("mesh_refinements"))
            cfg.mesh_refinements = doc["mesh_refinements"].get<std::vector<int>>();
        if (doc.contains("tolerances"))
            cfg.tolerances = doc["tolerances"].get<std::vector<double>>();
        if (doc.contains("eps")) cfg.eps = doc["eps"].get<double>();
        if (doc.contains("p")) cfg.p = doc["p"].get<int>();
        if (doc.contains("workers")) cfg.workers = doc["workers"].get<int>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("mem_cap_bytes"))
            cfg.mem_cap_bytes = doc["mem_cap_bytes"].get<std::int64_t>();
        if (doc.contains("out")) cfg.out = doc["out"].get<std::string>();
        if (doc.contains("file")) cfg.file = doc["file"].get<std::string>();
        if (doc.contains("format")) cfg.format = doc["format"].get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

void validate_config(const ExperimentConfig& cfg, ExperimentKind kind) {
    if (!(cfg.eps > 0 && cfg.eps < 1))
        throw ConfigError("eps must lie in (0,1)");
    if (cfg.p < 1) throw ConfigError("p must be at least 1");
    if (cfg.workers < 0) throw ConfigError("workers must be non-negative");
    if (cfg.mem_cap_bytes <= 0) throw ConfigError("mem_cap_bytes must be positive");
    if (cfg.source != "loop" && cfg.source != "plate")
        throw ConfigError("source must be 'loop' or 'plate'");
    if (cfg.format != "tucker" && cfg.format != "aca")
        throw ConfigError("format must be 'tucker' or 'aca'");
    if (!(cfg.frequency_mhz > 0)) throw ConfigError("frequency_mhz must be positive");

    switch (kind) {
    case ExperimentKind::Distance:
        if (cfg.distances.empty()) throw ConfigError("distances list is empty");
        break;
    case ExperimentKind::Frequency:
        if (cfg.frequencies_mhz.empty())
            throw ConfigError("frequencies_mhz list is empty");
        if (!(cfg.freq_domain_side > 0))
            throw ConfigError("freq_domain_side must be positive");
        for (double f : cfg.frequencies_mhz)
            if (!(f > 0)) throw ConfigError("frequencies must be positive");
        break;
    case ExperimentKind::Mesh:
        if (cfg.mesh_refinements.empty())
            throw ConfigError("mesh_refinements list is empty");
        for (int n : cfg.mesh_refinements)
            if (n < 1) throw ConfigError("mesh refinements must be >= 1");
        break;
    case ExperimentKind::Tolerance:
        if (cfg.tolerances.empty()) throw ConfigError("tolerances list is empty");
        for (double t : cfg.tolerances)
            if (!(t > 0 && t < 1)) throw ConfigError("tolerances must lie in (0,1)");
        break;
    case ExperimentKind::Compress:
    case ExperimentKind::MatvecBench:
        if (cfg.file.empty()) throw ConfigError("file path is empty");
        break;
    }
}

SceneSpec loop_scene_at_distance(const ExperimentConfig& cfg, double d) {
    const VoxelGrid grid =
        make_centered_grid(cfg.grid_center, cfg.spacing, cfg.grid_dims);
    const KernelSpec kernel{cfg.kernel_op,
                            wavenumber_from_mhz(cfg.frequency_mhz), 3};
    return make_loop_scene(cfg.loop_radius, Vector3(0, d, 0),
                           cfg.loop_segments, grid, kernel);
}

SceneSpec frequency_scene(const ExperimentConfig& cfg, double f_mhz) {
    // Fixed physical cube, voxel spacing lambda/20: the grid refines with
    // frequency like the electrical size of the domain.
    const double lambda = kSpeedOfLight / (f_mhz * 1e6);
    const double h = lambda / 20.0;
    const Index n =
        std::max<Index>(1, static_cast<Index>(std::llround(cfg.freq_domain_side / h)));
    const VoxelGrid grid =
        make_centered_grid(cfg.grid_center, h, Dims3{n, n, n});
    const KernelSpec kernel{cfg.kernel_op, wavenumber_from_mhz(f_mhz), 3};
    return make_loop_scene(cfg.loop_radius, cfg.loop_center, cfg.loop_segments,
                           grid, kernel);
}

SceneSpec plate_scene_with(const ExperimentConfig& cfg, int edges_per_side) {
    const VoxelGrid grid =
        make_centered_grid(cfg.grid_center, cfg.spacing, cfg.grid_dims);
    const KernelSpec kernel{cfg.kernel_op,
                            wavenumber_from_mhz(cfg.frequency_mhz), 3};
    return make_plate_scene(cfg.plate_side, cfg.plate_center, edges_per_side,
                            grid, kernel);
}

SceneSpec scene_from_config(const ExperimentConfig& cfg) {
    if (cfg.source == "plate")
        return plate_scene_with(cfg, cfg.plate_edges_per_side);
    const VoxelGrid grid =
        make_centered_grid(cfg.grid_center, cfg.spacing, cfg.grid_dims);
    const KernelSpec kernel{cfg.kernel_op,
                            wavenumber_from_mhz(cfg.frequency_mhz), 3};
    return make_loop_scene(cfg.loop_radius, cfg.loop_center, cfg.loop_segments,
                           grid, kernel);
}

std::vector<DistanceRow> run_distance_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg, ExperimentKind::Distance);
    std::vector<DistanceRow> rows;
    rows.reserve(cfg.distances.size());
    for (double d : cfg.distances) {
        try {
            const CompressedCoupling cc = compress_matrix(
                loop_scene_at_distance(cfg, d), cfg.eps, cfg.workers);
            const MemoryReport rep = memory_report(cc);
            require_finite(rep.factor, "distance sweep factor");
            rows.push_back({d, rep.max_rank, rep.compressed_bytes,
                            rep.full_bytes, rep.factor});
        } catch (const SceneError& e) {
            throw SceneError("distance " + format_double(d) + ": " + e.what(),
                             e.source);
        }
    }
    return rows;
}

std::vector<FrequencyRow> run_frequency_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg, ExperimentKind::Frequency);
    std::vector<FrequencyRow> rows;
    rows.reserve(cfg.frequencies_mhz.size());
    for (double f : cfg.frequencies_mhz) {
        try {
            const SceneSpec scene = frequency_scene(cfg, f);
            const CompressedCoupling cc =
                compress_matrix(scene, cfg.eps, cfg.workers);
            const MemoryReport rep = memory_report(cc);
            rows.push_back({f, scene.grid.spacing, scene.grid.dims[0],
                            rep.max_rank, rep.compressed_bytes});
        } catch (const SceneError& e) {
            throw SceneError("frequency " + format_double(f) + " MHz: " +
                                 e.what(),
                             e.source);
        }
    }
    return rows;
}

std::vector<MeshRow> run_mesh_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg, ExperimentKind::Mesh);
    std::vector<MeshRow> rows;
    rows.reserve(cfg.mesh_refinements.size());
    for (int n : cfg.mesh_refinements) {
        try {
            const SceneSpec scene = plate_scene_with(cfg, n);
            const CompressedCoupling cc =
                compress_matrix(scene, cfg.eps, cfg.workers);
            const MemoryReport rep = memory_report(cc);
            rows.push_back({n, scene.num_sources(),
                            cfg.plate_side / static_cast<double>(n),
                            rep.max_rank});
        } catch (const SceneError& e) {
            throw SceneError("refinement " + std::to_string(n) + ": " +
                                 e.what(),
                             e.source);
        }
    }
    return rows;
}

std::vector<ToleranceRow> run_tolerance_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg, ExperimentKind::Tolerance);
    const SceneSpec scene = scene_from_config(cfg);
    const Index nv = scene.grid.num_voxels();
    const int q = scene.kernel.q;
    const Index m = scene.num_sources();
    if (full_matrix_bytes(q, nv, m) > cfg.mem_cap_bytes)
        throw CapacityError("tolerance sweep needs the dense oracle; "
                            "reduce the grid or raise mem_cap_bytes");

    const Matrix dense = assemble_full(scene, cfg.mem_cap_bytes);
    const MultiVector x = random_multivector(m, cfg.p, cfg.seed);
    const MultiVector y_dense = dense * x;
    const double y_norm = y_dense.norm();
    const MatrixOracle oracle = coupling_oracle(scene);

    std::vector<ToleranceRow> rows;
    rows.reserve(cfg.tolerances.size());
    for (double eps : cfg.tolerances) {
        const AcaFactors fac =
            tucker_aca(oracle, scene.grid.dims, q, eps);
        Index max_rank = 0;
        for (const auto& comp : fac.tucker_u)
            for (const TuckerTensor& tt : comp)
                max_rank = std::max(max_rank, tt.max_rank());
        const MultiVector y = aca_forward(fac, x, cfg.workers);
        const double rel = (y - y_dense).norm() / y_norm;
        require_finite(rel, "tolerance sweep relative error");
        rows.push_back({eps, fac.rank(), max_rank, rel});
    }
    return rows;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

template <typename Row, typename Fn>
std::string csv_table(const char* header, const std::vector<Row>& rows, Fn fn) {
    std::string out(header);
    out += '\n';
    for (const Row& r : rows) {
        out += fn(r);
        out += '\n';
    }
    return out;
}

} // namespace

std::string to_csv(const std::vector<DistanceRow>& rows) {
    return csv_table(
        "d,max_rank,compressed_bytes,full_bytes,factor", rows,
        [](const DistanceRow& r) {
            return format_double(r.d) + "," + std::to_string(r.max_rank) + "," +
                   std::to_string(r.compressed_bytes) + "," +
                   std::to_string(r.full_bytes) + "," + format_double(r.factor);
        });
}

std::string to_csv(const std::vector<FrequencyRow>& rows) {
    return csv_table(
        "f_mhz,spacing,n,max_rank,compressed_bytes", rows,
        [](const FrequencyRow& r) {
            return format_double(r.f_mhz) + "," + format_double(r.spacing) +
                   "," + std::to_string(r.n) + "," + std::to_string(r.max_rank) +
                   "," + std::to_string(r.compressed_bytes);
        });
}

std::string to_csv(const std::vector<MeshRow>& rows) {
    return csv_table("n_edges,m,pitch,max_rank", rows, [](const MeshRow& r) {
        return std::to_string(r.edges_per_side) + "," + std::to_string(r.m) +
               "," + format_double(r.pitch) + "," + std::to_string(r.max_rank);
    });
}

std::string to_csv(const std::vector<ToleranceRow>& rows) {
    return csv_table(
        "eps,r_c,max_tucker_rank,matvec_rel_err", rows,
        [](const ToleranceRow& r) {
            return format_double(r.eps) + "," + std::to_string(r.r_c) + "," +
                   std::to_string(r.max_tucker_rank) + "," +
                   format_double(r.matvec_rel_err);
        });
}

std::string run_compress(const ExperimentConfig& cfg) {
    validate_config(cfg, ExperimentKind::Compress);
    const SceneSpec scene = scene_from_config(cfg);
    const int q = scene.kernel.q;
    const Index nv = scene.grid.num_voxels();
    const Index m = scene.num_sources();

    json summary;
    summary["format"] = cfg.format;
    summary["file"] = cfg.file;
    summary["q"] = q;
    summary["m"] = m;
    summary["dims"] = {scene.grid.dims[0], scene.grid.dims[1],
                       scene.grid.dims[2]};
    summary["kernel"] = kernel_op_name(scene.kernel.op);
    summary["k0_rad_per_m"] = scene.kernel.k0;
    summary["frequency_mhz"] = cfg.frequency_mhz;
    summary["eps"] = cfg.eps;
    summary["seed"] = cfg.seed;
    summary["workers"] = cfg.workers;
    summary["full_bytes"] = full_matrix_bytes(q, nv, m);

    const double t0 = now_seconds();
    if (cfg.format == "tucker") {
        const CompressedCoupling cc =
            compress_matrix(scene, cfg.eps, cfg.workers);
        save_ctc1(cfg.file, cc);
        const MemoryReport rep = memory_report(cc);
        summary["compressed_bytes"] = rep.compressed_bytes;
        summary["factor"] = rep.factor;
        summary["max_rank"] = rep.max_rank;
    } else {
        const AcaFactors fac =
            tucker_aca(coupling_oracle(scene), scene.grid.dims, q, cfg.eps);
        save_cta1(cfg.file, fac, scene.kernel.k0, scene.kernel.op);
        std::int64_t bytes = std::int64_t(16) * fac.v.size();
        Index max_rank = 0;
        for (const auto& comp : fac.tucker_u)
            for (const TuckerTensor& tt : comp) {
                bytes += std::int64_t(16) * tucker_scalars(tt);
                max_rank = std::max(max_rank, tt.max_rank());
            }
        summary["compressed_bytes"] = bytes;
        summary["factor"] =
            static_cast<double>(full_matrix_bytes(q, nv, m)) /
            static_cast<double>(bytes);
        summary["r_c"] = fac.rank();
        summary["max_rank"] = max_rank;
    }
    summary["seconds"] = now_seconds() - t0;
    return summary.dump(2) + "\n";
}

namespace {

std::string file_magic(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw ParseError("cannot open '" + path + "'", 0);
    char tag[4] = {0, 0, 0, 0};
    const std::size_t got = std::fread(tag, 1, 4, f);
    std::fclose(f);
    if (got != 4) throw ParseError("'" + path + "': too short for a magic", 0);
    return std::string(tag, 4);
}

} // namespace

std::string run_matvec_bench(const ExperimentConfig& cfg) {
    validate_config(cfg, ExperimentKind::MatvecBench);
    const std::string magic = file_magic(cfg.file);

    json report;
    report["file"] = cfg.file;
    report["p"] = cfg.p;
    report["seed"] = cfg.seed;
    report["workers"] = cfg.workers;

    const SceneSpec scene = scene_from_config(cfg);
    const bool oracle_fits =
        full_matrix_bytes(scene.kernel.q, scene.grid.num_voxels(),
                          scene.num_sources()) <= cfg.mem_cap_bytes;

    if (magic == "CTC1") {
        const CompressedCoupling cc = load_ctc1(cfg.file);
        report["kind"] = "tucker";
        report["kernel"] = kernel_op_name(cc.kernel_op);
        report["m"] = cc.m;
        report["rows"] = cc.rows();

        const MultiVector x = random_multivector(cc.m, cfg.p, cfg.seed);
        const MultiVector phi =
            random_multivector(cc.rows(), cfg.p, cfg.seed + 1);

        double t0 = now_seconds();
        const MultiVector y = forward(cc, x, cfg.workers);
        report["forward_seconds"] = now_seconds() - t0;
        t0 = now_seconds();
        const MultiVector z = adjoint(cc, phi, cfg.workers);
        report["adjoint_seconds"] = now_seconds() - t0;
        report["forward_digest"] = format_double(y.cwiseAbs().sum());
        report["adjoint_digest"] = format_double(z.cwiseAbs().sum());

        const bool matches = scene.grid.dims == cc.grid_dims &&
                             scene.num_sources() == cc.m &&
                             scene.kernel.q == cc.q &&
                             scene.kernel.k0 == cc.k0 &&
                             scene.kernel.op == cc.kernel_op;
        if (matches && oracle_fits) {
            const MultiVector yd = dense_forward(scene, x, cfg.mem_cap_bytes);
            const MultiVector zd = dense_adjoint(scene, phi, cfg.mem_cap_bytes);
            report["rel_err_forward"] = (y - yd).norm() / yd.norm();
            report["rel_err_adjoint"] = (z - zd).norm() / zd.norm();
        } else {
            report["dense_check"] =
                matches ? "skipped: oracle above memory cap"
                        : "skipped: configured scene does not match the file";
        }
    } else if (magic == "CTA1") {
        const Cta1File file = load_cta1(cfg.file);
        const AcaFactors& fac = file.factors;
        report["kind"] = "aca";
        report["kernel"] = kernel_op_name(file.kernel_op);
        report["m"] = fac.cols();
        report["rows"] = fac.rows();
        report["r_c"] = fac.rank();

        const MultiVector x = random_multivector(fac.cols(), cfg.p, cfg.seed);
        const MultiVector phi =
            random_multivector(fac.rows(), cfg.p, cfg.seed + 1);

        double t0 = now_seconds();
        const MultiVector y = aca_forward(fac, x, cfg.workers);
        report["forward_seconds"] = now_seconds() - t0;
        t0 = now_seconds();
        const MultiVector z = aca_adjoint(fac, phi, cfg.workers);
        report["adjoint_seconds"] = now_seconds() - t0;
        report["forward_digest"] = format_double(y.cwiseAbs().sum());
        report["adjoint_digest"] = format_double(z.cwiseAbs().sum());

        const bool matches = scene.grid.dims == fac.grid_dims &&
                             scene.num_sources() == fac.cols() &&
                             scene.kernel.q == fac.q &&
                             scene.kernel.k0 == file.k0 &&
                             scene.kernel.op == file.kernel_op;
        if (matches && oracle_fits) {
            const MultiVector yd = dense_forward(scene, x, cfg.mem_cap_bytes);
            const MultiVector zd = dense_adjoint(scene, phi, cfg.mem_cap_bytes);
            report["rel_err_forward"] = (y - yd).norm() / yd.norm();
            report["rel_err_adjoint"] = (z - zd).norm() / zd.norm();
        } else {
            report["dense_check"] =
                matches ? "skipped: oracle above memory cap"
                        : "skipped: configured scene does not match the file";
        }
    } else {
        throw ParseError("'" + cfg.file + "': unknown magic '" + magic + "'", 0);
    }
    return report.dump(2) + "\n";
}

double linear_fit_r2(const std::vector<double>& x,
                     const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ContractViolation("linear_fit_r2: need two equally sized lists");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double vx = sxx / n - (sx / n) * (sx / n);
    const double vy = syy / n - (sy / n) * (sy / n);
    if (vx <= 0 || vy <= 0) return 0.0;
    return (cov * cov) / (vx * vy);
}

} // namespace tuckmat
