#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tuckmat/experiments.hpp"
#include "tuckmat/parallel.hpp"

namespace {

using namespace tuckmat;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::FILE* f = std::fopen(out_path.c_str(), "wb");
    if (!f) throw Error("cannot open '" + out_path + "' for writing");
    const std::size_t n = std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
    if (n != text.size()) throw Error("short write to '" + out_path + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tucker-compressed coupling matrices: rank/memory sweeps, "
                 "compressed assembly and matrix-vector benchmarks"};
    app.require_subcommand(1);

    std::string config_path, out, file;
    int workers = 0;
    std::int64_t mem_cap = 0;
    std::uint64_t seed = 0;
    double eps = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out,
                        "output path for the CSV table / JSON report "
                        "(default: stdout)");
        sub->add_option("--workers", workers,
                        "worker threads (absent: TUCKMAT_WORKERS, then config)");
        sub->add_option("--mem-cap-bytes", mem_cap,
                        "memory cap for dense allocations");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--eps", eps, "compression tolerance");
        sub->add_option("--file", file,
                        "CTC1/CTA1 container path (compress output, "
                        "matvec-bench input)");
    };

    CLI::App* distance = app.add_subcommand(
        "distance-sweep", "compress a loop scene over a list of distances");
    CLI::App* frequency = app.add_subcommand(
        "frequency-sweep",
        "compress a fixed domain at lambda/20 spacing over frequencies");
    CLI::App* mesh = app.add_subcommand(
        "mesh-sweep", "compress a plate scene over lattice refinements");
    CLI::App* tolerance = app.add_subcommand(
        "tolerance-sweep",
        "cross-approximate a scene over ACA tolerances and compare products "
        "against the dense matrix");
    CLI::App* compress = app.add_subcommand(
        "compress", "compress the configured scene and persist it");
    CLI::App* bench = app.add_subcommand(
        "matvec-bench", "load a container and time forward/adjoint products");
    for (CLI::App* sub : {distance, frequency, mesh, tolerance, compress, bench})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ExperimentKind kind = ExperimentKind::Distance;
        if (frequency->parsed()) kind = ExperimentKind::Frequency;
        if (mesh->parsed()) kind = ExperimentKind::Mesh;
        if (tolerance->parsed()) kind = ExperimentKind::Tolerance;
        if (compress->parsed()) kind = ExperimentKind::Compress;
        if (bench->parsed()) kind = ExperimentKind::MatvecBench;
        CLI::App* sub = app.get_subcommands().front();

        ExperimentConfig cfg = default_config(kind);
        if (sub->count("--config")) load_config_file(cfg, config_path);
        if (sub->count("--out")) cfg.out = out;
        if (sub->count("--file")) cfg.file = file;
        if (sub->count("--mem-cap-bytes")) cfg.mem_cap_bytes = mem_cap;
        if (sub->count("--seed")) cfg.seed = seed;
        if (sub->count("--eps")) cfg.eps = eps;
        if (sub->count("--workers"))
            cfg.workers = workers;
        else if (const char* env = std::getenv("TUCKMAT_WORKERS"))
            cfg.workers = std::atoi(env);
        if (cfg.workers <= 0) cfg.workers = resolve_workers(0);

        switch (kind) {
        case ExperimentKind::Distance:
            emit(to_csv(run_distance_sweep(cfg)), cfg.out);
            break;
        case ExperimentKind::Frequency:
            emit(to_csv(run_frequency_sweep(cfg)), cfg.out);
            break;
        case ExperimentKind::Mesh:
            emit(to_csv(run_mesh_sweep(cfg)), cfg.out);
            break;
        case ExperimentKind::Tolerance:
            emit(to_csv(run_tolerance_sweep(cfg)), cfg.out);
            break;
        case ExperimentKind::Compress:
            emit(run_compress(cfg), cfg.out);
            break;
        case ExperimentKind::MatvecBench:
            emit(run_matvec_bench(cfg), cfg.out);
            break;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SceneError& e) {
        std::cerr << "scene error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
