#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tuckmat/compress.hpp"
#include "tuckmat/matvec.hpp"

using namespace tuckmat;

namespace {

SceneSpec small_loop_scene(Index n, int segments, double distance,
                           double spacing = 0.05) {
    const VoxelGrid grid =
        make_centered_grid({0, 0, 0}, spacing, {n, n, n});
    const KernelSpec kernel{KernelOp::EField, wavenumber_from_mhz(298.06), 3};
    return make_loop_scene(0.5, {0, distance, 0}, segments, grid, kernel);
}

// Uniform-rank compressed matrix with orthonormal random factors.
CompressedCoupling synthetic_compression(Index n, Index m, Index rank,
                                         std::uint64_t seed) {
    CompressedCoupling cc;
    cc.grid_dims = {n, n, n};
    cc.q = 3;
    cc.m = m;
    cc.eps = 1e-8;
    cc.k0 = 1.0;
    cc.columns.resize(static_cast<std::size_t>(m));
    std::uint64_t s = seed;
    for (auto& column : cc.columns)
        for (int k = 0; k < cc.q; ++k) {
            TuckerTensor tt;
            tt.dims = cc.grid_dims;
            tt.core = oracles::random_tensor({rank, rank, rank}, s++);
            for (int g = 0; g < 3; ++g) {
                const Matrix a = oracles::random_matrix(n, rank, s++);
                tt.factors[g] =
                    Eigen::HouseholderQR<Matrix>(a).householderQ() *
                    Matrix::Identity(n, rank);
            }
            column.push_back(std::move(tt));
        }
    return cc;
}

} // namespace

TEST_CASE("single-voxel grids compress to rank (1,1,1) everywhere") {
    const VoxelGrid grid = make_centered_grid({0, 0, 0}, 0.05, {1, 1, 1});
    const KernelSpec kernel{KernelOp::EField, 6.0, 3};
    const SceneSpec scene = make_loop_scene(0.5, {0, 1, 0}, 4, grid, kernel);
    const CompressedCoupling cc = compress_matrix(scene, 1e-8);
    for (const auto& column : cc.columns)
        for (const TuckerTensor& tt : column) {
            CHECK(tt.rank(1) == 1);
            CHECK(tt.rank(2) == 1);
            CHECK(tt.rank(3) == 1);
        }
    CHECK(memory_report(cc).max_rank == 1);
}

TEST_CASE("decompressed columns match the dense matrix within 2 eps") {
    const double eps = 1e-6;
    const SceneSpec scene = small_loop_scene(8, 10, 0.8);
    const CompressedCoupling cc = compress_matrix(scene, eps);
    const Matrix z = assemble_full(scene);
    const Index nv = scene.grid.num_voxels();
    for (Index j = 0; j < cc.m; ++j) {
        Eigen::VectorXcd col(cc.rows());
        for (int k = 0; k < cc.q; ++k) {
            const Tensor3 t = reconstruct(cc.columns[j][k]);
            col.segment(k * nv, nv) =
                Eigen::Map<const Eigen::VectorXcd>(t.data(), nv);
        }
        // per-component HOSVD errors aggregate to at most eps per column
        CHECK((col - z.col(j)).norm() <= eps * z.col(j).norm());
    }
}

TEST_CASE("far sources compress harder than near ones") {
    const CompressedCoupling near = compress_matrix(small_loop_scene(10, 8, 0.7), 1e-8);
    const CompressedCoupling far = compress_matrix(small_loop_scene(10, 8, 2.5), 1e-8);
    CHECK(memory_report(far).max_rank <= memory_report(near).max_rank);
    CHECK(memory_report(far).factor >= memory_report(near).factor);
}

TEST_CASE("memory report instantiates the symbolic formula at uniform rank 1") {
    const Index n = 6, m = 4;
    const CompressedCoupling cc = synthetic_compression(n, m, 1, 17);
    const MemoryReport rep = memory_report(cc);
    CHECK(rep.compressed_bytes == 16 * 3 * m * (1 + 3 * n));
    CHECK(rep.full_bytes == 16 * 3 * n * n * n * m);
    CHECK(rep.max_rank == 1);
    CHECK(rep.factor == doctest::Approx(static_cast<double>(rep.full_bytes) /
                                        static_cast<double>(rep.compressed_bytes)));
}

TEST_CASE("memory report at uniform rank r matches q(r^3+3nr)m scalars") {
    const Index n = 8, m = 3, r = 4;
    const CompressedCoupling cc = synthetic_compression(n, m, r, 23);
    CHECK(memory_report(cc).compressed_bytes ==
          16 * 3 * m * (r * r * r + 3 * n * r));
}

TEST_CASE("row_to_index walks components then voxels, f1 fastest") {
    const Dims3 dims{3, 4, 5};
    const Index nv = 60;

    const RowIndex r0 = row_to_index(0, dims, 3);
    CHECK(r0.f1 == 0);
    CHECK(r0.f2 == 0);
    CHECK(r0.f3 == 0);
    CHECK(r0.component == 0);

    const RowIndex r1 = row_to_index(nv, dims, 3);
    CHECK(r1.f1 == 0);
    CHECK(r1.f2 == 0);
    CHECK(r1.f3 == 0);
    CHECK(r1.component == 1);

    const RowIndex r2 = row_to_index(1 + 3 * (2 + 4 * 3) + 2 * nv, dims, 3);
    CHECK(r2.f1 == 1);
    CHECK(r2.f2 == 2);
    CHECK(r2.f3 == 3);
    CHECK(r2.component == 2);
}

TEST_CASE("row_to_index and index_to_row are inverse over all 180 rows") {
    const Dims3 dims{3, 4, 5};
    for (Index row = 0; row < 180; ++row) {
        const RowIndex idx = row_to_index(row, dims, 3);
        CHECK(index_to_row(idx, dims, 3) == row);
    }
    CHECK_THROWS_AS(row_to_index(180, dims, 3), ContractViolation);
    CHECK_THROWS_AS(row_to_index(-1, dims, 3), ContractViolation);
}

TEST_CASE("compress_matrix streams columns within the working-memory bound") {
    const SceneSpec scene = small_loop_scene(10, 6, 0.8);
    const Index nv = scene.grid.num_voxels();
    // The result's cores stay resident; everything transient must fit in
    // one column plus one tensor-sized scratch buffer per worker.
    const std::int64_t budget = (3 + 1) * nv * 16;
    {
        memlog::reset();
        const CompressedCoupling cc = compress_matrix(scene, 1e-8, 1);
        CHECK(memlog::peak() <= memlog::current() + budget);
        CHECK(cc.m == 6);
    }
    {
        memlog::reset();
        const CompressedCoupling cc = compress_matrix(scene, 1e-8, 2);
        CHECK(memlog::peak() <= memlog::current() + 2 * budget);
    }
}

TEST_CASE("compress_matrix validates eps and the scene") {
    const SceneSpec scene = small_loop_scene(4, 4, 0.9);
    CHECK_THROWS_AS(compress_matrix(scene, 0.0), ContractViolation);
    CHECK_THROWS_AS(compress_matrix(scene, 2.0), ContractViolation);

    SceneSpec bad = scene;
    bad.sources[0].midpoint = Vector3(0, 0.1, 0);
    CHECK_THROWS_AS(compress_matrix(bad, 1e-6), SceneError);
}

TEST_CASE("worker count does not change the compression") {
    const SceneSpec scene = small_loop_scene(6, 5, 0.8);
    const CompressedCoupling a = compress_matrix(scene, 1e-8, 1);
    const CompressedCoupling b = compress_matrix(scene, 1e-8, 2);
    REQUIRE(a.m == b.m);
    for (Index j = 0; j < a.m; ++j)
        for (int k = 0; k < a.q; ++k) {
            const Tensor3 ta = reconstruct(a.columns[j][k]);
            const Tensor3 tb = reconstruct(b.columns[j][k]);
            CHECK(oracles::rel_err(tb, ta) < 1e-14);
        }
}
