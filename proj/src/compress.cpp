#include "tuckmat/compress.hpp"

#include "tuckmat/parallel.hpp"

namespace tuckmat {

CompressedCoupling compress_matrix(const SceneSpec& scene, double eps,
                                   int workers) {
    if (!(eps > 0.0 && eps < 1.0))
        throw ContractViolation("compress_matrix: eps must lie in (0,1)");
    validate_scene(scene);

    CompressedCoupling cc;
    cc.grid_dims = scene.grid.dims;
    cc.q = scene.kernel.q;
    cc.m = scene.num_sources();
    cc.kernel_op = scene.kernel.op;
    cc.k0 = scene.kernel.k0;
    cc.eps = eps;
    cc.columns.resize(static_cast<std::size_t>(cc.m));

    parallel_for(static_cast<std::size_t>(cc.m), workers, [&](std::size_t j) {
        try {
            std::vector<Tensor3> tensors =
                assemble_column(scene, static_cast<Index>(j));
            std::vector<TuckerTensor>& column = cc.columns[j];
            column.reserve(tensors.size());
            for (Tensor3& t : tensors)
                column.push_back(hosvd(std::move(t), eps));
        } catch (const Error& e) {
            throw Error("column " + std::to_string(j) + ": " + e.what());
        }
    });
    return cc;
}

MemoryReport memory_report(const CompressedCoupling& cc) {
    MemoryReport r;
    for (const auto& column : cc.columns)
        for (const TuckerTensor& tt : column) {
            r.compressed_bytes += std::int64_t(16) * tucker_scalars(tt);
            r.max_rank = std::max(r.max_rank, tt.max_rank());
        }
    r.full_bytes = full_matrix_bytes(cc.q, cc.num_voxels(), cc.m);
    r.factor = r.compressed_bytes > 0
                   ? static_cast<double>(r.full_bytes) /
                         static_cast<double>(r.compressed_bytes)
                   : 0.0;
    return r;
}

RowIndex row_to_index(Index row, const Dims3& grid_dims, int q) {
    const Index nv = volume(grid_dims);
    if (row < 0 || row >= q * nv)
        throw ContractViolation("row_to_index: row " + std::to_string(row) +
                                " out of range for q*n_v = " +
                                std::to_string(q * nv));
    RowIndex idx;
    idx.component = static_cast<int>(row / nv);
    const Index v = row % nv;
    idx.f1 = v % grid_dims[0];
    idx.f2 = (v / grid_dims[0]) % grid_dims[1];
    idx.f3 = v / (grid_dims[0] * grid_dims[1]);
    return idx;
}

Index index_to_row(const RowIndex& idx, const Dims3& grid_dims, int q) {
    if (idx.component < 0 || idx.component >= q || idx.f1 < 0 ||
        idx.f1 >= grid_dims[0] || idx.f2 < 0 || idx.f2 >= grid_dims[1] ||
        idx.f3 < 0 || idx.f3 >= grid_dims[2])
        throw ContractViolation("index_to_row: index out of range");
    const Index v =
        idx.f1 + grid_dims[0] * (idx.f2 + grid_dims[1] * idx.f3);
    return idx.component * volume(grid_dims) + v;
}

} // namespace tuckmat
