#pragma once

#include <cstdint>
#include <vector>

#include "tuckmat/scene.hpp"
#include "tuckmat/tensor.hpp"

namespace tuckmat {

// Column-wise Tucker compression of a coupling matrix: one TuckerTensor per
// source per field component, plus the scene metadata needed to interpret
// (and persist) them.
struct CompressedCoupling {
    Dims3 grid_dims{0, 0, 0};
    int q = 0;
    Index m = 0;
    KernelOp kernel_op = KernelOp::EField;
    double k0 = 0;
    double eps = 0;
    std::vector<std::vector<TuckerTensor>> columns; // [m][q]

    Index num_voxels() const { return volume(grid_dims); }
    Index rows() const { return q * num_voxels(); }
};

// Compresses every column of the scene's coupling matrix with HOSVD at
// tolerance eps. Columns are assembled and compressed one at a time (the
// dense matrix is never resident); distinct columns may run on separate
// workers. Kernel failures are rethrown with the column index attached.
CompressedCoupling compress_matrix(const SceneSpec& scene, double eps,
                                   int workers = 1);

struct MemoryReport {
    std::int64_t compressed_bytes = 0;
    std::int64_t full_bytes = 0;
    double factor = 0;
    Index max_rank = 0;
};

// Symbolic accounting at 16 bytes per complex scalar, metadata ignored:
// compressed = sum over tensors of 16*(r1 r2 r3 + n1 r1 + n2 r2 + n3 r3),
// full = 16 q n_v m.
MemoryReport memory_report(const CompressedCoupling& cc);

struct RowIndex {
    Index f1 = 0, f2 = 0, f3 = 0;
    int component = 0;
};

// Splits a row of the (q*n_v)-row coupling matrix into its field component
// and voxel indices; component-major blocks, voxel index f1-fastest.
RowIndex row_to_index(Index row, const Dims3& grid_dims, int q);

// Inverse of row_to_index.
Index index_to_row(const RowIndex& idx, const Dims3& grid_dims, int q);

} // namespace tuckmat
