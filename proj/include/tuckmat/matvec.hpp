#pragma once

#include <cstdint>
#include <functional>

#include "tuckmat/aca.hpp"
#include "tuckmat/compress.hpp"
#include "tuckmat/scene.hpp"

namespace tuckmat {

// Dense block of p right-hand sides / results, column-major.
using MultiVector = Eigen::MatrixXcd;

// Multiply-add tallies for the compressed product paths: decompression work
// (n-mode products) and rank-1 accumulation work, counted exactly.
struct OpCounts {
    std::int64_t decompress_madds = 0;
    std::int64_t accumulate_madds = 0;
};

// Multiply-adds of reconstruct(tt) through the three chained mode products.
std::int64_t reconstruct_madds(const TuckerTensor& tt);

// A matrix whose ncols columns are each the concatenation of q
// Tucker-compressed grid tensors (component-major rows). Both the
// column-wise compression and the ACA U-store expose this shape.
struct TuckerColumns {
    std::function<const TuckerTensor&(Index col, int comp)> tensor;
    Index ncols = 0;
    int q = 0;
    Dims3 grid_dims{0, 0, 0};

    Index rows() const { return q * volume(grid_dims); }
};

// Y = Z X by per-column decompression and rank-1 accumulation; never holds
// more than one decompressed tensor per worker.
MultiVector stacked_forward(const TuckerColumns& z, const MultiVector& x,
                            int workers = 1, OpCounts* ops = nullptr);

// Y = Z^* X: row j of Y is the conjugated decompressed column j against X.
MultiVector stacked_adjoint(const TuckerColumns& z, const MultiVector& x,
                            int workers = 1, OpCounts* ops = nullptr);

// Products against the column-wise compressed coupling matrix.
MultiVector forward(const CompressedCoupling& cc, const MultiVector& x,
                    int workers = 1, OpCounts* ops = nullptr);
MultiVector adjoint(const CompressedCoupling& cc, const MultiVector& phi,
                    int workers = 1, OpCounts* ops = nullptr);

// Products against an ACA factorization: U (V^* x) and V (U^* phi), with
// the U side running through the compressed path when U is Tucker-stored.
MultiVector aca_forward(const AcaFactors& fac, const MultiVector& x,
                        int workers = 1);
MultiVector aca_adjoint(const AcaFactors& fac, const MultiVector& phi,
                        int workers = 1);

// Ground-truth products through the dense matrix.
MultiVector dense_forward(const SceneSpec& scene, const MultiVector& x,
                          std::int64_t mem_cap_bytes = kDefaultMemCapBytes);
MultiVector dense_adjoint(const SceneSpec& scene, const MultiVector& phi,
                          std::int64_t mem_cap_bytes = kDefaultMemCapBytes);

} // namespace tuckmat
