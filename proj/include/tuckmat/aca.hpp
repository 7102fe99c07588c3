#pragma once

#include <functional>
#include <vector>

#include "tuckmat/compress.hpp"
#include "tuckmat/scene.hpp"
#include "tuckmat/tensor.hpp"

namespace tuckmat {

// Row/column access to an (implicit) matrix. Evaluations must be pure:
// repeated calls with the same index return the same data.
struct MatrixOracle {
    Index rows = 0;
    Index cols = 0;
    std::function<Eigen::RowVectorXcd(Index)> row;
    std::function<Eigen::VectorXcd(Index)> col;
};

// Low-rank cross factorization Z ~ U V^*. U is held either dense or as a
// grid of Tucker-compressed tensors (q per accepted column), in which case
// q * n_v equals the implied row count.
struct AcaFactors {
    Matrix dense_u;                                  // (m1 x r) or empty
    std::vector<std::vector<TuckerTensor>> tucker_u; // [q][r] or empty
    Dims3 grid_dims{0, 0, 0};
    int q = 0;
    Matrix v; // (m2 x r)
    double eps = 0;
    double hosvd_eps = 0;    // nested Tucker tolerance (compressed store)
    double final_stat = 0;   // |x||y|/sqrt(s) at the last accepted column
    bool converged = false;  // stopping rule fired before rank exhaustion

    bool compressed() const { return !tucker_u.empty(); }
    Index rank() const { return v.cols(); }
    Index rows() const {
        return compressed() ? q * volume(grid_dims) : dense_u.rows();
    }
    Index cols() const { return v.rows(); }
};

// Partially pivoted adaptive cross approximation with dense U. Stops when
// |x||y| <= eps * sqrt(s) with s the running Frobenius estimate of the
// factorization, or on a (near-)zero residual row.
AcaFactors aca_dense(const MatrixOracle& oracle, double eps = 1e-3);

// Cross approximation that never materializes dense U: each accepted column
// is reshaped to q grid tensors and compressed with HOSVD at hosvd_eps
// (defaults to 3*eps when <= 0); residual rows are recovered by element-wise
// Tucker decompression. Peak dense working memory stays at a few columns'
// worth of scalars regardless of the final rank.
AcaFactors tucker_aca(const MatrixOracle& oracle, const Dims3& grid_dims,
                      int q, double eps = 1e-3, double hosvd_eps = 0.0);

// Row i of the compressed U, decompressed entry-by-entry in O(r_c * r^3).
Eigen::RowVectorXcd row_of_compressed_u(const AcaFactors& fac, Index i);

// Row/column providers for a scene's coupling matrix: columns come from
// assemble_column, rows from one voxel-component kernel evaluation against
// all m sources (cost O(m), no column caching).
MatrixOracle coupling_oracle(const SceneSpec& scene);

// Dense matrix view of an oracle, for tests and small cross-checks.
Matrix materialize(const MatrixOracle& oracle);

} // namespace tuckmat
