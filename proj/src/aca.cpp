#include "tuckmat/aca.hpp"

#include <cmath>

#include "tuckmat/matvec.hpp"

namespace tuckmat {

namespace {

// Hard zero floor plus a rounding-noise floor relative to the largest raw
// row seen: a residual row at machine-noise level means the factorization
// is complete to working precision.
constexpr double kZeroPivot = 1e-300;
constexpr double kNoiseFloor = 1e-14;

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw ContractViolation("aca: eps must lie in (0,1)");
}

// View of the first k accepted columns of a compressed U store.
TuckerColumns partial_columns(const AcaFactors& fac, Index k) {
    TuckerColumns cols;
    cols.tensor = [&fac](Index l, int comp) -> const TuckerTensor& {
        return fac.tucker_u[static_cast<std::size_t>(comp)]
                           [static_cast<std::size_t>(l)];
    };
    cols.ncols = k;
    cols.q = fac.q;
    cols.grid_dims = fac.grid_dims;
    return cols;
}

// Next pivot row: largest remaining |x| entry, previously used rows skipped.
Index next_pivot_row(const Eigen::VectorXcd& x, const std::vector<char>& used) {
    Eigen::VectorXd ax = x.cwiseAbs();
    for (Index r = 0; r < ax.size(); ++r)
        if (used[static_cast<std::size_t>(r)]) ax(r) = 0.0;
    Index i = 0;
    ax.maxCoeff(&i);
    return i;
}

// First row not yet tried, or -1 when exhausted.
Index first_unused_row(const std::vector<char>& used) {
    for (std::size_t r = 0; r < used.size(); ++r)
        if (!used[r]) return static_cast<Index>(r);
    return -1;
}

} // namespace

AcaFactors aca_dense(const MatrixOracle& oracle, double eps) {
    check_eps(eps);
    const Index m1 = oracle.rows, m2 = oracle.cols;
    const Index kmax = std::min(m1, m2);

    AcaFactors fac;
    fac.eps = eps;
    fac.dense_u = Matrix(m1, 0);
    fac.v = Matrix(m2, 0);

    std::vector<char> used(static_cast<std::size_t>(m1), 0);
    Index i = 0;
    double s = 0.0;
    double row_scale = 0.0;

    for (Index k = 0; k < kmax; ++k) {
        Eigen::RowVectorXcd r;
        Index j = 0;
        bool exhausted = false;
        for (;;) {
            r = oracle.row(i);
            row_scale = std::max(row_scale, r.cwiseAbs().maxCoeff());
            if (k > 0) r -= fac.dense_u.row(i) * fac.v.adjoint();
            const double rmax = r.cwiseAbs().maxCoeff(&j);
            if (rmax > std::max(kZeroPivot, kNoiseFloor * row_scale)) break;
            if (k > 0) {
                exhausted = true; // residual row at noise level: done
                break;
            }
            used[static_cast<std::size_t>(i)] = 1; // degenerate first row
            i = first_unused_row(used);
            if (i < 0) {
                exhausted = true; // zero matrix
                break;
            }
        }
        if (exhausted) {
            fac.converged = true;
            fac.final_stat = 0.0;
            break;
        }

        const Eigen::VectorXcd y = (r / r(j)).adjoint();
        Eigen::VectorXcd x = oracle.col(j);
        if (k > 0) x -= fac.dense_u * fac.v.row(j).adjoint();

        const double nx = x.norm(), ny = y.norm();
        s += (nx * ny) * (nx * ny);
        if (k > 0)
            s += 2.0 * ((fac.dense_u.adjoint() * x)
                            .cwiseProduct(fac.v.adjoint() * y))
                           .real()
                           .sum();

        fac.dense_u.conservativeResize(m1, k + 1);
        fac.dense_u.col(k) = x;
        fac.v.conservativeResize(m2, k + 1);
        fac.v.col(k) = y;

        const double scale = std::sqrt(std::max(s, 0.0));
        fac.final_stat = scale > 0 ? nx * ny / scale : 0.0;
        if (nx * ny <= eps * scale) {
            fac.converged = true;
            break;
        }

        used[static_cast<std::size_t>(i)] = 1;
        i = next_pivot_row(x, used);
    }
    return fac;
}

AcaFactors tucker_aca(const MatrixOracle& oracle, const Dims3& grid_dims,
                      int q, double eps, double hosvd_eps) {
    check_eps(eps);
    if (hosvd_eps <= 0.0) hosvd_eps = std::min(3.0 * eps, 0.99);
    if (!(hosvd_eps < 1.0))
        throw ContractViolation("tucker_aca: hosvd_eps must lie in (0,1)");
    const Index nv = volume(grid_dims);
    const Index m1 = q * nv;
    if (oracle.rows != m1)
        throw ContractViolation("tucker_aca: oracle has " +
                                std::to_string(oracle.rows) +
                                " rows, expected q*n_v = " +
                                std::to_string(m1));
    const Index m2 = oracle.cols;
    const Index kmax = std::min(m1, m2);

    AcaFactors fac;
    fac.grid_dims = grid_dims;
    fac.q = q;
    fac.eps = eps;
    fac.hosvd_eps = hosvd_eps;
    fac.tucker_u.resize(static_cast<std::size_t>(q));
    fac.v = Matrix(m2, 0);

    std::vector<char> used(static_cast<std::size_t>(m1), 0);
    Index i = 0;
    double s = 0.0;
    double row_scale = 0.0;

    for (Index k = 0; k < kmax; ++k) {
        Eigen::RowVectorXcd r;
        Index j = 0;
        bool exhausted = false;
        for (;;) {
            r = oracle.row(i);
            row_scale = std::max(row_scale, r.cwiseAbs().maxCoeff());
            if (k > 0) {
                // Residual row through element-wise decompression of U.
                const RowIndex ri = row_to_index(i, grid_dims, q);
                Eigen::RowVectorXcd t(k);
                for (Index l = 0; l < k; ++l)
                    t(l) = element(
                        fac.tucker_u[static_cast<std::size_t>(ri.component)]
                                    [static_cast<std::size_t>(l)],
                        ri.f1, ri.f2, ri.f3);
                r -= t * fac.v.adjoint();
            }
            const double rmax = r.cwiseAbs().maxCoeff(&j);
            if (rmax > std::max(kZeroPivot, kNoiseFloor * row_scale)) break;
            if (k > 0) {
                exhausted = true;
                break;
            }
            used[static_cast<std::size_t>(i)] = 1; // degenerate first row
            i = first_unused_row(used);
            if (i < 0) {
                exhausted = true;
                break;
            }
        }
        if (exhausted) {
            fac.converged = true;
            fac.final_stat = 0.0;
            break;
        }

        const Eigen::VectorXcd y = (r / r(j)).adjoint();
        Eigen::VectorXcd x = oracle.col(j);
        memlog::ScopedBytes x_bytes(std::int64_t(16) * m1);
        if (k > 0) {
            memlog::ScopedBytes update_bytes(std::int64_t(16) * m1);
            x -= stacked_forward(partial_columns(fac, k),
                                 fac.v.row(j).adjoint());
        }

        const double nx = x.norm(), ny = y.norm();
        s += (nx * ny) * (nx * ny);
        if (k > 0)
            s += 2.0 * (stacked_adjoint(partial_columns(fac, k), x)
                            .col(0)
                            .cwiseProduct(fac.v.adjoint() * y))
                           .real()
                           .sum();

        // Accept the column: q grid tensors, HOSVD at the nested tolerance.
        for (int comp = 0; comp < q; ++comp) {
            Tensor3 t(grid_dims);
            Eigen::Map<Eigen::VectorXcd>(t.data(), nv) =
                x.segment(comp * nv, nv);
            fac.tucker_u[static_cast<std::size_t>(comp)].push_back(
                hosvd(std::move(t), hosvd_eps));
        }
        fac.v.conservativeResize(m2, k + 1);
        fac.v.col(k) = y;

        const double scale = std::sqrt(std::max(s, 0.0));
        fac.final_stat = scale > 0 ? nx * ny / scale : 0.0;
        if (nx * ny <= eps * scale) {
            fac.converged = true;
            break;
        }

        used[static_cast<std::size_t>(i)] = 1;
        i = next_pivot_row(x, used);
    }
    return fac;
}

Eigen::RowVectorXcd row_of_compressed_u(const AcaFactors& fac, Index i) {
    if (!fac.compressed())
        throw ContractViolation("row_of_compressed_u: U is stored dense");
    const RowIndex ri = row_to_index(i, fac.grid_dims, fac.q);
    Eigen::RowVectorXcd r(fac.rank());
    for (Index l = 0; l < fac.rank(); ++l)
        r(l) = element(fac.tucker_u[static_cast<std::size_t>(ri.component)]
                                   [static_cast<std::size_t>(l)],
                       ri.f1, ri.f2, ri.f3);
    return r;
}

MatrixOracle coupling_oracle(const SceneSpec& scene) {
    validate_scene(scene);
    const Index nv = scene.grid.num_voxels();
    const int q = scene.kernel.q;

    MatrixOracle o;
    o.rows = q * nv;
    o.cols = scene.num_sources();
    o.col = [scene, nv, q](Index j) {
        const std::vector<Tensor3> tensors = assemble_column(scene, j);
        Eigen::VectorXcd c(q * nv);
        for (int k = 0; k < q; ++k)
            c.segment(k * nv, nv) = Eigen::Map<const Eigen::VectorXcd>(
                tensors[static_cast<std::size_t>(k)].data(), nv);
        return c;
    };
    o.row = [scene, q](Index i) {
        const RowIndex ri = row_to_index(i, scene.grid.dims, q);
        const Vector3 obs = scene.grid.center(ri.f1, ri.f2, ri.f3);
        Eigen::RowVectorXcd r(scene.num_sources());
        for (Index jj = 0; jj < scene.num_sources(); ++jj)
            r(jj) = eval_kernel(scene.kernel,
                                scene.sources[static_cast<std::size_t>(jj)],
                                obs)(ri.component);
        return r;
    };
    return o;
}

Matrix materialize(const MatrixOracle& oracle) {
    Matrix z(oracle.rows, oracle.cols);
    for (Index j = 0; j < oracle.cols; ++j) z.col(j) = oracle.col(j);
    return z;
}

} // namespace tuckmat
