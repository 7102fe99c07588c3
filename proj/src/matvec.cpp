#include "tuckmat/matvec.hpp"

#include <atomic>
#include <vector>

#include "tuckmat/parallel.hpp"

namespace tuckmat {

std::int64_t reconstruct_madds(const TuckerTensor& tt) {
    const Index n1 = tt.dims[0], n2 = tt.dims[1], n3 = tt.dims[2];
    const Index r1 = tt.core.dim(1), r2 = tt.core.dim(2), r3 = tt.core.dim(3);
    return std::int64_t(n1) * r1 * r2 * r3 + std::int64_t(n1) * n2 * r2 * r3 +
           std::int64_t(n1) * n2 * n3 * r3;
}

MultiVector stacked_forward(const TuckerColumns& z, const MultiVector& x,
                            int workers, OpCounts* ops) {
    if (x.rows() != z.ncols)
        throw ContractViolation("stacked_forward: x has " +
                                std::to_string(x.rows()) + " rows, expected " +
                                std::to_string(z.ncols));
    const Index nv = volume(z.grid_dims);
    const Index rows = z.rows();
    const Index p = x.cols();

    std::atomic<std::int64_t> dec_ops{0}, acc_ops{0};
    const int nworkers =
        std::max(1, std::min<int>(workers, static_cast<int>(z.ncols)));
    std::vector<MultiVector> partial(
        static_cast<std::size_t>(nworkers));

    // Column chunks per worker, private accumulators reduced at the end.
    std::atomic<Index> next{0};
    parallel_for(static_cast<std::size_t>(nworkers), nworkers,
                 [&](std::size_t w) {
                     MultiVector& y = partial[w];
                     y = MultiVector::Zero(rows, p);
                     std::int64_t my_dec = 0, my_acc = 0;
                     for (;;) {
                         const Index j = next.fetch_add(1);
                         if (j >= z.ncols) break;
                         for (int k = 0; k < z.q; ++k) {
                             const TuckerTensor& tt = z.tensor(j, k);
                             const Tensor3 dense = reconstruct(tt);
                             y.middleRows(k * nv, nv).noalias() +=
                                 Eigen::Map<const Eigen::VectorXcd>(
                                     dense.data(), nv) *
                                 x.row(j);
                             my_dec += reconstruct_madds(tt);
                             my_acc += std::int64_t(nv) * p;
                         }
                     }
                     dec_ops += my_dec;
                     acc_ops += my_acc;
                 });

    MultiVector y = std::move(partial[0]);
    for (std::size_t w = 1; w < partial.size(); ++w) y += partial[w];
    if (ops) {
        ops->decompress_madds += dec_ops.load();
        ops->accumulate_madds += acc_ops.load();
    }
    return y;
}

MultiVector stacked_adjoint(const TuckerColumns& z, const MultiVector& x,
                            int workers, OpCounts* ops) {
    if (x.rows() != z.rows())
        throw ContractViolation("stacked_adjoint: x has " +
                                std::to_string(x.rows()) + " rows, expected " +
                                std::to_string(z.rows()));
    const Index nv = volume(z.grid_dims);
    const Index p = x.cols();

    MultiVector y(z.ncols, p);
    std::atomic<std::int64_t> dec_ops{0}, acc_ops{0};
    parallel_for(static_cast<std::size_t>(z.ncols), workers,
                 [&](std::size_t jz) {
                     const Index j = static_cast<Index>(jz);
                     Eigen::RowVectorXcd row =
                         Eigen::RowVectorXcd::Zero(p);
                     std::int64_t my_dec = 0;
                     for (int k = 0; k < z.q; ++k) {
                         const TuckerTensor& tt = z.tensor(j, k);
                         const Tensor3 dense = reconstruct(tt);
                         row += Eigen::Map<const Eigen::VectorXcd>(
                                    dense.data(), nv)
                                    .adjoint() *
                                x.middleRows(k * nv, nv);
                         my_dec += reconstruct_madds(tt);
                     }
                     y.row(j) = row;
                     dec_ops += my_dec;
                     acc_ops += std::int64_t(z.q) * nv * p;
                 });
    if (ops) {
        ops->decompress_madds += dec_ops.load();
        ops->accumulate_madds += acc_ops.load();
    }
    return y;
}

namespace {

TuckerColumns columns_of(const CompressedCoupling& cc) {
    TuckerColumns z;
    z.tensor = [&cc](Index j, int k) -> const TuckerTensor& {
        return cc.columns[static_cast<std::size_t>(j)]
                         [static_cast<std::size_t>(k)];
    };
    z.ncols = cc.m;
    z.q = cc.q;
    z.grid_dims = cc.grid_dims;
    return z;
}

TuckerColumns columns_of(const AcaFactors& fac) {
    TuckerColumns z;
    z.tensor = [&fac](Index l, int k) -> const TuckerTensor& {
        return fac.tucker_u[static_cast<std::size_t>(k)]
                           [static_cast<std::size_t>(l)];
    };
    z.ncols = fac.rank();
    z.q = fac.q;
    z.grid_dims = fac.grid_dims;
    return z;
}

} // namespace

MultiVector forward(const CompressedCoupling& cc, const MultiVector& x,
                    int workers, OpCounts* ops) {
    if (x.rows() != cc.m)
        throw ContractViolation("forward: x has " + std::to_string(x.rows()) +
                                " rows, expected m = " + std::to_string(cc.m));
    return stacked_forward(columns_of(cc), x, workers, ops);
}

MultiVector adjoint(const CompressedCoupling& cc, const MultiVector& phi,
                    int workers, OpCounts* ops) {
    if (phi.rows() != cc.rows())
        throw ContractViolation("adjoint: phi has " +
                                std::to_string(phi.rows()) +
                                " rows, expected q*n_v = " +
                                std::to_string(cc.rows()));
    return stacked_adjoint(columns_of(cc), phi, workers, ops);
}

MultiVector aca_forward(const AcaFactors& fac, const MultiVector& x,
                        int workers) {
    if (x.rows() != fac.cols())
        throw ContractViolation("aca_forward: x has " +
                                std::to_string(x.rows()) +
                                " rows, expected " +
                                std::to_string(fac.cols()));
    const MultiVector w = fac.v.adjoint() * x;
    if (!fac.compressed()) return fac.dense_u * w;
    return stacked_forward(columns_of(fac), w, workers);
}

MultiVector aca_adjoint(const AcaFactors& fac, const MultiVector& phi,
                        int workers) {
    if (phi.rows() != fac.rows())
        throw ContractViolation("aca_adjoint: phi has " +
                                std::to_string(phi.rows()) +
                                " rows, expected " +
                                std::to_string(fac.rows()));
    MultiVector t;
    if (fac.compressed())
        t = stacked_adjoint(columns_of(fac), phi, workers);
    else
        t = fac.dense_u.adjoint() * phi;
    return fac.v * t;
}

MultiVector dense_forward(const SceneSpec& scene, const MultiVector& x,
                          std::int64_t mem_cap_bytes) {
    if (x.rows() != scene.num_sources())
        throw ContractViolation("dense_forward: x has " +
                                std::to_string(x.rows()) +
                                " rows, expected m = " +
                                std::to_string(scene.num_sources()));
    return assemble_full(scene, mem_cap_bytes) * x;
}

MultiVector dense_adjoint(const SceneSpec& scene, const MultiVector& phi,
                          std::int64_t mem_cap_bytes) {
    const Index rows = scene.kernel.q * scene.grid.num_voxels();
    if (phi.rows() != rows)
        throw ContractViolation("dense_adjoint: phi has " +
                                std::to_string(phi.rows()) +
                                " rows, expected q*n_v = " +
                                std::to_string(rows));
    return assemble_full(scene, mem_cap_bytes).adjoint() * phi;
}

} // namespace tuckmat
