#include "tuckmat/tensor.hpp"

#include <Eigen/SVD>

namespace tuckmat {

namespace {

Index checked_volume(Index n1, Index n2, Index n3) {
    if (n1 <= 0 || n2 <= 0 || n3 <= 0)
        throw ContractViolation("Tensor3: dimensions must be positive");
    return n1 * n2 * n3;
}

void check_mode(int mode) {
    if (mode < 1 || mode > 3)
        throw ContractViolation("tensor mode must be 1, 2 or 3, got " +
                                std::to_string(mode));
}

} // namespace

Tensor3::Tensor3(Index n1, Index n2, Index n3)
    : dims_{n1, n2, n3},
      data_(static_cast<std::size_t>(checked_volume(n1, n2, n3))) {
    memlog::add(bytes());
}

Tensor3::Tensor3(const Tensor3& o) : dims_(o.dims_), data_(o.data_) {
    memlog::add(bytes());
}

Tensor3::Tensor3(Tensor3&& o) noexcept
    : dims_(o.dims_), data_(std::move(o.data_)) {
    o.dims_ = {0, 0, 0};
    o.data_.clear();
}

Tensor3& Tensor3::operator=(const Tensor3& o) {
    if (this != &o) {
        memlog::add(-bytes());
        dims_ = o.dims_;
        data_ = o.data_;
        memlog::add(bytes());
    }
    return *this;
}

Tensor3& Tensor3::operator=(Tensor3&& o) noexcept {
    if (this != &o) {
        memlog::add(-bytes());
        dims_ = o.dims_;
        data_ = std::move(o.data_);
        o.dims_ = {0, 0, 0};
        o.data_.clear();
    }
    return *this;
}

Tensor3::~Tensor3() { memlog::add(-bytes()); }

double Tensor3::norm() const {
    if (data_.empty()) return 0.0;
    return Eigen::Map<const Eigen::VectorXcd>(data_.data(), size()).norm();
}

Matrix unfold(const Tensor3& t, int mode) {
    check_mode(mode);
    const Index n1 = t.dim(1), n2 = t.dim(2), n3 = t.dim(3);
    switch (mode) {
    case 1:
        // (n1 x n2*n3): column index i2 + n2*i3 is the storage order.
        return Eigen::Map<const Matrix>(t.data(), n1, n2 * n3);
    case 2: {
        // (n2 x n1*n3): column index i1 + n1*i3.
        Matrix a(n2, n1 * n3);
        for (Index i3 = 0; i3 < n3; ++i3)
            a.middleCols(n1 * i3, n1) =
                Eigen::Map<const Matrix>(t.data() + n1 * n2 * i3, n1, n2)
                    .transpose();
        return a;
    }
    default:
        // (n3 x n1*n2): column index i1 + n1*i2.
        return Eigen::Map<const Matrix>(t.data(), n1 * n2, n3).transpose();
    }
}

Tensor3 mode_product(const Tensor3& t, const Matrix& m, int mode) {
    check_mode(mode);
    if (m.cols() != t.dim(mode))
        throw ContractViolation(
            "mode_product: matrix has " + std::to_string(m.cols()) +
            " columns but tensor extent along mode " + std::to_string(mode) +
            " is " + std::to_string(t.dim(mode)));

    const Index n1 = t.dim(1), n2 = t.dim(2), n3 = t.dim(3);
    const Index r = m.rows();
    Dims3 od = t.dims();
    od[static_cast<std::size_t>(mode - 1)] = r;
    Tensor3 out(od);

    using CMap = Eigen::Map<const Matrix>;
    using MMap = Eigen::Map<Matrix>;
    switch (mode) {
    case 1:
        MMap(out.data(), r, n2 * n3) = m * CMap(t.data(), n1, n2 * n3);
        break;
    case 2:
        for (Index i3 = 0; i3 < n3; ++i3)
            MMap(out.data() + n1 * r * i3, n1, r) =
                CMap(t.data() + n1 * n2 * i3, n1, n2) * m.transpose();
        break;
    default:
        MMap(out.data(), n1 * n2, r) =
            CMap(t.data(), n1 * n2, n3) * m.transpose();
        break;
    }
    return out;
}

TuckerTensor hosvd(const Tensor3& t, double eps) {
    return hosvd(Tensor3(t), eps);
}

TuckerTensor hosvd(Tensor3&& t, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw ContractViolation("hosvd: eps must lie in (0,1)");
    if (t.empty()) throw ContractViolation("hosvd: empty tensor");

    TuckerTensor tt;
    tt.dims = t.dims();

    const double fro = t.norm();
    if (fro < 1e-300) {
        // Underflowed column (very distant source): rank-(1,1,1) zero.
        tt.core = Tensor3(1, 1, 1);
        for (int g = 0; g < 3; ++g) {
            tt.factors[static_cast<std::size_t>(g)] =
                Matrix::Zero(t.dim(g + 1), 1);
            tt.factors[static_cast<std::size_t>(g)](0, 0) = 1.0;
        }
        return tt;
    }

    // Total squared error of truncated HOSVD is bounded by the sum of the
    // per-mode discarded energies; an even three-way split meets eps.
    const double budget = (eps * eps / 3.0) * (fro * fro);
    for (int mode = 1; mode <= 3; ++mode) {
        Matrix a = unfold(t, mode);
        memlog::ScopedBytes tracked(
            static_cast<std::int64_t>(a.size()) *
            static_cast<std::int64_t>(sizeof(Complex)));
        Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
        const Eigen::VectorXd& sv = svd.singularValues();

        Index r = sv.size();
        double discarded = 0.0;
        while (r > 1) {
            const double next = discarded + sv(r - 1) * sv(r - 1);
            if (next > budget) break;
            discarded = next;
            --r;
        }
        tt.factors[static_cast<std::size_t>(mode - 1)] =
            svd.matrixU().leftCols(r);
    }

    tt.core = mode_product(t, tt.factors[0].adjoint(), 1);
    t = Tensor3(); // release the input before the remaining projections
    tt.core = mode_product(tt.core, tt.factors[1].adjoint(), 2);
    tt.core = mode_product(tt.core, tt.factors[2].adjoint(), 3);
    return tt;
}

Tensor3 reconstruct(const TuckerTensor& tt) {
    Tensor3 out = mode_product(tt.core, tt.factors[0], 1);
    out = mode_product(out, tt.factors[1], 2);
    out = mode_product(out, tt.factors[2], 3);
    return out;
}

Complex element(const TuckerTensor& tt, Index i1, Index i2, Index i3) {
    if (i1 < 0 || i1 >= tt.dims[0] || i2 < 0 || i2 >= tt.dims[1] || i3 < 0 ||
        i3 >= tt.dims[2])
        throw ContractViolation("element: index out of range");

    const Index r1 = tt.core.dim(1), r2 = tt.core.dim(2), r3 = tt.core.dim(3);
    // Contract the three factor rows into the core, one mode at a time.
    Eigen::RowVectorXcd w =
        tt.factors[0].row(i1) *
        Eigen::Map<const Matrix>(tt.core.data(), r1, r2 * r3);
    Eigen::RowVectorXcd s =
        tt.factors[1].row(i2) * Eigen::Map<const Matrix>(w.data(), r2, r3);
    return s * tt.factors[2].row(i3).transpose();
}

Index tucker_scalars(const TuckerTensor& tt) {
    Index n = tt.core.size();
    for (int g = 0; g < 3; ++g)
        n += tt.factors[static_cast<std::size_t>(g)].size();
    return n;
}

} // namespace tuckmat
