#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "tuckmat/errors.hpp"
#include "tuckmat/memlog.hpp"

namespace tuckmat {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Index   = Eigen::Index;
using Dims3   = std::array<Index, 3>;

inline Index volume(const Dims3& d) { return d[0] * d[1] * d[2]; }

// Dense complex 3D array. Storage is linear with the first index fastest:
// (i1,i2,i3) lives at i1 + n1*i2 + n1*n2*i3. Allocations are reported to
// memlog so tests can watch peak dense working memory.
class Tensor3 {
public:
    Tensor3() noexcept = default;
    Tensor3(Index n1, Index n2, Index n3);
    explicit Tensor3(const Dims3& d) : Tensor3(d[0], d[1], d[2]) {}

    Tensor3(const Tensor3& o);
    Tensor3(Tensor3&& o) noexcept;
    Tensor3& operator=(const Tensor3& o);
    Tensor3& operator=(Tensor3&& o) noexcept;
    ~Tensor3();

    const Dims3& dims() const { return dims_; }
    Index dim(int mode) const { return dims_[static_cast<std::size_t>(mode - 1)]; }
    Index size() const { return static_cast<Index>(data_.size()); }
    bool empty() const { return data_.empty(); }

    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }

    Complex& operator()(Index i1, Index i2, Index i3) {
        return data_[static_cast<std::size_t>(linear(i1, i2, i3))];
    }
    const Complex& operator()(Index i1, Index i2, Index i3) const {
        return data_[static_cast<std::size_t>(linear(i1, i2, i3))];
    }
    Complex& operator[](Index i) { return data_[static_cast<std::size_t>(i)]; }
    const Complex& operator[](Index i) const { return data_[static_cast<std::size_t>(i)]; }

    Index linear(Index i1, Index i2, Index i3) const {
        return i1 + dims_[0] * (i2 + dims_[1] * i3);
    }

    double norm() const;

private:
    std::int64_t bytes() const {
        return static_cast<std::int64_t>(data_.size()) *
               static_cast<std::int64_t>(sizeof(Complex));
    }

    Dims3 dims_{0, 0, 0};
    std::vector<Complex> data_;
};

// Tucker representation: core of shape (r1,r2,r3) plus one factor matrix per
// mode, factors[g] of shape (n_{g+1} x r_{g+1}) with orthonormal columns.
struct TuckerTensor {
    Tensor3 core;
    std::array<Matrix, 3> factors;
    Dims3 dims{0, 0, 0};

    Index rank(int mode) const { return core.dim(mode); }
    Index max_rank() const {
        return std::max(core.dim(1), std::max(core.dim(2), core.dim(3)));
    }
};

// Mode-g unfolding: rows are mode g, the remaining modes (in increasing
// order) are flattened as columns. Returns a fresh matrix.
Matrix unfold(const Tensor3& t, int mode);

// Contraction of t with m along `mode` (1-based). m has shape
// (n_out x extent of t along mode); for mode 1 the result obeys
// out(i,b,c) = sum_a t(a,b,c) * m(i,a), analogously for modes 2 and 3.
Tensor3 mode_product(const Tensor3& t, const Matrix& m, int mode);

// Truncated HOSVD. Per mode keeps the smallest rank whose discarded
// singular-value energy stays below eps^2/3 * |t|_F^2, which bounds the
// total relative reconstruction error by eps. A (near-)zero tensor yields
// a rank-(1,1,1) zero core. eps must lie in (0,1).
TuckerTensor hosvd(const Tensor3& t, double eps);

// Same, but consumes t: the input buffer is released before the core
// projection, keeping peak dense memory at one extra tensor-sized buffer.
TuckerTensor hosvd(Tensor3&& t, double eps);

// core x1 U1 x2 U2 x3 U3, back to a dense tensor of shape tt.dims.
Tensor3 reconstruct(const TuckerTensor& tt);

// Single entry of reconstruct(tt) in O(r1*r2*r3), no dense materialization.
Complex element(const TuckerTensor& tt, Index i1, Index i2, Index i3);

// Complex scalars held by a Tucker representation: r1*r2*r3 + sum_g n_g*r_g.
Index tucker_scalars(const TuckerTensor& tt);

} // namespace tuckmat
