#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "tuckmat/tensor.hpp"

namespace tuckmat {

using Vector3  = Eigen::Vector3d;
using CVector3 = Eigen::Vector3cd;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr std::int64_t kDefaultMemCapBytes = std::int64_t(4) << 30;

// Free-space wavenumber for a frequency given in MHz.
inline double wavenumber_from_mhz(double f_mhz) {
    return 2.0 * std::numbers::pi * f_mhz * 1e6 / kSpeedOfLight;
}

// Uniform isotropic voxel grid. Voxel (i1,i2,i3) is centered at
// origin + spacing * (i + 1/2) per axis.
struct VoxelGrid {
    Vector3 origin{0, 0, 0};
    double spacing = 0;
    Dims3 dims{0, 0, 0};

    Index num_voxels() const { return volume(dims); }
    Vector3 center(Index i1, Index i2, Index i3) const {
        return origin + spacing * Vector3(static_cast<double>(i1) + 0.5,
                                          static_cast<double>(i2) + 0.5,
                                          static_cast<double>(i3) + 0.5);
    }
};

// Grid of `dims` voxels with spacing h, centered on `center`.
VoxelGrid make_centered_grid(const Vector3& center, double spacing,
                             const Dims3& dims);

// Point-dipole stand-in for one surface discretization edge. `weight`
// carries the edge length (meters).
struct EdgeSource {
    Vector3 midpoint{0, 0, 0};
    Vector3 direction{1, 0, 0}; // unit vector
    double weight = 1.0;
};

enum class KernelOp : std::uint8_t { EField = 0, HField = 1 };

struct KernelSpec {
    KernelOp op = KernelOp::EField;
    double k0 = 0;  // rad/m
    int q = 3;      // field components per voxel
};

// One coupling matrix: a voxel grid observed by m surface sources through a
// Green's-function kernel.
struct SceneSpec {
    VoxelGrid grid;
    std::vector<EdgeSource> sources;
    KernelSpec kernel;

    Index num_sources() const { return static_cast<Index>(sources.size()); }
};

// Checks all scene invariants, including the separation guard: every source
// midpoint must stay at least 2h away from every voxel center. Throws
// SceneError naming the offending source.
void validate_scene(const SceneSpec& scene);

// e^{-i k0 R} / (4 pi R) with R = |r - rp|. Throws SingularityError for
// R < 1e-12 m.
Complex greens(const Vector3& r, const Vector3& rp, double k0);

// Field of a point dipole p at src.midpoint observed at obs, i.e.
// curl curl (g * weight * p). Requires k0 > 0 (time-harmonic only).
CVector3 efield_kernel(const EdgeSource& src, const Vector3& obs, double k0);

// curl (g * weight * p); valid for k0 >= 0.
CVector3 hfield_kernel(const EdgeSource& src, const Vector3& obs, double k0);

// Kernel dispatch on the operator choice.
CVector3 eval_kernel(const KernelSpec& kernel, const EdgeSource& src,
                     const Vector3& obs);

// The q grid-shaped tensors of coupling-matrix column j: tensor k holds the
// k-th Cartesian field component over all voxel centers.
std::vector<Tensor3> assemble_column(const SceneSpec& scene, Index j);

// Bytes of the fully assembled coupling matrix (16-byte complex scalars).
std::int64_t full_matrix_bytes(int q, Index num_voxels, Index num_sources);

// Dense (q*n_v x m) coupling matrix; column j is assemble_column(j) with
// component-major rows. Refuses to allocate past mem_cap_bytes.
Matrix assemble_full(const SceneSpec& scene,
                     std::int64_t mem_cap_bytes = kDefaultMemCapBytes);

// Circular coil of n_segments tangential edge sources in the x-z plane
// through `center`; midpoints sit on the circle at equal angular spacing and
// weights equal the segment chord length.
SceneSpec make_loop_scene(double radius, const Vector3& center,
                          int n_segments, const VoxelGrid& grid,
                          const KernelSpec& kernel);

// Square plate in the x-z plane through `center`: edges_per_side^2 sources
// on the uniform lattice of cell centers, directions alternating between
// the two in-plane axes, weight = lattice pitch (side / edges_per_side).
SceneSpec make_plate_scene(double side, const Vector3& center,
                           int edges_per_side, const VoxelGrid& grid,
                           const KernelSpec& kernel);

} // namespace tuckmat
