#include "tuckmat/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tuckmat {

namespace {

constexpr double kSingularRadius = 1e-12; // meters

double checked_separation(const VoxelGrid& g, const Vector3& point) {
    // Nearest voxel center: clamp the per-axis cell index.
    Vector3 nearest;
    for (int a = 0; a < 3; ++a) {
        const double cell = (point[a] - g.origin[a]) / g.spacing - 0.5;
        const double hi = static_cast<double>(g.dims[static_cast<std::size_t>(a)] - 1);
        const double idx = std::clamp(std::round(cell), 0.0, hi);
        nearest[a] = g.origin[a] + g.spacing * (idx + 0.5);
    }
    return (point - nearest).norm();
}

} // namespace

VoxelGrid make_centered_grid(const Vector3& center, double spacing,
                             const Dims3& dims) {
    if (!(spacing > 0))
        throw ContractViolation("voxel grid spacing must be positive");
    if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
        throw ContractViolation("voxel grid dims must be positive");
    VoxelGrid g;
    g.spacing = spacing;
    g.dims = dims;
    for (int a = 0; a < 3; ++a)
        g.origin[a] = center[a] -
                      0.5 * spacing *
                          static_cast<double>(dims[static_cast<std::size_t>(a)]);
    return g;
}

void validate_scene(const SceneSpec& scene) {
    const VoxelGrid& g = scene.grid;
    if (!(g.spacing > 0) || g.dims[0] <= 0 || g.dims[1] <= 0 || g.dims[2] <= 0)
        throw ContractViolation("scene grid is invalid");
    if (scene.kernel.q != 3)
        throw ContractViolation("kernel q must be 3 (one field vector per voxel)");
    if (scene.kernel.k0 < 0)
        throw ContractViolation("wavenumber k0 must be non-negative");
    if (scene.kernel.op == KernelOp::EField && !(scene.kernel.k0 > 0))
        throw ContractViolation("electric-field kernel requires k0 > 0");
    if (scene.sources.empty())
        throw ContractViolation("scene needs at least one source");

    for (std::size_t j = 0; j < scene.sources.size(); ++j) {
        const EdgeSource& s = scene.sources[j];
        if (!(s.weight > 0))
            throw SceneError("source " + std::to_string(j) +
                                 " has non-positive weight",
                             j);
        if (std::abs(s.direction.norm() - 1.0) > 1e-12)
            throw SceneError("source " + std::to_string(j) +
                                 " direction is not a unit vector",
                             j);
        const double sep = checked_separation(g, s.midpoint);
        if (sep < 2.0 * g.spacing)
            throw SceneError("source " + std::to_string(j) +
                                 " violates the separation guard: distance " +
                                 std::to_string(sep) + " m < 2h = " +
                                 std::to_string(2.0 * g.spacing) + " m",
                             j);
    }
}

Complex greens(const Vector3& r, const Vector3& rp, double k0) {
    const double R = (r - rp).norm();
    if (R < kSingularRadius)
        throw SingularityError("greens: source and observation coincide (R = " +
                               std::to_string(R) + " m)");
    return std::polar(1.0 / (4.0 * std::numbers::pi * R), -k0 * R);
}

CVector3 efield_kernel(const EdgeSource& src, const Vector3& obs, double k0) {
    if (!(k0 > 0))
        throw ContractViolation("efield_kernel: k0 must be positive");
    const Vector3 rvec = obs - src.midpoint;
    const double R = rvec.norm();
    if (R < kSingularRadius)
        throw SingularityError("efield_kernel: observation point hits the source");
    const Vector3 rhat = rvec / R;
    const Complex g = std::polar(1.0 / (4.0 * std::numbers::pi * R), -k0 * R);

    // curl curl (g p) = A p + B (rhat.p) rhat for constant p:
    //   A = g (k0^2 - i k0/R - 1/R^2),  B = g (-k0^2 + 3 i k0/R + 3/R^2).
    const double R2 = R * R;
    const Complex a = g * Complex(k0 * k0 - 1.0 / R2, -k0 / R);
    const Complex b = g * Complex(-(k0 * k0) + 3.0 / R2, 3.0 * k0 / R);
    const double pr = rhat.dot(src.direction);

    return src.weight *
           (a * src.direction.cast<Complex>() + b * pr * rhat.cast<Complex>());
}

CVector3 hfield_kernel(const EdgeSource& src, const Vector3& obs, double k0) {
    if (k0 < 0)
        throw ContractViolation("hfield_kernel: k0 must be non-negative");
    const Vector3 rvec = obs - src.midpoint;
    const double R = rvec.norm();
    if (R < kSingularRadius)
        throw SingularityError("hfield_kernel: observation point hits the source");
    const Vector3 rhat = rvec / R;
    const Complex g = std::polar(1.0 / (4.0 * std::numbers::pi * R), -k0 * R);

    // curl (g p) = grad g x p, grad g = -(i k0 + 1/R) g rhat.
    const Complex gc = -g * Complex(1.0 / R, k0);
    return (src.weight * gc) * rhat.cross(src.direction).cast<Complex>();
}

CVector3 eval_kernel(const KernelSpec& kernel, const EdgeSource& src,
                     const Vector3& obs) {
    return kernel.op == KernelOp::EField
               ? efield_kernel(src, obs, kernel.k0)
               : hfield_kernel(src, obs, kernel.k0);
}

std::vector<Tensor3> assemble_column(const SceneSpec& scene, Index j) {
    if (j < 0 || j >= scene.num_sources())
        throw ContractViolation("assemble_column: source index " +
                                std::to_string(j) + " out of range");

    const VoxelGrid& g = scene.grid;
    const EdgeSource& src = scene.sources[static_cast<std::size_t>(j)];
    const int q = scene.kernel.q;

    std::vector<Tensor3> tensors;
    tensors.reserve(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) tensors.emplace_back(g.dims);

    Index v = 0;
    for (Index i3 = 0; i3 < g.dims[2]; ++i3)
        for (Index i2 = 0; i2 < g.dims[1]; ++i2)
            for (Index i1 = 0; i1 < g.dims[0]; ++i1, ++v) {
                const CVector3 field =
                    eval_kernel(scene.kernel, src, g.center(i1, i2, i3));
                for (int k = 0; k < q; ++k)
                    tensors[static_cast<std::size_t>(k)][v] = field[k];
            }
    return tensors;
}

std::int64_t full_matrix_bytes(int q, Index num_voxels, Index num_sources) {
    return std::int64_t(16) * q * num_voxels * num_sources;
}

Matrix assemble_full(const SceneSpec& scene, std::int64_t mem_cap_bytes) {
    const Index nv = scene.grid.num_voxels();
    const Index m = scene.num_sources();
    const int q = scene.kernel.q;
    const std::int64_t bytes = full_matrix_bytes(q, nv, m);
    if (bytes > mem_cap_bytes)
        throw CapacityError(
            "assemble_full: dense matrix needs " + std::to_string(bytes) +
            " bytes, above the cap of " + std::to_string(mem_cap_bytes) +
            " bytes; use compressed assembly instead");

    Matrix z(q * nv, m);
    for (Index j = 0; j < m; ++j) {
        const std::vector<Tensor3> tensors = assemble_column(scene, j);
        for (int k = 0; k < q; ++k)
            z.col(j).segment(k * nv, nv) = Eigen::Map<const Eigen::VectorXcd>(
                tensors[static_cast<std::size_t>(k)].data(), nv);
    }
    return z;
}

SceneSpec make_loop_scene(double radius, const Vector3& center, int n_segments,
                          const VoxelGrid& grid, const KernelSpec& kernel) {
    if (n_segments < 3)
        throw ContractViolation("make_loop_scene: need at least 3 segments");
    if (!(radius > 0))
        throw ContractViolation("make_loop_scene: radius must be positive");

    SceneSpec scene;
    scene.grid = grid;
    scene.kernel = kernel;
    scene.sources.reserve(static_cast<std::size_t>(n_segments));
    const double chord =
        2.0 * radius * std::sin(std::numbers::pi / static_cast<double>(n_segments));
    for (int s = 0; s < n_segments; ++s) {
        const double theta = 2.0 * std::numbers::pi * (static_cast<double>(s) + 0.5) /
                             static_cast<double>(n_segments);
        EdgeSource e;
        e.midpoint =
            center + radius * Vector3(std::cos(theta), 0.0, std::sin(theta));
        e.direction = Vector3(-std::sin(theta), 0.0, std::cos(theta));
        e.weight = chord;
        scene.sources.push_back(e);
    }
    validate_scene(scene);
    return scene;
}

SceneSpec make_plate_scene(double side, const Vector3& center,
                           int edges_per_side, const VoxelGrid& grid,
                           const KernelSpec& kernel) {
    if (edges_per_side < 1)
        throw ContractViolation("make_plate_scene: need at least one edge per side");
    if (!(side > 0))
        throw ContractViolation("make_plate_scene: side must be positive");

    SceneSpec scene;
    scene.grid = grid;
    scene.kernel = kernel;
    const double pitch = side / static_cast<double>(edges_per_side);
    scene.sources.reserve(
        static_cast<std::size_t>(edges_per_side) *
        static_cast<std::size_t>(edges_per_side));
    for (int a = 0; a < edges_per_side; ++a)
        for (int b = 0; b < edges_per_side; ++b) {
            EdgeSource e;
            const double u = pitch * (static_cast<double>(a) + 0.5) - 0.5 * side;
            const double w = pitch * (static_cast<double>(b) + 0.5) - 0.5 * side;
            e.midpoint = center + Vector3(u, 0.0, w);
            e.direction = ((a + b) % 2 == 0) ? Vector3(1, 0, 0) : Vector3(0, 0, 1);
            e.weight = pitch;
            scene.sources.push_back(e);
        }
    validate_scene(scene);
    return scene;
}

} // namespace tuckmat
