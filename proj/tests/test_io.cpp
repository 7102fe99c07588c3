#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "tuckmat/aca.hpp"
#include "tuckmat/io.hpp"
#include "tuckmat/matvec.hpp"

using namespace tuckmat;
namespace fs = std::filesystem;

namespace {

bool bits_equal(double a, double b) {
    std::uint64_t ba, bb;
    std::memcpy(&ba, &a, 8);
    std::memcpy(&bb, &b, 8);
    return ba == bb;
}

bool bits_equal(const Complex& a, const Complex& b) {
    return bits_equal(a.real(), b.real()) && bits_equal(a.imag(), b.imag());
}

bool bits_equal(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Index c = 0; c < a.cols(); ++c)
        for (Index r = 0; r < a.rows(); ++r)
            if (!bits_equal(a(r, c), b(r, c))) return false;
    return true;
}

bool bits_equal(const TuckerTensor& a, const TuckerTensor& b) {
    if (a.dims != b.dims || a.core.dims() != b.core.dims()) return false;
    for (Index i = 0; i < a.core.size(); ++i)
        if (!bits_equal(a.core[i], b.core[i])) return false;
    for (int g = 0; g < 3; ++g)
        if (!bits_equal(a.factors[g], b.factors[g])) return false;
    return true;
}

std::string temp_path(const char* name) {
    return (fs::temp_directory_path() / name).string();
}

SceneSpec io_scene() {
    const VoxelGrid grid = make_centered_grid({0, 0, 0}, 0.05, {6, 5, 4});
    const KernelSpec kernel{KernelOp::EField, wavenumber_from_mhz(298.06), 3};
    return make_loop_scene(0.5, {0, 0.8, 0}, 5, grid, kernel);
}

void truncate_file(const std::string& path, std::uintmax_t keep) {
    fs::resize_file(path, keep);
}

} // namespace

TEST_CASE("CTC1 round trip is bit-exact") {
    const SceneSpec scene = io_scene();
    const CompressedCoupling cc = compress_matrix(scene, 1e-8);
    const std::string path = temp_path("tuckmat_roundtrip.ctc1");
    save_ctc1(path, cc);
    const CompressedCoupling back = load_ctc1(path);

    CHECK(back.q == cc.q);
    CHECK(back.m == cc.m);
    CHECK(back.grid_dims == cc.grid_dims);
    CHECK(bits_equal(back.k0, cc.k0));
    CHECK(bits_equal(back.eps, cc.eps));
    CHECK(back.kernel_op == cc.kernel_op);
    for (Index j = 0; j < cc.m; ++j)
        for (int k = 0; k < cc.q; ++k)
            CHECK(bits_equal(back.columns[j][k], cc.columns[j][k]));
    fs::remove(path);
}

TEST_CASE("products from a loaded CTC1 equal in-memory products bit-exactly") {
    const SceneSpec scene = io_scene();
    const CompressedCoupling cc = compress_matrix(scene, 1e-8);
    const std::string path = temp_path("tuckmat_products.ctc1");
    save_ctc1(path, cc);
    const CompressedCoupling back = load_ctc1(path);

    const MultiVector x = oracles::random_matrix(cc.m, 4, 3);
    CHECK(bits_equal(Matrix(forward(cc, x, 1)), Matrix(forward(back, x, 1))));
    const MultiVector phi = oracles::random_matrix(cc.rows(), 4, 4);
    CHECK(bits_equal(Matrix(adjoint(cc, phi, 1)), Matrix(adjoint(back, phi, 1))));
    fs::remove(path);
}

TEST_CASE("CTA1 round trip is bit-exact and preserves metadata") {
    const SceneSpec scene = io_scene();
    const AcaFactors fac =
        tucker_aca(coupling_oracle(scene), scene.grid.dims, 3, 1e-4);
    REQUIRE(fac.rank() >= 1);
    const std::string path = temp_path("tuckmat_roundtrip.cta1");
    save_cta1(path, fac, scene.kernel.k0, scene.kernel.op);
    const Cta1File back = load_cta1(path);

    CHECK(bits_equal(back.k0, scene.kernel.k0));
    CHECK(back.kernel_op == scene.kernel.op);
    CHECK(back.factors.q == 3);
    CHECK(back.factors.grid_dims == scene.grid.dims);
    CHECK(back.factors.rank() == fac.rank());
    CHECK(bits_equal(back.factors.eps, fac.eps));
    CHECK(bits_equal(back.factors.v, fac.v));
    for (int k = 0; k < 3; ++k)
        for (Index l = 0; l < fac.rank(); ++l)
            CHECK(bits_equal(back.factors.tucker_u[k][l], fac.tucker_u[k][l]));

    const MultiVector x = oracles::random_matrix(fac.cols(), 3, 9);
    CHECK(bits_equal(Matrix(aca_forward(fac, x, 1)),
                     Matrix(aca_forward(back.factors, x, 1))));
    fs::remove(path);
}

TEST_CASE("missing and malformed files raise parse errors with offsets") {
    CHECK_THROWS_AS(load_ctc1(temp_path("tuckmat_does_not_exist.ctc1")),
                    ParseError);

    const std::string path = temp_path("tuckmat_bad.ctc1");
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOPE12345678";
    }
    try {
        load_ctc1(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.byte_offset == 0);
        CHECK(std::string(e.what()).find("magic") != std::string::npos);
    }
    fs::remove(path);
}

TEST_CASE("truncated containers report the failing byte offset") {
    const SceneSpec scene = io_scene();
    const CompressedCoupling cc = compress_matrix(scene, 1e-4);
    const std::string path = temp_path("tuckmat_trunc.ctc1");
    save_ctc1(path, cc);
    const std::uintmax_t full = fs::file_size(path);
    truncate_file(path, full / 2);
    try {
        load_ctc1(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.byte_offset <= full / 2);
        CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
    }
    fs::remove(path);
}

TEST_CASE("trailing bytes after the payload are rejected") {
    const SceneSpec scene = io_scene();
    const CompressedCoupling cc = compress_matrix(scene, 1e-4);
    const std::string path = temp_path("tuckmat_trailing.ctc1");
    save_ctc1(path, cc);
    {
        std::ofstream out(path, std::ios::binary | std::ios::app);
        out << "extra";
    }
    CHECK_THROWS_AS(load_ctc1(path), ParseError);
    fs::remove(path);
}

TEST_CASE("CTA1 rejects V blocks that are not a multiple of the rank") {
    const SceneSpec scene = io_scene();
    const AcaFactors fac =
        tucker_aca(coupling_oracle(scene), scene.grid.dims, 3, 1e-3);
    const std::string path = temp_path("tuckmat_badv.cta1");
    save_cta1(path, fac, scene.kernel.k0, scene.kernel.op);
    {
        std::ofstream out(path, std::ios::binary | std::ios::app);
        const char pad[8] = {0};
        out.write(pad, sizeof(pad));
    }
    if (fac.rank() > 1) {
        CHECK_THROWS_AS(load_cta1(path), ParseError);
    }
    fs::remove(path);
}

TEST_CASE("CTA1 refuses a dense-only factorization") {
    AcaFactors dense;
    dense.dense_u = oracles::random_matrix(10, 2, 1);
    dense.v = oracles::random_matrix(5, 2, 2);
    CHECK_THROWS_AS(save_cta1(temp_path("tuckmat_dense.cta1"), dense, 1.0,
                              KernelOp::EField),
                    ContractViolation);
}

TEST_CASE("kernel id round-trips for the magnetic kernel") {
    const VoxelGrid grid = make_centered_grid({0, 0, 0}, 0.05, {4, 4, 4});
    const KernelSpec kernel{KernelOp::HField, wavenumber_from_mhz(123.0), 3};
    const SceneSpec scene = make_loop_scene(0.5, {0, 0.8, 0}, 4, grid, kernel);
    const CompressedCoupling cc = compress_matrix(scene, 1e-6);
    const std::string path = temp_path("tuckmat_hfield.ctc1");
    save_ctc1(path, cc);
    CHECK(load_ctc1(path).kernel_op == KernelOp::HField);
    fs::remove(path);
}
