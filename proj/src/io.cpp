#include "tuckmat/io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace tuckmat {

namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int s = 0; s < 32; s += 8)
            buf_.push_back(static_cast<char>((v >> s) & 0xff));
    }
    void f64(double d) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, sizeof(bits));
        for (int s = 0; s < 64; s += 8)
            buf_.push_back(static_cast<char>((bits >> s) & 0xff));
    }
    void c128(const Complex& z) {
        f64(z.real());
        f64(z.imag());
    }
    void magic(const char tag[4]) { buf_.insert(buf_.end(), tag, tag + 4); }

    void flush(const std::string& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot open '" + path + "' for writing");
        out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        if (!out) throw Error("short write to '" + path + "'");
    }

private:
    std::vector<char> buf_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : path_(path) {
        std::ifstream in(path, std::ios::binary | std::ios::ate);
        if (!in)
            throw ParseError("cannot open '" + path + "'", 0);
        const std::streamsize size = in.tellg();
        in.seekg(0);
        buf_.resize(static_cast<std::size_t>(size));
        in.read(buf_.data(), size);
        if (!in) throw ParseError("short read from '" + path + "'", 0);
    }

    std::uint64_t offset() const { return pos_; }
    std::uint64_t remaining() const { return buf_.size() - pos_; }

    void expect_magic(const char tag[4]) {
        need(4, "magic");
        if (std::memcmp(buf_.data() + pos_, tag, 4) != 0)
            throw ParseError("'" + path_ + "': bad magic, expected " +
                                 std::string(tag, 4),
                             pos_);
        pos_ += 4;
    }
    std::uint8_t u8() {
        need(1, "u8");
        return static_cast<std::uint8_t>(buf_[pos_++]);
    }
    std::uint32_t u32() {
        need(4, "u32");
        std::uint32_t v = 0;
        for (int s = 0; s < 32; s += 8)
            v |= static_cast<std::uint32_t>(
                     static_cast<unsigned char>(buf_[pos_++]))
                 << s;
        return v;
    }
    double f64() {
        need(8, "f64");
        std::uint64_t bits = 0;
        for (int s = 0; s < 64; s += 8)
            bits |= static_cast<std::uint64_t>(
                        static_cast<unsigned char>(buf_[pos_++]))
                    << s;
        double d;
        std::memcpy(&d, &bits, sizeof(d));
        return d;
    }
    Complex c128() {
        const double re = f64();
        const double im = f64();
        return {re, im};
    }
    void expect_end() const {
        if (pos_ != buf_.size())
            throw ParseError("'" + path_ + "': " +
                                 std::to_string(buf_.size() - pos_) +
                                 " trailing bytes",
                             pos_);
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("'" + path_ + "': " + what, pos_);
    }

private:
    void need(std::size_t n, const char* what) {
        if (buf_.size() - pos_ < n)
            throw ParseError("'" + path_ + "': truncated while reading " +
                                 std::string(what),
                             pos_);
    }

    std::string path_;
    std::vector<char> buf_;
    std::uint64_t pos_ = 0;
};

void write_tucker(Writer& w, const TuckerTensor& tt) {
    w.u32(static_cast<std::uint32_t>(tt.rank(1)));
    w.u32(static_cast<std::uint32_t>(tt.rank(2)));
    w.u32(static_cast<std::uint32_t>(tt.rank(3)));
    for (Index i = 0; i < tt.core.size(); ++i) w.c128(tt.core[i]);
    for (const Matrix& u : tt.factors)
        for (Index c = 0; c < u.cols(); ++c)
            for (Index r = 0; r < u.rows(); ++r) w.c128(u(r, c));
}

TuckerTensor read_tucker(Reader& r, const Dims3& dims) {
    Dims3 ranks;
    for (int g = 0; g < 3; ++g) {
        const std::uint32_t rank = r.u32();
        if (rank == 0 ||
            static_cast<Index>(rank) > dims[static_cast<std::size_t>(g)])
            r.fail("tucker rank " + std::to_string(rank) +
                   " out of range for mode " + std::to_string(g + 1));
        ranks[static_cast<std::size_t>(g)] = static_cast<Index>(rank);
    }
    TuckerTensor tt;
    tt.dims = dims;
    tt.core = Tensor3(ranks);
    for (Index i = 0; i < tt.core.size(); ++i) tt.core[i] = r.c128();
    for (int g = 0; g < 3; ++g) {
        Matrix& u = tt.factors[static_cast<std::size_t>(g)];
        u.resize(dims[static_cast<std::size_t>(g)],
                 ranks[static_cast<std::size_t>(g)]);
        for (Index c = 0; c < u.cols(); ++c)
            for (Index rr = 0; rr < u.rows(); ++rr) u(rr, c) = r.c128();
    }
    return tt;
}

struct Header {
    int q = 0;
    Index m = 0;
    Dims3 dims{0, 0, 0};
    double k0 = 0;
    double eps = 0;
    KernelOp op = KernelOp::EField;
};

void write_header(Writer& w, const char tag[4], const Header& h) {
    w.magic(tag);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(h.q));
    w.u32(static_cast<std::uint32_t>(h.m));
    for (int g = 0; g < 3; ++g)
        w.u32(static_cast<std::uint32_t>(h.dims[static_cast<std::size_t>(g)]));
    w.f64(h.k0);
    w.f64(h.eps);
    w.u8(static_cast<std::uint8_t>(h.op));
}

Header read_header(Reader& r, const char tag[4]) {
    r.expect_magic(tag);
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        r.fail("unsupported version " + std::to_string(version));
    Header h;
    h.q = static_cast<int>(r.u32());
    h.m = static_cast<Index>(r.u32());
    for (int g = 0; g < 3; ++g)
        h.dims[static_cast<std::size_t>(g)] = static_cast<Index>(r.u32());
    h.k0 = r.f64();
    h.eps = r.f64();
    const std::uint8_t op = r.u8();
    if (h.q < 1 || h.m < 1 || h.dims[0] < 1 || h.dims[1] < 1 || h.dims[2] < 1)
        r.fail("non-positive header dimensions");
    if (op > 1) r.fail("unknown kernel id " + std::to_string(op));
    h.op = static_cast<KernelOp>(op);
    return h;
}

} // namespace

void save_ctc1(const std::string& path, const CompressedCoupling& cc) {
    if (cc.columns.size() != static_cast<std::size_t>(cc.m))
        throw ContractViolation("save_ctc1: column count does not match m");
    Writer w;
    write_header(w, "CTC1",
                 {cc.q, cc.m, cc.grid_dims, cc.k0, cc.eps, cc.kernel_op});
    for (const auto& column : cc.columns) {
        if (column.size() != static_cast<std::size_t>(cc.q))
            throw ContractViolation("save_ctc1: column with wrong component count");
        for (const TuckerTensor& tt : column) write_tucker(w, tt);
    }
    w.flush(path);
}

CompressedCoupling load_ctc1(const std::string& path) {
    Reader r(path);
    const Header h = read_header(r, "CTC1");
    CompressedCoupling cc;
    cc.q = h.q;
    cc.m = h.m;
    cc.grid_dims = h.dims;
    cc.k0 = h.k0;
    cc.eps = h.eps;
    cc.kernel_op = h.op;
    cc.columns.resize(static_cast<std::size_t>(h.m));
    for (auto& column : cc.columns) {
        column.reserve(static_cast<std::size_t>(h.q));
        for (int k = 0; k < h.q; ++k)
            column.push_back(read_tucker(r, h.dims));
    }
    r.expect_end();
    return cc;
}

void save_cta1(const std::string& path, const AcaFactors& fac, double k0,
               KernelOp op) {
    if (!fac.compressed())
        throw ContractViolation("save_cta1: factors do not carry a compressed U");
    const Index rc = fac.rank();
    Writer w;
    write_header(w, "CTA1",
                 {fac.q, rc, fac.grid_dims, k0, fac.eps, op});
    for (Index l = 0; l < rc; ++l)
        for (int k = 0; k < fac.q; ++k)
            write_tucker(w, fac.tucker_u[static_cast<std::size_t>(k)]
                                        [static_cast<std::size_t>(l)]);
    for (Index c = 0; c < fac.v.cols(); ++c)
        for (Index rr = 0; rr < fac.v.rows(); ++rr) w.c128(fac.v(rr, c));
    w.flush(path);
}

Cta1File load_cta1(const std::string& path) {
    Reader r(path);
    const Header h = read_header(r, "CTA1");
    Cta1File file;
    file.k0 = h.k0;
    file.kernel_op = h.op;

    AcaFactors& fac = file.factors;
    fac.grid_dims = h.dims;
    fac.q = h.q;
    fac.eps = h.eps;
    fac.tucker_u.resize(static_cast<std::size_t>(h.q));
    const Index rc = h.m;
    for (Index l = 0; l < rc; ++l)
        for (int k = 0; k < h.q; ++k)
            fac.tucker_u[static_cast<std::size_t>(k)].push_back(
                read_tucker(r, h.dims));

    // V occupies everything after the U store: m2 * r_c complex scalars.
    const std::uint64_t rest = r.remaining();
    const std::uint64_t col_bytes = 16ull * static_cast<std::uint64_t>(rc);
    if (col_bytes == 0 || rest % col_bytes != 0 || rest / col_bytes == 0)
        r.fail("V block of " + std::to_string(rest) +
               " bytes is not a positive multiple of 16*r_c");
    const Index m2 = static_cast<Index>(rest / col_bytes);
    fac.v.resize(m2, rc);
    for (Index c = 0; c < rc; ++c)
        for (Index rr = 0; rr < m2; ++rr) fac.v(rr, c) = r.c128();
    r.expect_end();
    return file;
}

} // namespace tuckmat
