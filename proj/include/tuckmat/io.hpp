#pragma once

#include <string>

#include "tuckmat/aca.hpp"
#include "tuckmat/compress.hpp"

namespace tuckmat {

// "CTC1" container: little-endian header {magic, version u32, q u32, m u32,
// n1 n2 n3 u32, k0 f64, eps f64, kernel id u8}, then per column and per
// component {r1 r2 r3 u32, core complex f64 pairs (f1-fastest), U1 U2 U3
// column-major f64 pairs}. Round-trips are bit-exact.
void save_ctc1(const std::string& path, const CompressedCoupling& cc);
CompressedCoupling load_ctc1(const std::string& path);

// "CTA1" container: the CTC1 payload for the compressed U store (with m
// standing for the cross rank r_c and eps for the ACA tolerance), followed
// by V as m2 * r_c complex f64 pairs, column-major. m2 is recovered from the
// remaining file length.
struct Cta1File {
    AcaFactors factors;
    double k0 = 0;
    KernelOp kernel_op = KernelOp::EField;
};

void save_cta1(const std::string& path, const AcaFactors& fac, double k0,
               KernelOp op);
Cta1File load_cta1(const std::string& path);

} // namespace tuckmat
