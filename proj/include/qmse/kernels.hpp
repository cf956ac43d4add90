#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace qmse::kern {

using cplx = std::complex<double>;

// Raw amplitude-array kernels behind the statevector. Every operation
// has a portable scalar reference implementation and may have SIMD
// variants; the active table is chosen once at startup from CPU features
// and the QMSE_SIMD environment override (scalar|avx2|auto). Variants
// must agree with the scalar path to floating-point roundoff, which the
// kernel equivalence tests enforce.
struct Kernels {
    const char* name;

    // amps[i0], amps[i1] <- u * (amps[i0], amps[i1]) over all pairs that
    // differ in bit `target`. u is row-major 2x2.
    void (*apply_1q)(cplx* amps, size_t n, int target, const cplx* u);

    // same update restricted to indices with bit `control` set
    void (*apply_ctrl_1q)(cplx* amps, size_t n, int control, int target, const cplx* u);

    // coupled pair rotation: for index groups spanned by bits (qa, qb),
    //   (a00, a11) <- (c*a00 + s_outer*a11, s_outer*a00 + c*a11)
    //   (a01, a10) <- (c*a01 + s_inner*a10, s_inner*a01 + c*a10)
    void (*apply_2q_mix)(cplx* amps, size_t n, int qa, int qb, cplx c, cplx s_outer,
                         cplx s_inner);

    // diagonal phases: f_same where bits qa == qb, f_diff otherwise
    void (*apply_2q_diag)(cplx* amps, size_t n, int qa, int qb, cplx f_same, cplx f_diff);

    cplx (*inner)(const cplx* a, const cplx* b, size_t n); // <a|b>
    double (*sumabs2)(const cplx* a, size_t n);
    // sum of |a_i|^2 * (-1)^popcount(i & zmask)
    double (*expect_z)(const cplx* a, size_t n, uint64_t zmask);
};

const Kernels& scalar_kernels();
const Kernels* avx2_kernels(); // nullptr when unsupported by build or CPU
const Kernels& active();

} // namespace qmse::kern
