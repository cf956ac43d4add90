#include "qmse/kernels.hpp"

#include <bit>

namespace qmse::kern {

namespace {

// Expands `base` by inserting a zero bit at position `t`.
inline size_t insert_bit(size_t base, int t) {
    size_t low = base & ((size_t{1} << t) - 1);
    return ((base >> t) << (t + 1)) | low;
}

void s_apply_1q(cplx* amps, size_t n, int target, const cplx* u) {
    const size_t half = n >> 1;
    for (size_t k = 0; k < half; ++k) {
        size_t i0 = insert_bit(k, target);
        size_t i1 = i0 | (size_t{1} << target);
        cplx a = amps[i0], b = amps[i1];
        amps[i0] = u[0] * a + u[1] * b;
        amps[i1] = u[2] * a + u[3] * b;
    }
}

void s_apply_ctrl_1q(cplx* amps, size_t n, int control, int target, const cplx* u) {
    const size_t quarter = n >> 2;
    int lo = control < target ? control : target;
    int hi = control < target ? target : control;
    const size_t cbit = size_t{1} << control;
    const size_t tbit = size_t{1} << target;
    for (size_t k = 0; k < quarter; ++k) {
        size_t i = insert_bit(insert_bit(k, lo), hi) | cbit;
        size_t i1 = i | tbit;
        cplx a = amps[i], b = amps[i1];
        amps[i] = u[0] * a + u[1] * b;
        amps[i1] = u[2] * a + u[3] * b;
    }
}

void s_apply_2q_mix(cplx* amps, size_t n, int qa, int qb, cplx c, cplx s_outer,
                    cplx s_inner) {
    const size_t quarter = n >> 2;
    int lo = qa < qb ? qa : qb;
    int hi = qa < qb ? qb : qa;
    const size_t abit = size_t{1} << qa;
    const size_t bbit = size_t{1} << qb;
    for (size_t k = 0; k < quarter; ++k) {
        size_t i00 = insert_bit(insert_bit(k, lo), hi);
        size_t i01 = i00 | abit;
        size_t i10 = i00 | bbit;
        size_t i11 = i00 | abit | bbit;
        cplx a = amps[i00], d = amps[i11];
        amps[i00] = c * a + s_outer * d;
        amps[i11] = s_outer * a + c * d;
        cplx p = amps[i01], q = amps[i10];
        amps[i01] = c * p + s_inner * q;
        amps[i10] = s_inner * p + c * q;
    }
}

void s_apply_2q_diag(cplx* amps, size_t n, int qa, int qb, cplx f_same, cplx f_diff) {
    const size_t abit = size_t{1} << qa;
    const size_t bbit = size_t{1} << qb;
    for (size_t i = 0; i < n; ++i) {
        bool ba = i & abit, bb = i & bbit;
        amps[i] *= (ba == bb) ? f_same : f_diff;
    }
}

cplx s_inner(const cplx* a, const cplx* b, size_t n) {
    double re = 0.0, im = 0.0;
    for (size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double s_sumabs2(const cplx* a, size_t n) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i)
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

double s_expect_z(const cplx* a, size_t n, uint64_t zmask) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double p = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
        s += (std::popcount(i & zmask) & 1) ? -p : p;
    }
    return s;
}

} // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {
        "scalar",     s_apply_1q, s_apply_ctrl_1q, s_apply_2q_mix,
        s_apply_2q_diag, s_inner,    s_sumabs2,       s_expect_z,
    };
    return k;
}

} // namespace qmse::kern
