// AVX2+FMA kernel variants. Compiled only on x86-64 with -mavx2 -mfma;
// runtime selection happens in kernels.cpp.

#include "qmse/kernels.hpp"

#if QMSE_AVX2_BUILD

#include <immintrin.h>

#include <bit>

namespace qmse::kern {

namespace {

inline size_t insert_bit(size_t base, int t) {
    size_t low = base & ((size_t{1} << t) - 1);
    return ((base >> t) << (t + 1)) | low;
}

// Complex constant prepared for two-FMA complex multiply:
// cmul(v, c) lane-wise on vectors holding two complex doubles.
struct CConst {
    __m256d re;
    __m256d im_pm; // [-im, +im, -im, +im]
};

inline CConst cconst(cplx c) {
    return {_mm256_set1_pd(c.real()),
            _mm256_setr_pd(-c.imag(), c.imag(), -c.imag(), c.imag())};
}

inline CConst cconst2(cplx c0, cplx c1) {
    return {_mm256_setr_pd(c0.real(), c0.real(), c1.real(), c1.real()),
            _mm256_setr_pd(-c0.imag(), c0.imag(), -c1.imag(), c1.imag())};
}

inline __m256d swap_ri(__m256d v) { return _mm256_permute_pd(v, 0x5); }

inline __m256d cmul(__m256d v, CConst c) {
    return _mm256_fmadd_pd(v, c.re, _mm256_mul_pd(swap_ri(v), c.im_pm));
}

inline __m256d cmul_acc(__m256d acc, __m256d v, CConst c) {
    return _mm256_fmadd_pd(v, c.re, _mm256_fmadd_pd(swap_ri(v), c.im_pm, acc));
}

void a_apply_1q(cplx* amps, size_t n, int target, const cplx* u) {
    double* d = reinterpret_cast<double*>(amps);
    if (target == 0) {
        // each vector holds one (a0, a1) pair; mix across 128-bit halves
        CConst u00_10 = cconst2(u[0], u[2]);
        CConst u01_11 = cconst2(u[1], u[3]);
        for (size_t i = 0; i < 2 * n; i += 4) {
            __m256d v = _mm256_loadu_pd(d + i);
            __m256d lo = _mm256_permute2f128_pd(v, v, 0x00);
            __m256d hi = _mm256_permute2f128_pd(v, v, 0x11);
            _mm256_storeu_pd(d + i, cmul_acc(cmul(lo, u00_10), hi, u01_11));
        }
        return;
    }
    CConst u00 = cconst(u[0]), u01 = cconst(u[1]), u10 = cconst(u[2]), u11 = cconst(u[3]);
    const size_t stride = size_t{2} << target; // doubles between pair halves
    for (size_t base = 0; base < 2 * n; base += 2 * stride) {
        for (size_t j = base; j < base + stride; j += 4) {
            __m256d va = _mm256_loadu_pd(d + j);
            __m256d vb = _mm256_loadu_pd(d + j + stride);
            _mm256_storeu_pd(d + j, cmul_acc(cmul(va, u00), vb, u01));
            _mm256_storeu_pd(d + j + stride, cmul_acc(cmul(va, u10), vb, u11));
        }
    }
}

void a_apply_ctrl_1q(cplx* amps, size_t n, int control, int target, const cplx* u) {
    double* d = reinterpret_cast<double*>(amps);
    const size_t cbit = size_t{1} << control;
    const size_t tbit = size_t{1} << target;
    int lo = control < target ? control : target;
    int hi = control < target ? target : control;
    const size_t quarter = n >> 2;

    if (lo >= 1 && target >= 1) {
        CConst u00 = cconst(u[0]), u01 = cconst(u[1]), u10 = cconst(u[2]), u11 = cconst(u[3]);
        for (size_t k = 0; k < quarter; k += 2) {
            size_t i0 = insert_bit(insert_bit(k, lo), hi) | cbit;
            size_t i1 = i0 | tbit;
            __m256d va = _mm256_loadu_pd(d + 2 * i0);
            __m256d vb = _mm256_loadu_pd(d + 2 * i1);
            _mm256_storeu_pd(d + 2 * i0, cmul_acc(cmul(va, u00), vb, u01));
            _mm256_storeu_pd(d + 2 * i1, cmul_acc(cmul(va, u10), vb, u11));
        }
        return;
    }
    if (target == 0 && control >= 1) {
        CConst u00_10 = cconst2(u[0], u[2]);
        CConst u01_11 = cconst2(u[1], u[3]);
        for (size_t k = 0; k < quarter; ++k) {
            size_t i0 = insert_bit(insert_bit(k, 0), control) | cbit;
            __m256d v = _mm256_loadu_pd(d + 2 * i0);
            __m256d lo2 = _mm256_permute2f128_pd(v, v, 0x00);
            __m256d hi2 = _mm256_permute2f128_pd(v, v, 0x11);
            _mm256_storeu_pd(d + 2 * i0, cmul_acc(cmul(lo2, u00_10), hi2, u01_11));
        }
        return;
    }
    // control on bit 0: pair indices are odd, stride-2 access; scalar
    for (size_t k = 0; k < quarter; ++k) {
        size_t i = insert_bit(insert_bit(k, lo), hi) | cbit;
        size_t i1 = i | tbit;
        cplx a = amps[i], b = amps[i1];
        amps[i] = u[0] * a + u[1] * b;
        amps[i1] = u[2] * a + u[3] * b;
    }
}

void a_apply_2q_mix(cplx* amps, size_t n, int qa, int qb, cplx c, cplx s_outer,
                    cplx s_inner) {
    double* d = reinterpret_cast<double*>(amps);
    const size_t abit = size_t{1} << qa;
    const size_t bbit = size_t{1} << qb;
    int lo = qa < qb ? qa : qb;
    int hi = qa < qb ? qb : qa;
    const size_t quarter = n >> 2;

    if (lo >= 1) {
        CConst cc = cconst(c), so = cconst(s_outer), si = cconst(s_inner);
        for (size_t k = 0; k < quarter; k += 2) {
            size_t i00 = insert_bit(insert_bit(k, lo), hi);
            size_t i01 = i00 | abit;
            size_t i10 = i00 | bbit;
            size_t i11 = i00 | abit | bbit;
            __m256d v00 = _mm256_loadu_pd(d + 2 * i00);
            __m256d v01 = _mm256_loadu_pd(d + 2 * i01);
            __m256d v10 = _mm256_loadu_pd(d + 2 * i10);
            __m256d v11 = _mm256_loadu_pd(d + 2 * i11);
            _mm256_storeu_pd(d + 2 * i00, cmul_acc(cmul(v00, cc), v11, so));
            _mm256_storeu_pd(d + 2 * i11, cmul_acc(cmul(v11, cc), v00, so));
            _mm256_storeu_pd(d + 2 * i01, cmul_acc(cmul(v01, cc), v10, si));
            _mm256_storeu_pd(d + 2 * i10, cmul_acc(cmul(v10, cc), v01, si));
        }
        return;
    }
    // one of the qubits is bit 0: vectors pair (x0, x1) and (x2, x3)
    // where lane pairing crosses vectors: (x0,x3) outer, (x1,x2) inner
    CConst cc = cconst(c);
    CConst s_fwd = cconst2(s_outer, s_inner);
    CConst s_rev = cconst2(s_inner, s_outer);
    int high = (qa == 0) ? qb : qa;
    const size_t hbit = size_t{1} << high;
    for (size_t k = 0; k < quarter; ++k) {
        size_t i00 = insert_bit(insert_bit(k, 0), high);
        size_t ihx = i00 | hbit;
        __m256d v0 = _mm256_loadu_pd(d + 2 * i00); // (x00, x01)
        __m256d v1 = _mm256_loadu_pd(d + 2 * ihx); // (x10, x11)
        __m256d v1x = _mm256_permute2f128_pd(v1, v1, 0x01); // (x11, x10)
        __m256d v0x = _mm256_permute2f128_pd(v0, v0, 0x01); // (x01, x00)
        _mm256_storeu_pd(d + 2 * i00, cmul_acc(cmul(v0, cc), v1x, s_fwd));
        _mm256_storeu_pd(d + 2 * ihx, cmul_acc(cmul(v1, cc), v0x, s_rev));
    }
}

void a_apply_2q_diag(cplx* amps, size_t n, int qa, int qb, cplx f_same, cplx f_diff) {
    double* d = reinterpret_cast<double*>(amps);
    const size_t abit = size_t{1} << qa;
    const size_t bbit = size_t{1} << qb;
    int lo = qa < qb ? qa : qb;
    int hi = qa < qb ? qb : qa;
    const size_t quarter = n >> 2;

    if (lo >= 1) {
        CConst fs = cconst(f_same), fd = cconst(f_diff);
        for (size_t k = 0; k < quarter; k += 2) {
            size_t i00 = insert_bit(insert_bit(k, lo), hi);
            size_t i01 = i00 | abit;
            size_t i10 = i00 | bbit;
            size_t i11 = i00 | abit | bbit;
            _mm256_storeu_pd(d + 2 * i00, cmul(_mm256_loadu_pd(d + 2 * i00), fs));
            _mm256_storeu_pd(d + 2 * i11, cmul(_mm256_loadu_pd(d + 2 * i11), fs));
            _mm256_storeu_pd(d + 2 * i01, cmul(_mm256_loadu_pd(d + 2 * i01), fd));
            _mm256_storeu_pd(d + 2 * i10, cmul(_mm256_loadu_pd(d + 2 * i10), fd));
        }
        return;
    }
    CConst f_fwd = cconst2(f_same, f_diff);
    CConst f_rev = cconst2(f_diff, f_same);
    int high = (qa == 0) ? qb : qa;
    const size_t hbit = size_t{1} << high;
    for (size_t k = 0; k < quarter; ++k) {
        size_t i00 = insert_bit(insert_bit(k, 0), high);
        size_t ihx = i00 | hbit;
        _mm256_storeu_pd(d + 2 * i00, cmul(_mm256_loadu_pd(d + 2 * i00), f_fwd));
        _mm256_storeu_pd(d + 2 * ihx, cmul(_mm256_loadu_pd(d + 2 * ihx), f_rev));
    }
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx a_inner(const cplx* a, const cplx* b, size_t n) {
    const double* da = reinterpret_cast<const double*>(a);
    const double* db = reinterpret_cast<const double*>(b);
    __m256d acc_dir = _mm256_setzero_pd();
    __m256d acc_sw = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(da + 2 * i);
        __m256d vb = _mm256_loadu_pd(db + 2 * i);
        acc_dir = _mm256_fmadd_pd(va, vb, acc_dir);
        acc_sw = _mm256_fmadd_pd(swap_ri(va), vb, acc_sw);
    }
    alignas(32) double sd[4], sw[4];
    _mm256_store_pd(sd, acc_dir);
    _mm256_store_pd(sw, acc_sw);
    double re = sd[0] + sd[1] + sd[2] + sd[3];
    double im = (sw[1] - sw[0]) + (sw[3] - sw[2]);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double a_sumabs2(const cplx* a, size_t n) {
    const double* d = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(d + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

double a_expect_z(const cplx* a, size_t n, uint64_t zmask) {
    if (n < 4) return scalar_kernels().expect_z(a, n, zmask);
    const double* d = reinterpret_cast<const double*>(a);
    // |.|^2 lanes come out of hadd in order [i, i+2, i+1, i+3]
    auto sgn = [&](uint64_t j) { return (std::popcount(j & zmask & 3) & 1) ? -1.0 : 1.0; };
    __m256d pat = _mm256_setr_pd(sgn(0), sgn(2), sgn(1), sgn(3));
    __m256d npat = _mm256_sub_pd(_mm256_setzero_pd(), pat);
    const uint64_t himask = zmask & ~uint64_t{3};
    __m256d acc = _mm256_setzero_pd();
    for (size_t i = 0; i < n; i += 4) {
        __m256d v0 = _mm256_loadu_pd(d + 2 * i);
        __m256d v1 = _mm256_loadu_pd(d + 2 * i + 4);
        __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
        bool flip = std::popcount(i & himask) & 1;
        acc = _mm256_fmadd_pd(h, flip ? npat : pat, acc);
    }
    return hsum(acc);
}

} // namespace

const Kernels* avx2_kernels_impl() {
    static const Kernels k = {
        "avx2",       a_apply_1q, a_apply_ctrl_1q, a_apply_2q_mix,
        a_apply_2q_diag, a_inner,    a_sumabs2,       a_expect_z,
    };
    return &k;
}

} // namespace qmse::kern

#endif // QMSE_AVX2_BUILD
