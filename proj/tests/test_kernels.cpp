#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmse/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using qmse::kern::cplx;
using qmse::kern::Kernels;

namespace {

std::vector<cplx> random_state(int k, uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto u = [&] { return double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    std::vector<cplx> a(size_t(1) << k);
    for (auto& x : a) x = cplx(u(), u());
    return a;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// hand-rolled references for the documented kernel contracts

void naive_1q(std::vector<cplx>& a, int t, const cplx* u) {
    for (size_t i = 0; i < a.size(); ++i) {
        if ((i >> t) & 1) continue;
        size_t j = i | (size_t(1) << t);
        cplx x = a[i], y = a[j];
        a[i] = u[0] * x + u[1] * y;
        a[j] = u[2] * x + u[3] * y;
    }
}

void naive_ctrl_1q(std::vector<cplx>& a, int c, int t, const cplx* u) {
    for (size_t i = 0; i < a.size(); ++i) {
        if ((i >> t) & 1) continue;
        if (!((i >> c) & 1)) continue;
        size_t j = i | (size_t(1) << t);
        cplx x = a[i], y = a[j];
        a[i] = u[0] * x + u[1] * y;
        a[j] = u[2] * x + u[3] * y;
    }
}

void naive_2q_mix(std::vector<cplx>& a, int qa, int qb, cplx c, cplx so, cplx si) {
    size_t ba = size_t(1) << qa, bb = size_t(1) << qb;
    for (size_t i = 0; i < a.size(); ++i) {
        if ((i & ba) || (i & bb)) continue;
        size_t i00 = i, i01 = i | bb, i10 = i | ba, i11 = i | ba | bb;
        cplx x = a[i00], y = a[i11];
        a[i00] = c * x + so * y;
        a[i11] = so * x + c * y;
        x = a[i01], y = a[i10];
        a[i01] = c * x + si * y;
        a[i10] = si * x + c * y;
    }
}

void naive_2q_diag(std::vector<cplx>& a, int qa, int qb, cplx fs, cplx fd) {
    for (size_t i = 0; i < a.size(); ++i) {
        bool same = ((i >> qa) & 1) == ((i >> qb) & 1);
        a[i] *= same ? fs : fd;
    }
}

cplx random_unit(std::mt19937_64& rng) {
    auto u = [&] { return double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    return cplx(u(), u());
}

} // namespace

TEST_CASE("active table is one of the published ones") {
    const Kernels* act = &qmse::kern::active();
    bool known = act == &qmse::kern::scalar_kernels() || act == qmse::kern::avx2_kernels();
    CHECK(known);
    CHECK(act->name != nullptr);
}

TEST_CASE("scalar apply_1q matches the pairwise reference") {
    const Kernels& sk = qmse::kern::scalar_kernels();
    std::mt19937_64 rng(11);
    for (int k = 1; k <= 9; ++k) {
        for (int t = 0; t < k; ++t) {
            cplx u[4] = {random_unit(rng), random_unit(rng), random_unit(rng),
                         random_unit(rng)};
            auto a = random_state(k, 1000 + uint64_t(k) * 16 + t);
            auto b = a;
            sk.apply_1q(a.data(), a.size(), t, u);
            naive_1q(b, t, u);
            CHECK(max_diff(a, b) < 1e-14);
        }
    }
}

TEST_CASE("scalar apply_ctrl_1q matches the reference") {
    const Kernels& sk = qmse::kern::scalar_kernels();
    std::mt19937_64 rng(12);
    for (int k = 2; k <= 9; ++k) {
        for (int c = 0; c < k; ++c) {
            for (int t = 0; t < k; ++t) {
                if (c == t) continue;
                cplx u[4] = {random_unit(rng), random_unit(rng), random_unit(rng),
                             random_unit(rng)};
                auto a = random_state(k, 2000 + uint64_t(k) * 256 + c * 16 + t);
                auto b = a;
                sk.apply_ctrl_1q(a.data(), a.size(), c, t, u);
                naive_ctrl_1q(b, c, t, u);
                CHECK(max_diff(a, b) < 1e-14);
            }
        }
    }
}

TEST_CASE("scalar apply_2q_mix matches the reference") {
    const Kernels& sk = qmse::kern::scalar_kernels();
    std::mt19937_64 rng(13);
    for (int k = 2; k <= 9; ++k) {
        for (int qa = 0; qa < k; ++qa) {
            for (int qb = 0; qb < k; ++qb) {
                if (qa == qb) continue;
                cplx c = random_unit(rng), so = random_unit(rng), si = random_unit(rng);
                auto a = random_state(k, 3000 + uint64_t(k) * 256 + qa * 16 + qb);
                auto b = a;
                sk.apply_2q_mix(a.data(), a.size(), qa, qb, c, so, si);
                naive_2q_mix(b, qa, qb, c, so, si);
                CHECK(max_diff(a, b) < 1e-14);
            }
        }
    }
}

TEST_CASE("scalar apply_2q_diag matches the reference") {
    const Kernels& sk = qmse::kern::scalar_kernels();
    std::mt19937_64 rng(14);
    for (int k = 2; k <= 9; ++k) {
        for (int qa = 0; qa < k; ++qa) {
            for (int qb = qa + 1; qb < k; ++qb) {
                cplx fs = random_unit(rng), fd = random_unit(rng);
                auto a = random_state(k, 4000 + uint64_t(k) * 256 + qa * 16 + qb);
                auto b = a;
                sk.apply_2q_diag(a.data(), a.size(), qa, qb, fs, fd);
                naive_2q_diag(b, qa, qb, fs, fd);
                CHECK(max_diff(a, b) < 1e-14);
            }
        }
    }
}

TEST_CASE("scalar reductions match direct sums") {
    const Kernels& sk = qmse::kern::scalar_kernels();
    for (int k : {1, 3, 6, 10}) {
        auto a = random_state(k, 50 + k);
        auto b = random_state(k, 60 + k);

        cplx ip = 0.0;
        double s2 = 0.0;
        for (size_t i = 0; i < a.size(); ++i) {
            ip += std::conj(a[i]) * b[i];
            s2 += std::norm(a[i]);
        }
        CHECK(std::abs(sk.inner(a.data(), b.data(), a.size()) - ip) < 1e-12);
        CHECK(sk.sumabs2(a.data(), a.size()) == doctest::Approx(s2).epsilon(1e-13));

        for (uint64_t zmask : {uint64_t(1), uint64_t(0b101), (uint64_t(1) << k) - 1}) {
            double ez = 0.0;
            for (size_t i = 0; i < a.size(); ++i) {
                int par = __builtin_popcountll(i & zmask) & 1;
                ez += (par ? -1.0 : 1.0) * std::norm(a[i]);
            }
            CHECK(sk.expect_z(a.data(), a.size(), zmask) ==
                  doctest::Approx(ez).epsilon(1e-13));
        }
    }
}

TEST_CASE("avx2 table agrees with scalar on every entry point") {
    const Kernels* vk = qmse::kern::avx2_kernels();
    if (!vk) return; // host without AVX2: nothing to compare
    const Kernels& sk = qmse::kern::scalar_kernels();
    std::mt19937_64 rng(77);

    for (int k = 1; k <= 11; ++k) {
        size_t n = size_t(1) << k;
        for (int rep = 0; rep < 4; ++rep) {
            int t = int(rng() % uint64_t(k));
            cplx u[4] = {random_unit(rng), random_unit(rng), random_unit(rng),
                         random_unit(rng)};
            auto a = random_state(k, 9000 + uint64_t(k) * 64 + rep);
            auto b = a;
            sk.apply_1q(a.data(), n, t, u);
            vk->apply_1q(b.data(), n, t, u);
            CHECK(max_diff(a, b) < 1e-13);
        }
    }

    for (int k = 2; k <= 11; ++k) {
        size_t n = size_t(1) << k;
        for (int rep = 0; rep < 4; ++rep) {
            int qa = int(rng() % uint64_t(k));
            int qb = int(rng() % uint64_t(k - 1));
            if (qb >= qa) ++qb;
            cplx u[4] = {random_unit(rng), random_unit(rng), random_unit(rng),
                         random_unit(rng)};
            cplx c = random_unit(rng), so = random_unit(rng), si = random_unit(rng);
            cplx fs = random_unit(rng), fd = random_unit(rng);

            auto a = random_state(k, 9500 + uint64_t(k) * 64 + rep);
            auto b = a;
            sk.apply_ctrl_1q(a.data(), n, qa, qb, u);
            vk->apply_ctrl_1q(b.data(), n, qa, qb, u);
            CHECK(max_diff(a, b) < 1e-13);

            a = random_state(k, 9600 + uint64_t(k) * 64 + rep);
            b = a;
            sk.apply_2q_mix(a.data(), n, qa, qb, c, so, si);
            vk->apply_2q_mix(b.data(), n, qa, qb, c, so, si);
            CHECK(max_diff(a, b) < 1e-13);

            a = random_state(k, 9700 + uint64_t(k) * 64 + rep);
            b = a;
            sk.apply_2q_diag(a.data(), n, qa, qb, fs, fd);
            vk->apply_2q_diag(b.data(), n, qa, qb, fs, fd);
            CHECK(max_diff(a, b) < 1e-13);
        }
    }

    for (int k : {1, 4, 8, 12}) {
        size_t n = size_t(1) << k;
        auto a = random_state(k, 300 + k);
        auto b = random_state(k, 400 + k);
        CHECK(std::abs(sk.inner(a.data(), b.data(), n) - vk->inner(a.data(), b.data(), n)) <
              1e-12);
        CHECK(sk.sumabs2(a.data(), n) ==
              doctest::Approx(vk->sumabs2(a.data(), n)).epsilon(1e-13));
        uint64_t zmask = (uint64_t(1) << k) - 1;
        CHECK(sk.expect_z(a.data(), n, zmask) ==
              doctest::Approx(vk->expect_z(a.data(), n, zmask)).epsilon(1e-12));
        CHECK(sk.expect_z(a.data(), n, 1) ==
              doctest::Approx(vk->expect_z(a.data(), n, 1)).epsilon(1e-12));
    }
}
