#pragma once

// Dense polynomial multiplication modulo any prime p < 2^62, built on
// number-theoretic transforms over a fixed family of 62-bit primes
// q = c·2^s + 1 and Garner recombination of the residue images.
// Public entry points take and return plain residue vectors (ascending
// exponent, no trailing zero limbs); Montgomery form is an internal detail
// of the transform kernels.  Small products fall through to schoolbook or
// Karatsuba routines tuned by the thresholds below.

#include <array>
#include <bit>
#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

#include "pfeas/nt.hpp"

namespace pfeas {

using DenseVec = std::vector<u64>;

struct NttPrimeInfo {
    u64 q;
    u64 g;  // primitive root mod q
    u32 two_adicity;
};

// Primes c·2^s + 1 just below 2^62, descending.  Generators were fixed by
// factoring q−1 and checking g^((q−1)/r) != 1 for every prime r | q−1; the
// unit tests re-verify primality, 2-adicity and generator order.
inline constexpr std::array<NttPrimeInfo, 6> ntt_primes = {{
    {4611686018326724609ULL, 3, 25},
    {4611686018309947393ULL, 5, 24},
    {4611686018058289153ULL, 5, 25},
    {4611686017974403073ULL, 3, 24},
    {4611686017781465089ULL, 14, 23},
    {4611686017773076481ULL, 3, 24},
}};

// ---------------------------------------------------------------------------
// transform plans

class NttPlan {
  public:
    const Mont64 m;

    NttPlan(u32 prime_idx, u32 lg)
        : m(ntt_primes[prime_idx].q), n_(size_t{1} << lg) {
        const auto& P = ntt_primes[prime_idx];
        if (lg > P.two_adicity)
            throw std::invalid_argument("transform size exceeds prime 2-adicity");
        u64 w = m.pow(m.to(P.g), (P.q - 1) >> lg);  // primitive n-th root
        u64 wi = m.inv(w);
        if (n_ >= 2) {
            fw_.resize(n_ - 1);
            iv_.resize(n_ - 1);
            size_t off = 0;
            for (size_t len = n_; len >= 2; len >>= 1) {
                size_t half = len >> 1;
                u64 wl = m.pow(w, static_cast<u64>(n_ / len));
                u64 cur = m.one();
                for (size_t j = 0; j < half; ++j) {
                    fw_[off + j] = cur;
                    cur = m.mul(cur, wl);
                }
                off += half;
            }
            off = 0;
            for (size_t len = 2; len <= n_; len <<= 1) {
                size_t half = len >> 1;
                u64 wl = m.pow(wi, static_cast<u64>(n_ / len));
                u64 cur = m.one();
                for (size_t j = 0; j < half; ++j) {
                    iv_[off + j] = cur;
                    cur = m.mul(cur, wl);
                }
                off += half;
            }
        }
        ninv_ = m.inv(m.to(static_cast<u64>(n_)));
    }

    size_t size() const { return n_; }

    // decimation in frequency: natural order in, bit-reversed order out
    void forward(u64* a) const {
        size_t off = 0;
        for (size_t len = n_; len >= 2; len >>= 1) {
            size_t half = len >> 1;
            const u64* w = fw_.data() + off;
            for (size_t i0 = 0; i0 < n_; i0 += len) {
                u64* x = a + i0;
                u64* y = x + half;
                for (size_t j = 0; j < half; ++j) {
                    u64 u = x[j], v = y[j];
                    x[j] = m.add(u, v);
                    y[j] = m.mul(m.sub(u, v), w[j]);
                }
            }
            off += half;
        }
    }

    // decimation in time: bit-reversed order in, natural order out; divides by n
    void inverse(u64* a) const {
        size_t off = 0;
        for (size_t len = 2; len <= n_; len <<= 1) {
            size_t half = len >> 1;
            const u64* w = iv_.data() + off;
            for (size_t i0 = 0; i0 < n_; i0 += len) {
                u64* x = a + i0;
                u64* y = x + half;
                for (size_t j = 0; j < half; ++j) {
                    u64 u = x[j], v = m.mul(y[j], w[j]);
                    x[j] = m.add(u, v);
                    y[j] = m.sub(u, v);
                }
            }
            off += half;
        }
        for (size_t i = 0; i < n_; ++i) a[i] = m.mul(a[i], ninv_);
    }

  private:
    size_t n_;
    std::vector<u64> fw_, iv_;  // per-level twiddles, flattened
    u64 ninv_ = 0;
};

inline const NttPlan& ntt_plan(u32 prime_idx, u32 lg) {
    static std::mutex mu;
    static std::map<u32, std::unique_ptr<NttPlan>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[prime_idx * 64 + lg];
    if (!slot) slot = std::make_unique<NttPlan>(prime_idx, lg);
    return *slot;
}

// ---------------------------------------------------------------------------
// dual 31-bit fast path
//
// When every convolution coefficient fits below the product of two 31-bit
// transform primes, the images are computed in 32-bit Montgomery arithmetic
// and recombined with a two-term CRT plus one Barrett reduction.  Half-width
// words vectorize far better than the 62-bit kernels, and this regime covers
// exactly the hot case of the density sweeps: moduli up to a few million
// against polynomials of degree tens of thousands.

struct Ntt32PrimeInfo {
    u32 q;
    u32 g;  // primitive root mod q
    u32 two_adicity;
};

inline constexpr std::array<Ntt32PrimeInfo, 2> ntt32_primes = {{
    {2013265921u, 31u, 27},  // 15·2^27 + 1
    {1811939329u, 13u, 26},  // 27·2^26 + 1
}};

// The transforms run on plain residues: a Montgomery multiply by a
// Montgomery-form twiddle yields a plain product, so values never enter or
// leave Montgomery form and the usual conversion passes disappear.  The
// pointwise stage introduces one factor R^{-1}, which the inverse's final
// scaling constant absorbs.  The four smallest levels are executed in
// registers on 16-element blocks when AVX-512 is available; per-block loop
// overhead dwarfs the arithmetic there otherwise.
class Ntt32Plan {
  public:
    const Mont32 m;

    Ntt32Plan(u32 prime_idx, u32 lg)
        : m(ntt32_primes[prime_idx].q), n_(size_t{1} << lg) {
        const auto& P = ntt32_primes[prime_idx];
        if (lg > P.two_adicity)
            throw std::invalid_argument("transform size exceeds prime 2-adicity");
        u32 w = m.pow(m.to(P.g), (P.q - 1) >> lg);
        u32 wi = m.inv(w);
        if (n_ >= 2) {
            fw_.resize(n_ - 1);
            iv_.resize(n_ - 1);
            size_t off = 0;
            for (size_t len = n_; len >= 2; len >>= 1) {
                size_t half = len >> 1;
                u32 wl = m.pow(w, static_cast<u64>(n_ / len));
                u32 cur = m.one();
                for (size_t j = 0; j < half; ++j) {
                    fw_[off + j] = cur;
                    cur = m.mul(cur, wl);
                }
                off += half;
            }
            off = 0;
            for (size_t len = 2; len <= n_; len <<= 1) {
                size_t half = len >> 1;
                u32 wl = m.pow(wi, static_cast<u64>(n_ / len));
                u32 cur = m.one();
                for (size_t j = 0; j < half; ++j) {
                    iv_[off + j] = cur;
                    cur = m.mul(cur, wl);
                }
                off += half;
            }
        }
        // v -> v·n^{-1}·R, applied with one Montgomery multiply (see above)
        scale_ = m.to(static_cast<u64>(m.to(inv_mod(n_ % P.q, P.q))));
        if (n_ >= 16) {
            // twiddle lane patterns for the in-register small-level kernels;
            // forward level of length L sits at fw_[n-L], inverse at iv_[L/2-1]
            for (size_t j = 0; j < 8; ++j) fw16_[8 + j] = fw_[n_ - 16 + j];
            for (size_t j = 0; j < 4; ++j)
                fw8_[4 + j] = fw8_[12 + j] = fw_[n_ - 8 + j];
            for (size_t j = 0; j < 2; ++j)
                for (size_t b = 0; b < 4; ++b) fw4_[4 * b + 2 + j] = fw_[n_ - 4 + j];
            for (size_t b = 0; b < 8; ++b) fw2_[2 * b + 1] = fw_[n_ - 2];
            for (size_t j = 0; j < 8; ++j) iv16_[8 + j] = iv_[7 + j];
            for (size_t j = 0; j < 4; ++j) iv8_[4 + j] = iv8_[12 + j] = iv_[3 + j];
            for (size_t j = 0; j < 2; ++j)
                for (size_t b = 0; b < 4; ++b) iv4_[4 * b + 2 + j] = iv_[1 + j];
            for (size_t b = 0; b < 8; ++b) iv2_[2 * b + 1] = iv_[0];
        }
    }

    size_t size() const { return n_; }

    void forward(u32* a) const {
        size_t stop = n_ >= 16 ? 32 : 2;
        size_t off = 0;
        for (size_t len = n_; len >= stop; len >>= 1) {
            size_t half = len >> 1;
            forward_level(a, len, half, fw_.data() + off);
            off += half;
        }
        if (n_ >= 16) forward_small(a);
    }

    void inverse(u32* a) const {
        if (n_ >= 16) inverse_small(a);
        size_t start = n_ >= 16 ? 32 : 2;
        size_t off = start / 2 - 1;
        for (size_t len = start; len <= n_; len <<= 1) {
            size_t half = len >> 1;
            inverse_level(a, len, half, iv_.data() + off);
            off += half;
        }
        const u32 s = scale_;
        for (size_t i = 0; i < n_; ++i) a[i] = m.mul(a[i], s);
    }

  private:
    void forward_level(u32* a, size_t len, size_t half, const u32* w) const {
        const u32 q = m.q, nv = m.ninv;
        for (size_t i0 = 0; i0 < n_; i0 += len) {
            u32* __restrict x = a + i0;
            u32* __restrict y = x + half;
            for (size_t j = 0; j < half; ++j) {
                u32 u = x[j], v = y[j];
                u32 s = u + v;
                s = s >= q ? s - q : s;
                u32 d = u >= v ? u - v : u + q - v;
                u64 t = static_cast<u64>(d) * w[j];
                u32 mm = static_cast<u32>(t) * nv;
                u32 r = static_cast<u32>((t + static_cast<u64>(mm) * q) >> 32);
                x[j] = s;
                y[j] = r >= q ? r - q : r;
            }
        }
    }

    void inverse_level(u32* a, size_t len, size_t half, const u32* w) const {
        const u32 q = m.q, nv = m.ninv;
        for (size_t i0 = 0; i0 < n_; i0 += len) {
            u32* __restrict x = a + i0;
            u32* __restrict y = x + half;
            for (size_t j = 0; j < half; ++j) {
                u64 t = static_cast<u64>(y[j]) * w[j];
                u32 mm = static_cast<u32>(t) * nv;
                u32 v = static_cast<u32>((t + static_cast<u64>(mm) * q) >> 32);
                v = v >= q ? v - q : v;
                u32 u = x[j];
                u32 s = u + v;
                x[j] = s >= q ? s - q : s;
                y[j] = u >= v ? u - v : u + q - v;
            }
        }
    }

    void forward_small(u32* a) const;
    void inverse_small(u32* a) const;

    size_t n_;
    std::vector<u32> fw_, iv_;
    u32 scale_ = 0;
    alignas(64) u32 fw16_[16]{}, fw8_[16]{}, fw4_[16]{}, fw2_[16]{};
    alignas(64) u32 iv16_[16]{}, iv8_[16]{}, iv4_[16]{}, iv2_[16]{};
};

#if defined(__AVX512F__)

namespace detail {

inline __m512i z32_addmod(__m512i a, __m512i b, __m512i q) {
    __m512i s = _mm512_add_epi32(a, b);
    return _mm512_min_epu32(s, _mm512_sub_epi32(s, q));
}

inline __m512i z32_submod(__m512i a, __m512i b, __m512i q) {
    __m512i d = _mm512_sub_epi32(a, b);
    return _mm512_min_epu32(d, _mm512_add_epi32(d, q));
}

// lane-wise Montgomery product of 16 u32 values: even and odd 32-bit lanes go
// through separate 64-bit multiply pipes, results are recombined by blend
inline __m512i z32_montmul(__m512i a, __m512i b, __m512i q, __m512i nv) {
    __m512i pe = _mm512_mul_epu32(a, b);
    __m512i po = _mm512_mul_epu32(_mm512_srli_epi64(a, 32), _mm512_srli_epi64(b, 32));
    __m512i me = _mm512_mullo_epi32(pe, nv);
    __m512i mo = _mm512_mullo_epi32(po, nv);
    __m512i re = _mm512_srli_epi64(_mm512_add_epi64(pe, _mm512_mul_epu32(me, q)), 32);
    __m512i ro = _mm512_add_epi64(po, _mm512_mul_epu32(mo, q));
    __m512i r = _mm512_mask_blend_epi32(0xAAAA, re,
                                        _mm512_and_si512(ro, _mm512_set1_epi64(
                                            static_cast<long long>(0xFFFFFFFF00000000ULL))));
    return _mm512_min_epu32(r, _mm512_sub_epi32(r, q));
}

} // namespace detail

inline void Ntt32Plan::forward_small(u32* a) const {
    const __m512i q = _mm512_set1_epi32(static_cast<int>(m.q));
    const __m512i nv = _mm512_set1_epi32(static_cast<int>(m.ninv));
    const __m512i w16 = _mm512_load_si512(fw16_);
    const __m512i w8 = _mm512_load_si512(fw8_);
    const __m512i w4 = _mm512_load_si512(fw4_);
    const __m512i w2 = _mm512_load_si512(fw2_);
    for (size_t i0 = 0; i0 < n_; i0 += 16) {
        __m512i z = _mm512_loadu_si512(a + i0);
        {   // len 16: partner lane = lane xor 8
            __m512i pr = _mm512_shuffle_i32x4(z, z, _MM_SHUFFLE(1, 0, 3, 2));
            __m512i s = detail::z32_addmod(z, pr, q);
            __m512i d = detail::z32_submod(pr, z, q);
            z = _mm512_mask_blend_epi32(0xFF00, s, detail::z32_montmul(d, w16, q, nv));
        }
        {   // len 8: partner lane = lane xor 4
            __m512i pr = _mm512_shuffle_i32x4(z, z, _MM_SHUFFLE(2, 3, 0, 1));
            __m512i s = detail::z32_addmod(z, pr, q);
            __m512i d = detail::z32_submod(pr, z, q);
            z = _mm512_mask_blend_epi32(0xF0F0, s, detail::z32_montmul(d, w8, q, nv));
        }
        {   // len 4: partner lane = lane xor 2
            __m512i pr = _mm512_shuffle_epi32(z, static_cast<_MM_PERM_ENUM>(_MM_SHUFFLE(1, 0, 3, 2)));
            __m512i s = detail::z32_addmod(z, pr, q);
            __m512i d = detail::z32_submod(pr, z, q);
            z = _mm512_mask_blend_epi32(0xCCCC, s, detail::z32_montmul(d, w4, q, nv));
        }
        {   // len 2: partner lane = lane xor 1
            __m512i pr = _mm512_shuffle_epi32(z, static_cast<_MM_PERM_ENUM>(_MM_SHUFFLE(2, 3, 0, 1)));
            __m512i s = detail::z32_addmod(z, pr, q);
            __m512i d = detail::z32_submod(pr, z, q);
            z = _mm512_mask_blend_epi32(0xAAAA, s, detail::z32_montmul(d, w2, q, nv));
        }
        _mm512_storeu_si512(a + i0, z);
    }
}

inline void Ntt32Plan::inverse_small(u32* a) const {
    const __m512i q = _mm512_set1_epi32(static_cast<int>(m.q));
    const __m512i nv = _mm512_set1_epi32(static_cast<int>(m.ninv));
    const __m512i w16 = _mm512_load_si512(iv16_);
    const __m512i w8 = _mm512_load_si512(iv8_);
    const __m512i w4 = _mm512_load_si512(iv4_);
    const __m512i w2 = _mm512_load_si512(iv2_);
    for (size_t i0 = 0; i0 < n_; i0 += 16) {
        __m512i z = _mm512_loadu_si512(a + i0);
        {   // len 2
            __m512i vv = _mm512_mask_blend_epi32(0xAAAA, z, detail::z32_montmul(z, w2, q, nv));
            __m512i pr = _mm512_shuffle_epi32(vv, static_cast<_MM_PERM_ENUM>(_MM_SHUFFLE(2, 3, 0, 1)));
            z = _mm512_mask_blend_epi32(0xAAAA, detail::z32_addmod(vv, pr, q),
                                        detail::z32_submod(pr, vv, q));
        }
        {   // len 4
            __m512i vv = _mm512_mask_blend_epi32(0xCCCC, z, detail::z32_montmul(z, w4, q, nv));
            __m512i pr = _mm512_shuffle_epi32(vv, static_cast<_MM_PERM_ENUM>(_MM_SHUFFLE(1, 0, 3, 2)));
            z = _mm512_mask_blend_epi32(0xCCCC, detail::z32_addmod(vv, pr, q),
                                        detail::z32_submod(pr, vv, q));
        }
        {   // len 8
            __m512i vv = _mm512_mask_blend_epi32(0xF0F0, z, detail::z32_montmul(z, w8, q, nv));
            __m512i pr = _mm512_shuffle_i32x4(vv, vv, _MM_SHUFFLE(2, 3, 0, 1));
            z = _mm512_mask_blend_epi32(0xF0F0, detail::z32_addmod(vv, pr, q),
                                        detail::z32_submod(pr, vv, q));
        }
        {   // len 16
            __m512i vv = _mm512_mask_blend_epi32(0xFF00, z, detail::z32_montmul(z, w16, q, nv));
            __m512i pr = _mm512_shuffle_i32x4(vv, vv, _MM_SHUFFLE(1, 0, 3, 2));
            z = _mm512_mask_blend_epi32(0xFF00, detail::z32_addmod(vv, pr, q),
                                        detail::z32_submod(pr, vv, q));
        }
        _mm512_storeu_si512(a + i0, z);
    }
}

#else

inline void Ntt32Plan::forward_small(u32* a) const {
    for (size_t len = 16; len >= 2; len >>= 1)
        forward_level(a, len, len >> 1, fw_.data() + (n_ - len));
}

inline void Ntt32Plan::inverse_small(u32* a) const {
    for (size_t len = 2; len <= 16; len <<= 1)
        inverse_level(a, len, len >> 1, iv_.data() + (len / 2 - 1));
}

#endif

inline const Ntt32Plan& ntt32_plan(u32 prime_idx, u32 lg) {
    static std::mutex mu;
    static std::map<u32, std::unique_ptr<Ntt32Plan>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[prime_idx * 64 + lg];
    if (!slot) slot = std::make_unique<Ntt32Plan>(prime_idx, lg);
    return *slot;
}

namespace detail {

// pointwise stages of the 31-bit transforms, lane-parallel when available

#if defined(__AVX512F__)

inline void pointwise_mul_acc(u32* acc, const u32* fx, const u32* fy, size_t n,
                              const Mont32& m) {
    const __m512i q = _mm512_set1_epi32(static_cast<int>(m.q));
    const __m512i nv = _mm512_set1_epi32(static_cast<int>(m.ninv));
    size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        __m512i x = _mm512_loadu_si512(fx + i);
        __m512i y = _mm512_loadu_si512(fy + i);
        __m512i a0 = _mm512_loadu_si512(acc + i);
        _mm512_storeu_si512(acc + i, z32_addmod(a0, z32_montmul(x, y, q, nv), q));
    }
    for (; i < n; ++i) acc[i] = m.add(acc[i], m.mul(fx[i], fy[i]));
}

inline void pointwise_mul_in(u32* fa, const u32* fb, size_t n, const Mont32& m) {
    const __m512i q = _mm512_set1_epi32(static_cast<int>(m.q));
    const __m512i nv = _mm512_set1_epi32(static_cast<int>(m.ninv));
    size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        __m512i x = _mm512_loadu_si512(fa + i);
        __m512i y = _mm512_loadu_si512(fb + i);
        _mm512_storeu_si512(fa + i, z32_montmul(x, y, q, nv));
    }
    for (; i < n; ++i) fa[i] = m.mul(fa[i], fb[i]);
}

inline void pointwise_sq_in(u32* fa, size_t n, const Mont32& m) {
    pointwise_mul_in(fa, fa, n, m);
}

#else

inline void pointwise_mul_acc(u32* acc, const u32* fx, const u32* fy, size_t n,
                              const Mont32& m) {
    for (size_t i = 0; i < n; ++i) acc[i] = m.add(acc[i], m.mul(fx[i], fy[i]));
}

inline void pointwise_mul_in(u32* fa, const u32* fb, size_t n, const Mont32& m) {
    for (size_t i = 0; i < n; ++i) fa[i] = m.mul(fa[i], fb[i]);
}

inline void pointwise_sq_in(u32* fa, size_t n, const Mont32& m) {
    for (size_t i = 0; i < n; ++i) fa[i] = m.mul(fa[i], fa[i]);
}

#endif

// Per-thread reusable transform buffers.  Slabs above the cap fall back to
// plain allocation so a one-off huge product does not pin memory.
inline constexpr size_t scratch32_cap = size_t{1} << 17;

inline std::vector<u32>& scratch32(size_t slot) {
    thread_local std::array<std::vector<u32>, 24> bufs;
    return bufs[slot];
}

} // namespace detail

// ---------------------------------------------------------------------------
// Garner recombination: residues mod the first k transform primes -> value mod p

namespace detail {

struct GarnerCtx {
    // inv_q[i][j] = (q_j)^{-1} mod q_i for j < i
    std::array<std::array<u64, 6>, 6> inv_q{};
    GarnerCtx() {
        for (u32 i = 1; i < ntt_primes.size(); ++i)
            for (u32 j = 0; j < i; ++j)
                inv_q[i][j] =
                    inv_mod(ntt_primes[j].q % ntt_primes[i].q, ntt_primes[i].q);
    }
};

inline const GarnerCtx& garner_ctx() {
    static const GarnerCtx c;
    return c;
}

} // namespace detail

// r[t] is a residue mod ntt_primes[t].q; the represented integer is assumed
// to lie in [0, q_0···q_{k-1}).  Returns that integer reduced mod p.
inline u64 garner_mod(const u64* r, u32 k, u64 p) {
    if (k == 1) return r[0] % p;
    const auto& C = detail::garner_ctx();
    u64 v[6];
    for (u32 i = 0; i < k; ++i) {
        u64 qi = ntt_primes[i].q;
        u64 t = r[i];
        for (u32 j = 0; j < i; ++j)
            t = mulmod(submod(t, v[j] % qi, qi), C.inv_q[i][j], qi);
        v[i] = t;
    }
    u64 res = 0, pref = 1 % p;
    for (u32 i = 0; i < k; ++i) {
        res = addmod(res, mulmod(v[i], pref, p), p);
        pref = mulmod(pref, ntt_primes[i].q % p, p);
    }
    return res;
}

// Number of transform primes needed so that q_0···q_{k-1} exceeds
// weight·(p−1)^2, where weight bounds the number of cross terms landing in
// one convolution coefficient.
inline u32 ntt_prime_count_for(u64 weight, u64 p) {
    long double need = std::log2((long double)weight) +
                       2.0L * std::log2((long double)(p - 1)) + 1.0L;
    long double have = 0.0L;
    u32 k = 0;
    while (have < need && k < ntt_primes.size()) {
        have += std::log2((long double)ntt_primes[k].q);
        ++k;
    }
    if (have < need) throw std::invalid_argument("modulus too large for transform family");
    return k;
}

// ---------------------------------------------------------------------------
// small multipliers (plain residues)

namespace detail {

inline constexpr size_t schoolbook_min_side = 40;
inline constexpr u64 schoolbook_max_area = 4096;
inline constexpr size_t karatsuba_max_side = 384;
inline constexpr size_t mulacc_ntt_min_len = 512;

inline void trim(DenseVec& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

inline DenseVec mul_schoolbook_mod(std::span<const u64> a, std::span<const u64> b,
                                   u64 p) {
    if (a.empty() || b.empty()) return {};
    size_t la = a.size(), lb = b.size();
    DenseVec r(la + lb - 1);
    if (p <= (u64{1} << 31)) {
        // products < 2^62; a u128 accumulator cannot overflow at these sizes
        for (size_t k = 0; k < r.size(); ++k) {
            u128 acc = 0;
            size_t i0 = k >= lb ? k - lb + 1 : 0;
            size_t i1 = std::min(la - 1, k);
            for (size_t i = i0; i <= i1; ++i) acc += (u128)a[i] * b[k - i];
            r[k] = static_cast<u64>(acc % p);
        }
    } else {
        // products < 2^124: fold the accumulator every 15 terms
        for (size_t k = 0; k < r.size(); ++k) {
            u128 acc = 0;
            u32 cnt = 0;
            size_t i0 = k >= lb ? k - lb + 1 : 0;
            size_t i1 = std::min(la - 1, k);
            for (size_t i = i0; i <= i1; ++i) {
                acc += (u128)a[i] * b[k - i];
                if (++cnt == 15) {
                    acc %= p;
                    cnt = 0;
                }
            }
            r[k] = static_cast<u64>(acc % p);
        }
    }
    return r;
}

inline DenseVec mul_karatsuba_mod(std::span<const u64> a, std::span<const u64> b,
                                  u64 p) {
    if (a.empty() || b.empty()) return {};
    if (std::min(a.size(), b.size()) <= 32) return mul_schoolbook_mod(a, b, p);
    size_t half = std::max(a.size(), b.size()) / 2;
    auto lo = [&](std::span<const u64> v) {
        return v.subspan(0, std::min(v.size(), half));
    };
    auto hi = [&](std::span<const u64> v) {
        return v.size() > half ? v.subspan(half) : std::span<const u64>{};
    };
    std::span<const u64> a0 = lo(a), a1 = hi(a), b0 = lo(b), b1 = hi(b);
    DenseVec z0 = mul_karatsuba_mod(a0, b0, p);
    DenseVec z2 = mul_karatsuba_mod(a1, b1, p);
    auto sum = [&](std::span<const u64> x, std::span<const u64> y) {
        DenseVec s(std::max(x.size(), y.size()));
        for (size_t i = 0; i < s.size(); ++i) {
            u64 xv = i < x.size() ? x[i] : 0;
            u64 yv = i < y.size() ? y[i] : 0;
            s[i] = addmod(xv, yv, p);
        }
        return s;
    };
    DenseVec z1 = mul_karatsuba_mod(sum(a0, a1), sum(b0, b1), p);
    for (size_t i = 0; i < z1.size(); ++i) {
        u64 v = z1[i];
        if (i < z0.size()) v = submod(v, z0[i], p);
        if (i < z2.size()) v = submod(v, z2[i], p);
        z1[i] = v;
    }
    DenseVec r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < z0.size(); ++i) r[i] = z0[i];
    for (size_t i = 0; i < z1.size(); ++i)
        if (z1[i]) r[i + half] = addmod(r[i + half], z1[i], p);
    for (size_t i = 0; i < z2.size(); ++i)
        if (z2[i]) r[i + 2 * half] = addmod(r[i + 2 * half], z2[i], p);
    return r;
}

// True when every convolution coefficient (at most `weight` terms, each a
// product of residues < p) stays below q1·q2 and the transform fits the
// smaller prime's 2-adicity.
inline bool fits_dual32(u64 p, u64 weight, size_t out_len) {
    size_t S = std::bit_ceil(out_len);
    u32 lg = static_cast<u32>(std::countr_zero(S));
    if (lg > ntt32_primes[1].two_adicity) return false;
    if (p > ntt32_primes[1].q) return false;  // inputs must be residues mod both primes
    u128 bound = static_cast<u128>(p - 1) * (p - 1) * weight;
    u128 cap = static_cast<u128>(ntt32_primes[0].q) * ntt32_primes[1].q;
    return bound < cap;
}

// Recombine residues mod (q1, q2) into the exact integer < q1·q2, then mod p.
struct DualCrt {
    u32 q1 = ntt32_primes[0].q;
    u32 q2 = ntt32_primes[1].q;
    u32 inv_q1_q2;
    Barrett64 bar;
    explicit DualCrt(u64 p)
        : inv_q1_q2(static_cast<u32>(inv_mod(ntt32_primes[0].q % ntt32_primes[1].q,
                                             ntt32_primes[1].q))),
          bar(p) {}
    u64 combine(u32 r1, u32 r2) const {
        u32 r1m = r1 >= q2 ? r1 - q2 : r1;  // q1 < 2·q2
        u32 d = r2 >= r1m ? r2 - r1m : r2 + q2 - r1m;
        u64 t = static_cast<u64>(d) * inv_q1_q2 % q2;
        return bar.reduce(static_cast<u64>(q1) * t + r1);
    }
};

inline DenseVec mul_dual32(std::span<const u64> a, std::span<const u64> b, u64 p) {
    size_t out = a.size() + b.size() - 1;
    size_t S = std::bit_ceil(out);
    u32 lg = static_cast<u32>(std::countr_zero(S));
    bool square = a.data() == b.data() && a.size() == b.size();
    bool arena = S <= scratch32_cap;
    std::vector<u32> fa_own, fb_own, r0;
    DenseVec r(out);
    for (u32 t = 0; t < 2; ++t) {
        const Ntt32Plan& pl = ntt32_plan(t, lg);
        const Mont32& m = pl.m;
        std::vector<u32>& fa = arena ? scratch32(0) : fa_own;
        fa.assign(S, 0);
        for (size_t i = 0; i < a.size(); ++i) fa[i] = static_cast<u32>(a[i]);
        pl.forward(fa.data());
        if (square) {
            pointwise_sq_in(fa.data(), S, m);
        } else {
            std::vector<u32>& fb = arena ? scratch32(1) : fb_own;
            fb.assign(S, 0);
            for (size_t i = 0; i < b.size(); ++i) fb[i] = static_cast<u32>(b[i]);
            pl.forward(fb.data());
            pointwise_mul_in(fa.data(), fb.data(), S, m);
        }
        pl.inverse(fa.data());
        if (t == 0) {
            r0.assign(fa.begin(), fa.begin() + out);
        } else {
            DualCrt crt(p);
            for (size_t s = 0; s < out; ++s) r[s] = crt.combine(r0[s], fa[s]);
        }
    }
    trim(r);
    return r;
}

} // namespace detail

inline DenseVec poly_mul_mod(std::span<const u64> a, std::span<const u64> b, u64 p);

// ---------------------------------------------------------------------------
// fused multiply-accumulate through the transforms
//
// outs[r] = sum over (i, j) in spec[r] of ins[i]·ins[j], reduced mod p.
// Each distinct input is transformed once per prime; the products are
// accumulated pointwise, so a 2x2 matrix action costs 6 forward and 2 inverse
// transforms instead of 12 and 4.

inline std::vector<DenseVec> multi_mulacc_mod(
    std::span<const DenseVec* const> ins,
    const std::vector<std::vector<std::pair<u32, u32>>>& spec, u64 p) {
    std::vector<DenseVec> outs(spec.size());
    size_t max_out = 0;
    u64 max_weight = 0;
    for (const auto& pairs : spec) {
        size_t out_len = 0;
        u64 weight = 0;
        for (auto [i, j] : pairs) {
            const DenseVec& x = *ins[i];
            const DenseVec& y = *ins[j];
            if (x.empty() || y.empty()) continue;
            out_len = std::max(out_len, x.size() + y.size() - 1);
            weight += std::min(x.size(), y.size());
        }
        max_out = std::max(max_out, out_len);
        max_weight = std::max(max_weight, weight);
    }
    if (max_out == 0) return outs;

    if (max_out < detail::mulacc_ntt_min_len) {
        for (size_t r = 0; r < spec.size(); ++r) {
            DenseVec acc;
            for (auto [i, j] : spec[r]) {
                DenseVec prod = poly_mul_mod(*ins[i], *ins[j], p);
                if (prod.size() > acc.size()) acc.resize(prod.size(), 0);
                for (size_t s = 0; s < prod.size(); ++s)
                    acc[s] = addmod(acc[s], prod[s], p);
            }
            detail::trim(acc);
            outs[r] = std::move(acc);
        }
        return outs;
    }

    size_t S = std::bit_ceil(max_out);
    u32 lg = static_cast<u32>(std::countr_zero(S));

    if (detail::fits_dual32(p, max_weight, max_out)) {
        // image buffers come from the per-thread arena (slots 0-9 and 11-20 for
        // the two primes, 22 for the accumulator) unless the shape is too big
        bool arena = S <= detail::scratch32_cap && ins.size() <= 10;
        std::array<std::vector<std::vector<u32>>, 2> res32;
        std::deque<std::vector<u32>> owned;
        for (u32 t = 0; t < 2; ++t) {
            const Ntt32Plan& pl = ntt32_plan(t, lg);
            const Mont32& m = pl.m;
            std::vector<const DenseVec*> seen;
            std::vector<std::vector<u32>*> images;
            seen.reserve(ins.size());
            images.reserve(ins.size());
            auto image_of = [&](const DenseVec* v) -> const std::vector<u32>& {
                for (size_t s = 0; s < seen.size(); ++s)
                    if (seen[s] == v) return *images[s];
                std::vector<u32>* buf;
                if (arena) {
                    buf = &detail::scratch32(t * 11 + seen.size());
                } else {
                    owned.emplace_back();
                    buf = &owned.back();
                }
                buf->assign(S, 0);
                for (size_t i = 0; i < v->size(); ++i)
                    (*buf)[i] = static_cast<u32>((*v)[i]);
                pl.forward(buf->data());
                seen.push_back(v);
                images.push_back(buf);
                return *buf;
            };
            res32[t].resize(spec.size());
            std::vector<u32> acc_own;
            std::vector<u32>& acc = arena ? detail::scratch32(22) : acc_own;
            for (size_t r = 0; r < spec.size(); ++r) {
                bool any = false;
                acc.assign(S, 0);
                for (auto [i, j] : spec[r]) {
                    if (ins[i]->empty() || ins[j]->empty()) continue;
                    const auto& fx = image_of(ins[i]);
                    const auto& fy = image_of(ins[j]);
                    detail::pointwise_mul_acc(acc.data(), fx.data(), fy.data(), S, m);
                    any = true;
                }
                if (!any) continue;
                pl.inverse(acc.data());
                res32[t][r].assign(acc.begin(), acc.begin() + max_out);
            }
        }
        detail::DualCrt crt(p);
        for (size_t r = 0; r < spec.size(); ++r) {
            if (res32[0][r].empty()) continue;
            DenseVec out(max_out);
            for (size_t s = 0; s < max_out; ++s)
                out[s] = crt.combine(res32[0][r][s], res32[1][r][s]);
            detail::trim(out);
            outs[r] = std::move(out);
        }
        return outs;
    }

    u32 nprimes = ntt_prime_count_for(max_weight, p);

    std::vector<std::vector<u64>> residues(spec.size());
    for (auto& v : residues) v.assign(size_t{nprimes} * max_out, 0);

    for (u32 t = 0; t < nprimes; ++t) {
        const NttPlan& pl = ntt_plan(t, lg);
        const Mont64& m = pl.m;
        // transform each distinct input once (capacity reserved up front so the
        // returned references stay valid across later insertions)
        std::vector<const DenseVec*> seen;
        std::vector<std::vector<u64>> images;
        seen.reserve(ins.size());
        images.reserve(ins.size());
        auto image_of = [&](const DenseVec* v) -> const std::vector<u64>& {
            for (size_t s = 0; s < seen.size(); ++s)
                if (seen[s] == v) return images[s];
            std::vector<u64> buf(S, 0);
            for (size_t i = 0; i < v->size(); ++i) buf[i] = m.to((*v)[i]);
            pl.forward(buf.data());
            seen.push_back(v);
            images.push_back(std::move(buf));
            return images.back();
        };
        for (size_t r = 0; r < spec.size(); ++r) {
            bool any = false;
            std::vector<u64> acc(S, 0);
            for (auto [i, j] : spec[r]) {
                if (ins[i]->empty() || ins[j]->empty()) continue;
                const auto& fx = image_of(ins[i]);
                const auto& fy = image_of(ins[j]);
                for (size_t s = 0; s < S; ++s)
                    acc[s] = m.add(acc[s], m.mul(fx[s], fy[s]));
                any = true;
            }
            if (!any) continue;
            pl.inverse(acc.data());
            u64* dst = residues[r].data() + size_t{t} * max_out;
            for (size_t s = 0; s < max_out; ++s) dst[s] = m.from(acc[s]);
        }
    }

    for (size_t r = 0; r < spec.size(); ++r) {
        bool any = false;
        for (auto [i, j] : spec[r])
            if (!ins[i]->empty() && !ins[j]->empty()) any = true;
        if (!any) continue;
        DenseVec out(max_out);
        u64 rbuf[6];
        for (size_t s = 0; s < max_out; ++s) {
            for (u32 t = 0; t < nprimes; ++t)
                rbuf[t] = residues[r][size_t{t} * max_out + s];
            out[s] = garner_mod(rbuf, nprimes, p);
        }
        detail::trim(out);
        outs[r] = std::move(out);
    }
    return outs;
}

// ---------------------------------------------------------------------------
// main entry: c = a·b mod p (full product), plain residues, trimmed

inline DenseVec poly_mul_mod(std::span<const u64> a, std::span<const u64> b, u64 p) {
    if (a.empty() || b.empty()) return {};
    size_t lmin = std::min(a.size(), b.size());
    size_t lmax = std::max(a.size(), b.size());
    DenseVec r;
    if (lmin <= detail::schoolbook_min_side ||
        (u128)lmin * lmax <= detail::schoolbook_max_area) {
        r = detail::mul_schoolbook_mod(a, b, p);
    } else if (lmax <= detail::karatsuba_max_side) {
        r = detail::mul_karatsuba_mod(a, b, p);
    } else if (detail::fits_dual32(p, lmin, a.size() + b.size() - 1)) {
        r = detail::mul_dual32(a, b, p);
    } else {
        size_t out = a.size() + b.size() - 1;
        size_t S = std::bit_ceil(out);
        u32 lg = static_cast<u32>(std::countr_zero(S));
        // a modulus from the transform family needs no recombination at all
        int own = -1;
        for (u32 i = 0; i < ntt_primes.size(); ++i)
            if (ntt_primes[i].q == p) own = static_cast<int>(i);
        u32 nprimes = own >= 0 ? 1 : ntt_prime_count_for(lmin, p);
        bool square = a.data() == b.data() && a.size() == b.size();
        std::vector<std::vector<u64>> res(nprimes);
        for (u32 t = 0; t < nprimes; ++t) {
            const NttPlan& pl = ntt_plan(own >= 0 ? static_cast<u32>(own) : t, lg);
            const Mont64& m = pl.m;
            std::vector<u64> fa(S, 0);
            for (size_t i = 0; i < a.size(); ++i) fa[i] = m.to(a[i]);
            pl.forward(fa.data());
            if (square) {
                for (size_t i = 0; i < S; ++i) fa[i] = m.mul(fa[i], fa[i]);
            } else {
                std::vector<u64> fb(S, 0);
                for (size_t i = 0; i < b.size(); ++i) fb[i] = m.to(b[i]);
                pl.forward(fb.data());
                for (size_t i = 0; i < S; ++i) fa[i] = m.mul(fa[i], fb[i]);
            }
            pl.inverse(fa.data());
            fa.resize(out);
            for (auto& v : fa) v = m.from(v);
            res[t] = std::move(fa);
        }
        if (nprimes == 1) {
            r = std::move(res[0]);
            // own == -1 means the single image holds the exact integer values
            if (own < 0)
                for (auto& v : r) v %= p;
        } else {
            r.resize(out);
            u64 rbuf[6];
            for (size_t s = 0; s < out; ++s) {
                for (u32 t = 0; t < nprimes; ++t) rbuf[t] = res[t][s];
                r[s] = garner_mod(rbuf, nprimes, p);
            }
        }
    }
    detail::trim(r);
    return r;
}

// ---------------------------------------------------------------------------
// 2x2 polynomial matrices (the accumulator type of the remainder-sequence
// algorithms); the actions below share transforms via multi_mulacc_mod.

struct Mat22 {
    DenseVec e[2][2];  // e[row][col]; the zero polynomial is the empty vector

    static Mat22 identity() {
        Mat22 I;
        I.e[0][0] = {1};
        I.e[1][1] = {1};
        return I;
    }

    bool is_identity() const {
        return e[0][0].size() == 1 && e[0][0][0] == 1 && e[0][1].empty() &&
               e[1][0].empty() && e[1][1].size() == 1 && e[1][1][0] == 1;
    }

    size_t max_deg() const {
        size_t d = 0;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                if (!e[r][c].empty()) d = std::max(d, e[r][c].size() - 1);
        return d;
    }
};

// (a, b) <- M·(a, b)
inline void mat22_apply_mod(const Mat22& M, DenseVec& a, DenseVec& b, u64 p) {
    if (M.is_identity()) return;
    const DenseVec* ins[6] = {&M.e[0][0], &M.e[0][1], &M.e[1][0],
                              &M.e[1][1], &a,         &b};
    static const std::vector<std::vector<std::pair<u32, u32>>> spec = {
        {{0, 4}, {1, 5}}, {{2, 4}, {3, 5}}};
    auto outs = multi_mulacc_mod(std::span<const DenseVec* const>(ins, 6), spec, p);
    a = std::move(outs[0]);
    b = std::move(outs[1]);
}

inline Mat22 mat22_mul_mod(const Mat22& A, const Mat22& B, u64 p) {
    if (A.is_identity()) return B;
    if (B.is_identity()) return A;
    const DenseVec* ins[8] = {&A.e[0][0], &A.e[0][1], &A.e[1][0], &A.e[1][1],
                              &B.e[0][0], &B.e[0][1], &B.e[1][0], &B.e[1][1]};
    static const std::vector<std::vector<std::pair<u32, u32>>> spec = {
        {{0, 4}, {1, 6}}, {{0, 5}, {1, 7}}, {{2, 4}, {3, 6}}, {{2, 5}, {3, 7}}};
    auto outs = multi_mulacc_mod(std::span<const DenseVec* const>(ins, 8), spec, p);
    Mat22 C;
    C.e[0][0] = std::move(outs[0]);
    C.e[0][1] = std::move(outs[1]);
    C.e[1][0] = std::move(outs[2]);
    C.e[1][1] = std::move(outs[3]);
    return C;
}

} // namespace pfeas
