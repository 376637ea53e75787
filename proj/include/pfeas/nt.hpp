#pragma once

// Scalar 64-bit number theory: modular arithmetic, Montgomery representation,
// deterministic primality, and a small reproducible RNG used for sampling.

#include <cstdint>
#include <cassert>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <vector>
#include <algorithm>
#include <unordered_map>

namespace pfeas {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline constexpr u64 addmod(u64 a, u64 b, u64 m) {
    // a, b < m <= 2^64-1; detect wraparound explicitly
    u64 s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}

inline constexpr u64 submod(u64 a, u64 b, u64 m) {
    return a >= b ? a - b : a + (m - b);
}

inline constexpr u64 powmod(u64 a, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Modular inverse by extended Euclid; requires gcd(a, m) == 1.
inline constexpr u64 inv_mod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    u64 r = m, nr = a % m;
    while (nr != 0) {
        u64 q = r / nr;
        i64 tmp = t - static_cast<i64>(q) * nt;
        t = nt; nt = tmp;
        u64 rr = r - q * nr;
        r = nr; nr = rr;
    }
    if (r != 1) throw std::invalid_argument("inv_mod: arguments not coprime");
    return t < 0 ? static_cast<u64>(t + static_cast<i64>(m)) : static_cast<u64>(t);
}

// Montgomery arithmetic modulo an odd q < 2^63.  Values live in [0, q).
struct Mont64 {
    u64 q{};
    u64 ninv{};  // -q^{-1} mod 2^64
    u64 r1{};    // 2^64  mod q  (image of 1)
    u64 r2{};    // 2^128 mod q  (conversion factor)

    Mont64() = default;
    explicit constexpr Mont64(u64 q_) : q(q_) {
        assert(q & 1);
        assert(q < (u64{1} << 63));
        u64 x = q;  // Newton lift of q^{-1} mod 2^64
        for (int i = 0; i < 5; ++i) x *= 2 - q * x;
        ninv = ~x + 1;
        r1 = static_cast<u64>((static_cast<u128>(1) << 64) % q);
        r2 = static_cast<u64>(static_cast<u128>(r1) * r1 % q);
    }

    constexpr u64 redc(u128 t) const {
        u64 m = static_cast<u64>(t) * ninv;
        u64 r = static_cast<u64>((t + static_cast<u128>(m) * q) >> 64);
        return r >= q ? r - q : r;
    }
    constexpr u64 mul(u64 a, u64 b) const { return redc(static_cast<u128>(a) * b); }
    constexpr u64 to(u64 x) const { return mul(x < q ? x : x % q, r2); }
    constexpr u64 from(u64 x) const { return redc(static_cast<u128>(x)); }
    constexpr u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= q ? s - q : s; }
    constexpr u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + q - b; }
    constexpr u64 neg(u64 a) const { return a == 0 ? 0 : q - a; }
    constexpr u64 one() const { return r1; }
    constexpr u64 pow(u64 a, u64 e) const {
        u64 r = r1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    // inverse of a unit; q must be prime for this shortcut
    constexpr u64 inv(u64 a) const { return pow(a, q - 2); }
};

// 32-bit Montgomery arithmetic (q odd, q < 2^31).  Same layout as Mont64;
// products fit one 64-bit word, which lets compilers vectorize the hot loops.
struct Mont32 {
    u32 q{};
    u32 ninv{};  // -q^{-1} mod 2^32
    u32 r1{};    // 2^32 mod q
    u32 r2{};    // 2^64 mod q

    Mont32() = default;
    explicit constexpr Mont32(u32 q_) : q(q_) {
        assert(q & 1);
        assert(q < (u32{1} << 31));
        u32 x = q;
        for (int i = 0; i < 5; ++i) x *= 2 - q * x;
        ninv = ~x + 1;
        r1 = static_cast<u32>((u64{1} << 32) % q);
        r2 = static_cast<u32>(static_cast<u64>(r1) * r1 % q);
    }

    constexpr u32 redc(u64 t) const {
        u32 m = static_cast<u32>(t) * ninv;
        u32 r = static_cast<u32>((t + static_cast<u64>(m) * q) >> 32);
        return r >= q ? r - q : r;
    }
    constexpr u32 mul(u32 a, u32 b) const { return redc(static_cast<u64>(a) * b); }
    constexpr u32 to(u64 x) const {
        return mul(static_cast<u32>(x < q ? x : x % q), r2);
    }
    constexpr u32 from(u32 x) const { return redc(static_cast<u64>(x)); }
    constexpr u32 add(u32 a, u32 b) const { u32 s = a + b; return s >= q ? s - q : s; }
    constexpr u32 sub(u32 a, u32 b) const { return a >= b ? a - b : a + q - b; }
    constexpr u32 one() const { return r1; }
    constexpr u32 pow(u32 a, u64 e) const {
        u32 r = r1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    constexpr u32 inv(u32 a) const { return pow(a, q - 2); }  // q prime
};

// Barrett reduction of a full 64-bit word by a fixed modulus: one widening
// multiply and a correction step instead of a hardware divide.  The estimate
// hi((x·m) >> 64) with m = floor((2^64-1)/p) is Q or Q-1, so a single
// conditional subtract finishes the job.
struct Barrett64 {
    u64 p{};
    u64 m{};

    Barrett64() = default;
    explicit Barrett64(u64 p_) : p(p_) {
        assert(p >= 2);
        m = ~u64{0} / p;
    }
    u64 reduce(u64 x) const {
        u64 qq = static_cast<u64>((static_cast<u128>(x) * m) >> 64);
        u64 r = x - qq * p;
        return r >= p ? r - p : r;
    }
};

// Deterministic Miller-Rabin: the witness set {2,...,37} decides primality
// for every n < 2^64.
inline bool is_prime(u64 n) {
    constexpr u64 witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (u64 p : witnesses) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    for (u64 a : witnesses) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) composite = false;
        }
        if (composite) return false;
    }
    return true;
}

// splitmix64: tiny, seedable, platform-stable.  Used instead of <random>
// engines/distributions so that sampled sweeps reproduce bit-for-bit on any
// standard library.
struct SplitMix64 {
    u64 state;
    explicit constexpr SplitMix64(u64 seed) : state(seed) {}
    constexpr u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Unbiased uniform draw from [0, n) (Lemire's multiply-shift with rejection).
inline u64 bounded_rand(SplitMix64& g, u64 n) {
    assert(n > 0);
    u128 m = static_cast<u128>(g.next()) * n;
    u64 lo = static_cast<u64>(m);
    if (lo < n) {
        u64 threshold = (0 - n) % n;
        while (lo < threshold) {
            m = static_cast<u128>(g.next()) * n;
            lo = static_cast<u64>(m);
        }
    }
    return static_cast<u64>(m >> 64);
}

// k distinct indices from [0, n), returned sorted ascending.  Partial
// Fisher-Yates over a sparse swap map; deterministic for a given seed.
inline std::vector<u64> sample_indices(u64 n, u64 k, u64 seed) {
    if (k > n) throw std::invalid_argument("sample_indices: k > n");
    std::unordered_map<u64, u64> swapped;
    auto value_at = [&](u64 i) {
        auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
    };
    SplitMix64 g(seed);
    std::vector<u64> out;
    out.reserve(k);
    for (u64 i = 0; i < k; ++i) {
        u64 j = i + bounded_rand(g, n - i);
        u64 vi = value_at(i), vj = value_at(j);
        out.push_back(vj);
        swapped[j] = vi;
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace pfeas
