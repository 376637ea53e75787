#pragma once

// Prime generation: simple sieve for small bounds, a segmented sieve for
// streaming ranges, and an optional on-disk segment cache with a validated
// header (corrupt or mismatched cache files are recomputed, never trusted).

#include <cstdint>
#include <cstring>
#include <vector>
#include <string>
#include <fstream>
#include <filesystem>
#include <cmath>
#include <stdexcept>

#include "pfeas/nt.hpp"

namespace pfeas {

inline std::vector<u32> small_primes_up_to(u32 n) {
    std::vector<u32> out;
    if (n < 2) return out;
    std::vector<u8> comp(n + 1, 0);
    for (u32 i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = static_cast<u64>(i) * i; j <= n; j += i) comp[j] = 1;
    }
    return out;
}

namespace detail {

// Bitmap over the odd numbers of [lo, hi): bit j of the map corresponds to
// first_odd + 2j, set bit = prime.  lo >= 3 expected; hi exclusive.
struct OddBitmap {
    u64 lo = 0, hi = 0;       // the represented interval
    u64 first_odd = 0;
    std::vector<u8> bits;     // ceil(n_odd / 8) bytes

    u64 odd_count() const { return first_odd >= hi ? 0 : (hi - first_odd + 1) / 2; }
    bool test(u64 j) const { return (bits[j >> 3] >> (j & 7)) & 1; }
    void clear(u64 j) { bits[j >> 3] &= static_cast<u8>(~(u8{1} << (j & 7))); }
};

inline OddBitmap sieve_segment_bits(u64 lo, u64 hi, const std::vector<u32>& base) {
    OddBitmap seg;
    seg.lo = lo;
    seg.hi = hi;
    seg.first_odd = lo | 1;
    u64 n = seg.odd_count();
    seg.bits.assign((n + 7) / 8, 0xff);
    if (n == 0) return seg;
    // mask out the tail bits beyond n so popcounts are exact
    if (n % 8) seg.bits.back() = static_cast<u8>((u8{1} << (n % 8)) - 1);
    if (seg.first_odd == 1) seg.clear(0);  // 1 is not prime
    for (u32 p : base) {
        if (p == 2) continue;
        u64 p2 = static_cast<u64>(p) * p;
        if (p2 >= hi) break;
        u64 start = p2 > lo ? p2 : ((lo + p - 1) / p) * p;
        if ((start & 1) == 0) start += p;   // only odd multiples are mapped
        for (u64 m = start; m < hi; m += 2 * static_cast<u64>(p))
            seg.clear((m - seg.first_odd) / 2);
    }
    return seg;
}

inline void collect_primes(const OddBitmap& seg, std::vector<u64>& out) {
    u64 n = seg.odd_count();
    if (seg.lo <= 2 && 2 < seg.hi) out.push_back(2);
    for (u64 j = 0; j < n; ++j)
        if (seg.test(j)) out.push_back(seg.first_odd + 2 * j);
}

} // namespace detail

// All primes in [lo, hi), ascending.  `base` must contain every prime
// <= sqrt(hi-1); pass small_primes_up_to(floor(sqrt(hi))) or larger.
inline std::vector<u64> sieve_interval(u64 lo, u64 hi, const std::vector<u32>& base) {
    std::vector<u64> out;
    if (hi <= 2 || lo >= hi) return out;
    if (lo < 2) lo = 2;
    auto seg = detail::sieve_segment_bits(lo, hi, base);
    detail::collect_primes(seg, out);
    return out;
}

inline std::vector<u64> primes_up_to(u64 n) {
    if (n < 2) return {};
    auto base = small_primes_up_to(static_cast<u32>(std::sqrt(static_cast<double>(n))) + 2);
    return sieve_interval(2, n + 1, base);
}

// Streams primes below `limit` segment by segment.  When a cache directory is
// configured, each segment's bitmap round-trips through a file
//   seg_<lo>_<hi>.bits = "PFSV" | u32 version | u64 lo | u64 hi | bitmap
// and any file whose header or size disagrees is discarded and recomputed.
class PrimeRange {
public:
    static constexpr u64 default_segment_span = u64{1} << 20;
    static constexpr u32 cache_version = 1;

    explicit PrimeRange(u64 limit, u64 segment_span = default_segment_span,
                        std::string cache_dir = "")
        : limit_(limit), span_(segment_span < 64 ? 64 : segment_span),
          cache_dir_(std::move(cache_dir)) {
        u64 root = static_cast<u64>(std::sqrt(static_cast<double>(limit))) + 2;
        base_ = small_primes_up_to(static_cast<u32>(root));
        if (!cache_dir_.empty())
            std::filesystem::create_directories(cache_dir_);
    }

    u64 limit() const { return limit_; }

    template <class F>
    void for_each(F&& f) const {
        if (limit_ <= 2) return;
        f(u64{2});
        for (u64 lo = 3; lo < limit_; lo += span_) {
            u64 hi = std::min(limit_, lo + span_);
            auto seg = load_or_sieve(lo, hi);
            u64 n = seg.odd_count();
            for (u64 j = 0; j < n; ++j)
                if (seg.test(j)) f(seg.first_odd + 2 * j);
        }
    }

    u64 count() const {
        u64 c = 0;
        for_each([&](u64) { ++c; });
        return c;
    }

private:
    u64 limit_;
    u64 span_;
    std::string cache_dir_;
    std::vector<u32> base_;

    std::string cache_path(u64 lo, u64 hi) const {
        return cache_dir_ + "/seg_" + std::to_string(lo) + "_" + std::to_string(hi) + ".bits";
    }

    detail::OddBitmap load_or_sieve(u64 lo, u64 hi) const {
        if (!cache_dir_.empty()) {
            detail::OddBitmap seg;
            if (try_load(lo, hi, seg)) return seg;
        }
        auto seg = detail::sieve_segment_bits(lo, hi, base_);
        if (!cache_dir_.empty()) store(seg);
        return seg;
    }

    bool try_load(u64 lo, u64 hi, detail::OddBitmap& seg) const {
        std::ifstream in(cache_path(lo, hi), std::ios::binary);
        if (!in) return false;
        char magic[4];
        u32 version = 0;
        u64 flo = 0, fhi = 0;
        in.read(magic, 4);
        in.read(reinterpret_cast<char*>(&version), sizeof version);
        in.read(reinterpret_cast<char*>(&flo), sizeof flo);
        in.read(reinterpret_cast<char*>(&fhi), sizeof fhi);
        if (!in || std::memcmp(magic, "PFSV", 4) != 0 || version != cache_version ||
            flo != lo || fhi != hi)
            return false;
        seg.lo = lo;
        seg.hi = hi;
        seg.first_odd = lo | 1;
        u64 nbytes = (seg.odd_count() + 7) / 8;
        seg.bits.resize(nbytes);
        in.read(reinterpret_cast<char*>(seg.bits.data()), static_cast<std::streamsize>(nbytes));
        if (!in || static_cast<u64>(in.gcount()) != nbytes) return false;
        in.peek();
        return in.eof();  // trailing garbage also invalidates
    }

    void store(const detail::OddBitmap& seg) const {
        std::string path = cache_path(seg.lo, seg.hi);
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) return;  // cache is best-effort
            out.write("PFSV", 4);
            u32 version = cache_version;
            out.write(reinterpret_cast<const char*>(&version), sizeof version);
            out.write(reinterpret_cast<const char*>(&seg.lo), sizeof seg.lo);
            out.write(reinterpret_cast<const char*>(&seg.hi), sizeof seg.hi);
            out.write(reinterpret_cast<const char*>(seg.bits.data()),
                      static_cast<std::streamsize>(seg.bits.size()));
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
    }
};

inline u64 prime_pi(u64 x, const std::string& cache_dir = "") {
    if (x < 2) return 0;
    return PrimeRange(x + 1, PrimeRange::default_segment_span, cache_dir).count();
}

// 1-indexed: nth_prime(1) == 2.
inline u64 nth_prime(u64 n) {
    if (n == 0) throw std::invalid_argument("nth_prime: index is 1-based");
    // Rosser-style upper bound, padded; retried with growth just in case.
    double nd = static_cast<double>(n < 6 ? 6 : n);
    u64 bound = static_cast<u64>(nd * (std::log(nd) + std::log(std::log(nd)))) + 16;
    for (;;) {
        u64 seen = 0, last = 0;
        PrimeRange range(bound);
        bool found = false;
        range.for_each([&](u64 p) {
            if (found) return;
            ++seen;
            if (seen == n) { last = p; found = true; }
        });
        if (found) return last;
        bound += bound / 2;
    }
}

} // namespace pfeas
