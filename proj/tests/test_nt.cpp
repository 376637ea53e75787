#include <catch2/catch_amalgamated.hpp>

#include "pfeas/nt.hpp"

#include <set>

using namespace pfeas;

TEST_CASE("mulmod and powmod agree with naive arithmetic", "[nt]") {
    CHECK(mulmod(7, 9, 13) == 63 % 13);
    CHECK(powmod(2, 10, 1000) == 24);
    CHECK(powmod(3, 0, 7) == 1);
    CHECK(powmod(5, 1, 1) == 0);
    // Fermat on a 61-bit Mersenne prime
    const u64 m61 = (u64{1} << 61) - 1;
    CHECK(powmod(2, m61 - 1, m61) == 1);
    SplitMix64 g(42);
    for (int i = 0; i < 200; ++i) {
        u64 m = (g.next() >> 1) | 1;  // odd, < 2^63
        u64 a = g.next() % m, b = g.next() % m;
        CHECK(mulmod(a, b, m) == static_cast<u64>(static_cast<u128>(a) * b % m));
        CHECK(addmod(a, b, m) == static_cast<u64>((static_cast<u128>(a) + b) % m));
        CHECK(submod(a, b, m) == static_cast<u64>((static_cast<u128>(a) + m - b) % m));
    }
}

TEST_CASE("inv_mod inverts units and rejects non-units", "[nt]") {
    CHECK(inv_mod(3, 7) == 5);
    CHECK(inv_mod(1, 2) == 1);
    SplitMix64 g(7);
    for (int i = 0; i < 100; ++i) {
        u64 m = (g.next() >> 2) | 1;
        u64 a = g.next() % m;
        if (a == 0 || std::gcd(a, m) != 1) continue;
        CHECK(mulmod(inv_mod(a, m), a, m) == 1);
    }
    CHECK_THROWS_AS(inv_mod(6, 9), std::invalid_argument);
}

TEST_CASE("Montgomery arithmetic matches plain modular arithmetic", "[nt]") {
    // moduli exercised later by the NTT and by gcd reconstruction
    const u64 moduli[] = {
        4611686018326724609ULL,  // 62-bit NTT-friendly prime
        4611686018427388039ULL,  // first prime above 2^62
        998244353ULL,
        (u64{1} << 61) - 1,
        3ULL,
    };
    SplitMix64 g(1234);
    for (u64 q : moduli) {
        Mont64 mont(q);
        CHECK(mont.from(mont.one()) == 1 % q);
        for (int i = 0; i < 100; ++i) {
            u64 a = g.next() % q, b = g.next() % q;
            u64 am = mont.to(a), bm = mont.to(b);
            CHECK(mont.from(am) == a);
            CHECK(mont.from(mont.mul(am, bm)) == mulmod(a, b, q));
            CHECK(mont.from(mont.add(am, bm)) == addmod(a, b, q));
            CHECK(mont.from(mont.sub(am, bm)) == submod(a, b, q));
            u64 e = g.next() % 1000;
            CHECK(mont.from(mont.pow(am, e)) == powmod(a, e, q));
            if (a != 0) CHECK(mulmod(mont.from(mont.inv(am)), a, q) == 1);
        }
    }
}

TEST_CASE("deterministic Miller-Rabin classifies known primes and composites", "[nt]") {
    const u64 primes[] = {
        2, 3, 5, 7, 31, 97, 997, 999983, 2209457,
        (u64{1} << 61) - 1,            // Mersenne
        4611686018326724609ULL,        // NTT modulus
        4611686018427388039ULL,        // first prime > 2^62
        18446744073709551557ULL,       // largest 64-bit prime
    };
    const u64 composites[] = {
        0, 1, 4, 561, 41041, 825265,   // Carmichael numbers
        3215031751ULL,                 // strong pseudoprime to bases 2,3,5,7
        3825123056546413051ULL,        // strong pseudoprime to bases 2..23
        u64(999983) * 999983,
        ~u64{0},                       // 2^64 - 1
    };
    for (u64 p : primes) CHECK(is_prime(p));
    for (u64 c : composites) CHECK_FALSE(is_prime(c));
}

TEST_CASE("splitmix64 produces the reference stream", "[nt]") {
    SplitMix64 g(0);
    CHECK(g.next() == 0xe220a8397b1dcdafULL);
    CHECK(g.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(g.next() == 0x06c45d188009454fULL);
}

TEST_CASE("bounded_rand stays in range and is deterministic", "[nt]") {
    SplitMix64 g1(99), g2(99);
    for (u64 n : {1ULL, 2ULL, 10ULL, 163317ULL, (1ULL << 40) + 7}) {
        for (int i = 0; i < 50; ++i) {
            u64 v = bounded_rand(g1, n);
            CHECK(v < n);
            CHECK(v == bounded_rand(g2, n));
        }
    }
}

TEST_CASE("sample_indices draws distinct sorted indices reproducibly", "[nt]") {
    auto s1 = sample_indices(163317, 2000, 7);
    auto s2 = sample_indices(163317, 2000, 7);
    auto s3 = sample_indices(163317, 2000, 8);
    REQUIRE(s1.size() == 2000);
    CHECK(s1 == s2);
    CHECK(s1 != s3);
    CHECK(std::is_sorted(s1.begin(), s1.end()));
    std::set<u64> uniq(s1.begin(), s1.end());
    CHECK(uniq.size() == s1.size());
    CHECK(*s1.rbegin() < 163317);

    // exhaustive draw is a permutation of [0, n)
    auto all = sample_indices(50, 50, 3);
    for (u64 i = 0; i < 50; ++i) CHECK(all[i] == i);

    CHECK_THROWS_AS(sample_indices(5, 6, 0), std::invalid_argument);
}
