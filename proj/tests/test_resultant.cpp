#include <catch2/catch_amalgamated.hpp>

#include "pfeas/resultant.hpp"

using namespace pfeas;

namespace {

IntPoly ip(std::vector<std::pair<u64, long>> ps) {
    std::vector<std::pair<u64, Int>> v;
    for (auto [e, c] : ps) v.push_back({e, Int(c)});
    return IntPoly::from_pairs(v);
}

IntPoly random_poly(SplitMix64& rng, u64 max_deg, long coef_span) {
    std::vector<std::pair<u64, Int>> v;
    u64 d = 1 + bounded_rand(rng, max_deg);
    for (u64 e = 0; e <= d; ++e) {
        long c = static_cast<long>(bounded_rand(rng, 2 * static_cast<u64>(coef_span) + 1)) -
                 coef_span;
        if (c != 0 || e == d) v.push_back({e, Int(c == 0 ? 1 : c)});
    }
    return IntPoly::from_pairs(v);
}

} // namespace

TEST_CASE("resultants on the pinned examples, both routes", "[res]") {
    IntPoly a = ip({{2, 1}, {0, 1}});   // x²+1
    IntPoly b = ip({{1, 1}, {0, 1}});   // x+1
    CHECK(resultant(a, b) == 2);
    CHECK(resultant_sylvester(a, b) == 2);
    IntPoly c = ip({{1, 1}, {0, -3}});  // x−3 shares a root with itself
    CHECK(resultant(c, c) == 0);
    CHECK(resultant_sylvester(c, c) == 0);
    // Res(x²−2, x²−3): 4×4 Sylvester determinant expands to 1
    IntPoly d = ip({{2, 1}, {0, -2}}), e = ip({{2, 1}, {0, -3}});
    CHECK(resultant(d, e) == 1);
    CHECK(resultant_sylvester(d, e) == 1);
}

TEST_CASE("resultant degenerate and error cases", "[res]") {
    CHECK_THROWS_AS(resultant(IntPoly{}, ip({{1, 1}})), std::invalid_argument);
    CHECK_THROWS_AS(resultant(ip({{1, 1}}), IntPoly{}), std::invalid_argument);
    // constants: Res(c, b) = c^{deg b}
    CHECK(resultant(ip({{0, 3}}), ip({{4, 1}, {0, 1}})) == 81);
    CHECK(resultant(ip({{3, 2}, {0, 1}}), ip({{0, -2}})) == -8);
    CHECK(resultant(ip({{0, 5}}), ip({{0, 7}})) == 1);
    // over the exact threshold the caller is pointed at the log-magnitude bound
    IntPoly big = IntPoly::monomial(Int(1), 1501) + IntPoly(Int(1));
    IntPoly big2 = IntPoly::monomial(Int(1), 500) + IntPoly(Int(3));
    CHECK_THROWS_MATCHES(resultant(big, big2), std::domain_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("hadamard_log_resultant")));
    CHECK_NOTHROW(resultant(big, big2, 5000));
}

TEST_CASE("resultant routes agree on random instances", "[res]") {
    SplitMix64 rng(0x5E5417);
    for (int it = 0; it < 36; ++it) {
        IntPoly a = random_poly(rng, 30, 1 << 16);
        IntPoly b = random_poly(rng, 30, 1 << 16);
        CAPTURE(it, a.degree(), b.degree());
        Int crt = resultant(a, b);
        Int syl = resultant_sylvester(a, b);
        REQUIRE(crt == syl);
        // swap antisymmetry: Res(a,b) = (−1)^{da·db}·Res(b,a)
        Int back = resultant(b, a);
        if ((a.degree() & 1) && (b.degree() & 1))
            CHECK(back == -crt);
        else
            CHECK(back == crt);
    }
}

TEST_CASE("resultant detects common roots exactly", "[res]") {
    SplitMix64 rng(0xDEC0DE);
    int coprime_seen = 0, common_seen = 0;
    for (int it = 0; it < 24; ++it) {
        IntPoly a = random_poly(rng, 10, 50);
        IntPoly b = random_poly(rng, 10, 50);
        bool coprime = gcd_z(a, b).degree() == 0;
        Int r = resultant(a, b);
        CAPTURE(it);
        CHECK((r != 0) == coprime);
        coprime_seen += coprime;
        // force a shared factor and watch the resultant vanish
        IntPoly s = ip({{1, 3}, {0, -2}});
        CHECK(resultant(a * s, b * s) == 0);
        ++common_seen;
    }
    CHECK(coprime_seen > 0);
    CHECK(common_seen == 24);
}

TEST_CASE("resultant respects evaluation and multiplicativity", "[res]") {
    SplitMix64 rng(0xE7A1);
    for (int it = 0; it < 16; ++it) {
        CAPTURE(it);
        IntPoly a = random_poly(rng, 9, 40);
        long cc = static_cast<long>(bounded_rand(rng, 41)) - 20;
        // Res(a, x−c) = (−1)^{deg a}·a(c)
        IntPoly lin = ip({{1, 1}, {0, -cc}});
        Int want = a.eval(Int(cc));
        if (a.degree() & 1) want = -want;
        CHECK(resultant(a, lin) == want);
        // Res(a·b, c) = Res(a,c)·Res(b,c)
        IntPoly b = random_poly(rng, 7, 40);
        IntPoly c = random_poly(rng, 6, 40);
        CHECK(resultant(a * b, c) == resultant(a, c) * resultant(b, c));
    }
}

TEST_CASE("discriminants on the pinned examples", "[res]") {
    CHECK(discriminant(ip({{2, 1}, {0, 1}})) == -4);   // x²+1
    CHECK(discriminant(ip({{2, 1}, {0, -2}})) == 8);   // x²−2
    CHECK(discriminant(ip({{3, 1}, {0, -2}})) == -108);  // x³−2
    // b²−4ac on a general quadratic
    CHECK(discriminant(ip({{2, 3}, {1, 5}, {0, -7}})) == 25 + 4 * 3 * 7);
    // repeated root → 0
    CHECK(discriminant(ip({{2, 1}, {1, -2}, {0, 1}})) == 0);
    // linear convention
    CHECK(discriminant(ip({{1, 9}, {0, 4}})) == 1);
    CHECK_THROWS_AS(discriminant(ip({{0, 3}})), std::invalid_argument);
}
