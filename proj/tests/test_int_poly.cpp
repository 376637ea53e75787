#include <catch2/catch_amalgamated.hpp>

#include "pfeas/int_poly.hpp"
#include "pfeas/example_system.hpp"

using namespace pfeas;

namespace {

IntPoly P(std::vector<std::pair<u64, Int>> pairs) { return IntPoly::from_pairs(pairs); }

// random sparse polynomial with given degree bound and coefficient bound
IntPoly random_poly(SplitMix64& g, u64 max_deg, long coef_bound, int terms) {
    std::vector<std::pair<u64, Int>> pairs;
    for (int i = 0; i < terms; ++i) {
        long c = static_cast<long>(bounded_rand(g, 2 * coef_bound + 1)) - coef_bound;
        pairs.emplace_back(bounded_rand(g, max_deg + 1), Int(c));
    }
    return IntPoly::from_pairs(pairs);
}

} // namespace

TEST_CASE("addition cancels, preserves identity, and merges", "[poly]") {
    CHECK(P({{2, 1}, {0, 1}}) + P({{2, -1}}) == P({{0, 1}}));
    IntPoly f = P({{3, 5}, {1, -2}});
    CHECK(f + IntPoly{} == f);
    CHECK(P({{1, 1}, {0, 1}}) + P({{1, 1}, {0, -1}}) == P({{1, 2}}));
    CHECK((f - f).is_zero());
}

TEST_CASE("multiplication is exact on small cases", "[poly]") {
    CHECK(P({{1, 1}, {0, -1}}) * P({{1, 1}, {0, 1}}) == P({{2, 1}, {0, -1}}));
    IntPoly f = P({{7, 3}, {2, -4}, {0, 9}});
    CHECK(f * IntPoly(1) == f);
    CHECK(P({{1, 1}, {0, 2}}) * P({{1, 1}, {0, 3}}) == P({{2, 1}, {1, 5}, {0, 6}}));
    CHECK((f * IntPoly{}).is_zero());
}

TEST_CASE("term storage is normalized, strictly decreasing, zero-free", "[poly]") {
    IntPoly f = P({{2, 1}, {5, 0}, {2, -1}, {7, 3}, {1, 4}, {7, 2}});
    REQUIRE(f.term_count() == 2);
    CHECK(f.terms()[0].exp == 7);
    CHECK(f.terms()[0].coef == 5);
    CHECK(f.terms()[1].exp == 1);
    CHECK(f.degree() == 7);
    CHECK(f.coeff(7) == 5);
    CHECK(f.coeff(2) == 0);
    CHECK(IntPoly{}.degree() == IntPoly::degree_minus_infinity);
    CHECK_THROWS_AS(IntPoly{}.lc(), std::invalid_argument);
}

TEST_CASE("derivative and evaluation agree with direct computation", "[poly]") {
    IntPoly f = P({{3, 2}, {1, -1}, {0, 5}});  // 2x^3 - x + 5
    CHECK(f.derivative() == P({{2, 6}, {0, -1}}));
    CHECK(f.eval(Int(0)) == 5);
    CHECK(f.eval(Int(2)) == 16 - 2 + 5);
    CHECK(f.eval(Int(-3)) == -54 + 3 + 5);

    SplitMix64 g(5);
    for (int it = 0; it < 30; ++it) {
        IntPoly r = random_poly(g, 40, 50, 6);
        Int a = Int(static_cast<long>(bounded_rand(g, 21)) - 10);
        Int direct = 0, pw;
        for (const auto& t : r.terms()) {
            mpz_pow_ui(pw.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(t.exp));
            direct += t.coef * pw;
        }
        CHECK(r.eval(a) == direct);
    }
}

TEST_CASE("content and primitive part normalize sign and scale", "[poly]") {
    IntPoly f = P({{2, -6}, {0, 9}});
    CHECK(f.content() == 3);
    CHECK(f.primitive_part() == P({{2, 2}, {0, -3}}));  // lc forced positive
    CHECK(f.primitive_part().lc() > 0);
    CHECK(IntPoly{}.content() == 0);
    CHECK(IntPoly{}.primitive_part().is_zero());
}

TEST_CASE("exact division inverts multiplication and rejects non-divisors", "[poly]") {
    auto q = IntPoly::div_exact(P({{2, 1}, {0, -1}}), P({{1, 1}, {0, -1}}));
    REQUIRE(q.has_value());
    CHECK(*q == P({{1, 1}, {0, 1}}));
    CHECK_FALSE(IntPoly::div_exact(P({{2, 1}, {0, 1}}), P({{1, 1}, {0, -1}})).has_value());
    CHECK_FALSE(IntPoly::div_exact(P({{2, 2}, {0, 2}}), P({{1, 2}})).has_value());
    CHECK_THROWS_AS(IntPoly::div_exact(P({{1, 1}}), IntPoly{}), std::invalid_argument);

    SplitMix64 g(11);
    for (int it = 0; it < 40; ++it) {
        IntPoly a = random_poly(g, 60, 100, 5);
        IntPoly b = random_poly(g, 60, 100, 5);
        if (b.is_zero()) continue;
        auto quot = IntPoly::div_exact(a * b, b);
        REQUIRE(quot.has_value());
        CHECK(*quot == a);
    }
}

TEST_CASE("height uses natural log of the max |coefficient|", "[poly]") {
    CHECK(P({{1, 1}, {0, 1}}).height() == 0.0);
    CHECK_THAT(P({{1, 893}, {0, -893}}).height(),
               Catch::Matchers::WithinRel(std::log(893.0), 1e-12));
    CHECK_THROWS_AS(IntPoly{}.height(), std::invalid_argument);

    // Gauss-type bound: h(fg) <= h(f) + h(g) + ln(1 + min(deg f, deg g))
    SplitMix64 g(17);
    for (int it = 0; it < 50; ++it) {
        IntPoly a = random_poly(g, 25, 60000, 8);
        IntPoly b = random_poly(g, 25, 60000, 8);
        if (a.is_zero() || b.is_zero()) continue;
        double bound = a.height() + b.height() +
                       std::log(1.0 + static_cast<double>(std::min(a.degree(), b.degree())));
        CHECK((a * b).height() <= bound + 1e-9);
    }
}

TEST_CASE("embedded example system matches its factored form", "[poly][fixtures]") {
    using namespace pfeas::fixtures;
    CHECK(example_u() * example_c1() == example_f1());
    CHECK(example_u() * example_c2() == example_f2());
    CHECK(example_f1().degree() == 120017);
    CHECK(example_f2().degree() == 210017);
    CHECK(example_f1().term_count() == 15);
    CHECK(example_f2().term_count() == 15);
    // max |coef| of the system is 893, giving height ln 893
    CHECK_THAT(example_f1().height(), Catch::Matchers::WithinRel(std::log(893.0), 1e-12));
    // 2-norms feed the log-resultant bound; values recomputed from the term lists
    CHECK(example_f1().norm2_squared() == 1388652);
    CHECK(example_f2().norm2_squared() == 160632);
    // evaluation cross-check at x = 1 against the factored form
    CHECK(example_f1().eval(Int(1)) == -198);
    CHECK(example_f2().eval(Int(1)) == 308);
    // exact division recovers the cofactors
    auto q1 = IntPoly::div_exact(example_f1(), example_u());
    auto q2 = IntPoly::div_exact(example_f2(), example_u());
    REQUIRE(q1.has_value());
    REQUIRE(q2.has_value());
    CHECK(*q1 == example_c1());
    CHECK(*q2 == example_c2());
    CHECK_NOTHROW(verify_example_checksum());
}
