#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pfeas/bounds.hpp"
#include "pfeas/example_system.hpp"
#include "pfeas/resultant.hpp"

using namespace pfeas;
using Catch::Approx;

namespace {

IntPoly ip(std::vector<std::pair<u64, long>> ps) {
    std::vector<std::pair<u64, Int>> v;
    for (auto [e, c] : ps) v.push_back({e, Int(c)});
    return IntPoly::from_pairs(v);
}

PolySystem sys1(const IntPoly& f) { return PolySystem::from_univariate({f}); }

} // namespace

TEST_CASE("system statistics of the embedded example pair", "[bounds][fixtures]") {
    PolySystem s =
        PolySystem::from_univariate({fixtures::example_f1(), fixtures::example_f2()});
    CHECK(s.n == 1);
    CHECK(s.k == 2);
    CHECK(s.D == 210017);
    CHECK(s.h == Approx(std::log(893.0)).epsilon(1e-12));
    // total bits of coefficients and positive exponents, counted by hand
    CHECK(s.sigma == 585.0);
}

TEST_CASE("prime-count bound: pinned values and parse variants", "[bounds]") {
    PolySystem ex =
        PolySystem::from_univariate({fixtures::example_f1(), fixtures::example_f2()});
    // literal parse: 8 * 210017 * (ln 893 + ln 2 + 8 ln 2 * 210017)
    double af = nullstellensatz_bound(ex, AfParse::literal);
    CHECK(af == Approx(1956667936179.5195).epsilon(1e-9));
    CHECK(std::fabs(af - 1.9567e12) / 1.9567e12 < 0.005);
    // the grouped parse collapses the dominant factor into a logarithm
    double afg = nullstellensatz_bound(ex, AfParse::grouped);
    CHECK(afg == Approx(186616840.79899946).epsilon(1e-9));
    CHECK(afg < af / 1000);

    // n=1, k=1, D=1, h=0: 4*1*2*1*(0 + 0 + 8 ln 2) = 64 ln 2
    PolySystem tiny = sys1(ip({{1, 1}, {0, 1}}));
    CHECK(nullstellensatz_bound(tiny) == Approx(64 * std::log(2.0)).epsilon(1e-12));

    // doubling D (quadratic dependence at n=1) more than doubles the bound
    for (u64 d : {u64{3}, u64{50}, u64{4000}}) {
        double lo = nullstellensatz_bound(sys1(IntPoly::monomial(Int(1), d)));
        double hi = nullstellensatz_bound(sys1(IntPoly::monomial(Int(1), 2 * d)));
        CHECK(hi > 2 * lo);
    }

    // degenerate systems are rejected
    CHECK_THROWS_AS(nullstellensatz_bound(sys1(ip({{0, 3}}))), std::invalid_argument);
    CHECK_THROWS_AS(PolySystem::from_univariate({}), std::invalid_argument);
}

TEST_CASE("sylvester row-norm bound on the log-resultant", "[bounds]") {
    const IntPoly& f1 = fixtures::example_f1();
    const IntPoly& f2 = fixtures::example_f2();
    // 210017 * ln sqrt(1388652) + 120017 * ln sqrt(160632)
    double had = hadamard_log_resultant(f1, f2);
    CHECK(had == Approx(2204538.0151783843).epsilon(1e-9));
    CHECK(std::fabs(had - 2.2045e6) / 2.2045e6 < 0.002);

    // unit norms: a = b = x
    IntPoly x = ip({{1, 1}});
    CHECK(hadamard_log_resultant(x, x) == 0.0);

    // Res(x^2-2, x^2-3) = 1, ln = 0, below the bound ln 5 + ln 10
    IntPoly a = ip({{2, 1}, {0, -2}}), b = ip({{2, 1}, {0, -3}});
    CHECK(hadamard_log_resultant(a, b) ==
          Approx(std::log(5.0) + std::log(10.0)).epsilon(1e-12));

    CHECK_THROWS_AS(hadamard_log_resultant(IntPoly{}, x), std::invalid_argument);
    CHECK_THROWS_AS(hadamard_log_resultant(x, IntPoly{}), std::invalid_argument);

    // dominates ln|Res| on random instances with nonzero resultant
    SplitMix64 rng(0xB0D5);
    for (int it = 0; it < 30; ++it) {
        std::vector<std::pair<u64, Int>> va, vb;
        u64 da = 1 + bounded_rand(rng, 12), db = 1 + bounded_rand(rng, 12);
        for (u64 e = 0; e <= da; ++e)
            va.push_back({e, Int(static_cast<long>(bounded_rand(rng, 199)) - 99)});
        for (u64 e = 0; e <= db; ++e)
            vb.push_back({e, Int(static_cast<long>(bounded_rand(rng, 199)) - 99)});
        va.back().second = 1;
        vb.back().second = 1;
        IntPoly pa = IntPoly::from_pairs(va), pb = IntPoly::from_pairs(vb);
        Int r = resultant(pa, pb);
        if (r == 0) continue;
        CHECK(log_abs(r) <= hadamard_log_resultant(pa, pb) + 1e-9);
    }
}

TEST_CASE("distinct-prime-factor caps", "[bounds]") {
    // the example pipeline: row-norm bound, then the omega cap
    double had =
        hadamard_log_resultant(fixtures::example_f1(), fixtures::example_f2());
    CHECK(robin_omega_bound(had) == 163317);

    // consistency against known factorizations (primorials)
    const u64 primorial[] = {6, 30, 210, 2310, 30030, 510510, 9699690, 223092870};
    for (int m = 2; m <= 9; ++m) {
        double L = std::log(static_cast<double>(primorial[m - 2]));
        u64 rb = robin_omega_bound(L);
        CHECK(rb >= static_cast<u64>(m));
        u64 nb = naive_prime_factor_bound(L);
        CHECK(nb >= static_cast<u64>(m));
        // past L ~ 7 the refined cap is the tighter of the two
        if (L >= 7.0) CHECK(rb <= nb);
    }

    // bit-count cap: alpha = 1, 8, 30030
    CHECK(naive_prime_factor_bound(0.0) == 1);
    CHECK(naive_prime_factor_bound(std::log(8.0)) == 4);
    CHECK(naive_prime_factor_bound(std::log(30030.0)) == 15);

    CHECK_THROWS_AS(robin_omega_bound(std::log(2.99)), std::invalid_argument);
    CHECK_THROWS_AS(robin_omega_bound(0.0), std::invalid_argument);
    CHECK_THROWS_AS(naive_prime_factor_bound(-0.1), std::invalid_argument);
}

TEST_CASE("hypothesised density lower bound", "[bounds]") {
    // always strictly below the Chebotarev-style main term
    for (double x : {10.0, 1e6, 1e30, 1e100})
        for (i64 d : {i64{1}, i64{2}, i64{7}})
            CHECK(mrh_lower_bound(x, d, 3.0, 2.0) < x / (d * std::log(x)));

    // the subtracted term shrinks as C decreases toward 1 (fixed large x)
    double prev = mrh_lower_bound(1e30, 2, 1.0, 1.5);
    for (double C : {2.0, 3.0, 4.0}) {
        double cur = mrh_lower_bound(1e30, 2, 1.0, C);
        CHECK(cur < prev);
        prev = cur;
    }

    // positive once x clears the onset: d=1, sigma=1, C=2 at x = 10^43
    CHECK(mrh_lower_bound(1e43, 1, 1.0, 2.0) ==
          Approx(1.0099870659348324e41).epsilon(1e-9));
    // for d=2, sigma=1, C=2 the onset sits near x ~ 10^1259, far beyond
    // double range, so any representable x still evaluates negative
    CHECK(mrh_lower_bound(1e100, 2, 1.0, 2.0) < 0);
    CHECK(mrh_lower_bound(1e300, 2, 1.0, 2.0) < 0);

    CHECK_THROWS_AS(mrh_lower_bound(2.9, 1, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(mrh_lower_bound(10.0, 0, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(mrh_lower_bound(10.0, 1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("onset estimate: scaling, monotonicity, smoke", "[bounds]") {
    PolySystem small = PolySystem::from_univariate(
        {ip({{3, 1}, {1, 5}, {0, 7}}), ip({{3, 1}, {1, 5}, {0, 7}})});
    CHECK(small.sigma == 20.0);  // 2 * (3 + 4 + 3) bits

    double t = t_estimate(small, 2.0, 1.0);
    CHECK(std::isfinite(t));
    CHECK(t > 0);
    // linear in the scale factor
    CHECK(t_estimate(small, 2.0, 3.5) == Approx(3.5 * t).epsilon(1e-12));

    // nondecreasing in sigma: same degrees, fatter coefficients
    PolySystem fat = PolySystem::from_univariate(
        {ip({{3, 1}, {1, 50000}, {0, 70001}}), ip({{3, 1}, {1, 5}, {0, 7}})});
    CHECK(fat.sigma > small.sigma);
    CHECK(t_estimate(fat, 2.0, 1.0) >= t);

    CHECK_THROWS_AS(t_estimate(small, 1.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(t_estimate(small, 2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(t_estimate(sys1(ip({{0, 2}})), 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("discriminant log cap", "[bounds]") {
    // d = 1 collapses to c*(sigma + 1)
    CHECK(discriminant_log_bound(i64{1}, 4.0, 1.0) == Approx(5.0));
    CHECK(discriminant_log_bound(i64{1}, 4.0, 2.5) == Approx(12.5));

    // monotone in both d and sigma
    CHECK(discriminant_log_bound(i64{3}, 4.0, 1.0) >
          discriminant_log_bound(i64{2}, 4.0, 1.0));
    CHECK(discriminant_log_bound(i64{2}, 9.0, 1.0) >
          discriminant_log_bound(i64{2}, 4.0, 1.0));

    // dominates the true value for x^2+1 even at sigma = 0: 8 >= ln 4
    IntPoly f = ip({{2, 1}, {0, 1}});
    Int disc = discriminant(f);
    CHECK(disc == -4);
    CHECK(discriminant_log_bound(i64{2}, 0.0, 1.0) == Approx(8.0));
    CHECK(discriminant_log_bound(i64{2}, 0.0, 1.0) >= log_abs(disc));

    CHECK_THROWS_AS(discriminant_log_bound(i64{0}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(discriminant_log_bound(i64{2}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("zero-free region membership", "[bounds]") {
    // pinned point well inside the strip: threshold there is ~1 - 3.2e-3
    CHECK(mdzh_region_contains(1 - 1e-9, 1.0, 2, 10.0, 5.0));

    // the critical line is never inside, across a parameter grid
    for (i64 d : {i64{2}, i64{100}})
        for (double ld : {10.0, 1e6})
            for (double C : {4.5, 5.0, 8.0})
                for (double g : {0.0, 0.5, 100.0})
                    CHECK_FALSE(mdzh_region_contains(0.5, g, d, ld, C));

    // real-zero interval at d=2, logDelta=10, C=5: (1 - 1/286.33, 1), open
    CHECK(mdzh_region_contains(0.9966, 0.0, 2, 10.0, 5.0));
    CHECK(mdzh_region_contains(0.999, 0.0, 2, 10.0, 5.0));
    CHECK_FALSE(mdzh_region_contains(0.9964, 0.0, 2, 10.0, 5.0));
    CHECK_FALSE(mdzh_region_contains(1.0, 0.0, 2, 10.0, 5.0));

    // nonreal zeroes below the height cutoff are not covered
    CHECK_FALSE(mdzh_region_contains(1 - 1e-12, 1e-9, 2, 10.0, 5.0));

    CHECK_THROWS_AS(mdzh_region_contains(0.9, 1.0, 2, 10.0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(mdzh_region_contains(0.9, 1.0, 2, 0.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(mdzh_region_contains(0.9, 1.0, 0, 10.0, 5.0), std::invalid_argument);
}

TEST_CASE("unconditional region sits inside the hypothesised one", "[bounds]") {
    // grid check at eps = 0.01, C = 5, in the large-d, large-Delta regime;
    // the boundary of the unconditional region must land inside the
    // hypothesised region, with room to spare (strict containment)
    const double eps = 0.01, C = 5.0;
    for (i64 d : {i64{100}, i64{1000}}) {
        for (double ld : {1e6, 1e8}) {
            for (double g : {0.01, 1.0, 1000.0}) {
                double beta_edge = 1.0 - eps / (ld + std::log(g + 2.0));
                REQUIRE(unconditional_region_contains(beta_edge, g, ld, eps));
                CHECK(mdzh_region_contains(beta_edge, g, d, ld, C));
            }
            // strictness: a point between the two boundaries
            double L2 = std::log(3.0);  // gamma = 1
            double K = std::pow(std::log(static_cast<double>(d) *
                                         (std::log(3.0) + ld)), C);
            double mdzh_edge = 1.0 - 1.0 / (K * L2);
            double lo_edge = 1.0 - eps / (ld + L2);
            REQUIRE(mdzh_edge < lo_edge);
            double mid = 0.5 * (mdzh_edge + lo_edge);
            CHECK(mdzh_region_contains(mid, 1.0, d, ld, C));
            CHECK_FALSE(unconditional_region_contains(mid, 1.0, ld, eps));
        }
    }
}

TEST_CASE("bound panel assembly", "[bounds][fixtures]") {
    RunConfig cfg;
    BoundSet b = compute_bounds({fixtures::example_f1(), fixtures::example_f2()}, cfg);
    CHECK(b.a_f == Approx(1956667936179.5195).epsilon(1e-9));
    CHECK(b.log_alpha_bound == Approx(2204538.0151783843).epsilon(1e-9));
    CHECK(b.robin_omega == 163317);
    CHECK(b.mrh_C == 5.0);
    CHECK(b.region_d == 210017.0);
    CHECK(b.region_log_delta > 0);
    CHECK(std::isfinite(b.t_f_log));
    CHECK(b.t_f_log > 0);

    // single polynomial: no resultant refinement available
    BoundSet s = compute_bounds({ip({{2, 1}, {0, 1}})}, cfg);
    CHECK(s.a_f > 0);
    CHECK(std::isnan(s.log_alpha_bound));
    CHECK(s.robin_omega == -1);

    // a pair whose row-norm bound is below ln 3 leaves the cap unset
    BoundSet t = compute_bounds({ip({{1, 1}}), ip({{1, 1}, {0, 1}})}, cfg);
    CHECK(t.log_alpha_bound < std::log(3.0));
    CHECK(t.robin_omega == -1);
}

TEST_CASE("run configuration constants", "[bounds]") {
    RunConfig cfg;
    CHECK(cfg.mrh_C == 5.0);
    CHECK(cfg.tf_c_scale == 1.0);
    CHECK(cfg.disc_c_disc == 1.0);
    CHECK(cfg.af_parse == AfParse::literal);
    CHECK(cfg.seed == 0);

    cfg.set_constant("mrh.C", "6.25");
    CHECK(cfg.mrh_C == 6.25);
    cfg.set_constant("tf.c_scale", "0.5");
    CHECK(cfg.tf_c_scale == 0.5);
    cfg.set_constant("disc.c_disc", "2");
    CHECK(cfg.disc_c_disc == 2.0);
    cfg.set_constant("af.parse", "grouped");
    CHECK(cfg.af_parse == AfParse::grouped);
    cfg.set_constant("af.parse", "literal");
    CHECK(cfg.af_parse == AfParse::literal);

    CHECK_THROWS_AS(cfg.set_constant("af.parse", "both"), std::invalid_argument);
    CHECK_THROWS_AS(cfg.set_constant("mrh.C", "fast"), std::invalid_argument);
    CHECK_THROWS_AS(cfg.set_constant("mrh.C", "1.5x"), std::invalid_argument);
    CHECK_THROWS_AS(cfg.set_constant("robin.k", "1"), std::invalid_argument);

    CHECK(parse_format("csv") == ReportFormat::csv);
    CHECK(parse_format("json") == ReportFormat::json);
    CHECK_THROWS_AS(parse_format("yaml"), std::invalid_argument);

    // the echo is ordered and carries every constant
    auto kv = cfg.echo();
    REQUIRE(kv.size() >= 7);
    CHECK(kv[0].first == "af.parse");
    CHECK(kv[0].second == "literal");
    CHECK(kv[1] == std::pair<std::string, std::string>{"disc.c_disc", "2"});
    CHECK(kv[2] == std::pair<std::string, std::string>{"mrh.C", "6.25"});
    CHECK(kv[3] == std::pair<std::string, std::string>{"tf.c_scale", "0.5"});
}
