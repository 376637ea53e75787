#pragma once

// Closed-form bound evaluators, all pure functions of log-scale inputs
// computed in double precision (only magnitudes matter here; the exact
// integer work lives in int_gcd.hpp / resultant.hpp):
//
//   nullstellensatz_bound    A_F, a cap on how many primes p can admit a
//                            common root mod p when the system has no
//                            complex root
//   hadamard_log_resultant   upper bound on ln|Res(a,b)| via row norms of
//                            the Sylvester matrix
//   robin_omega_bound        explicit cap on the number of distinct prime
//                            factors of an integer with known log-magnitude
//   naive_prime_factor_bound the same cap by bit count
//   mrh_lower_bound          hypothesised lower bound on the root-admitting
//                            prime count pi_f(x)
//   t_estimate               parametric onset log t(F) past which the
//                            hypothesised lower bound overtakes 7*A_F
//   discriminant_log_bound   parametric cap on ln|disc|
//   mdzh_region_contains     membership test for the hypothesised zero-free
//                            region of a Dedekind zeta function
//
// The scale factors on t_estimate and discriminant_log_bound, and the
// exponent C, are free parameters (no principled values exist); they come
// from RunConfig and every report echoes them.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pfeas/config.hpp"
#include "pfeas/int_poly.hpp"
#include "pfeas/poly_system.hpp"

namespace pfeas {

namespace detail {

inline u64 checked_to_u64(double v, const char* what) {
    if (!(v >= 0) || v >= 18446744073709549568.0)  // 2^64 rounded down to a double
        throw std::overflow_error(std::string(what) + ": bound exceeds integer range");
    return static_cast<u64>(v);
}

} // namespace detail

// A_F = 4n(n+1) D^n (h + ln k + (n+7) ln(n+1) D).  Two defensible
// parenthesizations of the final factor exist; the default, literal one —
// (n+7) * ln(n+1) * D — is the reading the example system's pinned value
// agrees with (the grouped one, (n+7) * ln((n+1)*D), comes out four orders
// of magnitude smaller there and is exposed for comparison).
inline double nullstellensatz_bound(const PolySystem& s, AfParse parse = AfParse::literal) {
    if (s.k < 1) throw std::invalid_argument("nullstellensatz_bound: empty system");
    if (s.n < 1) throw std::invalid_argument("nullstellensatz_bound: no variables");
    if (s.D < 1)
        throw std::invalid_argument("nullstellensatz_bound: constant system (D = 0)");
    double n = static_cast<double>(s.n);
    double D = static_cast<double>(s.D);
    double tail = parse == AfParse::literal ? (n + 7) * std::log(n + 1) * D
                                            : (n + 7) * std::log((n + 1) * D);
    return 4 * n * (n + 1) * std::pow(D, n) *
           (s.h + std::log(static_cast<double>(s.k)) + tail);
}

// deg(b)*ln||a||_2 + deg(a)*ln||b||_2: by Hadamard's inequality on the rows
// of the Sylvester matrix, an upper bound on ln|Res(a,b)| whenever Res != 0.
inline double hadamard_log_resultant(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero())
        throw std::invalid_argument("hadamard_log_resultant: zero polynomial");
    return static_cast<double>(b.degree()) * a.log_norm2() +
           static_cast<double>(a.degree()) * b.log_norm2();
}

// Explicit cap on omega(alpha) (distinct prime factors) given L = ln(alpha):
// ceil(L/lnL + L/(lnL)^2 + 2.89726 L/(lnL)^3), valid for alpha >= 3.
inline u64 robin_omega_bound(double log_alpha) {
    static const double ln3 = std::log(3.0);
    if (!(log_alpha >= ln3))
        throw std::invalid_argument("robin_omega_bound: requires log_alpha >= ln 3");
    double L = log_alpha, lnL = std::log(L);
    double raw = L / lnL + L / (lnL * lnL) + 2.89726 * L / (lnL * lnL * lnL);
    return detail::checked_to_u64(std::ceil(raw), "robin_omega_bound");
}

// omega(alpha) <= floor(1 + log2(alpha)), since alpha >= 2^omega(alpha).
inline u64 naive_prime_factor_bound(double log_alpha) {
    if (!(log_alpha >= 0))
        throw std::invalid_argument("naive_prime_factor_bound: requires log_alpha >= 0");
    static const double ln2 = std::log(2.0);
    return detail::checked_to_u64(std::floor(1.0 + log_alpha / ln2),
                                  "naive_prime_factor_bound");
}

// Hypothesised lower bound on pi_f(x) for squarefree f of degree d with
// coefficient bits <= sigma:
//   x * ( 1/(d ln x) - 1/exp( (ln x)^{1/C} / (ln(d^2 sigma + d^3))^C ) ).
// Negative for all x of desk scale (the subtracted term dominates until x is
// astronomically large); the caller interprets the sign.
inline double mrh_lower_bound(double x, i64 d, double sigma, double C) {
    if (!(x >= 3)) throw std::invalid_argument("mrh_lower_bound: requires x >= 3");
    if (d < 1) throw std::invalid_argument("mrh_lower_bound: requires d >= 1");
    if (!(C > 1)) throw std::invalid_argument("mrh_lower_bound: requires C > 1");
    double dd = static_cast<double>(d);
    double lnx = std::log(x);
    double base = std::log(dd * dd * sigma + dd * dd * dd);
    double ratio = std::pow(lnx, 1.0 / C) / std::pow(base, C);
    return x * (1.0 / (dd * lnx) - std::exp(-ratio));
}

// Parametric cap on ln|disc f| for f of degree d with coefficient bits
// <= sigma: c_disc * (d^2 sigma + d^3).  The true absolute constant is
// unspecified; c_disc defaults to 1 and is echoed in reports.
inline double discriminant_log_bound(i64 d, double sigma, double c_disc) {
    if (d < 1) throw std::invalid_argument("discriminant_log_bound: requires d >= 1");
    if (!(c_disc > 0))
        throw std::invalid_argument("discriminant_log_bound: requires c_disc > 0");
    double dd = static_cast<double>(d);
    return c_disc * (dd * dd * sigma + dd * dd * dd);
}

// annotation every report attaches to t_estimate / discriminant_log_bound
// output: the absolute constants are free parameters, not derived values
inline constexpr const char* parametric_note =
    "parametric: absolute constants unspecified, scaled by tf.c_scale / disc.c_disc";

// log t(F): the onset past which the hypothesised density lower bound
// overtakes 7*A_F, assembled from the two regime thresholds
//   4 (ln ln 3D)^2 (ln(d ln 3D))^{C^2}   with ln D = discriminant_log_bound
//   sigma(F)^{4 C^2}
// where d = D^n caps the degree of a univariate reduction of the system.
// Purely parametric (see parametric_note); may overflow to +inf for large
// sigma, which downstream comparisons treat as "beyond any feasible sweep".
inline double t_estimate(const PolySystem& s, double C, double c_scale,
                         double c_disc = 1.0) {
    if (!(C >= 2)) throw std::invalid_argument("t_estimate: requires C >= 2");
    if (!(c_scale > 0)) throw std::invalid_argument("t_estimate: requires c_scale > 0");
    if (!(c_disc > 0)) throw std::invalid_argument("t_estimate: requires c_disc > 0");
    if (s.D < 1) throw std::invalid_argument("t_estimate: constant system (D = 0)");
    double d = std::pow(static_cast<double>(s.D), static_cast<double>(s.n));
    double log_delta = c_disc * (d * d * s.sigma + d * d * d);
    static const double ln3 = std::log(3.0);
    double ln3delta = ln3 + log_delta;              // ln(3*Delta-hat)
    double lnln = std::log(ln3delta);               // > 0 since 3*Delta-hat > 3
    double t1 = 4.0 * lnln * lnln * std::pow(std::log(d * ln3delta), C * C);
    double t2 = std::pow(s.sigma, 4.0 * C * C);
    return c_scale * std::max(t1, t2);
}

// Membership in the hypothesised zero-free region of the Dedekind zeta
// function of a degree-d field with |disc| = Delta (passed as logDelta):
// either |gamma| is past the low-height cutoff and beta is within the
// shrinking strip at 1, or the zero is real and inside the open interval
// adjacent to 1.
inline bool mdzh_region_contains(double beta, double gamma, i64 d, double log_delta,
                                 double C) {
    if (!(C > 4)) throw std::invalid_argument("mdzh_region_contains: requires C > 4");
    if (!(log_delta > 0))
        throw std::invalid_argument("mdzh_region_contains: requires logDelta > 0");
    if (d < 1) throw std::invalid_argument("mdzh_region_contains: requires d >= 1");
    static const double ln3 = std::log(3.0);
    double ln3delta = ln3 + log_delta;                          // ln(3*Delta)
    double K = std::pow(std::log(static_cast<double>(d) * ln3delta), C);
    double ag = std::fabs(gamma);
    if (ag >= 1.0 / (1.0 + 4.0 * log_delta) &&
        beta >= 1.0 - 1.0 / (K * std::log(ag + 2.0)))
        return true;
    return gamma == 0.0 && 1.0 - 1.0 / K < beta && beta < 1.0;
}

// The older, unconditional zero-free region (parameter eps > 0):
// |gamma| >= (1+4 logDelta)^{-1} and beta >= 1 - eps/(logDelta + ln(|gamma|+2)).
// Kept for the containment comparison against mdzh_region_contains.
inline bool unconditional_region_contains(double beta, double gamma, double log_delta,
                                          double eps) {
    if (!(eps > 0))
        throw std::invalid_argument("unconditional_region_contains: requires eps > 0");
    if (!(log_delta > 0))
        throw std::invalid_argument("unconditional_region_contains: requires logDelta > 0");
    double ag = std::fabs(gamma);
    return ag >= 1.0 / (1.0 + 4.0 * log_delta) &&
           beta >= 1.0 - eps / (log_delta + std::log(ag + 2.0));
}

// The full bound panel for one system, under one configuration.
struct BoundSet {
    double a_f = 0.0;              // prime-count bound, configured parse
    double log_alpha_bound =       // Hadamard bound on ln|Res|; NaN unless k = 2
        std::numeric_limits<double>::quiet_NaN();
    i64 robin_omega = -1;          // distinct-prime-factor cap at log_alpha_bound;
                                   // -1 when log_alpha_bound is absent or < ln 3
    double t_f_log = 0.0;          // parametric onset estimate (see parametric_note)
    double mrh_C = 0.0;            // exponent C the panel was computed with
    double region_d = 0.0;         // degree surrogate D^n for region queries
    double region_log_delta = 0.0; // discriminant log bound for region queries
};

inline BoundSet compute_bounds(const PolySystem& s, const RunConfig& cfg) {
    BoundSet b;
    b.a_f = nullstellensatz_bound(s, cfg.af_parse);
    b.mrh_C = cfg.mrh_C;
    b.region_d = std::pow(static_cast<double>(s.D), static_cast<double>(s.n));
    b.region_log_delta =
        cfg.disc_c_disc * (b.region_d * b.region_d * s.sigma +
                           b.region_d * b.region_d * b.region_d);
    b.t_f_log = t_estimate(s, cfg.mrh_C, cfg.tf_c_scale, cfg.disc_c_disc);
    return b;
}

// Univariate entry point: for a pair, the Sylvester-based refinement of the
// prime-count threshold is available and filled in.
inline BoundSet compute_bounds(const std::vector<IntPoly>& fs, const RunConfig& cfg) {
    BoundSet b = compute_bounds(PolySystem::from_univariate(fs), cfg);
    if (fs.size() == 2 && !fs[0].is_zero() && !fs[1].is_zero()) {
        b.log_alpha_bound = hadamard_log_resultant(fs[0], fs[1]);
        if (b.log_alpha_bound >= std::log(3.0))
            b.robin_omega = static_cast<i64>(robin_omega_bound(b.log_alpha_bound));
    }
    return b;
}

} // namespace pfeas
