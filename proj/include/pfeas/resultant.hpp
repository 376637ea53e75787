#pragma once

// Exact Sylvester resultants over Z by two independent routes — a modular
// CRT over the remainder sequence (production) and a fraction-free Bareiss
// determinant of the Sylvester matrix (oracle-grade) — plus the discriminant
// built on them.  Exact resultants are capped by a degree threshold: the
// magnitudes this project meets above it (millions of bits) are only ever
// needed as logarithms, which the bound evaluators supply instead.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfeas/int_gcd.hpp"
#include "pfeas/int_poly.hpp"
#include "pfeas/mod_poly.hpp"

namespace pfeas {

inline constexpr u64 exact_resultant_threshold = 2000;  // deg a + deg b cap

namespace detail {

inline void require_resultant_range(i64 da, i64 db, u64 threshold) {
    if (static_cast<u64>(da) + static_cast<u64>(db) > threshold)
        throw std::domain_error(
            "resultant: deg a + deg b exceeds the exact threshold (" +
            std::to_string(threshold) +
            "); use hadamard_log_resultant for the log-magnitude bound");
}

} // namespace detail

// Exact resultant by CRT: residues of Res(a,b) at word-size primes that
// preserve both degrees, recombined symmetrically once the prime product
// clears the Hadamard magnitude bound (never fewer than three primes).
inline Int resultant(const IntPoly& a, const IntPoly& b,
                     u64 threshold = exact_resultant_threshold) {
    if (a.is_zero() || b.is_zero())
        throw std::invalid_argument("resultant of a zero polynomial");
    i64 da = a.degree(), db = b.degree();
    detail::require_resultant_range(da, db, threshold);
    if (da == 0) {
        Int r;
        mpz_pow_ui(r.get_mpz_t(), a.lc().get_mpz_t(), static_cast<unsigned long>(db));
        return r;
    }
    if (db == 0) {
        Int r;
        mpz_pow_ui(r.get_mpz_t(), b.lc().get_mpz_t(), static_cast<unsigned long>(da));
        return r;
    }
    // |Res| ≤ ‖a‖₂^{db}·‖b‖₂^{da}; one extra prime absorbs the sign bit
    double log2_bound = (static_cast<double>(db) * a.log_norm2() +
                         static_cast<double>(da) * b.log_norm2()) / std::log(2.0);
    size_t need = std::max<size_t>(3, static_cast<size_t>(log2_bound / 61.9) + 2);
    // only a prime dividing a leading coefficient is skipped, so the skip
    // count is bounded by the lc bit sizes over 62
    size_t allow = 2 + (mpz_sizeinbase(a.lc().get_mpz_t(), 2) +
                        mpz_sizeinbase(b.lc().get_mpz_t(), 2)) / 62;
    Int acc = 0, M = 0;
    size_t used = 0;
    for (size_t pi = 0; used < need; ++pi) {
        if (pi > need + allow) throw std::logic_error("resultant CRT did not stabilize");
        u64 p = recovery_prime(pi);
        if (mpz_fdiv_ui(a.lc().get_mpz_t(), p) == 0 ||
            mpz_fdiv_ui(b.lc().get_mpz_t(), p) == 0)
            continue;  // degree would drop; the residue formula needs both lcs
        u64 r = dense::resultant_mod(reduce(a, p).c, reduce(b, p).c, p);
        if (M == 0) {
            acc = detail::sym_residue(r, p);
            M = p;
        } else {
            u64 cur = mpz_fdiv_ui(acc.get_mpz_t(), p);
            u64 t = mulmod(submod(r, cur, p), inv_mod(mpz_fdiv_ui(M.get_mpz_t(), p), p), p);
            if (t) acc += M * detail::sym_residue(t, p);
            M *= p;
        }
        ++used;
    }
    return acc;
}

// Exact resultant as the fraction-free (Bareiss) determinant of the Sylvester
// matrix.  O((da+db)³) big-integer work: the independent cross-check route,
// also the reference for the CRT route's property tests.
inline Int resultant_sylvester(const IntPoly& a, const IntPoly& b,
                               u64 threshold = exact_resultant_threshold) {
    if (a.is_zero() || b.is_zero())
        throw std::invalid_argument("resultant of a zero polynomial");
    i64 da = a.degree(), db = b.degree();
    detail::require_resultant_range(da, db, threshold);
    if (da == 0 || db == 0) return resultant(a, b, threshold);  // same powers
    size_t n = static_cast<size_t>(da + db);
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n, Int(0)));
    for (size_t i = 0; i < static_cast<size_t>(db); ++i)
        for (i64 e = da; e >= 0; --e)
            m[i][i + static_cast<size_t>(da - e)] = a.coeff(static_cast<u64>(e));
    for (size_t i = 0; i < static_cast<size_t>(da); ++i)
        for (i64 e = db; e >= 0; --e)
            m[static_cast<size_t>(db) + i][i + static_cast<size_t>(db - e)] =
                b.coeff(static_cast<u64>(e));
    int sign = 1;
    Int prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return Int(0);
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign < 0 ? Int(-m[n - 1][n - 1]) : m[n - 1][n - 1];
}

// (−1)^{d(d−1)/2}·Res(f, f′)/lc(f), exact.
inline Int discriminant(const IntPoly& f, u64 threshold = exact_resultant_threshold) {
    if (f.degree() < 1)
        throw std::invalid_argument("discriminant needs degree at least 1");
    Int r = resultant(f, f.derivative(), threshold);
    if (!mpz_divisible_p(r.get_mpz_t(), f.lc().get_mpz_t()))
        throw std::logic_error("resultant not divisible by the leading coefficient");
    Int d;
    mpz_divexact(d.get_mpz_t(), r.get_mpz_t(), f.lc().get_mpz_t());
    u64 dd = static_cast<u64>(f.degree());
    if (((dd * (dd - 1)) / 2) & 1) d = -d;
    return d;
}

} // namespace pfeas
