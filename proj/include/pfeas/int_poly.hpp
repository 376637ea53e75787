#pragma once

// Sparse univariate polynomials over Z with arbitrary-precision coefficients.
// Terms are kept in strictly decreasing exponent order with no zero
// coefficients; the zero polynomial is the empty term list and its degree is
// the sentinel degree_minus_infinity.  All operations are pure; values are
// safe to share across threads.
//
// Z-level arithmetic here is sparse-friendly (term-list merges and products);
// nothing in this header needs to be fast on dense megadegree operands —
// dense work happens mod p elsewhere.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfeas/nt.hpp"

namespace pfeas {

using Int = mpz_class;

// natural log of |z| for nonzero z, via mantissa/exponent split (exact enough
// for bound arithmetic: relative error ~1e-16 regardless of magnitude)
inline double log_abs(const Int& z) {
    if (z == 0) throw std::invalid_argument("log_abs: zero");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

struct Term {
    u64 exp;
    Int coef;
    bool operator==(const Term&) const = default;
};

class IntPoly {
public:
    static constexpr i64 degree_minus_infinity = -1;

    IntPoly() = default;
    explicit IntPoly(Int constant) {
        if (constant != 0) terms_.push_back({0, std::move(constant)});
    }
    explicit IntPoly(long constant) : IntPoly(Int(constant)) {}

    static IntPoly monomial(Int c, u64 e) {
        IntPoly f;
        if (c != 0) f.terms_.push_back({e, std::move(c)});
        return f;
    }

    // accepts terms in any order, with duplicates; collects and normalizes
    static IntPoly from_pairs(const std::vector<std::pair<u64, Int>>& pairs) {
        std::map<u64, Int, std::greater<u64>> acc;
        for (const auto& [e, c] : pairs) acc[e] += c;
        IntPoly f;
        for (auto& [e, c] : acc)
            if (c != 0) f.terms_.push_back({e, std::move(c)});
        return f;
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    i64 degree() const {
        return terms_.empty() ? degree_minus_infinity : static_cast<i64>(terms_.front().exp);
    }

    const Int& lc() const {
        if (terms_.empty()) throw std::invalid_argument("lc of zero polynomial");
        return terms_.front().coef;
    }

    Int coeff(u64 e) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const Term& t, u64 v) { return t.exp > v; });
        if (it != terms_.end() && it->exp == e) return it->coef;
        return Int(0);
    }

    bool operator==(const IntPoly&) const = default;

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) { return merge(a, b, false); }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) { return merge(a, b, true); }

    IntPoly operator-() const {
        IntPoly f;
        f.terms_.reserve(terms_.size());
        for (const auto& t : terms_) f.terms_.push_back({t.exp, -t.coef});
        return f;
    }

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::map<u64, Int, std::greater<u64>> acc;
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_)
                acc[ta.exp + tb.exp] += ta.coef * tb.coef;
        IntPoly f;
        for (auto& [e, c] : acc)
            if (c != 0) f.terms_.push_back({e, std::move(c)});
        return f;
    }

    friend IntPoly operator*(const IntPoly& a, const Int& s) {
        if (s == 0) return {};
        IntPoly f;
        f.terms_.reserve(a.terms_.size());
        for (const auto& t : a.terms_) f.terms_.push_back({t.exp, t.coef * s});
        return f;
    }

    // f * x^k
    IntPoly shifted(u64 k) const {
        IntPoly f;
        f.terms_.reserve(terms_.size());
        for (const auto& t : terms_) f.terms_.push_back({t.exp + k, t.coef});
        return f;
    }

    Int eval(const Int& a) const {
        // Horner over the sparse term list, bridging exponent gaps by powering
        Int r = 0, pw;
        u64 prev = 0;
        bool first = true;
        for (const auto& t : terms_) {
            if (first) {
                r = t.coef;
                prev = t.exp;
                first = false;
                continue;
            }
            mpz_pow_ui(pw.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(prev - t.exp));
            r *= pw;
            r += t.coef;
            prev = t.exp;
        }
        if (!first && prev > 0) {
            mpz_pow_ui(pw.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(prev));
            r *= pw;
        }
        return r;
    }

    IntPoly derivative() const {
        IntPoly f;
        f.terms_.reserve(terms_.size());
        for (const auto& t : terms_)
            if (t.exp > 0) f.terms_.push_back({t.exp - 1, t.coef * Int(static_cast<unsigned long>(t.exp))});
        return f;
    }

    Int max_abs_coeff() const {
        if (terms_.empty()) throw std::invalid_argument("max_abs_coeff of zero polynomial");
        Int m = 0;
        for (const auto& t : terms_) {
            Int a = abs(t.coef);
            if (a > m) m = a;
        }
        return m;
    }

    // h(f) = ln max|coef|; h of +-1 is 0
    double height() const { return log_abs(max_abs_coeff()); }

    Int norm2_squared() const {
        Int s = 0;
        for (const auto& t : terms_) s += t.coef * t.coef;
        return s;
    }

    double log_norm2() const {
        if (terms_.empty()) throw std::invalid_argument("log_norm2 of zero polynomial");
        return 0.5 * log_abs(norm2_squared());
    }

    // gcd of all coefficients, nonnegative; content of 0 is 0
    Int content() const {
        Int g = 0;
        for (const auto& t : terms_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    // f / content(f), sign-normalized so lc > 0; zero stays zero
    IntPoly primitive_part() const {
        if (terms_.empty()) return {};
        Int g = content();
        if (lc() < 0) g = -g;
        IntPoly f;
        f.terms_.reserve(terms_.size());
        for (const auto& t : terms_) f.terms_.push_back({t.exp, t.coef / g});
        return f;
    }

    // exact division: returns num/den if den * q == num over Z, else nullopt
    static std::optional<IntPoly> div_exact(const IntPoly& num, const IntPoly& den) {
        if (den.is_zero()) throw std::invalid_argument("div_exact: zero divisor");
        if (num.is_zero()) return IntPoly{};
        std::map<u64, Int, std::greater<u64>> work;
        for (const auto& t : num.terms_) work.emplace(t.exp, t.coef);
        const u64 dd = den.terms_.front().exp;
        const Int& dl = den.terms_.front().coef;
        IntPoly q;
        while (!work.empty()) {
            auto top = work.begin();
            u64 e = top->first;
            Int c = std::move(top->second);
            work.erase(top);
            if (c == 0) continue;
            if (e < dd) return std::nullopt;   // nonzero remainder
            if (!mpz_divisible_p(c.get_mpz_t(), dl.get_mpz_t())) return std::nullopt;
            u64 qe = e - dd;
            Int qc = c / dl;
            for (std::size_t i = 1; i < den.terms_.size(); ++i)
                work[qe + den.terms_[i].exp] -= qc * den.terms_[i].coef;
            q.terms_.push_back({qe, std::move(qc)});
        }
        return q;
    }

private:
    std::vector<Term> terms_;

    static IntPoly merge(const IntPoly& a, const IntPoly& b, bool subtract) {
        IntPoly f;
        f.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() ||
                (i < a.terms_.size() && a.terms_[i].exp > b.terms_[j].exp)) {
                f.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].exp > a.terms_[i].exp) {
                const auto& t = b.terms_[j++];
                f.terms_.push_back({t.exp, subtract ? -t.coef : t.coef});
            } else {
                Int c = subtract ? Int(a.terms_[i].coef - b.terms_[j].coef)
                                 : Int(a.terms_[i].coef + b.terms_[j].coef);
                if (c != 0) f.terms_.push_back({a.terms_[i].exp, std::move(c)});
                ++i;
                ++j;
            }
        }
        return f;
    }
};

} // namespace pfeas
