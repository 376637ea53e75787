#pragma once

// A system of k polynomials in n variables, with the derived statistics the
// bound evaluators consume: maximal total degree D, maximal height h, and a
// bit-size measure sigma.  Univariate systems (the common case) adapt from
// IntPoly; multivariate terms carry explicit exponent vectors and exist for
// the bound formulas and tiny brute-force feasibility checks only — there is
// no multivariate arithmetic over Z here.

#include <vector>

#include "pfeas/int_poly.hpp"

namespace pfeas {

struct MultiTerm {
    std::vector<u64> exps;  // length = nvars of the owning MultiPoly
    Int coef;
};

struct MultiPoly {
    u32 nvars = 0;
    std::vector<MultiTerm> terms;  // nonzero coefficients only

    u64 total_degree() const {
        u64 d = 0;
        for (const auto& t : terms) {
            u64 s = 0;
            for (u64 e : t.exps) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    bool is_zero() const { return terms.empty(); }

    double height() const {
        Int m = 0;
        for (const auto& t : terms) {
            Int a = abs(t.coef);
            if (a > m) m = a;
        }
        if (m == 0) throw std::invalid_argument("height of zero polynomial");
        return log_abs(m);
    }
};

inline MultiPoly to_multi(const IntPoly& f) {
    MultiPoly m;
    m.nvars = 1;
    m.terms.reserve(f.term_count());
    for (const auto& t : f.terms()) m.terms.push_back({{t.exp}, t.coef});
    return m;
}

namespace detail {

inline u64 bit_length(u64 v) { return v == 0 ? 1 : static_cast<u64>(std::bit_width(v)); }

inline u64 bit_length(const Int& v) {
    if (v == 0) return 1;
    return mpz_sizeinbase(v.get_mpz_t(), 2);
}

} // namespace detail

struct PolySystem {
    std::vector<MultiPoly> polys;
    u32 n = 0;       // #variables
    u32 k = 0;       // #polynomials
    u64 D = 0;       // max total degree, recomputed from the terms
    double h = 0.0;  // max height (natural log), recomputed
    double sigma = 0.0;  // bit-size: total bits of coefficients and exponents

    static PolySystem from_multi(std::vector<MultiPoly> ps) {
        if (ps.empty()) throw std::invalid_argument("empty system");
        PolySystem s;
        s.k = static_cast<u32>(ps.size());
        for (const auto& p : ps) s.n = std::max(s.n, p.nvars);
        if (s.n == 0) s.n = 1;
        bool any_nonzero = false;
        u64 bits = 0;
        for (const auto& p : ps) {
            s.D = std::max(s.D, p.total_degree());
            if (!p.is_zero()) {
                double ph = p.height();
                s.h = any_nonzero ? std::max(s.h, ph) : ph;
                any_nonzero = true;
            }
            for (const auto& t : p.terms) {
                bits += detail::bit_length(t.coef);
                for (u64 e : t.exps)
                    if (e > 0) bits += detail::bit_length(e);
            }
        }
        if (!any_nonzero) throw std::invalid_argument("system of zero polynomials");
        s.sigma = static_cast<double>(bits < 1 ? 1 : bits);
        s.polys = std::move(ps);
        return s;
    }

    static PolySystem from_univariate(const std::vector<IntPoly>& fs) {
        std::vector<MultiPoly> ms;
        ms.reserve(fs.size());
        for (const auto& f : fs) ms.push_back(to_multi(f));
        return from_multi(std::move(ms));
    }
};

} // namespace pfeas
