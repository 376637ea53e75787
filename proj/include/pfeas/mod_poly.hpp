#pragma once

// Dense univariate arithmetic over F_p (p prime, p < 2^62) and the root
// machinery built on it: euclidean and subquadratic matrix gcd, Newton
// division, x^p mod f via a monomial ladder, distinct-degree patterns, and
// root counting/existence for integer polynomial systems reduced mod p.
//
// Dense polynomials are plain residue vectors, ascending exponent, trimmed
// (the zero polynomial is the empty vector).  The matrix gcd never trusts a
// truncation heuristic: every speculative step is degree-checked against the
// full-length operands and falls back to classical euclidean steps, so the
// results are unconditionally correct while the fast path carries the load.

#include <array>
#include <bit>
#include <map>
#include <optional>
#include <span>
#include <utility>

#include "pfeas/int_poly.hpp"
#include "pfeas/ntt.hpp"
#include "pfeas/poly_system.hpp"

namespace pfeas::dense {

inline i64 deg(const DenseVec& v) { return static_cast<i64>(v.size()) - 1; }

inline DenseVec sub(const DenseVec& a, const DenseVec& b, u64 p) {
    DenseVec r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        u64 x = i < a.size() ? a[i] : 0;
        u64 y = i < b.size() ? b[i] : 0;
        r[i] = submod(x, y, p);
    }
    detail::trim(r);
    return r;
}

inline DenseVec add(const DenseVec& a, const DenseVec& b, u64 p) {
    DenseVec r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        u64 x = i < a.size() ? a[i] : 0;
        u64 y = i < b.size() ? b[i] : 0;
        r[i] = addmod(x, y, p);
    }
    detail::trim(r);
    return r;
}

inline void make_monic(DenseVec& a, u64 p) {
    if (a.empty() || a.back() == 1) return;
    u64 s = inv_mod(a.back(), p);
    for (auto& v : a) v = mulmod(v, s, p);
}

inline u64 eval(const DenseVec& a, u64 x, u64 p) {
    u64 r = 0;
    for (size_t i = a.size(); i-- > 0;) r = addmod(mulmod(r, x, p), a[i], p);
    return r;
}

inline DenseVec derivative(const DenseVec& a, u64 p) {
    if (a.size() <= 1) return {};
    DenseVec d(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) d[i - 1] = mulmod(a[i], i % p, p);
    detail::trim(d);
    return d;
}

// ---------------------------------------------------------------------------
// division

inline DenseVec inv_series(const DenseVec& f, size_t l, u64 p) {
    if (f.empty() || f[0] == 0)
        throw std::invalid_argument("power series not invertible");
    DenseVec g{inv_mod(f[0], p)};
    while (g.size() < l) {
        size_t nl = std::min(g.size() * 2, l);
        DenseVec ft(f.begin(), f.begin() + std::min(f.size(), nl));
        DenseVec s = poly_mul_mod(ft, g, p);
        s.resize(nl, 0);
        DenseVec u(nl);
        u[0] = submod(2 % p, s[0], p);
        for (size_t i = 1; i < nl; ++i) u[i] = s[i] ? p - s[i] : 0;
        g = poly_mul_mod(g, u, p);
        g.resize(nl, 0);
    }
    return g;
}

namespace impl {

// The inner subtraction loop dominates every classical remainder sequence, so
// the per-term product is taken through Montgomery reduction instead of a
// hardware division: with cm = c·R mod p, redc(cm·b[j]) is the plain product.
inline DenseVec divrem_classical(DenseVec& a, const DenseVec& b, u64 p) {
    i64 da = deg(a), db = deg(b);
    u64 ilc = b.back() == 1 ? 1 : inv_mod(b.back(), p);
    DenseVec q(static_cast<size_t>(da - db) + 1, 0);
    if ((p & 1) && p < (u64{1} << 31)) {
        const Mont32 m(static_cast<u32>(p));
        const u32 pw = static_cast<u32>(p);
        for (i64 i = da - db; i >= 0; --i) {
            u64 c = a[i + db];
            if (c == 0) continue;
            if (ilc != 1) c = mulmod(c, ilc, p);
            q[i] = c;
            const u32 cm = m.to(c);
            for (i64 j = 0; j < db; ++j) {
                u32 prod = m.redc(static_cast<u64>(cm) * static_cast<u32>(b[j]));
                u32 av = static_cast<u32>(a[i + j]);
                a[i + j] = av >= prod ? av - prod : av + pw - prod;
            }
            a[i + db] = 0;
        }
    } else if (p & 1) {
        const Mont64 m(p);
        for (i64 i = da - db; i >= 0; --i) {
            u64 c = a[i + db];
            if (c == 0) continue;
            if (ilc != 1) c = mulmod(c, ilc, p);
            q[i] = c;
            const u64 cm = m.to(c);
            for (i64 j = 0; j < db; ++j) {
                u64 prod = m.redc(static_cast<u128>(cm) * b[j]);
                a[i + j] = submod(a[i + j], prod, p);
            }
            a[i + db] = 0;
        }
    } else {
        // p = 2 is the only even prime here; stay with the generic loop
        for (i64 i = da - db; i >= 0; --i) {
            u64 c = a[i + db];
            if (c == 0) continue;
            if (ilc != 1) c = mulmod(c, ilc, p);
            q[i] = c;
            for (i64 j = 0; j < db; ++j)
                a[i + j] = submod(a[i + j], mulmod(c, b[j], p), p);
            a[i + db] = 0;
        }
    }
    a.resize(db);
    detail::trim(a);
    return q;
}

} // namespace impl

// Euclidean division: returns the quotient and replaces a by the remainder.
// Classical for small shapes, Newton (reverse + inverse series) for large.
inline DenseVec divrem(DenseVec& a, const DenseVec& b, u64 p) {
    if (b.empty()) throw std::invalid_argument("division by zero polynomial");
    detail::trim(a);
    i64 da = deg(a), db = deg(b);
    if (da < db) return {};
    size_t lq = static_cast<size_t>(da - db) + 1;
    if (db < 64 || lq < 64 || (u128)lq * (db + 1) <= (u128{1} << 22))
        return impl::divrem_classical(a, b, p);
    DenseVec rb(b.rbegin(), b.rend());
    if (rb.size() > lq) rb.resize(lq);
    DenseVec ib = inv_series(rb, lq, p);
    DenseVec ra(a.rbegin(), a.rend());
    ra.resize(lq);
    DenseVec qr = poly_mul_mod(ra, ib, p);
    qr.resize(lq, 0);
    DenseVec q(qr.rbegin(), qr.rend());
    detail::trim(q);
    DenseVec qb = poly_mul_mod(q, b, p);
    for (size_t i = 0; i < a.size(); ++i)
        a[i] = submod(a[i], i < qb.size() ? qb[i] : 0, p);
    a.resize(db);
    detail::trim(a);
    return q;
}

inline DenseVec rem(DenseVec a, const DenseVec& b, u64 p) {
    divrem(a, b, p);
    return a;
}

// ---------------------------------------------------------------------------
// gcd: classical partial reduction plus a speculative half-gcd

namespace impl {

// M := [[0,1],[1,-q]]·M, the transition of one euclidean step
inline void compose_quotient(Mat22& M, const DenseVec& q, u64 p) {
    for (int c = 0; c < 2; ++c) {
        DenseVec qr = poly_mul_mod(q, M.e[1][c], p);
        DenseVec nr = sub(M.e[0][c], qr, p);
        M.e[0][c] = std::move(M.e[1][c]);
        M.e[1][c] = std::move(nr);
    }
}

// hi·x^k + lo
inline DenseVec shift_add(const DenseVec& hi, size_t k, const DenseVec& lo, u64 p) {
    DenseVec r(std::max(lo.size(), hi.empty() ? size_t{0} : hi.size() + k), 0);
    for (size_t i = 0; i < lo.size(); ++i) r[i] = lo[i];
    for (size_t i = 0; i < hi.size(); ++i) r[k + i] = addmod(r[k + i], hi[i], p);
    detail::trim(r);
    return r;
}

} // namespace impl

// Classical euclidean steps until deg b < t (b may reach zero).  The returned
// matrix M satisfies (a_out, b_out) = M·(a_in, b_in) when want_matrix is set.
inline Mat22 euclid_until(DenseVec& a, DenseVec& b, i64 t, u64 p,
                          bool want_matrix) {
    Mat22 M = Mat22::identity();
    while (!b.empty() && deg(b) >= t) {
        DenseVec q = divrem(a, b, p);
        a.swap(b);
        if (want_matrix) impl::compose_quotient(M, q, p);
    }
    return M;
}

// Partial gcd with a degree target: transforms (a, b) into a pair with
// deg b_out < t <= deg a_out, gcd(a_out, b_out) = gcd(a_in, b_in), and
// returns the (unimodular) transition matrix when want_matrix is set.
// Speculative half-size recursions are validated by degree checks on the
// full-length pair and replaced by classical steps when they misbehave, so
// no correctness rests on the truncation bound.
inline Mat22 mat_pgcd(DenseVec& a, DenseVec& b, i64 t, u64 p, bool want_matrix) {
    Mat22 M = Mat22::identity();
    if (t < 0) t = 0;
    if (a.empty()) {
        a.swap(b);
        M.e[0][0].swap(M.e[0][1]);
        M.e[1][0].swap(M.e[1][1]);
    }
    // normalize: enforce deg a > deg b with an explicit division step
    if (!b.empty() && deg(b) >= deg(a)) {
        DenseVec q = divrem(b, a, p);  // b := b mod a
        if (want_matrix) {
            // [[1,0],[-q,1]] composed on the left
            for (int c = 0; c < 2; ++c) {
                DenseVec qr = poly_mul_mod(q, M.e[0][c], p);
                M.e[1][c] = sub(M.e[1][c], qr, p);
            }
        }
    }
    if (b.empty() || deg(b) < t) return M;

    i64 n = deg(a);
    i64 gap = n - t;
    if (gap <= 64) {
        Mat22 E = euclid_until(a, b, t, p, want_matrix);
        return want_matrix ? mat22_mul_mod(E, M, p) : M;
    }

    i64 m = t + (gap + 1) / 2;  // intermediate target, t < m <= n
    if (i64 k = std::max<i64>(2 * m - n - 1, 0); k > 0) {
        // Speculative: recurse on the top slices, rebuild the full-length pair
        // from M1 applied to the low parts (linear in each part, so
        // M1·(a, b) = (A', B')·x^k + M1·(a mod x^k, b mod x^k) exactly),
        // and validate degrees on the result before committing.
        DenseVec A(a.begin() + k, a.end());
        DenseVec B(b.size() > static_cast<size_t>(k)
                       ? DenseVec(b.begin() + k, b.end())
                       : DenseVec{});
        Mat22 M1 = mat_pgcd(A, B, m - k, p, true);
        if (!M1.is_identity()) {
            i64 da0 = deg(a), db0 = deg(b);
            DenseVec a_lo(a.begin(), a.begin() + k);
            DenseVec b_lo(b.begin(),
                          b.begin() + std::min(b.size(), static_cast<size_t>(k)));
            detail::trim(a_lo);
            detail::trim(b_lo);
            mat22_apply_mod(M1, a_lo, b_lo, p);
            DenseVec a_new = impl::shift_add(A, k, a_lo, p);
            DenseVec b_new = impl::shift_add(B, k, b_lo, p);
            bool ok = !a_new.empty() && deg(a_new) < da0 && deg(a_new) >= t &&
                      (b_new.empty() ||
                       (deg(b_new) < db0 && deg(b_new) < deg(a_new)));
            if (ok) {
                a = std::move(a_new);
                b = std::move(b_new);
                if (want_matrix) M = mat22_mul_mod(M1, M, p);
            }
        }
    } else {
        // no useful truncation at this level; reduce in place
        Mat22 M1 = mat_pgcd(a, b, m, p, want_matrix);
        if (want_matrix) M = mat22_mul_mod(M1, M, p);
    }
    if (!b.empty() && deg(b) >= m) {
        // speculation fell short; close the distance classically
        Mat22 E = euclid_until(a, b, m, p, want_matrix);
        if (want_matrix) M = mat22_mul_mod(E, M, p);
    }
    if (b.empty() || deg(b) < t) return M;

    // one full-precision division step between the halves
    {
        DenseVec q = divrem(a, b, p);
        a.swap(b);
        if (want_matrix) impl::compose_quotient(M, q, p);
    }
    if (b.empty() || deg(b) < t) return M;

    Mat22 M2 = mat_pgcd(a, b, t, p, want_matrix);
    return want_matrix ? mat22_mul_mod(M2, M, p) : M;
}

inline constexpr i64 classical_gcd_cutoff = 512;

// monic gcd; gcd(0, 0) = 0 (empty vector)
inline DenseVec gcd(DenseVec a, DenseVec b, u64 p) {
    detail::trim(a);
    detail::trim(b);
    while (!b.empty()) {
        if (a.empty() || deg(a) < deg(b)) a.swap(b);
        if (b.empty()) break;
        if (deg(a) <= classical_gcd_cutoff) {
            euclid_until(a, b, 0, p, false);
            break;
        }
        if (deg(a) == deg(b)) {
            divrem(a, b, p);
            a.swap(b);
            continue;
        }
        i64 t = deg(a) / 2;
        if (deg(b) < t) {
            divrem(a, b, p);  // unbalanced: one fast division
            a.swap(b);
            continue;
        }
        mat_pgcd(a, b, t, p, false);
    }
    make_monic(a, p);
    return a;
}

// Resultant of a and b over F_p through the remainder sequence:
// Res(a,b) = (−1)^{deg a·deg b}·lc(b)^{deg a − deg r}·Res(b, r) with
// r = a mod b, grounded at Res(a, const c) = c^{deg a}.  Inputs whose lead
// coefficient was lost reducing mod p are the caller's problem: the residue
// of the integer resultant equals this value only when both degrees survive.
inline u64 resultant_mod(DenseVec a, DenseVec b, u64 p) {
    detail::trim(a);
    detail::trim(b);
    if (a.empty() || b.empty()) return 0;
    u64 res = 1;
    while (true) {
        i64 da = deg(a), db = deg(b);
        if (da == 0) return mulmod(res, powmod(a[0], static_cast<u64>(db), p), p);
        if (db == 0) return mulmod(res, powmod(b[0], static_cast<u64>(da), p), p);
        DenseVec r = rem(std::move(a), b, p);
        if (r.empty()) return 0;  // common factor of positive degree
        if ((da & 1) && (db & 1)) res = submod(0, res, p);
        res = mulmod(res, powmod(b.back(), static_cast<u64>(da - deg(r)), p), p);
        a = std::move(b);
        b = std::move(r);
    }
}

// ---------------------------------------------------------------------------
// reduction by a fixed monic modulus

class ModReducer {
  public:
    ModReducer(DenseVec f, u64 p) : p_(p), f_(std::move(f)) {
        detail::trim(f_);
        if (deg(f_) < 1) throw std::invalid_argument("modulus must have degree >= 1");
        make_monic(f_, p_);
        size_t nnz = 0;
        for (u64 v : f_) nnz += v != 0;
        sparse_ = nnz <= 16;
        if (sparse_) {
            if (p_ != 2) mont_.emplace(p_);
            for (size_t j = 0; j + 1 < f_.size(); ++j)
                if (f_[j])
                    low_terms_.push_back({j, mont_ ? mont_->to(f_[j]) : f_[j]});
        }
    }

    const DenseVec& modulus() const { return f_; }

    DenseVec reduce(DenseVec a) const {
        detail::trim(a);
        if (deg(a) < deg(f_)) return a;
        if (!sparse_) {
            divrem(a, f_, p_);
            return a;
        }
        size_t df = f_.size() - 1;
        for (size_t i = a.size(); i-- > df;) {
            u64 c = a[i];
            if (c == 0) continue;
            a[i] = 0;
            for (auto [e, cf] : low_terms_) {
                // cf is Montgomery-form, so mul(cf, c) is the plain product
                u64 prod = mont_ ? mont_->mul(cf, c) : mulmod(c, cf, p_);
                a[i - df + e] = submod(a[i - df + e], prod, p_);
            }
        }
        a.resize(df);
        detail::trim(a);
        return a;
    }

  private:
    u64 p_;
    DenseVec f_;
    bool sparse_ = false;
    std::optional<Mont64> mont_;
    std::vector<std::pair<size_t, u64>> low_terms_;
};

// ---------------------------------------------------------------------------
// modular powers

// x^e mod f.  Exponent prefixes are carried as bare monomials while they stay
// below deg f, so only ~log2(e) − log2(deg f) squarings touch full vectors.
inline DenseVec xpow_mod(u64 e, DenseVec f, u64 p) {
    detail::trim(f);
    if (f.empty()) throw std::invalid_argument("zero modulus");
    if (deg(f) == 0) return {};
    u64 df = static_cast<u64>(deg(f));
    make_monic(f, p);
    if (e < df) {
        DenseVec r(e + 1, 0);
        r[e] = 1;
        return r;
    }
    ModReducer red(std::move(f), p);
    int i = 63 - std::countl_zero(e);
    u64 v = 1;  // exponent prefix, still a monomial
    while (i > 0 && 2 * v + ((e >> (i - 1)) & 1) < df) {
        --i;
        v = 2 * v + ((e >> i) & 1);
    }
    DenseVec h;
    if (i > 0) {
        --i;
        v = 2 * v + ((e >> i) & 1);
    }
    h.assign(v + 1, 0);
    h[v] = 1;
    h = red.reduce(std::move(h));
    for (--i; i >= 0; --i) {
        h = red.reduce(poly_mul_mod(h, h, p));
        if ((e >> i) & 1) {
            h.insert(h.begin(), 0);  // multiply by x
            h = red.reduce(std::move(h));
        }
    }
    return h;
}

// g^e mod f for dense g (used by the distinct-degree scan on small moduli)
inline DenseVec pow_poly_mod(DenseVec g, u64 e, const DenseVec& f, u64 p) {
    g = rem(std::move(g), f, p);
    DenseVec r{1};
    while (e) {
        if (e & 1) r = rem(poly_mul_mod(r, g, p), f, p);
        e >>= 1;
        if (e) g = rem(poly_mul_mod(g, g, p), f, p);
    }
    return r;
}

// ---------------------------------------------------------------------------
// roots mod p

// number of distinct roots in F_p: deg gcd(x^p − x, f)
inline u64 root_count(const DenseVec& f, u64 p) {
    DenseVec g = f;
    detail::trim(g);
    if (g.empty()) throw std::invalid_argument("root count of zero polynomial");
    if (deg(g) == 0) return 0;
    // scan all of F_p only while it beats the Frobenius route: scan costs
    // p·size mulmods, x^p mod f about 8·log2(p)·size² plus one gcd
    if ((u128)p * g.size() <= (u128{1} << 20) &&
        p <= 64 * (u64)g.size() * (u64)g.size()) {
        u64 cnt = 0;
        for (u64 x = 0; x < p; ++x) cnt += eval(g, x, p) == 0;
        return cnt;
    }
    DenseVec h = xpow_mod(p, g, p);  // x^p mod f
    if (h.size() < 2) h.resize(2, 0);
    h[1] = submod(h[1], 1, p);  // x^p − x
    detail::trim(h);
    DenseVec d = gcd(std::move(h), std::move(g), p);
    return d.empty() ? 0 : static_cast<u64>(deg(d));
}

inline bool has_root(const DenseVec& f, u64 p) {
    DenseVec g = f;
    detail::trim(g);
    if (g.empty()) throw std::invalid_argument("root test of zero polynomial");
    if (deg(g) == 0) return false;
    if (deg(g) >= 1 && g[0] == 0) return true;  // x = 0
    // scanning beats the Frobenius power for small p relative to deg f
    if (p < g.size() && p <= 4096) {
        for (u64 x = 0; x < p; ++x)
            if (eval(g, x, p) == 0) return true;
        return false;
    }
    return root_count(g, p) >= 1;
}

// ---------------------------------------------------------------------------
// root counting for lacunary polynomials: scan all of F_p
//
// The remainder sequence costs transform work proportional to deg f no matter
// how few terms f has, while evaluating f at every residue costs about
// p·(bit_width(deg) + Σ popcount(eᵢ) + #terms)/16 vector multiplications with
// a shared square chain.  For the sparse high-degree inputs the density
// sweeps produce (a handful of terms, degree in the tens of thousands, p in
// the low millions) the scan is an order of magnitude cheaper per prime.

namespace impl {

struct ScanTerm {
    u64 exp;   // exponent, already reduced mod p−1 for the a ≠ 0 scan
    u64 coef;  // plain residue in [1, p)
};

inline constexpr size_t scan_term_cap = 64;  // stack budget of the lane kernel

// counts zeros of c0 + Σ cᵢ·a^{eᵢ} over a ∈ [1, p); one pass over the
// exponent bits covers every term of the block at once
template <class M, class W>
u64 root_scan_scalar(const std::vector<ScanTerm>& ts, u64 c0, u64 p) {
    const M m(static_cast<W>(p));
    int nb = 0;
    for (const auto& t : ts) nb = std::max(nb, static_cast<int>(std::bit_width(t.exp)));
    std::vector<W> acc(ts.size());
    u64 cnt = 0;
    for (u64 a = 1; a < p; ++a) {
        W sq = m.to(a);
        for (auto& v : acc) v = m.one();
        for (int i = 0; i < nb; ++i) {
            for (size_t t = 0; t < ts.size(); ++t)
                if ((ts[t].exp >> i) & 1) acc[t] = m.mul(acc[t], sq);
            if (i + 1 < nb) sq = m.mul(sq, sq);
        }
        u64 val = c0;
        for (size_t t = 0; t < ts.size(); ++t)
            val = addmod(val, m.mul(acc[t], static_cast<W>(ts[t].coef)), p);
        cnt += val == 0;
    }
    return cnt;
}

#if defined(__AVX512F__)
// 16 residues per iteration; Montgomery forms ride in the lanes and the
// coefficient multiply drops back to plain residues for the zero test
inline u64 root_scan_avx512(const std::vector<ScanTerm>& ts, u64 c0, u32 p) {
    const Mont32 m(p);
    int nb = 0;
    for (const auto& t : ts) nb = std::max(nb, static_cast<int>(std::bit_width(t.exp)));
    // per-bit index lists keep exponent tests out of the hot loop
    std::vector<std::vector<unsigned char>> hits(static_cast<size_t>(nb));
    for (size_t t = 0; t < ts.size(); ++t)
        for (int i = 0; i < nb; ++i)
            if ((ts[t].exp >> i) & 1) hits[static_cast<size_t>(i)].push_back(static_cast<unsigned char>(t));
    const __m512i qv = _mm512_set1_epi32(static_cast<int>(p));
    const __m512i nv = _mm512_set1_epi32(static_cast<int>(m.ninv));
    const __m512i onev = _mm512_set1_epi32(static_cast<int>(m.one()));
    const __m512i c0v = _mm512_set1_epi32(static_cast<int>(c0));
    const __m512i step = _mm512_set1_epi32(static_cast<int>(m.to(16)));
    alignas(64) u32 lane[16];
    for (int j = 0; j < 16; ++j) lane[j] = m.to(static_cast<u64>(1 + j));
    __m512i av = _mm512_load_si512(lane);
    const size_t nt = ts.size();  // ≤ scan_term_cap, enforced by the caller
    __m512i cv[scan_term_cap], acc[scan_term_cap];
    for (size_t t = 0; t < nt; ++t)
        cv[t] = _mm512_set1_epi32(static_cast<int>(ts[t].coef));
    u64 cnt = 0;
    for (u64 base = 1; base < p; base += 16) {
        __m512i sq = av;
        for (size_t t = 0; t < nt; ++t) acc[t] = onev;
        for (int i = 0; i < nb; ++i) {
            for (unsigned char t : hits[static_cast<size_t>(i)])
                acc[t] = detail::z32_montmul(acc[t], sq, qv, nv);
            if (i + 1 < nb) sq = detail::z32_montmul(sq, sq, qv, nv);
        }
        __m512i val = c0v;
        for (size_t t = 0; t < nt; ++t)
            val = detail::z32_addmod(val, detail::z32_montmul(acc[t], cv[t], qv, nv), qv);
        __mmask16 zm = _mm512_cmpeq_epi32_mask(val, _mm512_setzero_si512());
        if (base + 16 > p) zm &= static_cast<__mmask16>((u32{1} << (p - base)) - 1);
        cnt += std::popcount(static_cast<unsigned>(zm));
        av = detail::z32_addmod(av, step, qv);
    }
    return cnt;
}
#endif

} // namespace impl

// Distinct roots in F_p of Σ cᵢ·x^{eᵢ}, the polynomial given by its nonzero
// terms (duplicate exponents accumulate, coefficients need not be reduced).
// Scans every residue instead of forming the remainder sequence; cost grows
// linearly with p, so callers gate on p (see root_count_auto).  p must be 2
// or an odd prime.
inline u64 root_count_points(std::span<const std::pair<u64, u64>> terms, u64 p) {
    if (p < 2) throw std::invalid_argument("modulus must be at least 2");
    std::map<u64, u64> merged;
    for (const auto& [e, c] : terms) {
        u64 cr = c % p;
        if (cr) {
            u64& s = merged[e];
            s = addmod(s, cr, p);
        }
    }
    u64 c0 = 0;
    std::vector<impl::ScanTerm> ts;
    for (const auto& [e, c] : merged) {
        if (c == 0) continue;
        if (e == 0) c0 = c;
        else ts.push_back({e, c});
    }
    if (ts.empty() && c0 == 0)
        throw std::invalid_argument("root count of zero polynomial");
    if (ts.empty()) return 0;
    if (p == 2) {
        u64 at1 = c0;
        for (const auto& t : ts) at1 ^= t.coef & 1;
        return (c0 == 0 ? 1 : 0) + (at1 == 0 ? 1 : 0);
    }
    if (!(p & 1)) throw std::invalid_argument("modulus must be 2 or an odd prime");
    u64 cnt = c0 == 0 ? 1 : 0;  // a = 0: only the constant term survives
    // over F_p^* exponents only matter mod p−1, and e ≡ 0 acts as a constant
    u64 cs = c0;
    std::map<u64, u64> red;
    for (const auto& t : ts) {
        u64 e = t.exp % (p - 1);
        if (e == 0) cs = addmod(cs, t.coef, p);
        else {
            u64& s = red[e];
            s = addmod(s, t.coef, p);
        }
    }
    std::vector<impl::ScanTerm> sts;
    for (const auto& [e, c] : red)
        if (c) sts.push_back({e, c});
    if (sts.empty()) return cnt + (cs == 0 ? p - 1 : 0);
#if defined(__AVX512F__)
    if (p < (u64{1} << 31) && sts.size() <= impl::scan_term_cap)
        return cnt + impl::root_scan_avx512(sts, cs, static_cast<u32>(p));
#endif
    if (p < (u64{1} << 31)) return cnt + impl::root_scan_scalar<Mont32, u32>(sts, cs, p);
    return cnt + impl::root_scan_scalar<Mont64, u64>(sts, cs, p);
}

// distinct-degree pattern of a squarefree f mod p: sorted (degree e, #factors)
inline std::vector<std::pair<u64, u64>> degree_pattern(DenseVec f, u64 p) {
    detail::trim(f);
    if (deg(f) < 1)
        throw std::invalid_argument("degree pattern needs a nonconstant polynomial");
    make_monic(f, p);
    {
        DenseVec d = derivative(f, p);
        DenseVec g = gcd(f, d, p);
        if (g.empty() || deg(g) != 0)
            throw std::invalid_argument("reduce to squarefree first");
    }
    std::vector<std::pair<u64, u64>> pat;
    DenseVec fs = std::move(f);
    DenseVec h{0, 1};  // x
    h = rem(std::move(h), fs, p);
    for (u64 e = 1; 2 * e <= static_cast<u64>(deg(fs)); ++e) {
        h = (e == 1 && fs.size() > 2)
                ? xpow_mod(p, fs, p)
                : pow_poly_mod(std::move(h), p, fs, p);
        DenseVec hx = h;
        if (hx.size() < 2) hx.resize(2, 0);
        hx[1] = submod(hx[1], 1, p);
        detail::trim(hx);
        DenseVec g = gcd(std::move(hx), fs, p);
        if (!g.empty() && deg(g) > 0) {
            pat.push_back({e, static_cast<u64>(deg(g)) / e});
            DenseVec q = divrem(fs, g, p);  // fs becomes the (zero) remainder
            fs = std::move(q);
            h = rem(std::move(h), fs, p);
            if (deg(fs) == 0) break;
        }
    }
    if (!fs.empty() && deg(fs) > 0)
        pat.push_back({static_cast<u64>(deg(fs)), 1});
    return pat;
}

} // namespace pfeas::dense

namespace pfeas {

// ---------------------------------------------------------------------------
// public face: integer polynomials reduced mod p

struct ModPoly {
    u64 p = 0;
    DenseVec c;  // ascending exponent, trimmed
    bool degree_dropped = false;  // reduction lowered the degree (p | lc)

    i64 degree() const { return static_cast<i64>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
};

inline ModPoly reduce(const IntPoly& f, u64 p) {
    if (p < 2) throw std::invalid_argument("modulus must be at least 2");
    ModPoly r;
    r.p = p;
    if (f.is_zero()) return r;
    r.c.assign(static_cast<size_t>(f.degree()) + 1, 0);
    for (const auto& t : f.terms())
        r.c[t.exp] = mpz_fdiv_ui(t.coef.get_mpz_t(), p);
    detail::trim(r.c);
    r.degree_dropped = r.degree() < f.degree();
    return r;
}

inline ModPoly mod_poly_from(DenseVec c, u64 p) {
    ModPoly r;
    r.p = p;
    r.c = std::move(c);
    detail::trim(r.c);
    return r;
}

namespace detail {
inline void check_same_modulus(const ModPoly& a, const ModPoly& b) {
    if (a.p != b.p) throw std::invalid_argument("mixed moduli");
}
} // namespace detail

inline ModPoly add(const ModPoly& a, const ModPoly& b) {
    detail::check_same_modulus(a, b);
    return mod_poly_from(dense::add(a.c, b.c, a.p), a.p);
}

inline ModPoly sub(const ModPoly& a, const ModPoly& b) {
    detail::check_same_modulus(a, b);
    return mod_poly_from(dense::sub(a.c, b.c, a.p), a.p);
}

inline ModPoly mul(const ModPoly& a, const ModPoly& b) {
    detail::check_same_modulus(a, b);
    return mod_poly_from(poly_mul_mod(a.c, b.c, a.p), a.p);
}

// quotient and remainder as a pair
inline std::pair<ModPoly, ModPoly> divrem(const ModPoly& a, const ModPoly& b) {
    detail::check_same_modulus(a, b);
    DenseVec r = a.c;
    DenseVec q = dense::divrem(r, b.c, a.p);
    return {mod_poly_from(std::move(q), a.p), mod_poly_from(std::move(r), a.p)};
}

inline ModPoly gcd(const ModPoly& a, const ModPoly& b) {
    detail::check_same_modulus(a, b);
    return mod_poly_from(dense::gcd(a.c, b.c, a.p), a.p);
}

inline u64 eval(const ModPoly& a, u64 x) { return dense::eval(a.c, x, a.p); }

inline ModPoly frobenius_power(const ModPoly& f) {
    return mod_poly_from(dense::xpow_mod(f.p, f.c, f.p), f.p);
}

inline u64 root_count(const ModPoly& f) { return dense::root_count(f.c, f.p); }

inline bool has_root(const ModPoly& f) { return dense::has_root(f.c, f.p); }

// full-field scan without densifying: terms reduce straight to residue pairs
inline u64 root_count_points(const IntPoly& f, u64 p) {
    std::vector<std::pair<u64, u64>> terms;
    terms.reserve(f.term_count());
    for (const auto& t : f.terms())
        terms.push_back({t.exp, mpz_fdiv_ui(t.coef.get_mpz_t(), p)});
    return dense::root_count_points(terms, p);
}

// W(p) route chooser: lacunary inputs take the full-field scan when the point
// count beats the remainder sequence at deg f; everything else reduces to a
// dense vector and runs the gcd with x^p − x.  The 8000-cycle-per-degree
// pivot comes from benching both routes on this hardware.
inline u64 root_count_auto(const IntPoly& f, u64 p) {
    i64 d = f.degree();
    if (d >= 1 && f.term_count() <= 32 && p < (u64{1} << 31)) {
        u128 scan = static_cast<u128>(p) * (f.term_count() + 40);
        u128 rems = static_cast<u128>(d) * 8000;
        if (scan < rems) return root_count_points(f, p);
    }
    return root_count(reduce(f, p));
}

inline std::vector<std::pair<u64, u64>> degree_pattern(const ModPoly& f) {
    return dense::degree_pattern(f.c, f.p);
}

// Existence of a common root mod p of a univariate family: gcd chain plus a
// root test.  Polynomials vanishing identically mod p constrain nothing; if
// every one vanishes the question degenerates and that is an error.
inline bool common_root_exists(std::span<const ModPoly> fs) {
    if (fs.empty()) throw std::invalid_argument("empty system");
    u64 p = fs.front().p;
    DenseVec g;
    bool all_zero = true;
    bool first = true;
    for (const auto& f : fs) {
        if (f.p != p) throw std::invalid_argument("mixed moduli");
        if (f.is_zero()) continue;
        all_zero = false;
        if (first) {
            g = f.c;
            first = false;
        } else {
            g = dense::gcd(std::move(g), f.c, p);
        }
        if (dense::deg(g) == 0) return false;
    }
    if (all_zero) throw std::invalid_argument("system vanishes mod p");
    return dense::has_root(g, p);
}

inline bool common_root_exists(std::span<const IntPoly> fs, u64 p) {
    std::vector<ModPoly> ms;
    ms.reserve(fs.size());
    for (const auto& f : fs) ms.push_back(reduce(f, p));
    return common_root_exists(std::span<const ModPoly>(ms));
}

// Exhaustive search over F_p^n for a common root of a multivariate system.
// Refuses when p^n exceeds the budget.  Returns a witness point if one exists.
inline std::optional<std::vector<u64>> brute_force_find_root(
    const PolySystem& sys, u64 p, u64 budget = 100'000'000) {
    if (p < 2) throw std::invalid_argument("modulus must be at least 2");
    u64 points = 1;
    for (u32 i = 0; i < sys.n; ++i) {
        if (points > budget / p) throw std::invalid_argument("search space exceeds budget");
        points *= p;
    }
    // reduce coefficients, collect per-variable exponent tables
    struct RTerm {
        u64 coef;
        std::vector<std::pair<u32, u32>> pows;  // (variable, power-table slot)
    };
    std::vector<std::vector<RTerm>> polys;
    std::vector<u64> exp_of_slot;
    auto slot_for = [&](u64 e) {
        for (u32 s = 0; s < exp_of_slot.size(); ++s)
            if (exp_of_slot[s] == e) return s;
        exp_of_slot.push_back(e);
        return static_cast<u32>(exp_of_slot.size() - 1);
    };
    bool all_zero = true;
    for (const auto& mp : sys.polys) {
        std::vector<RTerm> rt;
        for (const auto& t : mp.terms) {
            u64 c = mpz_fdiv_ui(t.coef.get_mpz_t(), p);
            if (c == 0) continue;
            RTerm r;
            r.coef = c;
            for (u32 v = 0; v < t.exps.size(); ++v)
                if (t.exps[v] > 0) r.pows.push_back({v, slot_for(t.exps[v])});
            rt.push_back(std::move(r));
        }
        if (!rt.empty()) all_zero = false;
        polys.push_back(std::move(rt));
    }
    if (all_zero) throw std::invalid_argument("system vanishes mod p");
    // power tables: table[slot][x] = x^exp mod p
    std::vector<std::vector<u64>> table(exp_of_slot.size());
    for (u32 s = 0; s < exp_of_slot.size(); ++s) {
        table[s].resize(p);
        for (u64 x = 0; x < p; ++x) table[s][x] = powmod(x, exp_of_slot[s], p);
    }
    std::vector<u64> point(sys.n, 0);
    for (u64 it = 0; it < points; ++it) {
        bool root = true;
        for (const auto& poly : polys) {
            if (poly.empty()) continue;  // vanishes identically: no constraint
            u64 acc = 0;
            for (const auto& t : poly) {
                u64 v = t.coef;
                for (auto [var, slot] : t.pows) v = mulmod(v, table[slot][point[var]], p);
                acc = addmod(acc, v, p);
            }
            if (acc != 0) {
                root = false;
                break;
            }
        }
        if (root) return point;
        for (u32 v = 0; v < sys.n; ++v) {
            if (++point[v] < p) break;
            point[v] = 0;
        }
    }
    return std::nullopt;
}

inline bool brute_force_system_root(const PolySystem& sys, u64 p,
                                    u64 budget = 100'000'000) {
    return brute_force_find_root(sys, p, budget).has_value();
}

} // namespace pfeas
