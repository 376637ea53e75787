#pragma once

// Exact gcd over Z[x] by a modular algorithm: images at fixed word-size
// primes, degree established by agreement of at least two good primes,
// coefficients recovered by symmetric-residue CRT scaled to a known leading
// coefficient, and the candidate verified by exact division of both inputs
// before it is returned.  The squarefree part f / gcd(f, f′) builds on it.

#include <limits>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "pfeas/int_poly.hpp"
#include "pfeas/mod_poly.hpp"

namespace pfeas {

// Deterministic sequence of reconstruction primes: consecutive primes above
// 2^62, extended on demand.  Dense mod-p arithmetic tolerates p up to
// 15·(p−1)² < 2^128 (the schoolbook accumulator fold), i.e. p ≤ 1.03·2^62,
// so every index this sequence can realistically reach stays in range.
inline u64 recovery_prime(size_t i) {
    static std::vector<u64> ps = {
        4611686018427388039ULL, 4611686018427388073ULL, 4611686018427388081ULL,
        4611686018427388091ULL, 4611686018427388093ULL, 4611686018427388097ULL,
        4611686018427388157ULL, 4611686018427388181ULL};
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    while (ps.size() <= i) {
        u64 c = ps.back() + 2;
        while (!is_prime(c)) c += 2;
        ps.push_back(c);
    }
    return ps[i];
}

namespace detail {

// symmetric representative of r mod p as a signed big integer
inline Int sym_residue(u64 r, u64 p) {
    Int v(r);
    if (r > p / 2) v -= Int(p);
    return v;
}

} // namespace detail

// Primitive gcd over Z with positive leading coefficient.
inline IntPoly gcd_z(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() && b.is_zero())
        throw std::invalid_argument("gcd of zero polynomials");
    if (a.is_zero()) return b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    IntPoly A = a.primitive_part(), B = b.primitive_part();
    if (A.degree() == 0 || B.degree() == 0) return IntPoly(Int(1));
    Int glc;  // the gcd's leading coefficient divides this
    mpz_gcd(glc.get_mpz_t(), A.lc().get_mpz_t(), B.lc().get_mpz_t());

    i64 best_deg = std::numeric_limits<i64>::max();
    size_t agree = 0;
    std::vector<Int> crt;  // symmetric residues of glc·(monic image), mod M
    Int M = 0;
    for (size_t pi = 0;; ++pi) {
        // unreachable backstop: the Landau–Mignotte coefficient bound is met
        // thousands of primes before this
        if (pi > 4096) throw std::logic_error("gcd reconstruction did not stabilize");
        u64 p = recovery_prime(pi);
        if (mpz_fdiv_ui(A.lc().get_mpz_t(), p) == 0 ||
            mpz_fdiv_ui(B.lc().get_mpz_t(), p) == 0)
            continue;  // p would drop a leading coefficient
        ModPoly am = reduce(A, p), bm = reduce(B, p);
        DenseVec g = dense::gcd(std::move(am.c), std::move(bm.c), p);
        i64 dg = dense::deg(g);
        if (dg > best_deg) continue;  // unlucky prime, gcd image too large
        if (dg < best_deg) {
            // every earlier prime was unlucky; restart the lift at this degree
            best_deg = dg;
            crt.assign(static_cast<size_t>(dg) + 1, Int(0));
            M = 0;
            agree = 0;
        }
        ++agree;
        if (best_deg == 0) {
            if (agree >= 2) return IntPoly(Int(1));
            continue;
        }
        u64 s = mpz_fdiv_ui(glc.get_mpz_t(), p);  // scale monic image to lc = glc
        if (M == 0) {
            for (size_t i = 0; i < g.size(); ++i)
                crt[i] = detail::sym_residue(mulmod(g[i], s, p), p);
            M = p;
        } else {
            u64 mp = mpz_fdiv_ui(M.get_mpz_t(), p);
            u64 minv = inv_mod(mp, p);
            for (size_t i = 0; i < g.size(); ++i) {
                u64 r = mulmod(g[i], s, p);
                u64 cur = mpz_fdiv_ui(crt[i].get_mpz_t(), p);
                u64 t = mulmod(submod(r, cur, p), minv, p);
                if (t) crt[i] += M * detail::sym_residue(t, p);
            }
            M *= p;
        }
        if (agree < 2) continue;
        std::vector<std::pair<u64, Int>> pairs;
        for (size_t i = 0; i < crt.size(); ++i)
            if (crt[i] != 0) pairs.push_back({static_cast<u64>(i), crt[i]});
        IntPoly cand = IntPoly::from_pairs(pairs).primitive_part();
        if (cand.degree() != best_deg) continue;  // lift still incomplete
        if (auto q1 = IntPoly::div_exact(A, cand); q1.has_value())
            if (auto q2 = IntPoly::div_exact(B, cand); q2.has_value()) return cand;
    }
}

// f with every complex root made simple: f / gcd(f, f′), primitive, lc > 0.
inline IntPoly squarefree_part(const IntPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("squarefree part of zero polynomial");
    IntPoly F = f.primitive_part();
    if (F.degree() < 1) return IntPoly(Int(1));
    IntPoly g = gcd_z(F, F.derivative());
    if (g.degree() == 0) return F;
    auto q = IntPoly::div_exact(F, g);
    if (!q.has_value()) throw std::logic_error("gcd does not divide its polynomial");
    return q->primitive_part();
}

} // namespace pfeas
