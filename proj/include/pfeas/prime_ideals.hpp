#pragma once

// Prime-ideal counting for K = Q[x]/⟨f⟩ with f squarefree: away from primes
// dividing disc(f)·lc(f), the prime ideals over p correspond to the
// irreducible factors of f mod p, a degree-e factor giving an ideal of norm
// p^e.  On that correspondence the module tallies
//   pi_K(x)    = #{ideals of norm ≤ x}
//   psi_K(x)   = Σ e·ln p over ideal powers with norm p^{em} ≤ x
//   theta_K(x) = Σ e·ln p over ideals with norm p^e ≤ x
//   sum_W(x)   = Σ_{p≤x} W(p), the degree-one ideals counted per prime
// Ramified primes (dividing disc(f)·lc(f)) are skipped entirely and tallied,
// never estimated.  The defining-polynomial discriminant stands in for the
// field discriminant throughout: it is a multiple, so the skipped set only
// grows and every counted prime is safe.
//
// A degree-e factor matters only when p^e ≤ x, so the full distinct-degree
// pattern is needed just for p ≤ √x; larger primes only contribute their
// degree-one factors, i.e. a root count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pfeas/config.hpp"
#include "pfeas/density.hpp"
#include "pfeas/int_gcd.hpp"
#include "pfeas/int_poly.hpp"
#include "pfeas/mod_poly.hpp"
#include "pfeas/resultant.hpp"
#include "pfeas/sieve.hpp"
#include "pfeas/version.hpp"

namespace pfeas {

struct NumberFieldCtx {
    IntPoly f;    // squarefree, primitive, degree ≥ 1
    i64 d = 0;    // field degree
    Int disc_f;   // exact discriminant of f, nonzero

    // p is skipped when it divides disc(f)·lc(f); testing by reduction keeps
    // hundred-digit discriminants cheap
    bool ramified(u64 p) const {
        return mpz_divisible_ui_p(disc_f.get_mpz_t(), p) != 0 ||
               mpz_divisible_ui_p(f.lc().get_mpz_t(), p) != 0;
    }
};

inline NumberFieldCtx make_number_field(const IntPoly& f) {
    if (f.degree() < 1)
        throw std::invalid_argument("defining polynomial needs degree >= 1");
    IntPoly F = f.primitive_part();
    if (gcd_z(F, F.derivative()).degree() != 0)
        throw std::invalid_argument("defining polynomial must be squarefree");
    NumberFieldCtx ctx;
    ctx.d = F.degree();
    ctx.disc_f = discriminant(F);
    ctx.f = std::move(F);
    return ctx;
}

struct IdealRow {
    u64 x = 0;
    u64 pi_K = 0;             // ideals of norm ≤ x
    double psi_K = 0.0;       // Σ e·ln p over ideal powers of norm ≤ x
    double theta_K = 0.0;     // Σ e·ln p over ideals of norm ≤ x
    u64 sum_W = 0;            // Σ W(p), p ≤ x unramified
    u64 pi_K_deg1 = 0;        // degree-one ideals of norm ≤ x (not in CSV)
    u64 ramified_skipped = 0;

    bool operator==(const IdealRow&) const = default;
};

struct IdealReport {
    std::vector<IdealRow> rows;
    i64 d = 0;
    std::vector<std::string> notes;
    double wall_ms = 0.0;
};

namespace detail {

inline u64 isqrt_u64(u64 x) {
    u64 s = static_cast<u64>(std::sqrt(static_cast<double>(x)));
    while (s > 0 && static_cast<u128>(s) * s > x) --s;
    while (static_cast<u128>(s + 1) * (s + 1) <= x) ++s;
    return s;
}

struct IdealTally {
    u64 pi_k = 0, deg1 = 0, sum_w = 0, ram = 0;
    double psi = 0.0, theta = 0.0;

    void add(const IdealTally& o) {
        pi_k += o.pi_k;
        deg1 += o.deg1;
        sum_w += o.sum_w;
        ram += o.ram;
        psi += o.psi;
        theta += o.theta;
    }
};

} // namespace detail

inline IdealReport sweep_ideals(const NumberFieldCtx& ctx, u64 x_max,
                                std::vector<u64> checkpoints = {},
                                const RunConfig& cfg = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    if (x_max < 2) throw std::invalid_argument("x_max below 2");
    const std::vector<u64> cps =
        detail::normalize_checkpoints(std::move(checkpoints), x_max);
    const std::vector<u64> primes = primes_up_to(x_max);

    const size_t nb = cps.size();
    auto bucket_of = [&](u64 x0) {
        return static_cast<size_t>(
            std::lower_bound(cps.begin(), cps.end(), x0) - cps.begin());
    };

    // one prime's contributions, spread over the checkpoints its ideal norms
    // and norm powers first reach
    auto tally_prime = [&](u64 p, std::vector<detail::IdealTally>& t) {
        if (ctx.ramified(p)) {
            ++t[bucket_of(p)].ram;
            return;
        }
        const ModPoly fp = reduce(ctx.f, p);
        const u64 w = dense::root_count(fp.c, p);
        t[bucket_of(p)].sum_w += w;
        std::vector<std::pair<u64, u64>> pattern;
        if (static_cast<u128>(p) * p <= x_max)
            pattern = degree_pattern(fp);
        else
            pattern.push_back({1, w});  // higher-degree norms exceed x_max
        for (const auto& [e, cnt] : pattern) {
            if (cnt == 0) continue;
            u128 pe = 1;
            for (u64 i = 0; i < e && pe <= x_max; ++i) pe *= p;
            if (pe > x_max) continue;
            const u64 norm = static_cast<u64>(pe);
            detail::IdealTally& at = t[bucket_of(norm)];
            at.pi_k += cnt;
            if (e == 1) at.deg1 += cnt;
            const double contrib =
                static_cast<double>(cnt) * static_cast<double>(e) *
                std::log(static_cast<double>(p));
            at.theta += contrib;
            for (u128 pem = pe; pem <= x_max; pem *= pe)
                t[bucket_of(static_cast<u64>(pem))].psi += contrib;
        }
    };

    // fixed blocks, atomic claim, merge in block order: deterministic for
    // any thread count, including the floating-point sums
    const size_t block = 256;
    const size_t nblocks = (primes.size() + block - 1) / block;
    std::vector<std::vector<detail::IdealTally>> tallies(nblocks);
    auto run_block = [&](size_t bi) {
        auto& t = tallies[bi];
        t.assign(nb, detail::IdealTally{});
        const size_t lo = bi * block;
        const size_t hi = std::min(primes.size(), lo + block);
        for (size_t i = lo; i < hi; ++i) tally_prime(primes[i], t);
    };
    const unsigned nt = static_cast<unsigned>(
        std::min<size_t>(cfg.threads ? cfg.threads : 1, nblocks));
    if (nt <= 1) {
        for (size_t bi = 0; bi < nblocks; ++bi) run_block(bi);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::exception_ptr> errors(nt);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (unsigned w = 0; w < nt; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (size_t bi; (bi = next.fetch_add(1)) < nblocks;)
                        run_block(bi);
                } catch (...) {
                    errors[w] = std::current_exception();
                    next.store(nblocks);
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::vector<detail::IdealTally> per(nb);
    for (size_t bi = 0; bi < nblocks; ++bi)
        for (size_t b = 0; b < nb; ++b) per[b].add(tallies[bi][b]);

    IdealReport rep;
    rep.d = ctx.d;
    rep.rows.resize(nb);
    detail::IdealTally run{};
    for (size_t b = 0; b < nb; ++b) {
        run.add(per[b]);
        rep.rows[b] = IdealRow{cps[b],  run.pi_k, run.psi, run.theta,
                               run.sum_w, run.deg1, run.ram};
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rep;
}

// single-value accessors over a one-checkpoint sweep

inline u64 pi_K(const NumberFieldCtx& ctx, u64 x) {
    return sweep_ideals(ctx, x, {x}).rows.back().pi_K;
}

inline double psi_K(const NumberFieldCtx& ctx, u64 x) {
    return sweep_ideals(ctx, x, {x}).rows.back().psi_K;
}

inline double theta_K(const NumberFieldCtx& ctx, u64 x) {
    return sweep_ideals(ctx, x, {x}).rows.back().theta_K;
}

struct DegreeOneTallies {
    u64 sum_W = 0;
    u64 pi_K_deg1 = 0;
};

// Degree-one ideals two ways: sum_W from per-prime root counts, pi_K_deg1
// from the factor patterns (independent routes for p ≤ √x, where patterns
// are computed).  Checks the higher-degree window: every ideal of norm ≤ x
// with degree ≥ 2 lies over some p ≤ √x, at most d of them per prime.
inline DegreeOneTallies degree_one_vs_W(const NumberFieldCtx& ctx, u64 x) {
    const IdealRow row = sweep_ideals(ctx, x, {x}).rows.back();
    const u64 cap = static_cast<u64>(ctx.d) * prime_pi(detail::isqrt_u64(x));
    if (row.pi_K < row.sum_W || row.pi_K - row.sum_W > cap)
        throw std::logic_error("higher-degree ideal window violated");
    return {row.sum_W, row.pi_K_deg1};
}

// ---------------------------------------------------------------------------
// report emission

inline std::string ideals_csv(const IdealReport& rep,
                              const RunConfig& cfg = {}) {
    std::ostringstream out;
    detail::csv_comment_header(out, cfg, "ideals", rep.wall_ms);
    out << "# d " << rep.d << '\n';
    for (const std::string& n : rep.notes) out << "# note " << n << '\n';
    out << "x,pi_K,psi_K,theta_K,sum_W,ramified_skipped\n";
    for (const IdealRow& r : rep.rows)
        out << r.x << ',' << r.pi_K << ',' << detail::format_double(r.psi_K)
            << ',' << detail::format_double(r.theta_K) << ',' << r.sum_W
            << ',' << r.ramified_skipped << '\n';
    return out.str();
}

inline std::string ideals_json(const IdealReport& rep,
                               const RunConfig& cfg = {}) {
    std::string o = "{\n";
    o += "  \"tool\": \"pfeas\",\n";
    o += "  \"version\": " + detail::json_quote(version_string) + ",\n";
    o += "  \"kind\": \"ideals\",\n";
    o += "  \"config\": {";
    bool first = true;
    for (const auto& [k, v] : cfg.echo()) {
        if (!first) o += ", ";
        first = false;
        o += detail::json_quote(k) + ": " + detail::json_quote(v);
    }
    o += "},\n";
    o += "  \"d\": " + std::to_string(rep.d) + ",\n";
    o += "  \"notes\": [";
    for (size_t i = 0; i < rep.notes.size(); ++i) {
        if (i) o += ", ";
        o += detail::json_quote(rep.notes[i]);
    }
    o += "],\n";
    o += "  \"wall_ms\": " + detail::format_double(rep.wall_ms) + ",\n";
    o += "  \"rows\": [\n";
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        const IdealRow& r = rep.rows[i];
        o += "    {\"x\": " + std::to_string(r.x) +
             ", \"pi_K\": " + std::to_string(r.pi_K) +
             ", \"psi_K\": " + detail::format_double(r.psi_K) +
             ", \"theta_K\": " + detail::format_double(r.theta_K) +
             ", \"sum_W\": " + std::to_string(r.sum_W) +
             ", \"ramified_skipped\": " + std::to_string(r.ramified_skipped) +
             "}";
        o += i + 1 < rep.rows.size() ? ",\n" : "\n";
    }
    o += "  ]\n}\n";
    return o;
}

} // namespace pfeas
