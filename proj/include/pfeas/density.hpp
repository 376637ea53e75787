#pragma once

// Prime sweeps: for each prime p ≤ x_max count the distinct roots W(p) of a
// polynomial (or the common roots of a system) in F_p, accumulating π(x),
// π_f(x) = #{p ≤ x : W(p) ≥ 1} and Σ W(p) at a ladder of checkpoints.
// Primes where the count is structurally unreliable (dividing a leading
// coefficient, the discriminant, or a cofactor resultant) are tallied but
// flagged exceptional, and the report keeps parallel tallies with those
// primes removed so the inequality π_f·d ≥ ΣW can be asserted exactly.
//
// Sweeps run over fixed-size blocks of primes claimed by a worker pool and
// merged in block order, so a report is identical for any thread count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "pfeas/config.hpp"
#include "pfeas/int_gcd.hpp"
#include "pfeas/int_poly.hpp"
#include "pfeas/mod_poly.hpp"
#include "pfeas/resultant.hpp"
#include "pfeas/sieve.hpp"
#include "pfeas/version.hpp"

namespace pfeas {

struct DensityRow {
    u64 x = 0;            // checkpoint: tallies cover swept primes p ≤ x
    u64 pi = 0;           // primes swept
    u64 pi_f = 0;         // primes with at least one root
    u64 sum_W = 0;        // total distinct roots
    u64 exceptional = 0;  // primes flagged exceptional (still included above)
    u64 pi_f_clean = 0;   // pi_f over non-exceptional primes only
    u64 sum_W_clean = 0;  // sum_W over non-exceptional primes only

    bool operator==(const DensityRow&) const = default;
};

struct DensityReport {
    std::vector<DensityRow> rows;
    i64 d = 0;  // degree cap: W(p) ≤ d at every non-exceptional prime

    bool sampled = false;
    u64 sample_count = 0;     // primes actually swept when sampled
    u64 sample_of_first = 0;  // population the sample was drawn from
    double sample_se = 0.0;   // binomial standard error of pi_f/pi

    // fast path only: exceptional primes could not all be identified, so
    // pi_f and sum_W are lower bounds at the missed primes
    bool lower_bound = false;

    std::vector<std::string> notes;
    double wall_ms = 0.0;
    std::vector<u64> counted_primes;  // primes with W ≥ 1, kept on request
};

// ---------------------------------------------------------------------------
// checkpoints and sampling

// powers of ten, then x_max itself
inline std::vector<u64> default_checkpoints(u64 x_max) {
    if (x_max < 2) throw std::invalid_argument("x_max below 2");
    std::vector<u64> cps;
    for (u64 c = 10; c < x_max; c *= 10) {
        cps.push_back(c);
        if (c > x_max / 10) break;
    }
    cps.push_back(x_max);
    return cps;
}

namespace detail {

inline std::vector<u64> normalize_checkpoints(std::vector<u64> cps, u64 x_max) {
    if (x_max < 2) throw std::invalid_argument("x_max below 2");
    if (cps.empty()) return default_checkpoints(x_max);
    std::vector<u64> keep;
    for (u64 c : cps)
        if (c >= 2 && c <= x_max) keep.push_back(c);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.empty() || keep.back() != x_max) keep.push_back(x_max);
    return keep;
}

} // namespace detail

// ---------------------------------------------------------------------------
// deterministic sweep engine

namespace detail {

struct PrimeOutcome {
    u64 w = 0;
    bool exceptional = false;
};

struct SweepTally {
    u64 pi = 0, pi_f = 0, sum_w = 0, exceptional = 0, pi_f_clean = 0,
        sum_w_clean = 0;

    void add(const SweepTally& o) {
        pi += o.pi;
        pi_f += o.pi_f;
        sum_w += o.sum_w;
        exceptional += o.exceptional;
        pi_f_clean += o.pi_f_clean;
        sum_w_clean += o.sum_w_clean;
    }
};

// Primes are split into fixed blocks; workers claim blocks through an atomic
// counter and tally into per-block per-checkpoint buckets; buckets merge in
// block order.  The result is independent of the thread count and of the
// order in which workers finish.
template <class Fn>
std::vector<DensityRow> run_sweep(const std::vector<u64>& primes,
                                  const std::vector<u64>& checkpoints,
                                  unsigned threads, Fn&& per_prime,
                                  std::vector<u64>* counted) {
    const size_t nb = checkpoints.size();
    const size_t block = 256;
    const size_t nblocks = (primes.size() + block - 1) / block;
    std::vector<std::vector<SweepTally>> tallies(nblocks);
    std::vector<std::vector<u64>> hits(counted ? nblocks : 0);

    auto run_block = [&](size_t bi) {
        auto& t = tallies[bi];
        t.assign(nb, SweepTally{});
        const size_t lo = bi * block;
        const size_t hi = std::min(primes.size(), lo + block);
        for (size_t i = lo; i < hi; ++i) {
            const u64 p = primes[i];
            const size_t b = static_cast<size_t>(
                std::lower_bound(checkpoints.begin(), checkpoints.end(), p) -
                checkpoints.begin());
            const PrimeOutcome out = per_prime(p);
            SweepTally& s = t[b];
            ++s.pi;
            if (out.w > 0) ++s.pi_f;
            s.sum_w += out.w;
            if (out.exceptional) {
                ++s.exceptional;
            } else {
                if (out.w > 0) ++s.pi_f_clean;
                s.sum_w_clean += out.w;
            }
            if (counted && out.w > 0) hits[bi].push_back(p);
        }
    };

    const unsigned nt = static_cast<unsigned>(
        std::min<size_t>(threads ? threads : 1, nblocks));
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
                    next.store(nblocks);  // stop the other workers
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::vector<SweepTally> per(nb);
    for (size_t bi = 0; bi < nblocks; ++bi)
        for (size_t b = 0; b < nb; ++b) per[b].add(tallies[bi][b]);

    std::vector<DensityRow> rows(nb);
    SweepTally run{};
    for (size_t b = 0; b < nb; ++b) {
        run.add(per[b]);
        rows[b] = DensityRow{checkpoints[b], run.pi,          run.pi_f,
                             run.sum_w,      run.exceptional, run.pi_f_clean,
                             run.sum_w_clean};
    }
    if (counted) {
        counted->clear();
        for (auto& h : hits)
            counted->insert(counted->end(), h.begin(), h.end());
    }
    return rows;
}

// prime selection, optional sampling, sweep, standard-error fill
template <class Fn>
void finish_sweep(DensityReport& rep, u64 x_max, std::vector<u64> checkpoints,
                  const RunConfig& cfg, Fn&& per_prime, bool keep_counted) {
    const std::vector<u64> cps =
        normalize_checkpoints(std::move(checkpoints), x_max);
    std::vector<u64> primes = primes_up_to(x_max);
    if (cfg.sample_count > 0 && !cfg.full &&
        cfg.sample_count < primes.size()) {
        rep.sampled = true;
        rep.sample_count = cfg.sample_count;
        rep.sample_of_first = primes.size();
        std::vector<u64> chosen;
        chosen.reserve(cfg.sample_count);
        for (u64 i : sample_indices(primes.size(), cfg.sample_count, cfg.seed))
            chosen.push_back(primes[i]);
        primes = std::move(chosen);
        rep.notes.push_back(
            "sampled sweep: tallies cover the sampled primes only; ratios "
            "estimate the population");
    }
    rep.rows = run_sweep(primes, cps, cfg.threads, per_prime,
                         keep_counted ? &rep.counted_primes : nullptr);
    if (rep.sampled && !rep.rows.empty() && rep.rows.back().pi > 0) {
        const double n = static_cast<double>(rep.rows.back().pi);
        const double rho = static_cast<double>(rep.rows.back().pi_f) / n;
        rep.sample_se = std::sqrt(rho * (1.0 - rho) / n);
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// single-polynomial sweep

inline DensityReport sweep_pi_f(const IntPoly& f, u64 x_max,
                                std::vector<u64> checkpoints = {},
                                const RunConfig& cfg = {},
                                bool keep_counted = false) {
    const auto t0 = std::chrono::steady_clock::now();
    if (x_max < 2) throw std::invalid_argument("x_max below 2");
    if (f.degree() < 1)
        throw std::invalid_argument("density sweep needs degree >= 1");

    DensityReport rep;
    const IntPoly s = squarefree_part(f);
    rep.d = s.degree();
    if (s != f)
        rep.notes.push_back("input replaced by its squarefree part (degree " +
                            std::to_string(f.degree()) + " -> " +
                            std::to_string(s.degree()) + ")");
    std::optional<Int> disc;
    try {
        disc = discriminant(s);
    } catch (const std::domain_error&) {
        rep.notes.push_back(
            "discriminant beyond the exact-resultant range; exceptional set "
            "covers leading-coefficient primes only");
    }
    const Int& lead = s.lc();

    auto per_prime = [&](u64 p) {
        detail::PrimeOutcome o;
        o.w = root_count_auto(s, p);
        o.exceptional =
            mpz_divisible_ui_p(lead.get_mpz_t(), p) != 0 ||
            (disc && mpz_divisible_ui_p(disc->get_mpz_t(), p) != 0);
        return o;
    };
    detail::finish_sweep(rep, x_max, std::move(checkpoints), cfg, per_prime,
                         keep_counted);
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rep;
}

// ---------------------------------------------------------------------------
// system sweep

// systems whose largest degree fits under this cap take the exact per-prime
// gcd route; larger ones go through the Z-level gcd fast path
inline constexpr i64 direct_sweep_degree_cap = 128;

namespace detail {

// distinct common roots mod p by folding the reductions through the gcd;
// a polynomial vanishing identically mod p constrains nothing, and if every
// one vanishes each residue is a common root
inline u64 system_root_count(const std::vector<IntPoly>& polys, u64 p) {
    DenseVec g;
    bool have = false;
    for (const IntPoly& f : polys) {
        ModPoly r = reduce(f, p);
        if (r.is_zero()) continue;
        if (!have) {
            g = std::move(r.c);
            have = true;
        } else {
            g = dense::gcd(std::move(g), r.c, p);
        }
        if (dense::deg(g) == 0) return 0;
    }
    if (!have) return p;
    return dense::root_count(g, p);
}

} // namespace detail

inline DensityReport sweep_pi_F(const std::vector<IntPoly>& system, u64 x_max,
                                std::vector<u64> checkpoints = {},
                                const RunConfig& cfg = {},
                                bool keep_counted = false) {
    const auto t0 = std::chrono::steady_clock::now();
    if (system.empty()) throw std::invalid_argument("empty system");
    if (x_max < 2) throw std::invalid_argument("x_max below 2");

    std::vector<IntPoly> F;
    for (const IntPoly& f : system)
        if (!f.is_zero()) F.push_back(f);
    if (F.empty()) throw std::invalid_argument("system of zero polynomials");
    if (F.size() == 1 && F[0].degree() >= 1)
        return sweep_pi_f(F[0], x_max, std::move(checkpoints), cfg,
                          keep_counted);

    i64 max_deg = 0;
    i64 min_deg = std::numeric_limits<i64>::max();
    for (const IntPoly& f : F) {
        max_deg = std::max(max_deg, f.degree());
        min_deg = std::min(min_deg, f.degree());
    }
    if (max_deg < 1)
        throw std::invalid_argument("system has no positive-degree polynomial");

    DensityReport rep;
    rep.d = min_deg;  // common roots at a non-exceptional prime number ≤ min_deg

    Int lcprod = 1;
    for (const IntPoly& f : F) lcprod *= f.lc();

    if (max_deg <= direct_sweep_degree_cap) {
        auto per_prime = [&](u64 p) {
            detail::PrimeOutcome o;
            o.w = detail::system_root_count(F, p);
            o.exceptional = mpz_divisible_ui_p(lcprod.get_mpz_t(), p) != 0;
            return o;
        };
        detail::finish_sweep(rep, x_max, std::move(checkpoints), cfg,
                             per_prime, keep_counted);
        rep.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        return rep;
    }

    // Fast path.  g = gcd over Z is computed once; away from primes dividing
    // lc(f_i) or a resultant of coprime cofactors, the common roots mod p are
    // exactly the roots of g mod p.  Flagged primes are recounted exactly
    // when such a resultant is available; otherwise they go uncounted and the
    // whole report is labeled a lower bound (missing primes can only add).
    IntPoly g = F[0];
    for (size_t i = 1; i < F.size(); ++i) g = gcd_z(g, F[i]);
    const bool g_positive = g.degree() >= 1;

    std::vector<IntPoly> cof;
    if (g_positive) {
        for (const IntPoly& f : F) {
            auto q = IntPoly::div_exact(f, g);
            if (!q) throw std::logic_error("gcd does not divide the system");
            cof.push_back(std::move(*q));
        }
    } else {
        cof = F;
    }

    std::optional<Int> res;
    for (size_t i = 0; i < cof.size() && !res; ++i)
        for (size_t j = i + 1; j < cof.size() && !res; ++j) {
            const u64 dsum = static_cast<u64>(std::max<i64>(cof[i].degree(), 0)) +
                             static_cast<u64>(std::max<i64>(cof[j].degree(), 0));
            if (dsum > exact_resultant_threshold) continue;
            // any coprime pair works: a common root of all cofactors is a
            // common root of this pair, hence a divisor of its resultant
            if (cof.size() > 2 && gcd_z(cof[i], cof[j]).degree() != 0) continue;
            try {
                Int r = resultant(cof[i], cof[j]);
                if (r != 0) res = std::move(r);
            } catch (const std::domain_error&) {
            }
        }

    Int flagbase = lcprod;
    if (res) {
        flagbase *= *res;
    } else {
        rep.lower_bound = true;
        rep.notes.push_back(
            "cofactor resultant beyond the exact range; common roots at "
            "primes outside the gcd go uncounted (lower bound)");
    }
    const bool exact_mode = res.has_value();

    auto per_prime = [&](u64 p) {
        detail::PrimeOutcome o;
        const bool flagged = mpz_divisible_ui_p(flagbase.get_mpz_t(), p) != 0;
        if (flagged && exact_mode) {
            o.w = detail::system_root_count(F, p);
        } else if (g_positive) {
            o.w = root_count_auto(g, p);
        }
        o.exceptional = flagged;
        return o;
    };
    detail::finish_sweep(rep, x_max, std::move(checkpoints), cfg, per_prime,
                         keep_counted);
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rep;
}

// ---------------------------------------------------------------------------
// derived quantities and invariants

struct FrobeniusEstimate {
    double density = 0.0;  // pi_f/pi at the final checkpoint
    // implied primes-per-hit ratio pi/pi_f; measured, and in general not an
    // integer (e.g. three halves for a generic cubic)
    double s_f = 0.0;
};

inline FrobeniusEstimate frobenius_density(const DensityReport& rep) {
    if (rep.rows.empty() || rep.rows.back().pi == 0)
        throw std::invalid_argument("frobenius density needs a swept prime");
    const DensityRow& last = rep.rows.back();
    const double density =
        static_cast<double>(last.pi_f) / static_cast<double>(last.pi);
    const double s =
        last.pi_f > 0
            ? static_cast<double>(last.pi) / static_cast<double>(last.pi_f)
            : std::numeric_limits<double>::infinity();
    return {density, s};
}

// pi_f·d ≥ sum_W over non-exceptional primes, at every checkpoint
inline bool clean_inequality_holds(const DensityReport& rep) {
    const u64 d = rep.d > 0 ? static_cast<u64>(rep.d) : 0;
    for (const DensityRow& r : rep.rows)
        if (static_cast<u128>(r.pi_f_clean) * d < r.sum_W_clean) return false;
    return true;
}

inline bool rows_monotone(const DensityReport& rep) {
    for (size_t i = 1; i < rep.rows.size(); ++i) {
        const DensityRow& a = rep.rows[i - 1];
        const DensityRow& b = rep.rows[i];
        if (b.x <= a.x || b.pi < a.pi || b.pi_f < a.pi_f ||
            b.sum_W < a.sum_W || b.exceptional < a.exceptional ||
            b.pi_f_clean < a.pi_f_clean || b.sum_W_clean < a.sum_W_clean)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// report emission

namespace detail {

inline void json_escape_into(std::string& out, std::string_view s) {
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
}

inline std::string json_quote(std::string_view s) {
    std::string r = "\"";
    json_escape_into(r, s);
    r += '"';
    return r;
}

inline void csv_comment_header(std::ostream& out, const RunConfig& cfg,
                               const char* kind, double wall_ms) {
    out << "# pfeas " << version_string << ' ' << kind << '\n';
    for (const auto& [k, v] : cfg.echo())
        out << "# config " << k << '=' << v << '\n';
    out << "# wall_ms " << format_double(wall_ms) << '\n';
}

} // namespace detail

inline std::string density_csv(const DensityReport& rep,
                               const RunConfig& cfg = {}) {
    std::ostringstream out;
    detail::csv_comment_header(out, cfg, "density", rep.wall_ms);
    out << "# mode " << (rep.sampled ? "sampled" : "exhaustive") << '\n';
    if (rep.sampled)
        out << "# sample count=" << rep.sample_count
            << " of_first=" << rep.sample_of_first
            << " se=" << detail::format_double(rep.sample_se) << '\n';
    out << "# label " << (rep.lower_bound ? "fast-path lower bound" : "exact")
        << '\n';
    out << "# d " << rep.d << '\n';
    for (const std::string& n : rep.notes) out << "# note " << n << '\n';
    out << "x,pi,pi_f,sum_W,exceptional\n";
    for (const DensityRow& r : rep.rows)
        out << r.x << ',' << r.pi << ',' << r.pi_f << ',' << r.sum_W << ','
            << r.exceptional << '\n';
    return out.str();
}

// the non-comment part of a report: byte-identical for a fixed RunConfig,
// independent of thread count and wall time (comments echo both)
inline std::string csv_body(const std::string& csv) {
    std::string body;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') {
            body += line;
            body += '\n';
        }
    return body;
}

inline std::string density_json(const DensityReport& rep,
                                const RunConfig& cfg = {}) {
    std::string o = "{\n";
    o += "  \"tool\": \"pfeas\",\n";
    o += "  \"version\": " + detail::json_quote(version_string) + ",\n";
    o += "  \"kind\": \"density\",\n";
    o += "  \"config\": {";
    bool first = true;
    for (const auto& [k, v] : cfg.echo()) {
        if (!first) o += ", ";
        first = false;
        o += detail::json_quote(k) + ": " + detail::json_quote(v);
    }
    o += "},\n";
    o += std::string("  \"mode\": ") +
         (rep.sampled ? "\"sampled\"" : "\"exhaustive\"") + ",\n";
    if (rep.sampled)
        o += "  \"sample\": {\"count\": " + std::to_string(rep.sample_count) +
             ", \"of_first\": " + std::to_string(rep.sample_of_first) +
             ", \"se\": " + detail::format_double(rep.sample_se) + "},\n";
    o += std::string("  \"label\": ") +
         (rep.lower_bound ? "\"fast-path lower bound\"" : "\"exact\"") + ",\n";
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
        const DensityRow& r = rep.rows[i];
        o += "    {\"x\": " + std::to_string(r.x) +
             ", \"pi\": " + std::to_string(r.pi) +
             ", \"pi_f\": " + std::to_string(r.pi_f) +
             ", \"sum_W\": " + std::to_string(r.sum_W) +
             ", \"exceptional\": " + std::to_string(r.exceptional) + "}";
        o += i + 1 < rep.rows.size() ? ",\n" : "\n";
    }
    o += "  ]\n}\n";
    return o;
}

} // namespace pfeas
