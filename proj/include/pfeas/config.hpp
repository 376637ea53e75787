#pragma once

// Run-wide configuration: reproducibility knobs (seed, threads, output
// format) plus the free constants of the closed-form bounds.  The bound
// formulas carry absolute constants that no source pins down, so they are
// surfaced here as named parameters — defaults of 1 for the scale factors,
// and 5 for the hypothesis exponent C (the smallest integer satisfying every
// consumer's precondition: C > 1, C >= 2, C > 4).  Every report echoes the
// configuration so a run can be replayed exactly.

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfeas/nt.hpp"

namespace pfeas {

// how the final factor of the prime-count bound is parenthesized; see
// nullstellensatz_bound
enum class AfParse { literal, grouped };

enum class ReportFormat { csv, json };

inline const char* af_parse_name(AfParse p) {
    return p == AfParse::literal ? "literal" : "grouped";
}

inline const char* format_name(ReportFormat f) {
    return f == ReportFormat::csv ? "csv" : "json";
}

inline ReportFormat parse_format(const std::string& s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw std::invalid_argument("unknown format: " + s + " (expected csv or json)");
}

namespace detail {

inline double parse_double_strict(const std::string& key, const std::string& value) {
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw std::invalid_argument("constant " + key + ": not a number: " + value);
    return v;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

struct RunConfig {
    // free constants of the bound formulas ("--constant key=value")
    double mrh_C = 5.0;        // hypothesis exponent C
    double tf_c_scale = 1.0;   // scale on the onset estimate log t(F)
    double disc_c_disc = 1.0;  // scale on the discriminant log bound
    AfParse af_parse = AfParse::literal;

    // reproducibility knobs
    u64 seed = 0;
    unsigned threads = 1;
    ReportFormat format = ReportFormat::csv;
    std::string cache_dir;  // empty: no prime-sieve cache on disk

    // sweep extents (0 / empty: the subcommand picks its default)
    u64 x_max = 0;
    u64 x_cap = 0;
    std::vector<u64> checkpoints;
    u64 sample_count = 0;  // >0: sweep a seeded sample of this many primes
    bool full = false;     // exhaustive sweep instead of sampled

    void set_constant(const std::string& key, const std::string& value) {
        if (key == "mrh.C") {
            mrh_C = detail::parse_double_strict(key, value);
        } else if (key == "tf.c_scale") {
            tf_c_scale = detail::parse_double_strict(key, value);
        } else if (key == "disc.c_disc") {
            disc_c_disc = detail::parse_double_strict(key, value);
        } else if (key == "af.parse") {
            if (value == "literal") af_parse = AfParse::literal;
            else if (value == "grouped") af_parse = AfParse::grouped;
            else throw std::invalid_argument("constant af.parse: expected literal or grouped");
        } else {
            throw std::invalid_argument("unknown constant: " + key);
        }
    }

    // ordered key=value pairs echoed into every report header
    std::vector<std::pair<std::string, std::string>> echo() const {
        std::vector<std::pair<std::string, std::string>> kv;
        kv.emplace_back("af.parse", af_parse_name(af_parse));
        kv.emplace_back("disc.c_disc", detail::format_double(disc_c_disc));
        kv.emplace_back("mrh.C", detail::format_double(mrh_C));
        kv.emplace_back("tf.c_scale", detail::format_double(tf_c_scale));
        kv.emplace_back("seed", std::to_string(seed));
        kv.emplace_back("threads", std::to_string(threads));
        kv.emplace_back("format", format_name(format));
        if (x_max > 0) kv.emplace_back("x_max", std::to_string(x_max));
        if (x_cap > 0) kv.emplace_back("x_cap", std::to_string(x_cap));
        if (!checkpoints.empty()) {
            std::string s;
            for (u64 c : checkpoints) {
                if (!s.empty()) s += ' ';
                s += std::to_string(c);
            }
            kv.emplace_back("checkpoints", s);
        }
        if (sample_count > 0) kv.emplace_back("sample", std::to_string(sample_count));
        if (full) kv.emplace_back("full", "true");
        if (!cache_dir.empty()) kv.emplace_back("cache_dir", cache_dir);
        return kv;
    }
};

} // namespace pfeas
