#pragma once

// Text and JSON round-trip for IntPoly, plus system-file loading.
//
// Text grammar: signed monomials `c*x^e`, `x^e`, `c`, separated by `+`/`-`
// (the UTF-8 minus sign U+2212 is accepted too), arbitrary whitespace.
// JSON form: array of [exponent, coefficient-as-decimal-string] pairs.
// A system file is either one polynomial per non-comment text line, or a
// JSON array of polynomials.

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pfeas/int_poly.hpp"

namespace pfeas {

struct ParseError : std::runtime_error {
    std::size_t line, col;
    ParseError(std::size_t line_, std::size_t col_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ", col " +
                             std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

namespace detail {

class PolyTextScanner {
public:
    PolyTextScanner(std::string_view src, std::size_t line_no)
        : src_(src), line_(line_no) {}

    IntPoly parse() {
        std::vector<std::pair<u64, Int>> pairs;
        skip_ws();
        if (eof()) fail("empty polynomial");
        bool first = true;
        while (!eof()) {
            int sign = 1;
            if (take_minus()) {
                sign = -1;
            } else if (peek() == '+') {
                ++pos_;
            } else if (!first) {
                fail("expected '+' or '-' between monomials");
            }
            skip_ws();
            pairs.push_back(monomial(sign));
            skip_ws();
            first = false;
        }
        return IntPoly::from_pairs(pairs);
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_;

    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_, pos_ + 1, msg);
    }
    bool take_minus() {
        if (!eof() && peek() == '-') { ++pos_; return true; }
        if (pos_ + 2 < src_.size() + 1 && src_.substr(pos_, 3) == "\xe2\x88\x92") {
            pos_ += 3;  // U+2212
            return true;
        }
        return false;
    }

    Int digits() {
        std::size_t start = pos_;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (pos_ == start) fail("expected digits");
        return Int(std::string(src_.substr(start, pos_ - start)), 10);
    }

    u64 exponent() {
        std::size_t at = pos_;
        Int e = digits();
        if (!e.fits_ulong_p())
            throw ParseError(line_, at + 1, "exponent too large");
        return static_cast<u64>(e.get_ui());
    }

    std::pair<u64, Int> monomial(int sign) {
        if (eof()) fail("expected monomial");
        Int coef = 1;
        bool saw_coef = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coef = digits();
            saw_coef = true;
            skip_ws();
            if (!eof() && peek() == '*') {
                ++pos_;
                skip_ws();
                if (eof() || peek() != 'x') fail("expected 'x' after '*'");
            } else {
                if (sign < 0) coef = -coef;
                return {0, coef};  // bare constant
            }
        }
        if (eof() || peek() != 'x')
            fail(saw_coef ? "expected 'x'" : "expected monomial");
        ++pos_;
        u64 e = 1;
        skip_ws();
        if (!eof() && peek() == '^') {
            ++pos_;
            skip_ws();
            e = exponent();
        }
        if (sign < 0) coef = -coef;
        return {e, coef};
    }
};

} // namespace detail

inline IntPoly parse_poly_text(std::string_view src, std::size_t line_no = 1) {
    return detail::PolyTextScanner(src, line_no).parse();
}

inline std::string to_text(const IntPoly& f) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : f.terms()) {
        bool neg = t.coef < 0;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        Int a = abs(t.coef);
        if (t.exp == 0) {
            out += a.get_str();
        } else {
            if (a != 1) {
                out += a.get_str();
                out += "*";
            }
            out += "x";
            if (t.exp != 1) {
                out += "^";
                out += std::to_string(t.exp);
            }
        }
        first = false;
    }
    return out;
}

inline nlohmann::json poly_to_json(const IntPoly& f) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& t : f.terms())
        j.push_back({t.exp, t.coef.get_str()});
    return j;
}

namespace detail {

inline bool is_term_pair(const nlohmann::json& j) {
    return j.is_array() && j.size() == 2 &&
           ((j[0].is_number_integer() && j[0].get<long long>() >= 0) ||
            j[0].is_number_unsigned()) &&
           j[1].is_string();
}

} // namespace detail

inline IntPoly poly_from_json(const nlohmann::json& j) {
    if (!j.is_array())
        throw ParseError(1, 1, "polynomial JSON must be an array of [exponent, coefficient] pairs");
    std::vector<std::pair<u64, Int>> pairs;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!detail::is_term_pair(j[i]))
            throw ParseError(1, i + 1,
                             "term " + std::to_string(i) +
                                 " is not an [exponent, coefficient-string] pair");
        const std::string cs = j[i][1].get<std::string>();
        try {
            pairs.emplace_back(j[i][0].get<u64>(), Int(cs, 10));
        } catch (const std::invalid_argument&) {
            throw ParseError(1, i + 1, "bad coefficient string '" + cs + "'");
        }
    }
    return IntPoly::from_pairs(pairs);
}

inline nlohmann::json system_to_json(const std::vector<IntPoly>& fs) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& f : fs) j.push_back(poly_to_json(f));
    return j;
}

inline std::vector<IntPoly> system_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw ParseError(1, 1, "system JSON must be a non-empty array");
    std::vector<IntPoly> out;
    if (detail::is_term_pair(j[0])) {
        out.push_back(poly_from_json(j));  // a bare single polynomial
        return out;
    }
    for (const auto& e : j) out.push_back(poly_from_json(e));
    return out;
}

// One polynomial per line; blank lines and '#' comment lines are skipped.
inline std::vector<IntPoly> parse_system_text(std::string_view src) {
    std::vector<IntPoly> out;
    std::size_t line_no = 0, pos = 0;
    while (pos <= src.size()) {
        std::size_t nl = src.find('\n', pos);
        std::string_view line = src.substr(pos, nl == std::string_view::npos ? src.size() - pos
                                                                             : nl - pos);
        ++line_no;
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i < line.size() && line[i] != '#')
            out.push_back(parse_poly_text(line, line_no));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (out.empty()) throw ParseError(line_no, 1, "no polynomials in input");
    return out;
}

// Loads a system from a file, sniffing JSON ('[' first) vs text.
inline std::vector<IntPoly> load_system(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string src = ss.str();
    std::size_t i = 0;
    while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
    if (i < src.size() && src[i] == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(src);
        } catch (const nlohmann::json::parse_error& e) {
            // translate byte offset into line/col for uniform diagnostics
            std::size_t line = 1, col = 1;
            for (std::size_t k = 0; k < e.byte && k < src.size(); ++k) {
                if (src[k] == '\n') { ++line; col = 1; } else { ++col; }
            }
            throw ParseError(line, col, e.what());
        }
        return system_from_json(j);
    }
    return parse_system_text(src);
}

// FNV-1a over a canonical rendering; pins embedded fixtures against drift.
inline u64 text_checksum(std::string_view s) {
    u64 h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace pfeas
