#pragma once

// The built-in example system: two sparse polynomials of degree 120017 and
// 210017 sharing a degree-20017 common factor u, with coprime cofactors:
//   f1 = u * (x^100000 - 47x^5001 + 37)
//   f2 = u * (19x^190000 + 2x^9999 - 7)
//   u  = x^20017 + 4x^10001 + 19x^10000 - 3x^1208 + 1
// Because gcd(f1, f2) is nonconstant, roughly two thirds of all primes admit
// a common root mod p, while the infeasibility machinery bounds that count
// for coprime systems — this pair is the flagship end-to-end regression.
// The checksum pins the transcription against accidental drift.

#include "pfeas/int_poly.hpp"
#include "pfeas/poly_io.hpp"

namespace pfeas::fixtures {

inline const IntPoly& example_f1() {
    static const IntPoly f = IntPoly::from_pairs({
        {120017, 1},   {110001, 4},   {110000, 19}, {101208, -3}, {100000, 1},
        {25018, -47},  {20017, 37},   {15002, -188}, {15001, -893}, {10001, 148},
        {10000, 703},  {6209, 141},   {5001, -47},  {1208, -111}, {0, 37},
    });
    return f;
}

inline const IntPoly& example_f2() {
    static const IntPoly f = IntPoly::from_pairs({
        {210017, 19},  {200001, 76},  {200000, 361}, {191208, -57}, {190000, 19},
        {30016, 2},    {20017, -7},   {20000, 8},    {19999, 38},   {11207, -6},
        {10001, -28},  {10000, -133}, {9999, 2},     {1208, 21},    {0, -7},
    });
    return f;
}

// the common factor and the two cofactors (for oracle checks)
inline const IntPoly& example_u() {
    static const IntPoly f = IntPoly::from_pairs(
        {{20017, 1}, {10001, 4}, {10000, 19}, {1208, -3}, {0, 1}});
    return f;
}

inline const IntPoly& example_c1() {
    static const IntPoly f = IntPoly::from_pairs({{100000, 1}, {5001, -47}, {0, 37}});
    return f;
}

inline const IntPoly& example_c2() {
    static const IntPoly f = IntPoly::from_pairs({{190000, 19}, {9999, 2}, {0, -7}});
    return f;
}

// FNV-1a of to_text(f1) + "\n" + to_text(f2); frozen once at transcription.
inline constexpr u64 example_checksum = 0x8802d54c3956f8e1ULL;

inline u64 compute_example_checksum() {
    return text_checksum(to_text(example_f1()) + "\n" + to_text(example_f2()));
}

inline void verify_example_checksum() {
    if (compute_example_checksum() != example_checksum)
        throw std::logic_error("embedded example system failed its checksum");
}

} // namespace pfeas::fixtures
