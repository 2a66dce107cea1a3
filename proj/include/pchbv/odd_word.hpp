#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pchbv {

/// A word of pairwise-anticommuting odd generators, stored as a bitmask.
/// Canonical order of the letters is ascending bit index:
///
///   bits  0..3   dx^mu          (coordinate one-forms)
///   bits  4..7   u_i            (internal exterior generators)
///   bits  8..23  theta_a        (ghost parameters, ghost number +1)
///   bits 24..39  thetabar_a     (antighost parameters, ghost number -1)
///   bits 40..55  eps_j          (variation markers, odd, ghost 0)
///
/// The canonical form of a product of distinct letters is the ascending
/// word times the sign of the sorting permutation; a repeated letter
/// kills the product.  Keeping the markers in the highest bits makes
/// marker extraction sign-free with respect to all other letters.
using OddWord = std::uint64_t;

inline constexpr int kThetaPoolMax = 16;
inline constexpr int kMarkerPoolMax = 16;

inline constexpr int kDxShift = 0;
inline constexpr int kUShift = 4;
inline constexpr int kThetaShift = 8;
inline constexpr int kThetaBarShift = 24;
inline constexpr int kMarkerShift = 40;

inline constexpr OddWord kDxMask = 0xfull << kDxShift;
inline constexpr OddWord kUMask = 0xfull << kUShift;
inline constexpr OddWord kThetaMask = 0xffffull << kThetaShift;
inline constexpr OddWord kThetaBarMask = 0xffffull << kThetaBarShift;
inline constexpr OddWord kMarkerMask = 0xffffull << kMarkerShift;

inline OddWord dx_gen(int mu) {
    if (mu < 0 || mu > 3) throw std::out_of_range("dx index");
    return OddWord{1} << (kDxShift + mu);
}
inline OddWord u_gen(int i) {
    if (i < 0 || i > 3) throw std::out_of_range("u index");
    return OddWord{1} << (kUShift + i);
}
inline OddWord theta_gen(int a) {
    if (a < 0 || a >= kThetaPoolMax) throw std::out_of_range("theta index");
    return OddWord{1} << (kThetaShift + a);
}
inline OddWord thetabar_gen(int a) {
    if (a < 0 || a >= kThetaPoolMax) throw std::out_of_range("thetabar index");
    return OddWord{1} << (kThetaBarShift + a);
}
inline OddWord marker_gen(int j) {
    if (j < 0 || j >= kMarkerPoolMax) throw std::out_of_range("marker index");
    return OddWord{1} << (kMarkerShift + j);
}

inline int word_length(OddWord w) { return std::popcount(w); }
inline int word_parity(OddWord w) { return std::popcount(w) & 1; }

inline int dx_degree(OddWord w) { return std::popcount(w & kDxMask); }
inline int u_degree(OddWord w) { return std::popcount(w & kUMask); }
inline int theta_degree(OddWord w) { return std::popcount(w & kThetaMask); }
inline int thetabar_degree(OddWord w) { return std::popcount(w & kThetaBarMask); }
inline int marker_degree(OddWord w) { return std::popcount(w & kMarkerMask); }
inline int ghost_number(OddWord w) { return theta_degree(w) - thetabar_degree(w); }

/// Sign of merging two disjoint ascending words into one ascending word:
/// (-1)^{# of transpositions}.  For each letter of b, count the letters
/// of a strictly above it.
inline int merge_sign(OddWord a, OddWord b) {
    int inversions = 0;
    OddWord bb = b;
    while (bb) {
        int i = std::countr_zero(bb);
        bb &= bb - 1;
        inversions += std::popcount(a >> (i + 1));
    }
    return (inversions & 1) ? -1 : 1;
}

/// Sign from extracting the single letter `bit` out of w to the right
/// end: it passes every letter above it.
inline int extract_right_sign(OddWord w, OddWord bit) {
    int i = std::countr_zero(bit);
    int above = std::popcount(w >> (i + 1));
    return (above & 1) ? -1 : 1;
}

/// Sign from extracting `bit` out of w to the left end.
inline int extract_left_sign(OddWord w, OddWord bit) {
    int i = std::countr_zero(bit);
    OddWord below = w & ((OddWord{1} << i) - 1);
    return (std::popcount(below) & 1) ? -1 : 1;
}

std::string word_str(OddWord w);

} // namespace pchbv
