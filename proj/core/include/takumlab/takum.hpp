#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "takumlab/exact_real.hpp"

namespace takumlab {

/// An n-bit takum bit pattern, 2 <= n <= 64. The all-zero pattern is the
/// unique zero; the pattern with only the sign bit set is NaR; every other
/// pattern is a nonzero rational. Negation is two's complement within the
/// width, and the signed-integer order of patterns is the value order.
struct TakumBits {
  int width = 0;
  std::uint64_t bits = 0;

  TakumBits() = default;
  TakumBits(int w, std::uint64_t b);

  bool is_zero() const { return bits == 0; }
  bool is_nar() const;

  bool operator==(const TakumBits&) const = default;
};

/// Field breakdown of a non-special pattern after zero-extension to
/// n' = max(width, 12) bits: sign, direction, 3-bit regime, r
/// characteristic bits and p fraction bits.
struct DecodedTakum {
  int sign = 0;        // S
  int direction = 0;   // D
  int regime = 0;      // R, 3 bits
  int r = 0;           // characteristic bit count, 0..7
  int p = 0;           // fraction bit count, n' - 5 - r
  std::uint64_t characteristic_bits = 0;  // C, r bits
  std::uint64_t fraction_bits = 0;        // F, p bits
  long characteristic = 0;                // c in [-255, 254]
  mpq_class fraction;                     // F / 2^p in [0, 1)
};

/// Exact value of a pattern. Total: specials decode to Zero / NaR.
ExtendedReal takum_decode(TakumBits x);

/// Field view of the magnitude of a non-special pattern (the two's
/// complement is taken first for negative patterns; sign is preserved).
DecodedTakum takum_fields(TakumBits x);

/// Round-to-nearest encoding with ties to the even bit pattern and
/// saturation at both ends: finite magnitudes above the width's maximum
/// map to the extremal pattern, positive magnitudes below the minimum map
/// to the minimal positive pattern, never to zero. Zero maps to the zero
/// pattern; NaR and both infinities map to NaR.
TakumBits takum_encode(const ExtendedReal& v, int width);

/// Two's complement within the width; zero and NaR are fixed points.
TakumBits takum_negate(TakumBits x);

/// Signed-integer order of the raw patterns, which equals the value order
/// with NaR below every value. Throws UsageError on width mismatch.
std::strong_ordering takum_compare(TakumBits a, TakumBits b);

/// Smallest positive and largest value of the width. For n >= 12 the
/// lower endpoint is the family's range boundary 2^-255; the smallest
/// representable pattern sits just above it, at (1 + 2^-(n-12)) * 2^-255
/// for n > 12 and 2^-254 for n = 12.
struct TakumRange {
  ExtendedReal min_pos;
  ExtendedReal max;
};
TakumRange takum_dynamic_range(int width);

}  // namespace takumlab
