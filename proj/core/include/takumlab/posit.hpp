#pragma once

#include <compare>
#include <cstdint>

#include "takumlab/exact_real.hpp"

namespace takumlab {

/// An n-bit posit pattern (standard posits, two exponent bits), with the
/// same special patterns and two's complement structure as takums.
struct PositBits {
  int width = 0;
  std::uint64_t bits = 0;

  PositBits() = default;
  PositBits(int w, std::uint64_t b);

  bool is_zero() const { return bits == 0; }
  bool is_nar() const;

  bool operator==(const PositBits&) const = default;
};

ExtendedReal posit_decode(PositBits x);

/// Same rounding policy as takum_encode: nearest, ties to the even bit
/// pattern, saturating at both ends.
PositBits posit_encode(const ExtendedReal& v, int width);

PositBits posit_negate(PositBits x);

std::strong_ordering posit_compare(PositBits a, PositBits b);

/// (2^-4(n-2), 2^4(n-2)); both endpoints are representable patterns.
struct PositRange {
  ExtendedReal min_pos;
  ExtendedReal max;
};
PositRange posit_dynamic_range(int width);

}  // namespace takumlab
