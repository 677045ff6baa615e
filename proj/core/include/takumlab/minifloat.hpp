#pragma once

#include <cstdint>
#include <string>

#include "takumlab/exact_real.hpp"

namespace takumlab {

enum class NanPolicy : std::uint8_t {
  IeeeAllPayloads,    // top exponent reserved: zero fraction is inf, rest NaN
  SinglePatternE4M3,  // only S.1111.111 is NaN, no infinities
  None,               // every pattern is finite
};

/// Layout and special-value policy of an IEEE-754-style format:
/// 1 sign bit, exp_bits exponent bits, frac_bits fraction bits.
struct MiniFloatSpec {
  int exp_bits = 0;
  int frac_bits = 0;
  int bias = 0;
  bool has_inf = true;
  NanPolicy nan_policy = NanPolicy::IeeeAllPayloads;
  std::string name;

  int storage_bits() const { return 1 + exp_bits + frac_bits; }
  long emax_field() const { return (1L << exp_bits) - 1; }

  bool operator==(const MiniFloatSpec&) const = default;

  static MiniFloatSpec float16();
  static MiniFloatSpec bfloat16();
  static MiniFloatSpec float32();
  static MiniFloatSpec float64();
  static MiniFloatSpec e5m2();
  static MiniFloatSpec e4m3();
  /// E4M3 layout read with an IEEE-reserved top exponent (inf/NaN at
  /// exponent 15); largest finite value 240 instead of 448.
  static MiniFloatSpec e4m3_ieee();
  /// IEEE-style layout of a given storage width (8/16/32/64).
  static MiniFloatSpec ieee_of_width(int bits);
};

struct MiniFloatBits {
  MiniFloatSpec spec;
  std::uint64_t bits = 0;

  MiniFloatBits() = default;
  MiniFloatBits(MiniFloatSpec s, std::uint64_t b);
};

/// Exact IEEE-style interpretation: subnormals at exponent field zero,
/// implicit leading one otherwise, specials per the layout's policy.
/// Both zero patterns decode to the unique unsigned Zero.
ExtendedReal mf_decode(const MiniFloatBits& x);

/// Round to nearest, ties to even, across subnormals and normals.
/// Overflow produces the signed infinity when the format has one and the
/// NaN pattern otherwise; magnitudes up to half the minimum subnormal
/// round to the signed zero pattern.
MiniFloatBits mf_encode(const ExtendedReal& v, const MiniFloatSpec& spec);

struct MiniFloatRange {
  ExtendedReal min_subnormal;
  ExtendedReal min_normal;
  ExtendedReal max_finite;
};
MiniFloatRange mf_dynamic_range(const MiniFloatSpec& spec);

bool mf_is_nan(const MiniFloatBits& x);
bool mf_is_inf(const MiniFloatBits& x);

}  // namespace takumlab
