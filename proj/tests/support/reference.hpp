#pragma once

// Reference decoders and rounding searches used as test oracles. These
// walk explicit bit-character strings instead of the packed integer
// arithmetic the library uses, so the two sides only share the format
// definition itself.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "takumlab/exact_real.hpp"
#include "takumlab/minifloat.hpp"

namespace takumlab::testref {

inline std::string to_bit_string(std::uint64_t bits, int width) {
  std::string s(width, '0');
  for (int i = 0; i < width; ++i)
    if ((bits >> i) & 1) s[width - 1 - i] = '1';
  return s;
}

inline std::string twos_complement_string(std::string s) {
  for (char& c : s) c = c == '0' ? '1' : '0';
  for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) {
    if (s[i] == '0') {
      s[i] = '1';
      break;
    }
    s[i] = '0';
  }
  return s;
}

inline long bits_to_long(const std::string& s) {
  long v = 0;
  for (char c : s) v = v * 2 + (c - '0');
  return v;
}

// nullopt encodes the two special patterns (zero and NaR).
inline std::optional<mpq_class> takum_value(int width, std::uint64_t bits) {
  std::string s = to_bit_string(bits, width);
  if (s.find('1') == std::string::npos) return std::nullopt;
  if (s[0] == '1' && s.find('1', 1) == std::string::npos) return std::nullopt;

  bool negative = s[0] == '1';
  if (negative) s = twos_complement_string(s);
  while (s.size() < 12) s += '0';

  int direction = s[1] - '0';
  long regime = bits_to_long(s.substr(2, 3));
  long r = direction ? regime : 7 - regime;
  std::string c_bits = s.substr(5, r);
  std::string f_bits = s.substr(5 + r);
  long c = direction ? ((1L << r) - 1 + bits_to_long(c_bits))
                     : (-(1L << (r + 1)) + 1 + bits_to_long(c_bits));
  mpq_class fraction(0);
  mpq_class scale(1, 2);
  for (char b : f_bits) {
    if (b == '1') fraction += scale;
    scale /= 2;
  }
  mpq_class value = (1 + fraction) * pow2(c);
  return negative ? mpq_class(-value) : value;
}

inline std::optional<mpq_class> posit_value(int width, std::uint64_t bits) {
  std::string s = to_bit_string(bits, width);
  if (s.find('1') == std::string::npos) return std::nullopt;
  if (s[0] == '1' && s.find('1', 1) == std::string::npos) return std::nullopt;

  bool negative = s[0] == '1';
  if (negative) s = twos_complement_string(s);
  std::string body = s.substr(1);

  char lead = body[0];
  std::size_t run = 0;
  while (run < body.size() && body[run] == lead) ++run;
  long k = lead == '1' ? static_cast<long>(run) - 1 : -static_cast<long>(run);
  std::size_t consumed = run < body.size() ? run + 1 : body.size();

  std::string rest = body.substr(consumed);
  long e = 0;
  if (rest.size() >= 2) e = bits_to_long(rest.substr(0, 2));
  else if (rest.size() == 1) e = 2 * (rest[0] - '0');
  std::string f_bits = rest.size() > 2 ? rest.substr(2) : "";

  mpq_class fraction(0);
  mpq_class scale(1, 2);
  for (char b : f_bits) {
    if (b == '1') fraction += scale;
    scale /= 2;
  }
  mpq_class value = (1 + fraction) * pow2(4 * k + e);
  return negative ? mpq_class(-value) : value;
}

enum class RefClass { Finite, Zero, Inf, NaN };

struct RefMiniFloat {
  RefClass cls = RefClass::Finite;
  mpq_class value;  // signed, valid for Finite and Zero
};

inline RefMiniFloat minifloat_value(const MiniFloatSpec& spec, std::uint64_t bits) {
  std::string s = to_bit_string(bits, spec.storage_bits());
  bool negative = s[0] == '1';
  std::string e_bits = s.substr(1, spec.exp_bits);
  std::string f_bits = s.substr(1 + spec.exp_bits);
  long E = bits_to_long(e_bits);
  long F = bits_to_long(f_bits);

  bool top = E == (1L << spec.exp_bits) - 1;
  if (top && spec.nan_policy == NanPolicy::IeeeAllPayloads)
    return {F == 0 ? RefClass::Inf : RefClass::NaN, mpq_class(negative ? -1 : 1)};
  if (top && spec.nan_policy == NanPolicy::SinglePatternE4M3 &&
      F == (1L << spec.frac_bits) - 1)
    return {RefClass::NaN, mpq_class(0)};

  mpq_class value;
  if (E == 0) {
    value = mpq_class(F) * pow2(1 - spec.bias - spec.frac_bits);
  } else {
    value = (mpq_class(F) * pow2(-spec.frac_bits) + 1) * pow2(E - spec.bias);
  }
  if (sgn(value) == 0) return {RefClass::Zero, value};
  if (negative) value = -value;
  return {RefClass::Finite, value};
}

/// Brute-force rounding for takum/posit: nearest representable value over
/// every non-special pattern of the width, ties to the even pattern.
/// Saturation falls out of the search because zero and NaR are excluded.
template <typename ValueFn>
std::uint64_t nearest_pattern(int width, const mpq_class& v, ValueFn value_of) {
  std::uint64_t best = 0;
  bool have = false;
  mpq_class best_dist;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << width); ++bits) {
    std::optional<mpq_class> val = value_of(width, bits);
    if (!val) continue;
    mpq_class dist = abs(*val - v);
    if (!have || cmp(dist, best_dist) < 0 ||
        (cmp(dist, best_dist) == 0 && (bits & 1) == 0)) {
      best = bits;
      best_dist = dist;
      have = true;
    }
  }
  return best;
}

/// Brute-force minifloat rounding for narrow (8-bit) specs: nearest
/// same-sign finite value with ties to the even pattern; magnitudes at or
/// past the overflow midpoint produce the format's overflow pattern,
/// unless the tie itself resolves back to the largest finite value.
inline std::uint64_t nearest_minifloat(const MiniFloatSpec& spec, const mpq_class& v) {
  bool negative = sgn(v) < 0;
  mpq_class a = negative ? mpq_class(-v) : v;
  std::uint64_t sign = negative
                           ? (std::uint64_t{1} << (spec.exp_bits + spec.frac_bits))
                           : 0;

  // Largest finite magnitude and the value of the slot one past it.
  mpq_class max_finite, virt;
  std::uint64_t max_index = 0;
  for (std::uint64_t idx = 0;; ++idx) {
    RefMiniFloat r = minifloat_value(spec, idx);
    if (r.cls == RefClass::Inf || r.cls == RefClass::NaN) {
      max_index = idx - 1;
      break;
    }
    if (idx == (std::uint64_t{1} << (spec.exp_bits + spec.frac_bits)) - 1) {
      max_index = idx;
      break;
    }
  }
  max_finite = minifloat_value(spec, max_index).value;
  {
    long emax = (1L << spec.exp_bits) - 1;
    if (spec.nan_policy == NanPolicy::SinglePatternE4M3)
      virt = (1 + mpq_class((1L << spec.frac_bits) - 1) * pow2(-spec.frac_bits)) *
             pow2(emax - spec.bias);
    else
      virt = pow2(emax - spec.bias);
  }

  mpq_class boundary = (max_finite + virt) / 2;
  int over = cmp(a, boundary);
  bool virt_even = ((max_index + 1) & 1) == 0;
  if (over > 0 || (over == 0 && virt_even)) {
    if (spec.has_inf)
      return sign | (static_cast<std::uint64_t>((1L << spec.exp_bits) - 1)
                     << spec.frac_bits);
    std::uint64_t nan = (static_cast<std::uint64_t>((1L << spec.exp_bits) - 1)
                         << spec.frac_bits) |
                        ((std::uint64_t{1} << spec.frac_bits) - 1);
    return sign | nan;
  }

  std::uint64_t best = 0;
  bool have = false;
  mpq_class best_dist;
  for (std::uint64_t idx = 0; idx <= max_index; ++idx) {
    RefMiniFloat r = minifloat_value(spec, idx);
    mpq_class val = r.cls == RefClass::Zero ? mpq_class(0) : r.value;
    mpq_class dist = abs(val - a);
    if (!have || cmp(dist, best_dist) < 0 ||
        (cmp(dist, best_dist) == 0 && (idx & 1) == 0)) {
      best = idx;
      best_dist = dist;
      have = true;
    }
  }
  return sign | best;
}

}  // namespace takumlab::testref
