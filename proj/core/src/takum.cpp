#include "takumlab/takum.hpp"

#include "takumlab/errors.hpp"

namespace takumlab {

namespace {

std::uint64_t width_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

std::uint64_t sign_bit(int n) { return std::uint64_t{1} << (n - 1); }

std::uint64_t twos_complement(std::uint64_t bits, int n) {
  return (~bits + 1) & width_mask(n);
}

// Magnitude of a positive pattern: (2^p + F) * 2^(c - p).
mpq_class decode_positive(std::uint64_t bits, int n) {
  int ext = n < 12 ? 12 - n : 0;
  std::uint64_t v = bits << ext;
  int np = n + ext;

  int direction = static_cast<int>((v >> (np - 2)) & 1);
  int regime = static_cast<int>((v >> (np - 5)) & 7);
  int r = direction ? regime : 7 - regime;
  int p = np - 5 - r;
  std::uint64_t c_bits = (v >> p) & width_mask(r);
  std::uint64_t f_bits = v & width_mask(p);
  long c = direction ? ((1L << r) - 1 + static_cast<long>(c_bits))
                     : (-(1L << (r + 1)) + 1 + static_cast<long>(c_bits));

  mpz_class mant = (mpz_class(1) << p) + mpz_from_u64(f_bits);
  return mpq_class(mant) * pow2(c - p);
}

// Largest pattern whose value is <= a (0 < a < width max). Truncating the
// "infinitely precise" encoding to n bits is exactly the floor, because
// positive patterns are value-ordered.
std::uint64_t floor_pattern(const mpq_class& a, int n) {
  long c = floor_log2(a);
  int direction, r;
  long c_field;
  if (c >= 0) {
    direction = 1;
    r = 0;
    while ((1L << (r + 1)) - 1 <= c) ++r;
    c_field = c - ((1L << r) - 1);
  } else {
    direction = 0;
    r = 0;
    while (-(1L << (r + 1)) + 1 > c) ++r;
    c_field = c + (1L << (r + 1)) - 1;
  }
  int regime = direction ? r : 7 - r;
  int np = n < 12 ? 12 : n;
  int p = np - 5 - r;

  // F = floor(a * 2^(p - c)) - 2^p
  mpq_class scaled = a * pow2(p - c);
  mpz_class whole = scaled.get_num() / scaled.get_den();
  std::uint64_t f_bits = mpz_to_u64(whole - (mpz_class(1) << p));

  std::uint64_t pattern = static_cast<std::uint64_t>(direction) << (np - 2);
  pattern |= static_cast<std::uint64_t>(regime) << (np - 5);
  pattern |= static_cast<std::uint64_t>(c_field) << p;
  pattern |= f_bits;
  if (n < 12) pattern >>= (12 - n);
  return pattern;
}

std::uint64_t round_positive(const mpq_class& a, int n) {
  std::uint64_t max_pat = width_mask(n - 1);
  mpq_class min_v = decode_positive(1, n);
  mpq_class max_v = decode_positive(max_pat, n);
  if (cmp(a, min_v) <= 0) return 1;
  if (cmp(a, max_v) >= 0) return max_pat;

  std::uint64_t lo = floor_pattern(a, n);
  std::uint64_t hi = lo + 1;
  mpq_class d_lo = a - decode_positive(lo, n);
  mpq_class d_hi = decode_positive(hi, n) - a;
  int c = cmp(d_lo, d_hi);
  if (c < 0) return lo;
  if (c > 0) return hi;
  return (lo & 1) == 0 ? lo : hi;
}

}  // namespace

TakumBits::TakumBits(int w, std::uint64_t b) : width(w), bits(b) {
  if (w < 2 || w > 64) throw UsageError("takum width must be in [2, 64]");
  if (b > width_mask(w)) throw UsageError("takum bits exceed the width");
}

bool TakumBits::is_nar() const { return bits == sign_bit(width); }

ExtendedReal takum_decode(TakumBits x) {
  if (x.is_zero()) return ExtendedReal::zero();
  if (x.is_nar()) return ExtendedReal::nar();
  bool negative = (x.bits & sign_bit(x.width)) != 0;
  std::uint64_t mag = negative ? twos_complement(x.bits, x.width) : x.bits;
  mpq_class v = decode_positive(mag, x.width);
  if (negative) v = -v;
  return ExtendedReal::from_rational(std::move(v));
}

DecodedTakum takum_fields(TakumBits x) {
  if (x.is_zero() || x.is_nar())
    throw UsageError("takum_fields: special pattern has no field breakdown");
  DecodedTakum d;
  bool negative = (x.bits & sign_bit(x.width)) != 0;
  d.sign = negative ? 1 : 0;
  std::uint64_t mag = negative ? twos_complement(x.bits, x.width) : x.bits;

  int ext = x.width < 12 ? 12 - x.width : 0;
  std::uint64_t v = mag << ext;
  int np = x.width + ext;
  d.direction = static_cast<int>((v >> (np - 2)) & 1);
  d.regime = static_cast<int>((v >> (np - 5)) & 7);
  d.r = d.direction ? d.regime : 7 - d.regime;
  d.p = np - 5 - d.r;
  d.characteristic_bits = (v >> d.p) & width_mask(d.r);
  d.fraction_bits = v & width_mask(d.p);
  d.characteristic =
      d.direction ? ((1L << d.r) - 1 + static_cast<long>(d.characteristic_bits))
                  : (-(1L << (d.r + 1)) + 1 + static_cast<long>(d.characteristic_bits));
  d.fraction = mpq_class(mpz_from_u64(d.fraction_bits)) * pow2(-d.p);
  return d;
}

TakumBits takum_encode(const ExtendedReal& v, int width) {
  if (width < 2 || width > 64) throw UsageError("takum width must be in [2, 64]");
  switch (v.kind()) {
    case ExtendedReal::Kind::Zero:
      return TakumBits(width, 0);
    case ExtendedReal::Kind::NaR:
    case ExtendedReal::Kind::PosInf:
    case ExtendedReal::Kind::NegInf:
      return TakumBits(width, sign_bit(width));
    case ExtendedReal::Kind::Finite:
      break;
  }
  const mpq_class& q = v.rational();
  bool negative = sgn(q) < 0;
  mpq_class a = negative ? mpq_class(-q) : q;
  std::uint64_t pattern = round_positive(a, width);
  if (negative) pattern = twos_complement(pattern, width);
  return TakumBits(width, pattern);
}

TakumBits takum_negate(TakumBits x) {
  return TakumBits(x.width, twos_complement(x.bits, x.width));
}

std::strong_ordering takum_compare(TakumBits a, TakumBits b) {
  if (a.width != b.width) throw UsageError("takum_compare: width mismatch");
  auto as_signed = [](TakumBits t) {
    int shift = 64 - t.width;
    return static_cast<std::int64_t>(t.bits << shift) >> shift;
  };
  return as_signed(a) <=> as_signed(b);
}

TakumRange takum_dynamic_range(int width) {
  if (width < 2 || width > 64) throw UsageError("takum width must be in [2, 64]");
  std::uint64_t max_pat = width_mask(width - 1);
  TakumRange range;
  range.max = ExtendedReal::from_rational(decode_positive(max_pat, width));
  if (width >= 12) {
    range.min_pos = ExtendedReal::from_rational(pow2(-255));
  } else {
    range.min_pos = ExtendedReal::from_rational(decode_positive(1, width));
  }
  return range;
}

}  // namespace takumlab
