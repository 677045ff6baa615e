#include "takumlab/posit.hpp"

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

mpq_class decode_positive(std::uint64_t bits, int n) {
  int body = n - 1;  // bits below the sign
  int pos = body - 1;
  int b0 = static_cast<int>((bits >> pos) & 1);
  int run = 0;
  while (pos - run >= 0 &&
         static_cast<int>((bits >> (pos - run)) & 1) == b0)
    ++run;
  long k = b0 ? run - 1 : -run;
  int consumed = run < body ? run + 1 : body;  // regime plus terminator

  int rest = body - consumed;
  long e = 0;
  if (rest >= 2) {
    e = static_cast<long>((bits >> (rest - 2)) & 3);
  } else if (rest == 1) {
    e = static_cast<long>((bits & 1) << 1);
  }
  int p = rest >= 2 ? rest - 2 : 0;
  std::uint64_t f_bits = p > 0 ? (bits & width_mask(p)) : 0;

  mpz_class mant = (mpz_class(1) << p) + mpz_from_u64(f_bits);
  return mpq_class(mant) * pow2(4 * k + e - p);
}

// First n bits of the exact encoding of a; that prefix is the largest
// pattern with value <= a because positive patterns are value-ordered.
std::uint64_t floor_pattern(const mpq_class& a, int n) {
  long etot = floor_log2(a);
  long k = etot >= 0 ? etot / 4 : -((-etot + 3) / 4);
  long e = etot - 4 * k;

  std::uint64_t acc = 0;
  int count = 0;
  auto emit = [&](int bit) {
    if (count < n) {
      acc = (acc << 1) | static_cast<std::uint64_t>(bit);
      ++count;
    }
  };

  emit(0);  // sign
  if (k >= 0) {
    for (long i = 0; i <= k; ++i) emit(1);
    emit(0);
  } else {
    for (long i = 0; i < -k; ++i) emit(0);
    emit(1);
  }
  emit(static_cast<int>((e >> 1) & 1));
  emit(static_cast<int>(e & 1));

  mpq_class f = a * pow2(-etot) - 1;
  while (count < n) {
    f *= 2;
    if (cmp(f, 1) >= 0) {
      emit(1);
      f -= 1;
    } else {
      emit(0);
    }
  }
  return acc;
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

PositBits::PositBits(int w, std::uint64_t b) : width(w), bits(b) {
  if (w < 2 || w > 64) throw UsageError("posit width must be in [2, 64]");
  if (b > width_mask(w)) throw UsageError("posit bits exceed the width");
}

bool PositBits::is_nar() const { return bits == sign_bit(width); }

ExtendedReal posit_decode(PositBits x) {
  if (x.is_zero()) return ExtendedReal::zero();
  if (x.is_nar()) return ExtendedReal::nar();
  bool negative = (x.bits & sign_bit(x.width)) != 0;
  std::uint64_t mag = negative ? twos_complement(x.bits, x.width) : x.bits;
  mpq_class v = decode_positive(mag, x.width);
  if (negative) v = -v;
  return ExtendedReal::from_rational(std::move(v));
}

PositBits posit_encode(const ExtendedReal& v, int width) {
  if (width < 2 || width > 64) throw UsageError("posit width must be in [2, 64]");
  switch (v.kind()) {
    case ExtendedReal::Kind::Zero:
      return PositBits(width, 0);
    case ExtendedReal::Kind::NaR:
    case ExtendedReal::Kind::PosInf:
    case ExtendedReal::Kind::NegInf:
      return PositBits(width, sign_bit(width));
    case ExtendedReal::Kind::Finite:
      break;
  }
  const mpq_class& q = v.rational();
  bool negative = sgn(q) < 0;
  mpq_class a = negative ? mpq_class(-q) : q;
  std::uint64_t pattern = round_positive(a, width);
  if (negative) pattern = twos_complement(pattern, width);
  return PositBits(width, pattern);
}

PositBits posit_negate(PositBits x) {
  return PositBits(x.width, twos_complement(x.bits, x.width));
}

std::strong_ordering posit_compare(PositBits a, PositBits b) {
  if (a.width != b.width) throw UsageError("posit_compare: width mismatch");
  auto as_signed = [](PositBits t) {
    int shift = 64 - t.width;
    return static_cast<std::int64_t>(t.bits << shift) >> shift;
  };
  return as_signed(a) <=> as_signed(b);
}

PositRange posit_dynamic_range(int width) {
  if (width < 2 || width > 64) throw UsageError("posit width must be in [2, 64]");
  PositRange range;
  range.min_pos = ExtendedReal::from_rational(pow2(-4L * (width - 2)));
  range.max = ExtendedReal::from_rational(pow2(4L * (width - 2)));
  return range;
}

}  // namespace takumlab
