#include "takumlab/minifloat.hpp"

#include "takumlab/errors.hpp"

namespace takumlab {

namespace {

std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

void validate(const MiniFloatSpec& s) {
  if (s.exp_bits < 2 || s.frac_bits < 0 || s.storage_bits() > 64)
    throw UsageError("invalid minifloat layout: " + s.name);
  if (s.nan_policy == NanPolicy::IeeeAllPayloads && (!s.has_inf || s.frac_bits < 1))
    throw UsageError("IEEE NaN policy needs an infinity and a fraction bit");
}

// Value of a positive pattern index (exponent and fraction fields only),
// valid through the virtual slot one past the largest finite pattern.
mpq_class slot_value(const MiniFloatSpec& s, std::uint64_t idx) {
  std::uint64_t E = idx >> s.frac_bits;
  std::uint64_t F = idx & low_mask(s.frac_bits);
  if (E == 0)
    return mpq_class(mpz_from_u64(F)) * pow2(1 - s.bias - s.frac_bits);
  mpz_class mant = (mpz_class(1) << s.frac_bits) + mpz_from_u64(F);
  return mpq_class(mant) * pow2(static_cast<long>(E) - s.bias - s.frac_bits);
}

// Index of the largest finite positive pattern.
std::uint64_t max_finite_index(const MiniFloatSpec& s) {
  switch (s.nan_policy) {
    case NanPolicy::IeeeAllPayloads:
      return ((static_cast<std::uint64_t>(s.emax_field()) - 1) << s.frac_bits) |
             low_mask(s.frac_bits);
    case NanPolicy::SinglePatternE4M3:
      return (static_cast<std::uint64_t>(s.emax_field()) << s.frac_bits) |
             (low_mask(s.frac_bits) - 1);
    case NanPolicy::None:
      return (static_cast<std::uint64_t>(s.emax_field()) << s.frac_bits) |
             low_mask(s.frac_bits);
  }
  return 0;
}

std::uint64_t nan_pattern(const MiniFloatSpec& s, bool negative) {
  std::uint64_t sign = negative ? (std::uint64_t{1} << (s.exp_bits + s.frac_bits)) : 0;
  switch (s.nan_policy) {
    case NanPolicy::IeeeAllPayloads:
      return sign | (static_cast<std::uint64_t>(s.emax_field()) << s.frac_bits) |
             (std::uint64_t{1} << (s.frac_bits - 1));
    case NanPolicy::SinglePatternE4M3:
      return sign | (static_cast<std::uint64_t>(s.emax_field()) << s.frac_bits) |
             low_mask(s.frac_bits);
    case NanPolicy::None:
      return sign | max_finite_index(s);  // no NaN exists; saturate
  }
  return 0;
}

std::uint64_t overflow_pattern(const MiniFloatSpec& s, bool negative) {
  std::uint64_t sign = negative ? (std::uint64_t{1} << (s.exp_bits + s.frac_bits)) : 0;
  if (s.has_inf)
    return sign | (static_cast<std::uint64_t>(s.emax_field()) << s.frac_bits);
  return nan_pattern(s, negative);
}

}  // namespace

MiniFloatSpec MiniFloatSpec::float16() {
  return {5, 10, 15, true, NanPolicy::IeeeAllPayloads, "float16"};
}
MiniFloatSpec MiniFloatSpec::bfloat16() {
  return {8, 7, 127, true, NanPolicy::IeeeAllPayloads, "bfloat16"};
}
MiniFloatSpec MiniFloatSpec::float32() {
  return {8, 23, 127, true, NanPolicy::IeeeAllPayloads, "float32"};
}
MiniFloatSpec MiniFloatSpec::float64() {
  return {11, 52, 1023, true, NanPolicy::IeeeAllPayloads, "float64"};
}
MiniFloatSpec MiniFloatSpec::e5m2() {
  return {5, 2, 15, true, NanPolicy::IeeeAllPayloads, "e5m2"};
}
MiniFloatSpec MiniFloatSpec::e4m3() {
  return {4, 3, 7, false, NanPolicy::SinglePatternE4M3, "e4m3"};
}
MiniFloatSpec MiniFloatSpec::e4m3_ieee() {
  return {4, 3, 7, true, NanPolicy::IeeeAllPayloads, "e4m3-ieee"};
}
MiniFloatSpec MiniFloatSpec::ieee_of_width(int bits) {
  switch (bits) {
    case 8: return e4m3_ieee();
    case 16: return float16();
    case 32: return float32();
    case 64: return float64();
  }
  throw UsageError("no IEEE-style layout for width " + std::to_string(bits));
}

MiniFloatBits::MiniFloatBits(MiniFloatSpec s, std::uint64_t b)
    : spec(std::move(s)), bits(b) {
  validate(spec);
  if (spec.storage_bits() < 64 && b > low_mask(spec.storage_bits()))
    throw UsageError("minifloat bits exceed the storage width");
}

ExtendedReal mf_decode(const MiniFloatBits& x) {
  const MiniFloatSpec& s = x.spec;
  bool negative = (x.bits >> (s.exp_bits + s.frac_bits)) & 1;
  std::uint64_t E = (x.bits >> s.frac_bits) & low_mask(s.exp_bits);
  std::uint64_t F = x.bits & low_mask(s.frac_bits);

  if (E == static_cast<std::uint64_t>(s.emax_field())) {
    switch (s.nan_policy) {
      case NanPolicy::IeeeAllPayloads:
        if (F == 0) return negative ? ExtendedReal::neg_inf() : ExtendedReal::pos_inf();
        return ExtendedReal::nar();
      case NanPolicy::SinglePatternE4M3:
        if (F == low_mask(s.frac_bits)) return ExtendedReal::nar();
        break;
      case NanPolicy::None:
        break;
    }
  }
  std::uint64_t idx = (E << s.frac_bits) | F;
  if (idx == 0) return ExtendedReal::zero();
  mpq_class v = slot_value(s, idx);
  if (negative) v = -v;
  return ExtendedReal::from_rational(std::move(v));
}

MiniFloatBits mf_encode(const ExtendedReal& v, const MiniFloatSpec& spec) {
  validate(spec);
  switch (v.kind()) {
    case ExtendedReal::Kind::Zero:
      return MiniFloatBits(spec, 0);
    case ExtendedReal::Kind::NaR:
      return MiniFloatBits(spec, nan_pattern(spec, false));
    case ExtendedReal::Kind::PosInf:
      return MiniFloatBits(spec, overflow_pattern(spec, false));
    case ExtendedReal::Kind::NegInf:
      return MiniFloatBits(spec, overflow_pattern(spec, true));
    case ExtendedReal::Kind::Finite:
      break;
  }

  const mpq_class& q = v.rational();
  bool negative = sgn(q) < 0;
  mpq_class a = negative ? mpq_class(-q) : q;
  std::uint64_t sign = negative ? (std::uint64_t{1} << (spec.exp_bits + spec.frac_bits)) : 0;

  std::uint64_t virt = max_finite_index(spec) + 1;
  mpq_class virt_value = slot_value(spec, virt);
  if (cmp(a, virt_value) >= 0)
    return MiniFloatBits(spec, overflow_pattern(spec, negative));

  // Floor slot on the positive pattern line (0 stands for zero).
  std::uint64_t lo;
  long min_norm_e = 1 - spec.bias;
  if (cmp(a, pow2(min_norm_e)) < 0) {
    mpq_class scaled = a * pow2(spec.bias - 1 + spec.frac_bits);
    lo = mpz_to_u64(scaled.get_num() / scaled.get_den());
  } else {
    long e = floor_log2(a);
    std::uint64_t E = static_cast<std::uint64_t>(e + spec.bias);
    mpq_class scaled = a * pow2(spec.frac_bits - e);
    mpz_class f = scaled.get_num() / scaled.get_den() - (mpz_class(1) << spec.frac_bits);
    lo = (E << spec.frac_bits) | mpz_to_u64(f);
  }

  std::uint64_t hi = lo + 1;
  mpq_class d_lo = a - slot_value(spec, lo);
  mpq_class d_hi = slot_value(spec, hi) - a;
  int c = cmp(d_lo, d_hi);
  std::uint64_t chosen = c < 0 ? lo : c > 0 ? hi : ((lo & 1) == 0 ? lo : hi);
  if (chosen == virt)
    return MiniFloatBits(spec, overflow_pattern(spec, negative));
  return MiniFloatBits(spec, sign | chosen);
}

MiniFloatRange mf_dynamic_range(const MiniFloatSpec& spec) {
  validate(spec);
  MiniFloatRange r;
  r.min_subnormal =
      ExtendedReal::from_rational(pow2(1 - spec.bias - spec.frac_bits));
  r.min_normal = ExtendedReal::from_rational(pow2(1 - spec.bias));
  r.max_finite =
      ExtendedReal::from_rational(slot_value(spec, max_finite_index(spec)));
  return r;
}

bool mf_is_nan(const MiniFloatBits& x) {
  return mf_decode(x).is_nar();
}

bool mf_is_inf(const MiniFloatBits& x) {
  return mf_decode(x).is_inf();
}

}  // namespace takumlab
