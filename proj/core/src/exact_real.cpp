#include "takumlab/exact_real.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "takumlab/errors.hpp"

namespace takumlab {

ExtendedReal ExtendedReal::from_rational(mpq_class q) {
  if (sgn(q) == 0) return zero();
  ExtendedReal r(Kind::Finite);
  q.canonicalize();
  r.value_ = std::move(q);
  return r;
}

ExtendedReal ExtendedReal::from_double(double v) {
  if (std::isnan(v)) return nar();
  if (std::isinf(v)) return v > 0 ? pos_inf() : neg_inf();
  if (v == 0.0) return zero();
  return from_rational(mpq_class(v));
}

ExtendedReal ExtendedReal::dyadic(long value, long exp) {
  return from_rational(mpq_class(value) * pow2(exp));
}

const mpq_class& ExtendedReal::rational() const {
  static const mpq_class kZero(0);
  if (kind_ == Kind::Zero) return kZero;
  if (kind_ != Kind::Finite) throw UsageError("rational() on a non-finite value");
  return value_;
}

int ExtendedReal::sign() const {
  switch (kind_) {
    case Kind::Zero: return 0;
    case Kind::Finite: return sgn(value_);
    case Kind::PosInf: return 1;
    case Kind::NegInf: return -1;
    case Kind::NaR: throw UsageError("sign() on NaR");
  }
  return 0;
}

ExtendedReal ExtendedReal::negated() const {
  switch (kind_) {
    case Kind::Zero: return zero();
    case Kind::Finite: return from_rational(mpq_class(-value_));
    case Kind::PosInf: return neg_inf();
    case Kind::NegInf: return pos_inf();
    case Kind::NaR: return nar();
  }
  return nar();
}

ExtendedReal ExtendedReal::abs() const {
  if (kind_ == Kind::Finite && sgn(value_) < 0) return negated();
  if (kind_ == Kind::NegInf) return pos_inf();
  return *this;
}

double ExtendedReal::to_double() const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Finite: return value_.get_d();
    case Kind::PosInf: return HUGE_VAL;
    case Kind::NegInf: return -HUGE_VAL;
    case Kind::NaR: return std::nan("");
  }
  return 0.0;
}

bool ExtendedReal::operator==(const ExtendedReal& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ != Kind::Finite) return true;
  return value_ == other.value_;
}

std::strong_ordering ExtendedReal::order(const ExtendedReal& other) const {
  auto rank = [](const ExtendedReal& v) -> int {
    switch (v.kind_) {
      case Kind::NaR: return 0;
      case Kind::NegInf: return 1;
      case Kind::Zero:
      case Kind::Finite: return 2;
      case Kind::PosInf: return 3;
    }
    return 2;
  };
  int ra = rank(*this), rb = rank(other);
  if (ra != rb) return ra <=> rb;
  if (ra != 2) return std::strong_ordering::equal;
  const mpq_class& a = rational();
  const mpq_class& b = other.rational();
  int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string ExtendedReal::to_string() const {
  switch (kind_) {
    case Kind::Zero: return "0";
    case Kind::NaR: return "nar";
    case Kind::PosInf: return "inf";
    case Kind::NegInf: return "-inf";
    case Kind::Finite: return value_.get_str();
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, const ExtendedReal& v) {
  return os << v.to_string();
}

long floor_log2(const mpq_class& q) {
  if (sgn(q) <= 0) throw UsageError("floor_log2 requires a positive value");
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  // sizeinbase over-/undershoots by at most one bit; settle by comparison.
  while (cmp(q, pow2(e)) < 0) --e;
  while (cmp(q, pow2(e + 1)) >= 0) ++e;
  return e;
}

mpz_class mpz_from_u64(std::uint64_t v) {
  mpz_class hi(static_cast<unsigned long>(v >> 32));
  hi <<= 32;
  hi += static_cast<unsigned long>(v & 0xffffffffULL);
  return hi;
}

std::uint64_t mpz_to_u64(const mpz_class& v) {
  mpz_class lo = v & 0xffffffffL;
  mpz_class hi = (v >> 32) & 0xffffffffL;
  return (static_cast<std::uint64_t>(hi.get_ui()) << 32) |
         static_cast<std::uint64_t>(lo.get_ui());
}

mpq_class pow2(long e) {
  mpq_class r;
  if (e >= 0) {
    mpz_class n(1);
    n <<= static_cast<unsigned long>(e);
    r = mpq_class(n);
  } else {
    mpz_class d(1);
    d <<= static_cast<unsigned long>(-e);
    r = mpq_class(mpz_class(1), d);
  }
  return r;
}

bool ErrorValue::operator==(const ErrorValue& other) const {
  if (infinite != other.infinite) return false;
  return infinite || value == other.value;
}

std::strong_ordering ErrorValue::operator<=>(const ErrorValue& other) const {
  if (infinite && other.infinite) return std::strong_ordering::equal;
  if (infinite) return std::strong_ordering::greater;
  if (other.infinite) return std::strong_ordering::less;
  int c = cmp(value, other.value);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ErrorValue rel_2norm_error(std::span<const ExtendedReal> reference,
                           std::span<const ExtendedReal> converted) {
  if (reference.size() != converted.size())
    throw UsageError("rel_2norm_error: entry count mismatch");
  for (const ExtendedReal& c : converted)
    if (!c.is_finite()) return ErrorValue::inf();

  mpq_class num(0), den(0);
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const mpq_class& a = reference[i].rational();
    const mpq_class& b = converted[i].rational();
    mpq_class d = a - b;
    num += d * d;
    den += a * a;
  }
  if (sgn(den) == 0)
    throw DataError("rel_2norm_error: reference matrix has no nonzero entry");
  if (sgn(num) == 0) return ErrorValue::finite(mpq_class(0));
  return ErrorValue::finite(sqrt_approx(num / den));
}

mpq_class sqrt_approx(const mpq_class& q, int sig_digits) {
  if (sgn(q) < 0) throw UsageError("sqrt_approx of a negative value");
  if (sgn(q) == 0) return mpq_class(0);
  // Scale so the integer square root carries sig_digits+2 decimal digits,
  // then divide the scale back out.
  long e2 = floor_log2(q);
  // decimal magnitude of sqrt(q) ~ e2 * log10(2) / 2
  long mag = static_cast<long>(std::floor(static_cast<double>(e2) * 0.15051499783));
  long g = sig_digits + 2 - mag;
  if (g < 0) g = 0;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(g));
  mpz_class t = q.get_num() * scale * scale;
  mpz_class floored = t / q.get_den();
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), floored.get_mpz_t());
  mpq_class r(root, scale);
  r.canonicalize();
  return r;
}

namespace {

// Digits of round(q * 10^(sig-1-d10)) where d10 = floor(log10(|q|)),
// plus the decimal exponent; used by both fixed-width printers.
struct DecimalDigits {
  std::string digits;  // exactly sig digits
  long exp10;          // value ~= 0.digits * 10^(exp10+1)
  bool negative;
};

DecimalDigits decimal_digits(const mpq_class& q, int sig, bool half_even) {
  DecimalDigits out;
  out.negative = sgn(q) < 0;
  mpq_class a = out.negative ? mpq_class(-q) : q;

  // floor(log10(a)) by estimate-and-fix.
  long e2 = floor_log2(a);
  long d10 = static_cast<long>(std::floor(static_cast<double>(e2) * 0.30102999566));
  auto pow10q = [](long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e >= 0 ? e : -e));
    return e >= 0 ? mpq_class(p) : mpq_class(mpz_class(1), p);
  };
  while (cmp(a, pow10q(d10)) < 0) --d10;
  while (cmp(a, pow10q(d10 + 1)) >= 0) ++d10;

  // round(a * 10^(sig-1-d10)) with the requested tie rule.
  mpq_class scaled = a * pow10q(sig - 1 - d10);
  mpz_class n = scaled.get_num(), d = scaled.get_den();
  mpz_class quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  mpz_class twice = rem * 2;
  int c = cmp(twice, d);
  if (c > 0 || (c == 0 && (!half_even || mpz_odd_p(quot.get_mpz_t()))))
    quot += 1;
  std::string digits = quot.get_str();
  if (static_cast<int>(digits.size()) == sig + 1) {
    // rounding carried into a new leading digit (e.g. 9.99 -> 10.0)
    digits.pop_back();
    ++d10;
  }
  out.digits = digits;
  out.exp10 = d10;
  return out;
}

}  // namespace

std::string decimal17(const mpq_class& q) {
  if (sgn(q) == 0) return "0";
  DecimalDigits d = decimal_digits(q, 17, /*half_even=*/true);
  std::ostringstream os;
  if (d.negative) os << '-';
  os << d.digits[0] << '.' << d.digits.substr(1) << 'e';
  os << (d.exp10 < 0 ? '-' : '+');
  long ae = d.exp10 < 0 ? -d.exp10 : d.exp10;
  if (ae < 10) os << '0';
  os << ae;
  return os.str();
}

std::string decimal_sig(const mpq_class& q, int sig) {
  if (sgn(q) == 0) return "0";
  DecimalDigits d = decimal_digits(q, sig, /*half_even=*/false);
  std::string digits = d.digits;
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  std::ostringstream os;
  if (d.negative) os << '-';
  // %g-style: plain notation for moderate exponents
  if (d.exp10 >= 0 && d.exp10 < sig) {
    std::string whole = digits;
    while (static_cast<long>(whole.size()) <= d.exp10) whole += '0';
    os << whole.substr(0, d.exp10 + 1);
    if (whole.size() > static_cast<std::size_t>(d.exp10 + 1))
      os << '.' << whole.substr(d.exp10 + 1);
  } else if (d.exp10 < 0 && d.exp10 >= -4) {
    os << "0." << std::string(-d.exp10 - 1, '0') << digits;
  } else {
    os << digits[0];
    if (digits.size() > 1) os << '.' << digits.substr(1);
    os << 'e' << d.exp10;
  }
  return os.str();
}

std::string error_token(const ErrorValue& e) {
  if (e.infinite) return "inf";
  return decimal17(e.value);
}

}  // namespace takumlab
