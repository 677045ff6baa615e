#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace takumlab {

/// Exact extended-real value: the lossless intermediate for every format
/// conversion and error accumulation in this project. Finite values are
/// arbitrary-precision rationals in lowest terms; zero is unsigned and
/// unique; NaR absorbs every non-real (NaN-like) outcome.
class ExtendedReal {
 public:
  enum class Kind : std::uint8_t { Zero, Finite, PosInf, NegInf, NaR };

  ExtendedReal() : kind_(Kind::Zero) {}

  static ExtendedReal zero() { return ExtendedReal(); }
  static ExtendedReal nar() { return ExtendedReal(Kind::NaR); }
  static ExtendedReal pos_inf() { return ExtendedReal(Kind::PosInf); }
  static ExtendedReal neg_inf() { return ExtendedReal(Kind::NegInf); }

  /// A zero rational collapses to the unique unsigned Zero.
  static ExtendedReal from_rational(mpq_class q);
  /// Exact conversion; NaN maps to NaR, infinities to PosInf/NegInf.
  static ExtendedReal from_double(double v);
  static ExtendedReal from_int(long v) { return from_rational(mpq_class(v)); }
  /// value * 2^exp, exact.
  static ExtendedReal dyadic(long value, long exp);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_finite() const { return kind_ == Kind::Zero || kind_ == Kind::Finite; }
  bool is_nar() const { return kind_ == Kind::NaR; }
  bool is_inf() const { return kind_ == Kind::PosInf || kind_ == Kind::NegInf; }

  /// Rational value; Zero yields 0. Only valid for finite values.
  const mpq_class& rational() const;

  /// -1, 0, +1 for finite values and infinities; NaR has no sign.
  int sign() const;

  ExtendedReal negated() const;
  ExtendedReal abs() const;

  /// Nearest double, for display purposes only.
  double to_double() const;

  bool operator==(const ExtendedReal& other) const;

  /// Total order with NaR below everything (mirrors the two's complement
  /// reading of the takum/posit bit patterns).
  std::strong_ordering order(const ExtendedReal& other) const;

  std::string to_string() const;

 private:
  explicit ExtendedReal(Kind kind) : kind_(kind) {}

  Kind kind_;
  mpq_class value_;  // meaningful only when kind_ == Finite
};

std::ostream& operator<<(std::ostream& os, const ExtendedReal& v);

/// floor(log2(q)) for q > 0: the unique e with 2^e <= q < 2^(e+1).
long floor_log2(const mpq_class& q);

mpz_class mpz_from_u64(std::uint64_t v);

/// Low 64 bits of a non-negative integer.
std::uint64_t mpz_to_u64(const mpz_class& v);

/// 2^e as an exact rational (e may be negative).
mpq_class pow2(long e);

/// Relative Euclidean-norm error of a converted entry list against its
/// exact reference. Any non-finite converted entry marks the whole matrix
/// as out of range and yields the infinity marker.
struct ErrorValue {
  bool infinite = false;
  /// sqrt(sum((a-b)^2)/sum(a^2)) evaluated to >= 30 significant decimal
  /// digits; exact zero stays exact.
  mpq_class value;

  static ErrorValue inf() { return ErrorValue{true, mpq_class(0)}; }
  static ErrorValue finite(mpq_class v) { return ErrorValue{false, std::move(v)}; }

  bool operator==(const ErrorValue& other) const;
  std::strong_ordering operator<=>(const ErrorValue& other) const;
};

/// Throws DataError when the reference has no nonzero entry.
ErrorValue rel_2norm_error(std::span<const ExtendedReal> reference,
                           std::span<const ExtendedReal> converted);

/// sqrt(q) for q >= 0 as a rational approximation carrying at least
/// `sig_digits` significant decimal digits.
mpq_class sqrt_approx(const mpq_class& q, int sig_digits = 32);

/// Fixed 17-significant-digit scientific decimal, deterministic across
/// platforms; the CSV number format used everywhere in this project.
std::string decimal17(const mpq_class& q);

/// Round to `sig` significant decimal digits (round half away from zero)
/// and print without trailing zeros, e.g. 1.175494351e-38.
std::string decimal_sig(const mpq_class& q, int sig);

/// CSV token for an error value: "inf" or decimal17.
std::string error_token(const ErrorValue& e);

}  // namespace takumlab
