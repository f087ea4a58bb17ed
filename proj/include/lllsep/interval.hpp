#pragma once

// Outward-rounded interval arithmetic on MPFR. Every operation returns an
// enclosure of the exact real result: lower endpoints are rounded toward
// -inf and upper endpoints toward +inf.

#include <mpfr.h>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

#include "lllsep/error.hpp"
#include "lllsep/rational.hpp"

namespace lllsep {

inline constexpr mpfr_prec_t kDefaultPrecision = 256;

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision = kDefaultPrecision) {
    mpfr_init2(value_, precision);
    mpfr_set_zero(value_, 1);
  }
  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_swap(value_, other.value_);
  }
  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      mpfr_set_prec(value_, mpfr_get_prec(other.value_));
      mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(value_); }

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  /// Decimal rendering with `digits` significant digits.
  std::string to_string(int digits = 30) const {
    if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
    if (mpfr_nan_p(value_)) return "nan";
    char* raw = nullptr;
    mpfr_asprintf(&raw, "%.*Rg", digits, value_);
    std::string out(raw);
    mpfr_free_str(raw);
    return out;
  }

  friend bool operator<(const BigFloat& a, const BigFloat& b) {
    return mpfr_less_p(a.value_, b.value_) != 0;
  }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) {
    return mpfr_lessequal_p(a.value_, b.value_) != 0;
  }
  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }

 private:
  mpfr_t value_;
};

class Interval {
 public:
  explicit Interval(mpfr_prec_t precision = kDefaultPrecision)
      : lo_(precision), hi_(precision) {}

  static Interval exact(long value, mpfr_prec_t precision) {
    Interval out(precision);
    mpfr_set_si(out.lo_.get(), value, MPFR_RNDD);
    mpfr_set_si(out.hi_.get(), value, MPFR_RNDU);
    return out;
  }

  static Interval from_rational(const BigRational& q, mpfr_prec_t precision) {
    Interval out(precision);
    mpfr_set_q(out.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(out.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
    return out;
  }

  static Interval from_integer(const BigInt& z, mpfr_prec_t precision) {
    Interval out(precision);
    mpfr_set_z(out.lo_.get(), z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(out.hi_.get(), z.get_mpz_t(), MPFR_RNDU);
    return out;
  }

  static Interval point(const BigFloat& x) {
    Interval out(x.precision());
    mpfr_set(out.lo_.get(), x.get(), MPFR_RNDD);
    mpfr_set(out.hi_.get(), x.get(), MPFR_RNDU);
    return out;
  }

  static Interval hull(const BigFloat& a, const BigFloat& b) {
    Interval out(std::max(a.precision(), b.precision()));
    mpfr_min(out.lo_.get(), a.get(), b.get(), MPFR_RNDD);
    mpfr_max(out.hi_.get(), a.get(), b.get(), MPFR_RNDU);
    return out;
  }

  /// Euler's number.
  static Interval e(mpfr_prec_t precision) {
    Interval out(precision);
    BigFloat one(precision);
    mpfr_set_ui(one.get(), 1, MPFR_RNDN);
    mpfr_exp(out.lo_.get(), one.get(), MPFR_RNDD);
    mpfr_exp(out.hi_.get(), one.get(), MPFR_RNDU);
    return out;
  }

  const BigFloat& lo() const { return lo_; }
  const BigFloat& hi() const { return hi_; }
  mpfr_prec_t precision() const { return lo_.precision(); }

  BigFloat mid() const {
    BigFloat out(precision());
    mpfr_add(out.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(out.get(), out.get(), 1, MPFR_RNDN);
    return out;
  }

  BigFloat width() const {
    BigFloat out(precision());
    mpfr_sub(out.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return out;
  }

  bool contains_zero() const {
    return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
  }
  bool certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_.get()) < 0; }

  bool certainly_less(const Interval& other) const { return hi_ < other.lo_; }
  bool certainly_less_equal(const Interval& other) const {
    return hi_ <= other.lo_;
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval out(common(a, b));
    mpfr_add(out.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(out.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return out;
  }

  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval out(common(a, b));
    mpfr_sub(out.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(out.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return out;
  }

  friend Interval operator-(const Interval& a) {
    Interval out(a.precision());
    mpfr_neg(out.lo_.get(), a.hi_.get(), MPFR_RNDD);
    mpfr_neg(out.hi_.get(), a.lo_.get(), MPFR_RNDU);
    return out;
  }

  friend Interval operator*(const Interval& a, const Interval& b) {
    Interval out(common(a, b));
    BigFloat t(out.precision());
    bool first = true;
    for (const BigFloat* x : {&a.lo_, &a.hi_}) {
      for (const BigFloat* y : {&b.lo_, &b.hi_}) {
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
        if (first || t < out.lo_) mpfr_set(out.lo_.get(), t.get(), MPFR_RNDD);
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
        if (first || out.hi_ < t) mpfr_set(out.hi_.get(), t.get(), MPFR_RNDU);
        first = false;
      }
    }
    return out;
  }

  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero())
      throw DomainError("interval division by an interval containing zero");
    Interval out(common(a, b));
    BigFloat t(out.precision());
    bool first = true;
    for (const BigFloat* x : {&a.lo_, &a.hi_}) {
      for (const BigFloat* y : {&b.lo_, &b.hi_}) {
        mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDD);
        if (first || t < out.lo_) mpfr_set(out.lo_.get(), t.get(), MPFR_RNDD);
        mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDU);
        if (first || out.hi_ < t) mpfr_set(out.hi_.get(), t.get(), MPFR_RNDU);
        first = false;
      }
    }
    return out;
  }

  /// Natural logarithm; the argument must be certainly positive.
  friend Interval log(const Interval& a) {
    if (!a.certainly_positive())
      throw DomainError("logarithm of an interval not certainly positive");
    Interval out(a.precision());
    mpfr_log(out.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_log(out.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return out;
  }

  friend Interval exp(const Interval& a) {
    Interval out(a.precision());
    mpfr_exp(out.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_exp(out.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return out;
  }

  /// Integer power of a nonnegative interval.
  friend Interval pow(const Interval& a, unsigned long n) {
    if (mpfr_sgn(a.lo_.get()) < 0)
      throw DomainError("integer power of an interval with negative part");
    Interval out(a.precision());
    mpfr_pow_ui(out.lo_.get(), a.lo_.get(), n, MPFR_RNDD);
    mpfr_pow_ui(out.hi_.get(), a.hi_.get(), n, MPFR_RNDU);
    return out;
  }

  /// n-th root of a nonnegative interval.
  friend Interval root(const Interval& a, unsigned long n) {
    if (mpfr_sgn(a.lo_.get()) < 0)
      throw DomainError("root of an interval with negative part");
    Interval out(a.precision());
    mpfr_rootn_ui(out.lo_.get(), a.lo_.get(), n, MPFR_RNDD);
    mpfr_rootn_ui(out.hi_.get(), a.hi_.get(), n, MPFR_RNDU);
    return out;
  }

  std::string to_string(int digits = 30) const {
    return "[" + lo_.to_string(digits) + ", " + hi_.to_string(digits) + "]";
  }

 private:
  static mpfr_prec_t common(const Interval& a, const Interval& b) {
    return std::max(a.precision(), b.precision());
  }

  BigFloat lo_;
  BigFloat hi_;
};

/// floor(x) for every x in the interval, or nothing when the interval
/// straddles an integer boundary.
inline std::optional<BigInt> certified_floor(const Interval& x) {
  if (mpfr_inf_p(x.lo().get()) || mpfr_inf_p(x.hi().get()) ||
      mpfr_nan_p(x.lo().get()) || mpfr_nan_p(x.hi().get()))
    return std::nullopt;
  BigInt lo, hi;
  mpfr_get_z(lo.get_mpz_t(), x.lo().get(), MPFR_RNDD);
  mpfr_get_z(hi.get_mpz_t(), x.hi().get(), MPFR_RNDD);
  if (lo != hi) return std::nullopt;
  return lo;
}

inline BigInt require_certified_floor(const Interval& x,
                                      const std::string& what) {
  auto floor = certified_floor(x);
  if (!floor)
    throw CertificationFailure("floor of " + what + " not certified: " +
                               x.to_string());
  return *floor;
}

/// Exact conversion of an MPFR value to a rational.
inline BigRational to_rational(const BigFloat& x) {
  BigRational q;
  mpfr_get_q(q.get_mpq_t(), x.get());
  return q;
}

}  // namespace lllsep
