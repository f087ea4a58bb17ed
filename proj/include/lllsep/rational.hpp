#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "lllsep/error.hpp"

namespace lllsep {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigRational make_rational(long num, unsigned long den = 1) {
  if (den == 0) throw InvalidArgument("zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

/// 2^{-k}, exactly.
inline BigRational inverse_power_of_two(unsigned long k) {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
  return BigRational(BigInt(1), den);
}

inline BigInt pow(const BigInt& base, unsigned long exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

// Powers of a canonical fraction stay canonical, so numerator and
// denominator are raised separately.
inline BigRational pow(const BigRational& base, unsigned long exponent) {
  BigRational out;
  mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(base.get_mpq_t()),
             exponent);
  mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(base.get_mpq_t()),
             exponent);
  return out;
}

/// Parses "a", "-a" or "a/b" with b > 0. Decimal fractions are not accepted.
inline BigRational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidArgument("empty rational literal");
  auto slash = s.find('/');
  auto valid_int = [](const std::string& digits, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !digits.empty() && (digits[0] == '-' || digits[0] == '+'))
      i = 1;
    if (i == digits.size()) return false;
    for (; i < digits.size(); ++i)
      if (digits[i] < '0' || digits[i] > '9') return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false))
    throw InvalidArgument("malformed rational literal '" + s + "'");
  if (num[0] == '+') num.erase(0, 1);
  BigRational q{BigInt(num), BigInt(den)};
  if (q.get_den() == 0) throw InvalidArgument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const BigRational& q) { return q.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

}  // namespace lllsep
