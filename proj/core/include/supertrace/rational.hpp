#pragma once

#include <gmpxx.h>

#include <compare>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace supertrace {

using Integer = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<double>;

Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den = 1);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);
Rational abs_of(const Rational& q);

// Integer power base^exp for any sign of exp (base must be nonzero when exp < 0).
Rational rational_pow(long base, long exp);

// Smallest m with base^m >= x, for x > 0 and base >= 2.
long ceil_log(const Rational& x, long base);
// Largest m with base^m <= x, for x > 0 and base >= 2.
long floor_log(const Rational& x, long base);

// "p/q" grammar with an optional sign on p; "p" alone means p/1.
Rational parse_rational(std::string_view text);
// Canonical text: "p" when the denominator is 1, "p/q" otherwise.
std::string format_rational(const Rational& q);
// Always "p/q", including "p/1".
std::string format_rational_full(const Rational& q);

// e^{-i*pi*t}; exact at multiples of 1/2.
Complex unit_phase(const Rational& t);

std::int64_t to_int64(const Integer& z);

// A frequency (q * pi radians) stored as the exact rational coefficient q.
class RationalPi {
 public:
  RationalPi() = default;
  explicit RationalPi(Rational coeff);
  RationalPi(long num, long den);
  static RationalPi from_int(long k) { return RationalPi(k, 1); }

  static RationalPi parse(std::string_view text);

  const Rational& coeff() const { return coeff_; }
  double radians() const;
  std::string str() const { return format_rational(coeff_); }

  RationalPi operator-() const { return RationalPi(-coeff_); }
  RationalPi& operator+=(const RationalPi& other);
  RationalPi& operator-=(const RationalPi& other);

  friend RationalPi operator+(RationalPi a, const RationalPi& b) { return a += b; }
  friend RationalPi operator-(RationalPi a, const RationalPi& b) { return a -= b; }
  friend RationalPi operator*(const RationalPi& a, const Rational& c) {
    return RationalPi(Rational(a.coeff_ * c));
  }
  friend RationalPi operator*(const Rational& c, const RationalPi& a) { return a * c; }
  friend RationalPi operator/(const RationalPi& a, const Rational& c) {
    return RationalPi(Rational(a.coeff_ / c));
  }

  friend bool operator==(const RationalPi& a, const RationalPi& b) { return a.coeff_ == b.coeff_; }
  friend std::strong_ordering operator<=>(const RationalPi& a, const RationalPi& b) {
    const int c = cmp(a.coeff_, b.coeff_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  RationalPi abs() const { return RationalPi(abs_of(coeff_)); }
  bool is_zero() const { return sgn(coeff_) == 0; }

  // Representative of this angle modulo 2*pi in [-pi, pi).
  RationalPi reduced() const;
  // Integer s with reduced() == *this - 2*s*pi.
  Integer winding() const;

 private:
  Rational coeff_{0};
};

// 2*k*pi
RationalPi two_pi_times(const Integer& k);
RationalPi two_pi_times(long k);

}  // namespace supertrace
