#include "supertrace/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "supertrace/errors.hpp"

namespace supertrace {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(long num, long den) { return make_rational(Integer(num), Integer(den)); }

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational abs_of(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

Rational rational_pow(long base, long exp) {
  Integer p;
  const unsigned long e = static_cast<unsigned long>(exp < 0 ? -exp : exp);
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(base < 0 ? -base : base), e);
  if (base < 0 && (e % 2 == 1)) p = -p;
  if (exp >= 0) return Rational(p);
  if (p == 0) fail(ErrorCode::InvalidArgument, "zero base with negative exponent");
  return make_rational(Integer(1), p);
}

long ceil_log(const Rational& x, long base) {
  if (sgn(x) <= 0 || base < 2) fail(ErrorCode::InvalidArgument, "ceil_log domain");
  long m = 0;
  if (x <= 1) {
    while (rational_pow(base, m - 1) >= x) --m;
  } else {
    while (rational_pow(base, m) < x) ++m;
  }
  return m;
}

long floor_log(const Rational& x, long base) {
  if (sgn(x) <= 0 || base < 2) fail(ErrorCode::InvalidArgument, "floor_log domain");
  long m = 0;
  if (x >= 1) {
    while (rational_pow(base, m + 1) <= x) ++m;
  } else {
    while (rational_pow(base, m) > x) --m;
  }
  return m;
}

namespace {

bool parse_integer(std::string_view s, bool allow_sign, Integer& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) pos = 1;
  if (pos == s.size()) return false;
  for (std::size_t i = pos; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  std::string digits(s.substr(s[0] == '+' ? 1 : 0));
  return out.set_str(digits, 10) == 0;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  Integer num;
  Integer den(1);
  if (slash == std::string_view::npos) {
    if (!parse_integer(text, true, num)) {
      fail(ErrorCode::RationalSyntaxError, "cannot parse rational '" + std::string(text) + "'");
    }
  } else {
    if (!parse_integer(text.substr(0, slash), true, num) ||
        !parse_integer(text.substr(slash + 1), false, den)) {
      fail(ErrorCode::RationalSyntaxError, "cannot parse rational '" + std::string(text) + "'");
    }
    if (den == 0) {
      fail(ErrorCode::RationalSyntaxError, "zero denominator in '" + std::string(text) + "'");
    }
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string format_rational_full(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Complex unit_phase(const Rational& t) {
  // reduce to [0, 2)
  Rational r = t - 2 * Rational(floor_of(Rational(t / 2)));
  const Rational twice = 2 * r;
  if (twice.get_den() == 1) {
    switch (twice.get_num().get_si()) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, -1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, 1.0};
      default: break;
    }
  }
  const double angle = std::numbers::pi * r.get_d();
  return {std::cos(angle), -std::sin(angle)};
}

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) fail(ErrorCode::InvalidArgument, "integer out of range: " + z.get_str());
  return static_cast<std::int64_t>(z.get_si());
}

RationalPi::RationalPi(Rational coeff) : coeff_(std::move(coeff)) { coeff_.canonicalize(); }

RationalPi::RationalPi(long num, long den) : coeff_(make_rational(num, den)) {}

RationalPi RationalPi::parse(std::string_view text) { return RationalPi(parse_rational(text)); }

double RationalPi::radians() const { return std::numbers::pi * coeff_.get_d(); }

RationalPi& RationalPi::operator+=(const RationalPi& other) {
  coeff_ += other.coeff_;
  return *this;
}

RationalPi& RationalPi::operator-=(const RationalPi& other) {
  coeff_ -= other.coeff_;
  return *this;
}

Integer RationalPi::winding() const { return floor_of(Rational((coeff_ + 1) / 2)); }

RationalPi RationalPi::reduced() const {
  return RationalPi(Rational(coeff_ - 2 * Rational(winding())));
}

RationalPi two_pi_times(const Integer& k) { return RationalPi(Rational(2 * k)); }
RationalPi two_pi_times(long k) { return RationalPi(2 * k, 1); }

}  // namespace supertrace
