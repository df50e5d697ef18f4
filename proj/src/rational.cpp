#include "pidkit/rational.hpp"

#include <cctype>
#include <cmath>

#include "pidkit/error.hpp"

namespace pidkit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InputError("malformed number '" + std::string(whole) + "'");
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

mpz_class pow10(long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw InputError("empty probability string");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const mpz_class num = parse_integer(trim(s.substr(0, slash)), s);
    const mpz_class den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw InputError("zero denominator in '" + std::string(s) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string_view rest = s;
  bool negative = false;
  if (rest.front() == '+' || rest.front() == '-') {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
    const mpz_class ez = parse_integer(rest.substr(e + 1), s);
    if (!ez.fits_slong_p() || std::abs(ez.get_si()) > 10000) {
      throw InputError("exponent out of range in '" + std::string(s) + "'");
    }
    exponent = ez.get_si();
    rest = rest.substr(0, e);
  }
  std::string digits;
  if (const auto dot = rest.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = rest.substr(0, dot);
    const std::string_view frac_part = rest.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw InputError("malformed number '" + std::string(s) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(rest)) throw InputError("malformed number '" + std::string(s) + "'");
    digits = std::string(rest);
  }

  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  Rational q;
  if (exponent >= 0) {
    q = Rational(mantissa * pow10(exponent));
  } else {
    q = Rational(mantissa, pow10(-exponent));
  }
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

double log2_of(const Rational& q) {
  if (sgn(q) <= 0) throw Error("log2 of non-positive value " + to_string(q));
  auto log2_z = [](const mpz_class& z) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log2(mant) + static_cast<double>(exp);
  };
  return log2_z(q.get_num()) - log2_z(q.get_den());
}

}  // namespace pidkit
