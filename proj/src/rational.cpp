#include "mindef/rational.hpp"

#include <cctype>
#include <cmath>

#include "mindef/error.hpp"

namespace mindef {

namespace {

[[noreturn]] void bad_number(std::string_view text) {
  throw ParseError("malformed number '" + std::string(text) + "'", 0, 0);
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational parse_decimal(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    body = body.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) bad_number(text);
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) bad_number(text);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)))
      bad_number(text);
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(body)) bad_number(text);
    digits = std::string(body);
  }
  Integer mantissa(digits, 10);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational value = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) bad_number(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '+' || num.front() == '-')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    Integer d(std::string{den}, 10);
    if (d == 0) bad_number(text);
    Rational value(Integer(std::string{num}, 10), d);
    value.canonicalize();
    return negative ? Rational(-value) : value;
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& raw) {
  Rational value = raw;
  value.canonicalize();
  const Integer& den = value.get_den();
  if (den == 1) return value.get_num().get_str();
  Integer rest = den;
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_ui_p(rest.get_mpz_t(), 2)) { rest /= 2; ++twos; }
  while (mpz_divisible_ui_p(rest.get_mpz_t(), 5)) { rest /= 5; ++fives; }
  if (rest != 1) return value.get_num().get_str() + "/" + den.get_str();

  unsigned places = std::max(twos, fives);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  Integer scaled = value.get_num() * scale / den;
  bool negative = scaled < 0;
  std::string digits = Integer(abs(scaled)).get_str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return negative ? "-" + digits : digits;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational rationalize(double value, const Integer& max_denominator) {
  if (!std::isfinite(value))
    throw Error(ErrorKind::Internal, "cannot rationalize a non-finite value");
  Rational exact(value);
  if (exact.get_den() <= max_denominator) return exact;
  bool negative = exact < 0;
  Rational target = abs(exact);

  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Integer n = target.get_num(), d = target.get_den();
  while (true) {
    Integer a = n / d;  // both non-negative, so truncation is floor
    Integer q2 = q0 + a * q1;
    if (q2 > max_denominator) break;
    Integer p2 = p0 + a * p1;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Integer r = n - a * d;
    n = d;
    d = r;
    if (d == 0) break;
  }
  Integer k = (max_denominator - q0) / q1;
  Rational bound1(p0 + k * p1, q0 + k * q1);
  Rational bound2(p1, q1);
  bound1.canonicalize();
  bound2.canonicalize();
  Rational best = abs(bound2 - target) <= abs(bound1 - target) ? bound2 : bound1;
  return negative ? Rational(-best) : best;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  result = Rational(num, den);
  result.canonicalize();
  return result;
}

std::vector<double> to_doubles(std::span<const Rational> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.get_d());
  return out;
}

}  // namespace mindef
