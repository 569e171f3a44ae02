#include "mhsos/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace mhsos {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!is_integer_text(s)) {
    throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  }
  if (s[0] == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    std::string digits(whole);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    if (frac.empty() || !is_integer_text(frac) || frac[0] == '-' || frac[0] == '+') {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class int_part = parse_integer(digits);
    mpz_class frac_part(std::string(frac), 10);
    mpz_class num = abs(int_part) * scale + frac_part;
    if (negative) num = -num;
    Rational r(num, scale);
    r.canonicalize();
    return r;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) { return value.get_str(); }

double to_double(const Rational& value) { return value.get_d(); }

Rational from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value has no rational form");
  Rational r;
  mpq_set_d(r.get_mpq_t(), value);
  return r;
}

Rational factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

}  // namespace mhsos
