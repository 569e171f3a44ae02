#include "mhsos/poly_text.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace mhsos {

namespace {

class Scanner {
 public:
  explicit Scanner(std::string_view s) : s_(s) {}

  void skip_space() {
    while (pos_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '*')) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_space();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char take() { return s_[pos_++]; }
  std::string_view take_while(auto pred) {
    std::size_t start = pos_;
    while (pos_ < s_.size() && pred(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial text: " + what + " at offset " + std::to_string(pos_));
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

Polynomial parse_polynomial(std::string_view text, const Shape& shape) {
  Scanner sc(text);
  Polynomial::TermMap terms;
  const std::size_t n = shape.num_vars();
  bool first = true;
  while (!sc.done()) {
    int sign = 1;
    bool saw_op = false;
    while (sc.peek() == '+' || sc.peek() == '-') {
      if (sc.take() == '-') sign = -sign;
      saw_op = true;
    }
    if (!first && !saw_op) sc.fail("expected '+' or '-' between terms");
    first = false;

    Rational coeff = sign;
    MultiIndex m(n, 0);
    bool any_factor = false;
    while (!sc.done() && sc.peek() != '+' && sc.peek() != '-') {
      char c = sc.peek();
      if (is_digit(c) || c == '.') {
        auto num = sc.take_while([](char ch) { return is_digit(ch) || ch == '/' || ch == '.'; });
        coeff *= parse_rational(num);
      } else if (c == 'x') {
        sc.take();
        auto idx = sc.take_while(is_digit);
        if (idx.empty()) sc.fail("variable index missing after 'x'");
        std::size_t var = std::stoul(std::string(idx));
        if (var < 1 || var > n) sc.fail("variable x" + std::string(idx) + " outside x1..x" + std::to_string(n));
        int exponent = 1;
        if (sc.peek() == '^') {
          sc.take();
          sc.skip_space();
          auto e = sc.take_while(is_digit);
          if (e.empty()) sc.fail("exponent missing after '^'");
          exponent = std::stoi(std::string(e));
        }
        m[var - 1] += exponent;
      } else {
        sc.fail(std::string("unexpected character '") + c + "'");
      }
      any_factor = true;
    }
    if (!any_factor) sc.fail("empty term");
    if (coeff != 0) terms[m] += coeff;  // "0" is the zero form of every shape
  }
  return Polynomial(shape, std::move(terms));
}

std::string format_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool constant = total_degree(m) == 0;
    bool wrote = false;
    if (mag != 1 || constant) {
      os << to_string(mag);
      wrote = true;
    }
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (m[v] == 0) continue;
      if (wrote) os << ' ';
      os << 'x' << (v + 1);
      if (m[v] > 1) os << '^' << m[v];
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace mhsos
