#include "mhsos/measures.hpp"

#include <stdexcept>

namespace mhsos {

Rational sphere_moment(int n, std::span<const int> alpha) {
  if (n < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  mpz_class num = 1;
  int total = 0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("negative exponent");
    if (a % 2 != 0) return 0;
    for (int t = a - 1; t > 1; t -= 2) num *= t;
    total += a;
  }
  mpz_class den = 1;
  for (int t = 0; t < total / 2; ++t) den *= n + 2 * t;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational product_moment(const Shape& shape, const MultiIndex& m) {
  if (m.size() != shape.num_vars()) throw std::invalid_argument("exponent vector has wrong length");
  Rational r = 1;
  for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
    std::span<const int> part(m.data() + shape.offset(b), shape.block(b).dim);
    r *= sphere_moment(shape.block(b).dim, part);
    if (r == 0) break;
  }
  return r;
}

Rational usual_ip(const Polynomial& f, const Polynomial& g) {
  if (!(f.shape() == g.shape())) throw std::invalid_argument("usual_ip: shapes differ");
  Rational sum = 0;
  MultiIndex m(f.shape().num_vars());
  for (const auto& [a, ca] : f.terms()) {
    for (const auto& [b, cb] : g.terms()) {
      for (std::size_t v = 0; v < m.size(); ++v) m[v] = a[v] + b[v];
      Rational mom = product_moment(f.shape(), m);
      if (mom != 0) sum += ca * cb * mom;
    }
  }
  return sum;
}

Rational diff_ip(const Polynomial& f, const Polynomial& g) {
  if (!(f.shape() == g.shape())) throw std::invalid_argument("diff_ip: shapes differ");
  const Shape& s = f.shape();
  Rational block_factorials = 1;
  for (const auto& b : s.blocks()) block_factorials *= factorial(static_cast<unsigned>(b.degree));
  Rational sum = 0;
  for (const auto& [a, ca] : f.terms()) {
    Rational cb = g.coefficient(a);
    if (cb == 0) continue;
    // prod_i multinomial(d_i; alpha restricted to block i)
    Rational multinomials = 1;
    for (std::size_t b = 0; b < s.num_blocks(); ++b) {
      Rational mult = factorial(static_cast<unsigned>(s.block(b).degree));
      for (std::size_t v = s.offset(b); v < s.offset(b + 1); ++v) mult /= factorial(static_cast<unsigned>(a[v]));
      multinomials *= mult;
    }
    sum += ca * cb / multinomials;
  }
  return block_factorials * sum;
}

Rational constant_A(const Shape& shape) {
  Rational a = 1;
  for (const auto& b : shape.blocks()) {
    std::vector<int> alpha(b.dim, 0);
    alpha.back() = b.degree;
    a *= sphere_moment(b.dim, alpha);
  }
  if (a == 0) throw std::domain_error("constant A vanishes for odd degrees");
  return a;
}

Rational constant_C(const Shape& shape) {
  Rational c = 1;
  for (const auto& b : shape.blocks()) c *= factorial(static_cast<unsigned>(b.degree));
  return c / constant_A(shape);
}

const char* to_string(InnerProduct which) {
  return which == InnerProduct::usual ? "usual" : "differential";
}

GramMatrix gram(std::vector<Polynomial> basis, InnerProduct which) {
  if (basis.empty()) throw std::invalid_argument("gram: empty basis");
  Shape shape = basis.front().shape();
  for (const auto& p : basis) {
    if (!(p.shape() == shape)) throw std::invalid_argument("gram: basis elements have different shapes");
  }
  const std::size_t n = basis.size();
  RationalMatrix e(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      e(i, j) = which == InnerProduct::usual ? usual_ip(basis[i], basis[j]) : diff_ip(basis[i], basis[j]);
      e(j, i) = e(i, j);
    }
  }
  return GramMatrix{std::move(shape), std::move(basis), std::move(e), which};
}

RationalMatrix monomial_gram(const Shape& shape) {
  auto basis = monomial_basis(shape);
  const std::size_t n = basis.size();
  RationalMatrix g(n, n);
  MultiIndex m(shape.num_vars());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t v = 0; v < m.size(); ++v) m[v] = basis[i][v] + basis[j][v];
      g(i, j) = product_moment(shape, m);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

}  // namespace mhsos
