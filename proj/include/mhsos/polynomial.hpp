#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "mhsos/rational.hpp"
#include "mhsos/shape.hpp"

namespace mhsos {

/// Exponent vector over all n variables, blocks concatenated in order.
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& m);

/// Graded-lexicographic order: higher total degree first, then lexicographically larger
/// exponent vectors first (x1 is the most significant variable).
struct MonomialOrder {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// All monomials of P_{N,K} in graded-lexicographic order; length dim_P.
std::vector<MultiIndex> monomial_basis(const Shape& shape);

/// Monomial basis plus reverse lookup.
class MonomialBasis {
 public:
  explicit MonomialBasis(const Shape& shape);
  const Shape& shape() const { return shape_; }
  std::size_t size() const { return monomials_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return monomials_[i]; }
  const std::vector<MultiIndex>& monomials() const { return monomials_; }
  /// Index of m, or size() when m is not a monomial of this shape.
  std::size_t index_of(const MultiIndex& m) const;

 private:
  Shape shape_;
  std::vector<MultiIndex> monomials_;
  std::map<MultiIndex, std::size_t> index_;
};

/// Sparse exact-rational form of type (N, K). Zero coefficients are never stored, so equal
/// polynomials have identical term maps.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational, MonomialOrder>;

  explicit Polynomial(Shape shape);
  Polynomial(Shape shape, TermMap terms);

  static Polynomial monomial(const Shape& shape, MultiIndex exponents, Rational coeff = 1);
  /// Constant polynomial; every block degree of `shape` must be 0.
  static Polynomial constant(const Shape& shape, Rational value);
  /// Coefficients listed in monomial_basis(shape) order.
  static Polynomial from_coefficients(const Shape& shape, std::span<const Rational> coeffs);

  const Shape& shape() const { return shape_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }

  Rational coefficient(const MultiIndex& m) const;
  /// Dense coefficient vector in monomial_basis(shape) order.
  std::vector<Rational> coefficients() const;
  std::vector<double> coefficients_double() const;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& scale);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  Polynomial operator-() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.shape_ == b.shape_ && a.terms_ == b.terms_;
  }

 private:
  void check_key(const MultiIndex& m) const;

  Shape shape_;
  TermMap terms_;
};

/// Product; block dimensions must agree and degrees add.
Polynomial multiply(const Polynomial& p, const Polynomial& q);
inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return multiply(p, q); }

/// Sum of second derivatives over the variables of block i.
Polynomial block_laplacian(const Polynomial& p, std::size_t block);

/// D[f](g): f read as a constant-coefficient differential operator applied to g.
/// The result has degrees deg(g) - deg(f) blockwise; it is zero (with degree clamped to 0)
/// when f has larger degree than g in some block.
Polynomial apply_D(const Polynomial& f, const Polynomial& g);

/// prod_i r_i^{d_i} with r_i^2 = sum of squares of block i; every degree must be even.
Polynomial radial_power(const Shape& shape);

}  // namespace mhsos
