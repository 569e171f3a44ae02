#pragma once

#include <span>
#include <vector>

#include "mhsos/linalg.hpp"
#include "mhsos/polynomial.hpp"

namespace mhsos {

/// Integral of v^alpha over S^{n-1} against the uniform probability measure.
/// Zero when any exponent is odd; for n = 1 the measure is uniform on {-1, +1}.
Rational sphere_moment(int n, std::span<const int> alpha);

/// Integral of x^m over S = S^{n_1-1} x ... x S^{n_m-1} (product of probability measures).
/// Only the block dimensions of `shape` are used.
Rational product_moment(const Shape& shape, const MultiIndex& m);

/// <f, g> = integral of f g over S. Both arguments must share a shape.
Rational usual_ip(const Polynomial& f, const Polynomial& g);

/// <f, g>_D = D[f](g), evaluated from the blockwise multinomial closed form.
Rational diff_ip(const Polynomial& f, const Polynomial& g);

/// A = integral over S of x_{s_1}^{d_1} ... x_{s_m}^{d_m} (last variable of each block).
Rational constant_A(const Shape& shape);

/// C_{N,K} = A^{-1} prod_i d_i!.
Rational constant_C(const Shape& shape);

enum class InnerProduct { usual, differential };

const char* to_string(InnerProduct which);

struct GramMatrix {
  Shape shape;
  std::vector<Polynomial> basis;
  RationalMatrix entries;
  InnerProduct which = InnerProduct::usual;
};

GramMatrix gram(std::vector<Polynomial> basis, InnerProduct which);

/// Usual-inner-product Gram matrix of the monomial basis of `shape`.
RationalMatrix monomial_gram(const Shape& shape);

}  // namespace mhsos
