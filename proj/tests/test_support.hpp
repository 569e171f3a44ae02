#pragma once

#include <random>
#include <vector>

#include <ostream>

#include "mhsos/poly_text.hpp"
#include "mhsos/polynomial.hpp"

namespace mhsos {

// Readable gtest failure messages.
inline void PrintTo(const Polynomial& p, std::ostream* os) { *os << p.shape().to_string() << ": " << format_polynomial(p); }

}  // namespace mhsos

namespace mhsos::testing {

inline Rational small_rational(std::mt19937_64& rng, int range = 5) {
  std::uniform_int_distribution<int> num(-range, range), den(1, range);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

// Dense random form with small rational coefficients; about `density` of the monomials kept.
inline Polynomial random_poly(const Shape& shape, std::mt19937_64& rng, double density = 1.0) {
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  Polynomial::TermMap terms;
  for (const auto& m : monomial_basis(shape))
    if (keep(rng) < density) terms.emplace(m, small_rational(rng));
  return Polynomial(shape, std::move(terms));
}

// Rational point on S by inverse stereographic projection of a random rational vector.
inline std::vector<Rational> rational_sphere_point(const Shape& shape, std::mt19937_64& rng) {
  std::vector<Rational> v;
  for (const auto& b : shape.blocks()) {
    if (b.dim == 1) {
      v.push_back(std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1);
      continue;
    }
    std::vector<Rational> t(b.dim - 1);
    Rational s = 0;
    for (auto& x : t) {
      x = small_rational(rng, 4);
      s += x * x;
    }
    for (const auto& x : t) v.push_back(2 * x / (s + 1));
    v.push_back((s - 1) / (s + 1));
  }
  return v;
}

inline std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

}  // namespace mhsos::testing
