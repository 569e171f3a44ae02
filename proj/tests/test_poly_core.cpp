#include <gtest/gtest.h>

#include <random>

#include "mhsos/poly_text.hpp"
#include "mhsos/polynomial.hpp"
#include "test_support.hpp"

namespace mhsos {
namespace {

using testing::random_poly;

Polynomial P(const std::string& text, const Shape& s) { return parse_polynomial(text, s); }

TEST(ShapeTest, ParsesAndCountsDimensions) {
  Shape s = parse_shape("N=3,2 K=2,3");
  EXPECT_EQ(s.num_blocks(), 2u);
  EXPECT_EQ(s.num_vars(), 5u);
  EXPECT_EQ(s.offset(1), 3u);
  EXPECT_EQ(s.dim_P(), 24u);
  EXPECT_FALSE(s.all_even());
  EXPECT_EQ(s.to_string(), "N=3,2 K=2,3");
  EXPECT_EQ(parse_shape("N=2,2;K=2,2"), parse_shape("N=2,2 K=2,2"));
}

TEST(ShapeTest, RejectsMalformedLiterals) {
  EXPECT_THROW(parse_shape("N=2 K=2,2"), std::invalid_argument);
  EXPECT_THROW(parse_shape("N=0 K=2"), std::invalid_argument);
  EXPECT_THROW(parse_shape("N=2 K=-2"), std::invalid_argument);
  EXPECT_THROW(parse_shape("K=2"), std::invalid_argument);
  EXPECT_THROW(parse_shape("N=3,2 K=2,3").half(), std::domain_error);
}

TEST(ShapeTest, BinomialIsExact) {
  EXPECT_EQ(binomial(5, 2), 10u);
  EXPECT_EQ(binomial(5, 7), 0u);
  EXPECT_EQ(binomial(60, 30), 118264581564861424ull);
  EXPECT_THROW(binomial(200, 100), std::overflow_error);
}

TEST(MonomialBasisTest, GradedLexOrder) {
  Shape s = parse_shape("N=2 K=2");
  auto b = monomial_basis(s);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], (MultiIndex{2, 0}));
  EXPECT_EQ(b[1], (MultiIndex{1, 1}));
  EXPECT_EQ(b[2], (MultiIndex{0, 2}));
}

TEST(MonomialBasisTest, LengthMatchesDimension) {
  for (const char* text : {"N=3,2 K=2,3", "N=2,2 K=2,2", "N=4 K=6", "N=1,3 K=4,2", "N=3,3 K=2,2"}) {
    Shape s = parse_shape(text);
    auto b = monomial_basis(s);
    EXPECT_EQ(b.size(), s.dim_P()) << text;
    MonomialBasis idx(s);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(idx.index_of(b[i]), i);
    EXPECT_EQ(idx.index_of(MultiIndex(s.num_vars(), 0)), idx.size());
  }
  EXPECT_EQ(monomial_basis(parse_shape("N=2,2 K=2,2")).size(), 9u);
}

TEST(PolynomialTest, EvaluatesExactly) {
  Shape s = parse_shape("N=3,2 K=3,2");
  Polynomial p = P("x1^3 x4^2 + x1 x2^2 x5^2 + x3^3 x4 x5", s);
  std::vector<Rational> ones(5, 1);
  EXPECT_EQ(p.evaluate(ones), 3);
  EXPECT_EQ(Polynomial(s).evaluate(ones), 0);
  Shape s2 = parse_shape("N=2 K=2");
  std::vector<Rational> v{Rational(3, 5), Rational(4, 5)};
  EXPECT_EQ(P("x1 x2", s2).evaluate(v), Rational(12, 25));
  std::vector<Rational> short_point{1};
  EXPECT_THROW(p.evaluate(short_point), std::invalid_argument);
}

TEST(PolynomialTest, KeysMustMatchShape) {
  Shape s = parse_shape("N=2 K=2");
  EXPECT_THROW(Polynomial::monomial(s, {1, 0}), std::invalid_argument);
  EXPECT_THROW(P("x1^3", s), std::invalid_argument);
  Polynomial p = P("x1^2 - x1^2", s);
  EXPECT_TRUE(p.is_zero());
}

TEST(PolynomialTest, MultiplyExamples) {
  Shape one = parse_shape("N=2 K=1");
  Shape two = parse_shape("N=2 K=2");
  EXPECT_EQ(multiply(P("x1 + x2", one), P("x1 - x2", one)), P("x1^2 - x2^2", two));
  Polynomial unit = Polynomial::constant(parse_shape("N=2 K=0"), 1);
  EXPECT_EQ(multiply(radial_power(two), unit), P("x1^2 + x2^2", two));
  EXPECT_EQ(multiply(P("x1 x2", two), P("x1 x2", two)), P("x1^2 x2^2", parse_shape("N=2 K=4")));
  EXPECT_THROW(multiply(P("x1", one), Polynomial::constant(parse_shape("N=2,2 K=0,0"), 1)), std::invalid_argument);
}

TEST(PolynomialTest, LaplacianExamples) {
  Shape s = parse_shape("N=2 K=2");
  Shape z = parse_shape("N=2 K=0");
  EXPECT_EQ(block_laplacian(P("x1^2 + x2^2", s), 0), Polynomial::constant(z, 4));
  EXPECT_TRUE(block_laplacian(P("x1^2 - x2^2", s), 0).is_zero());
  EXPECT_EQ(block_laplacian(P("x1^2 x2^2", parse_shape("N=2 K=4")), 0), P("2 x1^2 + 2 x2^2", s));
  EXPECT_THROW(block_laplacian(P("x1^2", s), 1), std::out_of_range);
}

TEST(PolynomialTest, DifferentialOperatorExamples) {
  Shape s = parse_shape("N=2 K=2");
  EXPECT_EQ(apply_D(P("x1 x2", s), P("x1 x2", s)).evaluate(std::vector<Rational>{0, 0}), 1);
  EXPECT_EQ(apply_D(P("x1^2", s), P("x1^2", s)).evaluate(std::vector<Rational>{0, 0}), 2);
  EXPECT_TRUE(apply_D(P("x1^2", s), P("x2^2", s)).is_zero());
  // Lower-degree operator leaves a polynomial of the remaining degree.
  Shape one = parse_shape("N=2 K=1");
  EXPECT_EQ(apply_D(P("x1", one), P("x1^2 + x1 x2", s)), P("2 x1 + x2", one));
}

class PolyAlgebraTest : public ::testing::TestWithParam<const char*> {};

TEST_P(PolyAlgebraTest, RingLaws) {
  Shape s = parse_shape(GetParam());
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Polynomial p = random_poly(s, rng, 0.6), q = random_poly(s, rng, 0.6), r = random_poly(s, rng, 0.6);
    EXPECT_EQ(multiply(p, q), multiply(q, p));
    EXPECT_EQ(multiply(multiply(p, q), r), multiply(p, multiply(q, r)));
    auto v = testing::rational_sphere_point(s, rng);
    EXPECT_EQ(multiply(p, q).evaluate(v), p.evaluate(v) * q.evaluate(v));
    EXPECT_EQ(apply_D(p, q), apply_D(q, p));
  }
}

TEST_P(PolyAlgebraTest, LaplaciansCommute) {
  Shape s = parse_shape(GetParam());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Polynomial p = random_poly(s, rng);
    for (std::size_t i = 0; i < s.num_blocks(); ++i)
      for (std::size_t j = 0; j < s.num_blocks(); ++j)
        EXPECT_EQ(block_laplacian(block_laplacian(p, i), j), block_laplacian(block_laplacian(p, j), i));
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, PolyAlgebraTest,
                         ::testing::Values("N=2 K=2", "N=3 K=4", "N=2,2 K=2,2", "N=3,2 K=2,3", "N=1,2 K=2,2"));

TEST(PolyTextTest, RoundTrip) {
  Shape s = parse_shape("N=3,2 K=2,2");
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial p = random_poly(s, rng, 0.3);
    EXPECT_EQ(parse_polynomial(format_polynomial(p), s), p);
  }
  EXPECT_EQ(format_polynomial(Polynomial(s)), "0");
  EXPECT_EQ(format_polynomial(P("x1^2 x4^2 - 1/2 x2 x3 x4 x5", s)), "x1^2 x4^2 - 1/2 x2 x3 x4 x5");
  EXPECT_EQ(P("3*x1*x1*x4^2", s), P("3 x1^2 x4^2", s));
  EXPECT_THROW(P("x9^2 x4^2", s), std::invalid_argument);
  EXPECT_THROW(P("x1^2 x4^2 +", s), std::invalid_argument);
}

}  // namespace
}  // namespace mhsos
