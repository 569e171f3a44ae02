#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mhsos/harmonics.hpp"
#include "mhsos/linalg.hpp"
#include "mhsos/measures.hpp"
#include "mhsos/poly_text.hpp"
#include "mhsos/sphere_opt.hpp"
#include "test_support.hpp"

namespace mhsos {
namespace {

using testing::random_poly;

Polynomial P(const std::string& text, const Shape& s) { return parse_polynomial(text, s); }

Polynomial lift(const Shape& shape, const AlphaIndex& alpha, const Polynomial& f) {
  std::vector<int> rest(shape.num_blocks());
  for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = shape.block(i).degree - alpha[i];
  return multiply(radial_power(shape.with_degrees(rest)), f);
}

TEST(DimHTest, Values) {
  EXPECT_EQ(dim_H(2, 2), 2u);
  EXPECT_EQ(dim_H(3, 2), 5u);
  EXPECT_EQ(dim_H(5, 0), 1u);
  EXPECT_EQ(dim_H(1, 0), 1u);
  EXPECT_EQ(dim_H(1, 2), 0u);
  EXPECT_EQ(dim_H(2, 7), 2u);
  EXPECT_EQ(dim_H(4, 4), 25u);
}

TEST(DimHTest, SumsToDimP) {
  for (const char* text : {"N=2 K=6", "N=3,2 K=2,4", "N=4,4 K=2,2", "N=1,3 K=4,2"}) {
    Shape s = parse_shape(text);
    std::uint64_t total = 0;
    for (const auto& a : alpha_indices(s)) total += dim_H(s, a);
    EXPECT_EQ(total, s.dim_P()) << text;
  }
}

TEST(HarmonicBasisTest, Examples) {
  Shape s = parse_shape("N=2 K=2");
  const auto& b = harmonic_basis(s);
  ASSERT_EQ(b.size(), 2u);
  for (const auto& h : b) EXPECT_TRUE(block_laplacian(h, 0).is_zero());
  // The span is {x1^2 - x2^2, x1 x2}: rank of the stacked coefficients together with both stays 2.
  RationalMatrix m(4, 3);
  std::vector<Polynomial> rows{b[0], b[1], P("x1^2 - x2^2", s), P("x1 x2", s)};
  for (std::size_t i = 0; i < 4; ++i) {
    auto c = rows[i].coefficients();
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = c[j];
  }
  EXPECT_EQ(rank(m), 2u);
  EXPECT_EQ(harmonic_basis(parse_shape("N=2,2 K=2,0")).size(), 2u);
  const auto& zero = harmonic_basis(parse_shape("N=3 K=0"));
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0], Polynomial::constant(parse_shape("N=3 K=0"), 1));
}

TEST(HarmonicBasisTest, DimensionsAndHarmonicity) {
  for (const char* text : {"N=3 K=4", "N=2,3 K=2,2", "N=4 K=2", "N=1,2 K=0,4"}) {
    Shape s = parse_shape(text);
    const auto& b = harmonic_basis(s);
    std::uint64_t expect = 1;
    for (const auto& blk : s.blocks()) expect *= dim_H(blk.dim, blk.degree);
    EXPECT_EQ(b.size(), expect) << text;
    for (const auto& h : b)
      for (std::size_t i = 0; i < s.num_blocks(); ++i) EXPECT_TRUE(block_laplacian(h, i).is_zero());
  }
}

TEST(DecomposeTest, Examples) {
  Shape s = parse_shape("N=2 K=2");
  HarmonicSplit x1 = pi_decompose(P("x1^2", s));
  EXPECT_EQ(x1.components.at({0}), Polynomial::constant(parse_shape("N=2 K=0"), Rational(1, 2)));
  EXPECT_EQ(x1.components.at({2}), P("1/2 x1^2 - 1/2 x2^2", s));
  HarmonicSplit x12 = pi_decompose(P("x1 x2", s));
  EXPECT_TRUE(x12.components.at({0}).is_zero());
  EXPECT_EQ(x12.components.at({2}), P("x1 x2", s));
  Shape t = parse_shape("N=3,2 K=2,2");
  HarmonicSplit r = pi_decompose(radial_power(t));
  for (const auto& [a, f] : r.components) {
    if (a == AlphaIndex{0, 0})
      EXPECT_EQ(f, Polynomial::constant(t.with_degrees(std::vector<int>{0, 0}), 1));
    else
      EXPECT_TRUE(f.is_zero());
  }
}

// Independent oracle: peel off harmonic parts by orthogonal projection with the usual inner
// product, top degree first.
std::map<AlphaIndex, Polynomial> project_components(const Polynomial& p) {
  const Shape& s = p.shape();
  std::map<AlphaIndex, Polynomial> out;
  for (const auto& a : alpha_indices(s)) {
    const OrthogonalHarmonics& oh = orthogonal_harmonics(s.with_degrees(a));
    Polynomial f(s.with_degrees(a));
    for (std::size_t j = 0; j < oh.basis.size(); ++j) {
      Polynomial lifted = lift(s, a, oh.basis[j]);
      f += oh.basis[j] * (usual_ip(p, lifted) / usual_ip(lifted, lifted));
    }
    out.emplace(a, f);
  }
  return out;
}

class DecomposeShapeTest : public ::testing::TestWithParam<const char*> {};

TEST_P(DecomposeShapeTest, RoundTripAndProjectionOracle) {
  Shape s = parse_shape(GetParam());
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    Polynomial p = random_poly(s, rng, 0.7);
    HarmonicSplit split = pi_decompose(p);
    ASSERT_EQ(split.reconstruct(), p);
    for (const auto& [a, f] : split.components)
      for (std::size_t i = 0; i < s.num_blocks(); ++i) ASSERT_TRUE(block_laplacian(f, i).is_zero());
    if (trial < 10) EXPECT_EQ(split.components, project_components(p));
  }
}

TEST_P(DecomposeShapeTest, CrossDegreeOrthogonality) {
  Shape s = parse_shape(GetParam());
  auto alphas = alpha_indices(s);
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = i + 1; j < alphas.size(); ++j)
      for (const auto& hu : harmonic_basis(s.with_degrees(alphas[i])))
        for (const auto& hq : harmonic_basis(s.with_degrees(alphas[j]))) {
          Polynomial lu = lift(s, alphas[i], hu), lq = lift(s, alphas[j], hq);
          EXPECT_EQ(usual_ip(lu, lq), 0);
          EXPECT_EQ(diff_ip(lu, lq), 0);
        }
}

TEST_P(DecomposeShapeTest, ReproducingKernel) {
  Shape s = parse_shape(GetParam());
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 3; ++trial) {
    auto v = testing::rational_sphere_point(s, rng);
    Polynomial pv = kernel_poly(v, s);
    EXPECT_EQ(usual_ip(pv, pv), Rational(static_cast<long>(s.dim_P())));
    EXPECT_EQ(pv.evaluate(v), Rational(static_cast<long>(s.dim_P())));
    for (const auto& m : monomial_basis(s)) {
      Polynomial f = Polynomial::monomial(s, m);
      ASSERT_EQ(usual_ip(f, pv), f.evaluate(v));
    }
    for (const auto& a : alpha_indices(s)) {
      Polynomial q = zonal(v, s, a);
      EXPECT_EQ(q.evaluate(v), Rational(static_cast<long>(dim_H(s, a))));
      for (const auto& h : harmonic_basis(s.with_degrees(a))) EXPECT_EQ(usual_ip(h, q), h.evaluate(v));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, DecomposeShapeTest,
                         ::testing::Values("N=2 K=2", "N=2 K=4", "N=3 K=2", "N=2,2 K=2,2", "N=3,2 K=2,2", "N=1,2 K=2,2"));

TEST(ZonalTest, Examples) {
  Shape s = parse_shape("N=2 K=2");
  std::vector<Rational> v{1, 0};
  EXPECT_EQ(zonal(v, s, {2}), P("2 x1^2 - 2 x2^2", s));
  EXPECT_EQ(zonal(v, s, {2}).evaluate(v), 2);
  EXPECT_EQ(zonal(v, s, {0}), Polynomial::constant(parse_shape("N=2 K=0"), 1));
  Polynomial pv = kernel_poly(v, s);
  EXPECT_EQ(pv, P("3 x1^2 - x2^2", s));
  EXPECT_EQ(usual_ip(P("x1^2", s), pv), 1);
  EXPECT_EQ(usual_ip(pv, pv), 3);
  std::vector<Rational> off{1, 1};
  EXPECT_THROW(kernel_poly(off, s), std::invalid_argument);
}

TEST(ZonalTest, KernelMaximumAndRotationInvariance) {
  Shape s = parse_shape("N=2,3 K=2,2");
  std::mt19937_64 rng(31);
  auto v = testing::rational_sphere_point(s, rng);
  Polynomial pv = kernel_poly(v, s);
  const double peak = pv.evaluate(v).get_d();
  const auto vd = testing::to_doubles(v);
  for (int trial = 0; trial < 200; ++trial) {
    auto w = random_sphere_point(s, rng);
    EXPECT_LE(std::fabs(pv.evaluate(std::span<const double>(w))), peak + 1e-12);
  }
  // Rotate both blocks by fixed rotations; p_v(w) = p_{Rv}(Rw).
  auto rotate = [](std::vector<double> x) {
    const double c = 0.6, sn = 0.8;
    double a = x[0], b = x[1];
    x[0] = c * a - sn * b;
    x[1] = sn * a + c * b;
    double p = x[2], q = x[4];
    x[2] = c * p + sn * q;
    x[4] = -sn * p + c * q;
    return x;
  };
  std::vector<Rational> rv{Rational(3, 5) * v[0] - Rational(4, 5) * v[1], Rational(4, 5) * v[0] + Rational(3, 5) * v[1],
                           Rational(3, 5) * v[2] + Rational(4, 5) * v[4], v[3],
                           -Rational(4, 5) * v[2] + Rational(3, 5) * v[4]};
  Polynomial prv = kernel_poly(rv, s);
  for (int trial = 0; trial < 50; ++trial) {
    auto w = random_sphere_point(s, rng);
    auto rw = rotate(w);
    EXPECT_NEAR(pv.evaluate(std::span<const double>(w)), prv.evaluate(std::span<const double>(rw)), 1e-12);
  }
}

TEST(ExactSizeCapTest, RefusesLargeShapes) {
  const auto saved = exact_size_cap();
  set_exact_size_cap(10);
  EXPECT_THROW(pi_decompose(radial_power(parse_shape("N=3 K=4"))), std::length_error);
  set_exact_size_cap(saved);
  EXPECT_NO_THROW(pi_decompose(radial_power(parse_shape("N=3 K=4"))));
}

}  // namespace
}  // namespace mhsos
