#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mhsos/cones.hpp"
#include "mhsos/measures.hpp"
#include "mhsos/poly_text.hpp"
#include "mhsos/transform.hpp"
#include "mhsos/volumetrics.hpp"
#include "test_support.hpp"

namespace mhsos {
namespace {

using testing::random_poly;

Polynomial P(const std::string& text, const Shape& s) { return parse_polynomial(text, s); }

const char* kMotzkin = "x3^6 + x1^4 x2^2 + x1^2 x2^4 - 3 x1^2 x2^2 x3^2";
const char* kChoi =
    "x1^2 x4^2 + x2^2 x5^2 + x3^2 x6^2 - 2 x1 x2 x4 x5 - 2 x2 x3 x5 x6 - 2 x1 x3 x4 x6"
    " + 2 x1^2 x5^2 + 2 x2^2 x6^2 + 2 x3^2 x4^2";

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1, r = 0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// Halton points pushed through Box-Muller, normalized per block.
std::vector<std::vector<double>> halton_sphere_points(const Shape& shape, std::size_t count) {
  static const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  const std::size_t n = shape.num_vars();
  std::vector<std::vector<double>> out;
  for (std::size_t i = 1; i <= count; ++i) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; j += 2) {
      const double u1 = std::max(radical_inverse(i, primes[j]), 1e-300);
      const double u2 = radical_inverse(i, primes[j + 1]);
      const double rad = std::sqrt(-2 * std::log(u1));
      x[j] = rad * std::cos(2 * M_PI * u2);
      if (j + 1 < n) x[j + 1] = rad * std::sin(2 * M_PI * u2);
    }
    normalize_blocks(shape, x);
    out.push_back(std::move(x));
  }
  return out;
}

Polynomial from_doubles(const SectionFrame& frame, const Eigen::VectorXd& c) {
  Polynomial::TermMap terms;
  for (std::size_t j = 0; j < frame.monomials.size(); ++j)
    if (c(static_cast<Eigen::Index>(j)) != 0) terms.emplace(frame.monomials[j], Rational(c(static_cast<Eigen::Index>(j))));
  return Polynomial(frame.shape, std::move(terms));
}

Polynomial half_shape_square_sum(const Shape& shape, std::mt19937_64& rng, int count) {
  std::vector<int> half;
  for (const auto& b : shape.blocks()) half.push_back(b.degree / 2);
  Shape h = shape.with_degrees(half);
  Polynomial sum(shape);
  for (int i = 0; i < count; ++i) {
    Polynomial q = random_poly(h, rng, 0.7);
    sum += multiply(q, q);
  }
  return sum;
}

TEST(PosMinTest, Examples) {
  Shape s2 = parse_shape("N=2 K=2");
  EXPECT_NEAR(pos_min(radial_power(parse_shape("N=3,2 K=2,4"))).value, 1.0, 1e-12);
  MinimizeResult m = pos_min(P("x1^2 - x2^2", s2));
  EXPECT_NEAR(m.value, -1.0, 1e-12);
  EXPECT_NEAR(std::fabs(m.argmin[1]), 1.0, 1e-6);
  Shape s3 = parse_shape("N=3 K=6");
  MinimizeResult mz = pos_min(P(kMotzkin, s3));
  EXPECT_GE(mz.value, -1e-9);
  EXPECT_LE(mz.value, 1e-9);
  for (double x : mz.argmin) EXPECT_NEAR(std::fabs(x), 1 / std::sqrt(3.0), 1e-4);
  PosMinOptions bad;
  bad.starts = 0;
  EXPECT_THROW(pos_min(radial_power(s2), bad), std::invalid_argument);
}

TEST(PosMinTest, NeverWorseThanQuasiRandomSampling) {
  std::mt19937_64 rng(53);
  for (const char* text : {"N=3 K=4", "N=2,2 K=2,2", "N=3,3 K=2,2", "N=4 K=2"}) {
    Shape s = parse_shape(text);
    Polynomial p = random_poly(s, rng);
    FloatPoly f(p);
    double sampled = std::numeric_limits<double>::infinity();
    for (const auto& x : halton_sphere_points(s, 10000)) sampled = std::min(sampled, f.value(x));
    EXPECT_LE(pos_min(p).value, sampled + 1e-12) << text;
  }
}

TEST(SosTest, ExplicitSumOfSquares) {
  Shape s = parse_shape("N=2 K=4");
  Polynomial p = P("x1^4 + 2 x1^2 x2^2 + x2^4", s);
  EXPECT_EQ(p, multiply(P("x1^2 - x2^2", parse_shape("N=2 K=2")), P("x1^2 - x2^2", parse_shape("N=2 K=2"))) +
                   multiply(P("2 x1 x2", parse_shape("N=2 K=2")), P("2 x1 x2", parse_shape("N=2 K=2"))));
  SosStatus st = sos_feasibility(p);
  ASSERT_EQ(st.verdict, SosVerdict::feasible);
  ASSERT_TRUE(st.witness.has_value());
  EXPECT_TRUE(verify_witness(p, *st.witness));
  EXPECT_LE(st.witness->residual, 1e-7);
}

TEST(SosTest, MotzkinIsNotSos) {
  Polynomial p = P(kMotzkin, parse_shape("N=3 K=6"));
  SosStatus st = sos_feasibility(p);
  ASSERT_EQ(st.verdict, SosVerdict::infeasible) << st.note;
  ASSERT_TRUE(st.certificate.has_value());
  EXPECT_TRUE(verify_certificate(p, *st.certificate));
}

TEST(SosTest, ChoiIsNonnegativeButNotSos) {
  Polynomial p = P(kChoi, parse_shape("N=3,3 K=2,2"));
  EXPECT_GE(pos_min(p).value, -1e-6);
  SosStatus st = sos_feasibility(p);
  ASSERT_EQ(st.verdict, SosVerdict::infeasible) << st.note;
  EXPECT_TRUE(verify_certificate(p, *st.certificate));
}

TEST(SosTest, NegativeFormIsCertified) {
  Polynomial p = P("x1^2 - x2^2", parse_shape("N=2 K=2"));
  SosStatus st = sos_feasibility(p);
  ASSERT_EQ(st.verdict, SosVerdict::infeasible);
  EXPECT_TRUE(verify_certificate(p, *st.certificate));
  EXPECT_FALSE(verify_certificate(radial_power(p.shape()), *st.certificate));
}

TEST(SosTest, RandomSquareSumsAreFeasible) {
  std::mt19937_64 rng(59);
  const char* shapes[] = {"N=2 K=4", "N=3 K=4", "N=2,2 K=2,2", "N=3,2 K=2,2", "N=3 K=6"};
  for (int i = 0; i < 50; ++i) {
    Shape s = parse_shape(shapes[i % 5]);
    Polynomial p = half_shape_square_sum(s, rng, 1 + i % 4);
    if (p.is_zero()) continue;
    SosStatus st = sos_feasibility(p);
    ASSERT_EQ(st.verdict, SosVerdict::feasible) << i << " " << s.to_string() << " " << st.note << " it=" << st.iterations << " gap=" << st.final_gap;
    EXPECT_LE(st.witness->residual, 1e-7);
    EXPECT_TRUE(verify_witness(p, *st.witness));
  }
}

TEST(SosTest, NonnegativeBiquadraticsInTwoBlocksOfTwoAreSos) {
  Shape s = parse_shape("N=2,2 K=2,2");
  SectionFrame frame = make_section_frame(s);
  std::mt19937_64 rng(61);
  for (int i = 0; i < 20; ++i) {
    Polynomial p = from_doubles(frame, sample_nonnegative_form(frame, rng, 0.6, 1e-6));
    EXPECT_GE(pos_min(p).value, 1e-6 - 1e-12);
    SosStatus st = sos_feasibility(p);
    ASSERT_EQ(st.verdict, SosVerdict::feasible) << st.note;
    EXPECT_TRUE(verify_witness(p, *st.witness));
  }
}

TEST(LinpowTest, Examples) {
  Shape s = parse_shape("N=2 K=2");
  std::vector<Rational> e1{1, 0};
  EXPECT_EQ(linpow_kernel(e1, s), P("x1^2", s));
  std::vector<Rational> v{Rational(3, 5), Rational(4, 5)};
  EXPECT_EQ(linpow_kernel(v, s), P("9/25 x1^2 + 24/25 x1 x2 + 16/25 x2^2", s));
  std::vector<Rational> off{1, 1};
  EXPECT_THROW(linpow_kernel(off, s), std::invalid_argument);
  std::mt19937_64 rng(67);
  for (const char* text : {"N=2 K=4", "N=3,2 K=2,2", "N=2,2 K=2,4"}) {
    Shape t = parse_shape(text);
    for (int i = 0; i < 5; ++i) {
      auto w = testing::rational_sphere_point(t, rng);
      EXPECT_EQ(usual_ip(linpow_kernel(w, t), radial_power(t)), constant_A(t)) << text;
    }
  }
}

TEST(LExtremeTest, KernelImageIdentity) {
  Shape s = parse_shape("N=2 K=2");
  std::vector<Rational> e1{1, 0};
  EXPECT_EQ(apply_T_spectral(kernel_poly(e1, s)), P("2 x1^2", s));
  EXPECT_EQ(l_extreme_check(e1, s), 0);
  std::vector<Rational> v{Rational(3, 5), Rational(4, 5)};
  EXPECT_EQ(l_extreme_check(v, s), 0);
  std::mt19937_64 rng(71);
  for (const char* text : {"N=3 K=2", "N=2,2 K=2,2", "N=3,2 K=2,2", "N=2 K=6"}) {
    Shape t = parse_shape(text);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(l_extreme_check(testing::rational_sphere_point(t, rng), t), 0) << text;
  }
}

TEST(ConeInclusionTest, LInsideSqInsidePos) {
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<int> weight(1, 4);
  for (const char* text : {"N=2 K=4", "N=3 K=2", "N=2,2 K=2,2", "N=3,2 K=2,2"}) {
    Shape s = parse_shape(text);
    for (int trial = 0; trial < 4; ++trial) {
      Polynomial p(s);
      for (int j = 0; j < 3; ++j) p += linpow_kernel(testing::rational_sphere_point(s, rng), s) * Rational(weight(rng));
      SosStatus st = sos_feasibility(p);
      ASSERT_EQ(st.verdict, SosVerdict::feasible) << text << " " << st.note;
      EXPECT_TRUE(verify_witness(p, *st.witness));
      EXPECT_GE(pos_min(p).value, -1e-9);
    }
  }
}

}  // namespace
}  // namespace mhsos
