#include "mhsos/transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mhsos/measures.hpp"

namespace mhsos {

namespace {

void require_even(const Shape& shape, const char* what) {
  if (!shape.all_even()) throw std::domain_error(std::string(what) + " requires even block degrees");
}

// prod_i multinomial(d_i; beta restricted to block i)
Rational multinomial(const Shape& shape, const MultiIndex& beta) {
  Rational r = 1;
  for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
    Rational m = factorial(static_cast<unsigned>(shape.block(b).degree));
    for (std::size_t v = shape.offset(b); v < shape.offset(b + 1); ++v) m /= factorial(static_cast<unsigned>(beta[v]));
    r *= m;
  }
  return r;
}

double log_mpz(const mpz_class& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::numbers::ln2;
}

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0);
  w.assign(n, 0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
}

// Per-block Funk-Hecke multiplier of t^degree on harmonics of degree alpha in S^{n-1}.
double funk_hecke_block(int n, int degree, int alpha) {
  if (n == 1) return alpha == 0 ? 1.0 : 0.0;
  constexpr int kNodes = 160;
  std::vector<double> gx, gw;
  gauss_legendre(kNodes, gx, gw);
  // theta in [0, pi], t = cos(theta), weight sin^{n-2}(theta) d theta.
  std::vector<double> t(kNodes), w(kNodes);
  for (int i = 0; i < kNodes; ++i) {
    double theta = 0.5 * std::numbers::pi * (gx[i] + 1);
    t[i] = std::cos(theta);
    w[i] = 0.5 * std::numbers::pi * gw[i] * std::pow(std::sin(theta), n - 2);
  }
  auto ip = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (int i = 0; i < kNodes; ++i) s += w[i] * a[i] * b[i];
    return s;
  };
  // Orthogonalize 1, t, ..., t^alpha; keep values at the nodes and at t = 1.
  std::vector<std::vector<double>> polys;
  std::vector<double> at_one;
  for (int d = 0; d <= alpha; ++d) {
    std::vector<double> p(kNodes);
    for (int i = 0; i < kNodes; ++i) p[i] = std::pow(t[i], d);
    double p1 = 1;
    for (std::size_t l = 0; l < polys.size(); ++l) {
      double c = ip(p, polys[l]) / ip(polys[l], polys[l]);
      for (int i = 0; i < kNodes; ++i) p[i] -= c * polys[l][i];
      p1 -= c * at_one[l];
    }
    polys.push_back(std::move(p));
    at_one.push_back(p1);
  }
  const auto& P = polys.back();
  double num = 0, den = 0;
  for (int i = 0; i < kNodes; ++i) {
    num += w[i] * std::pow(t[i], degree) * P[i] / at_one.back();
    den += w[i];
  }
  return num / den;
}

}  // namespace

double log_rational(const Rational& value) {
  if (value <= 0) throw std::domain_error("log of a non-positive rational");
  return log_mpz(value.get_num()) - log_mpz(value.get_den());
}

Rational spectrum_eigenvalue(const Shape& shape, const AlphaIndex& alpha) {
  require_even(shape, "spectrum_eigenvalue");
  if (alpha.size() != shape.num_blocks()) throw std::invalid_argument("alpha has wrong block count");
  Rational a = 1;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const int k = shape.block(i).degree / 2;
    if (alpha[i] % 2 != 0 || alpha[i] < 0 || alpha[i] > 2 * k) throw std::invalid_argument("alpha outside the index set");
    const int j = alpha[i] / 2;
    // k!/(k-j)!
    for (int t = k - j + 1; t <= k; ++t) a *= t;
    // Gamma(x) / Gamma(x + j) with x = n/2 + k
    Rational x(shape.block(i).dim + 2 * k, 2);
    x.canonicalize();
    for (int t = 0; t < j; ++t) a /= x + t;
  }
  return a;
}

Spectrum spectrum(const Shape& shape) {
  Spectrum s{shape, {}};
  for (const auto& alpha : alpha_indices(shape)) {
    s.eigen.emplace(alpha, SpectrumEntry{spectrum_eigenvalue(shape, alpha), dim_H(shape, alpha)});
  }
  return s;
}

Polynomial apply_T_spectral(const Polynomial& f) {
  const Shape& shape = f.shape();
  HarmonicSplit split = pi_decompose(f);
  Polynomial out(shape);
  for (const auto& [alpha, fa] : split.components) {
    if (fa.is_zero()) continue;
    std::vector<int> rest(shape.num_blocks());
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = shape.block(i).degree - alpha[i];
    out += multiply(radial_power(shape.with_degrees(rest)), fa) * spectrum_eigenvalue(shape, alpha);
  }
  return out;
}

Polynomial apply_T_direct(const Polynomial& f) {
  const Shape& shape = f.shape();
  require_even(shape, "apply_T_direct");
  check_exact_size(shape);
  const Rational a_inv = 1 / constant_A(shape);
  Polynomial::TermMap out;
  MultiIndex sum(shape.num_vars());
  for (const auto& beta : monomial_basis(shape)) {
    Rational acc = 0;
    for (const auto& [gamma, c] : f.terms()) {
      for (std::size_t v = 0; v < sum.size(); ++v) sum[v] = gamma[v] + beta[v];
      Rational mom = product_moment(shape, sum);
      if (mom != 0) acc += c * mom;
    }
    if (acc != 0) out.emplace(beta, a_inv * multinomial(shape, beta) * acc);
  }
  return Polynomial(shape, std::move(out));
}

RationalMatrix t_matrix(const Shape& shape) {
  require_even(shape, "t_matrix");
  check_exact_size(shape);
  auto basis = monomial_basis(shape);
  const Rational a_inv = 1 / constant_A(shape);
  const std::size_t n = basis.size();
  RationalMatrix t(n, n);
  MultiIndex sum(shape.num_vars());
  for (std::size_t i = 0; i < n; ++i) {
    Rational row_scale = a_inv * multinomial(shape, basis[i]);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t v = 0; v < sum.size(); ++v) sum[v] = basis[i][v] + basis[j][v];
      Rational mom = product_moment(shape, sum);
      if (mom != 0) t(i, j) = row_scale * mom;
    }
  }
  return t;
}

DetT det_T(const Shape& shape, std::uint64_t direct_limit) {
  DetT d;
  d.closed_form = 1;
  for (const auto& [alpha, e] : spectrum(shape).eigen) {
    for (std::uint64_t t = 0; t < e.multiplicity; ++t) d.closed_form *= e.eigenvalue;
    if (e.multiplicity > 0) d.log_det += static_cast<double>(e.multiplicity) * log_rational(e.eigenvalue);
  }
  d.root = std::exp(d.log_det / static_cast<double>(shape.dim_P()));
  if (shape.dim_P() <= direct_limit) d.direct = determinant(t_matrix(shape));
  return d;
}

std::pair<Rational, Rational> lemma_T_check(const Polynomial& f, const Polynomial& g) {
  if (!(f.shape() == g.shape())) throw std::invalid_argument("lemma_T_check: shapes differ");
  return {diff_ip(apply_T_spectral(f), g), constant_C(f.shape()) * usual_ip(f, g)};
}

BallRatioBounds ball_ratio_bounds(const Shape& shape) {
  require_even(shape, "ball_ratio_bounds");
  BallRatioBounds b;
  Spectrum s = spectrum(shape);
  Rational max_a = s.eigen.begin()->second.eigenvalue;
  Rational min_a = max_a;
  for (const auto& [alpha, e] : s.eigen) {
    if (e.multiplicity == 0) continue;
    if (e.eigenvalue > max_a) max_a = e.eigenvalue;
    if (e.eigenvalue < min_a) min_a = e.eigenvalue;
  }
  b.max_eigenvalue = max_a.get_d();
  b.min_eigenvalue = min_a;
  b.constant_C = constant_C(shape);

  double log_binomial = 0, log_lower = 0, log_upper = 0, log_upper_alt = 0, log_ball_upper = 0;
  double k_total = 0;
  for (const auto& blk : shape.blocks()) {
    const double n = blk.dim, k = blk.degree / 2;
    if (k == 0) continue;
    k_total += k;
    // log C(n/2 + 2k, k)
    log_binomial -= std::lgamma(n / 2 + 2 * k + 1) - std::lgamma(k + 1) - std::lgamma(n / 2 + k + 1);
    log_lower += (k / 2) * -std::log(2 * k + n / 2);
    log_upper += (k / 2) * -std::log(1 + n / (2 * k));
    log_upper_alt += (k / 2) * std::log(k / (n / 2 + k + 1));
    log_ball_upper += (k / 2) * std::log(1 + 1 / (n / (2 * k) + 1));
  }
  b.min_eigenvalue_binomial_form = std::exp(log_binomial);
  DetT d = det_T(shape, 0);
  b.det_root = d.root;
  b.det_lower = std::exp(log_lower);
  b.det_upper = std::exp(log_upper);
  b.det_upper_alt = std::exp(log_upper_alt);
  b.det_inside = b.det_lower <= b.det_root && b.det_root <= b.det_upper;

  const double dim = static_cast<double>(shape.dim_P());
  if (shape.dim_P() <= 64) {
    // |B_D| / |B| = sqrt(det G_usual / det G_diff) in the monomial basis.
    MonomialBasis basis(shape);
    std::vector<Polynomial> monos;
    for (const auto& m : basis.monomials()) monos.push_back(Polynomial::monomial(shape, m));
    Rational det_u = determinant(monomial_gram(shape));
    Rational det_d = determinant(gram(std::move(monos), InnerProduct::differential).entries);
    double log_ratio = 0.5 * (log_rational(det_u) - log_rational(det_d));
    b.ball_ratio_scaled = std::exp(0.5 * log_rational(b.constant_C) + log_ratio / dim);
    b.ball_ratio_from_gram = true;
  } else {
    // G_D = C T^{-t} G_u, so sqrt(C) (|B_D|/|B|)^{1/dim} = |det T|^{1/(2 dim)}.
    b.ball_ratio_scaled = std::exp(d.log_det / (2 * dim));
  }
  b.ball_lower = b.det_lower;
  b.ball_upper = std::exp(k_total / 2 + log_ball_upper);
  b.ball_inside = b.ball_lower <= b.ball_ratio_scaled && b.ball_ratio_scaled <= b.ball_upper;
  return b;
}

double funk_hecke_eigenvalue(const Shape& shape, const AlphaIndex& alpha) {
  require_even(shape, "funk_hecke_eigenvalue");
  double lambda = 1;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    lambda *= funk_hecke_block(shape.block(i).dim, shape.block(i).degree, alpha.at(i));
  }
  return lambda / constant_A(shape).get_d();
}

}  // namespace mhsos
