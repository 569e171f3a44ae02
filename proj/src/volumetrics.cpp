#include "mhsos/volumetrics.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mhsos/cones.hpp"
#include "mhsos/harmonics.hpp"
#include "mhsos/measures.hpp"
#include "mhsos/parallel.hpp"

namespace mhsos {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::size_t kChunk = 1024;

// Exact Gram-Schmidt of `vectors` under the Gram matrix g, skipping dependent vectors; rows
// of the result are the floated, normalized survivors.
MatrixXd orthonormalize(const RationalMatrix& g, const std::vector<std::vector<Rational>>& vectors) {
  const std::size_t d = g.rows();
  std::vector<std::vector<Rational>> kept, kept_g;  // e_j and G e_j
  std::vector<Rational> norms;
  for (const auto& v : vectors) {
    std::vector<Rational> u = v;
    for (std::size_t j = 0; j < kept.size(); ++j) {
      Rational c = 0;
      for (std::size_t t = 0; t < d; ++t) c += u[t] * kept_g[j][t];
      if (c == 0) continue;
      c /= norms[j];
      for (std::size_t t = 0; t < d; ++t) u[t] -= c * kept[j][t];
    }
    std::vector<Rational> gu = g.apply(u);
    Rational n = 0;
    for (std::size_t t = 0; t < d; ++t) n += u[t] * gu[t];
    if (n == 0) continue;
    kept.push_back(std::move(u));
    kept_g.push_back(std::move(gu));
    norms.push_back(n);
    if (kept.size() == d) break;
  }
  MatrixXd out(static_cast<Index>(kept.size()), static_cast<Index>(d));
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const double s = 1 / std::sqrt(norms[j].get_d());
    for (std::size_t t = 0; t < d; ++t) out(static_cast<Index>(j), static_cast<Index>(t)) = kept[j][t].get_d() * s;
  }
  return out;
}

MatrixXd to_eigen(const RationalMatrix& m) {
  MatrixXd out(static_cast<Index>(m.rows()), static_cast<Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = m(i, j).get_d();
  return out;
}

// Half-degree frame for the SOS support function.
struct SquareFrame {
  MatrixXd basis;        // q x q, usual-orthonormal rows over the half monomials
  std::vector<int> cls;  // q x q, index of the product monomial in the full basis
  Index q = 0;
};

SquareFrame make_square_frame(const Shape& shape) {
  const Shape half = shape.half();
  auto mons = monomial_basis(half);
  std::vector<std::vector<Rational>> units(mons.size(), std::vector<Rational>(mons.size()));
  for (std::size_t i = 0; i < mons.size(); ++i) units[i][i] = 1;
  SquareFrame sf;
  sf.basis = orthonormalize(monomial_gram(half), units);
  sf.q = static_cast<Index>(mons.size());
  MonomialBasis full(shape);
  sf.cls.resize(mons.size() * mons.size());
  MultiIndex m(shape.num_vars());
  for (std::size_t i = 0; i < mons.size(); ++i)
    for (std::size_t j = 0; j < mons.size(); ++j) {
      for (std::size_t v = 0; v < m.size(); ++v) m[v] = mons[i][v] + mons[j][v];
      sf.cls[i * mons.size() + j] = static_cast<int>(full.index_of(m));
    }
  return sf;
}

const SquareFrame& square_frame(const Shape& shape) {
  static std::mutex mutex;
  static std::map<std::string, SquareFrame> cache;
  std::lock_guard lock(mutex);
  auto key = shape.to_string();
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make_square_frame(shape)).first;
  return it->second;
}

VectorXd gaussian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  VectorXd c(n);
  for (Index i = 0; i < n; ++i) c(i) = normal(rng);
  return c;
}

VectorXd unit_gaussian(Index n, std::mt19937_64& rng) {
  VectorXd c;
  do c = gaussian(n, rng);
  while (c.norm() == 0);
  return c / c.norm();
}

// Standard error of the mean from contiguous batch means; a relative floor of a few ulps keeps
// exactly constant integrands from reporting a zero error.
std::pair<double, double> batch_mean_se(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) return {0, 0};
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const std::size_t nb = std::min<std::size_t>(50, n);
  double se = 0;
  if (nb > 1) {
    std::vector<double> bm(nb, 0.0);
    std::vector<std::size_t> cnt(nb, 0);
    for (std::size_t i = 0; i < n; ++i) {
      bm[i * nb / n] += x[i];
      ++cnt[i * nb / n];
    }
    double s = 0;
    for (std::size_t b = 0; b < nb; ++b) {
      bm[b] /= static_cast<double>(cnt[b]);
      s += (bm[b] - mean) * (bm[b] - mean);
    }
    se = std::sqrt(s / static_cast<double>(nb - 1) / static_cast<double>(nb));
  }
  se = std::max(se, 64 * std::numeric_limits<double>::epsilon() * std::fabs(mean));
  return {mean, se};
}

std::vector<double> monomial_values(const std::vector<MultiIndex>& mons, std::span<const double> v) {
  std::vector<double> out(mons.size());
  for (std::size_t i = 0; i < mons.size(); ++i) {
    double t = 1;
    for (std::size_t j = 0; j < v.size(); ++j)
      for (int e = 0; e < mons[i][j]; ++e) t *= v[j];
    out[i] = t;
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void require_section(const SectionFrame& frame) {
  if (frame.M < 1) throw std::domain_error("degenerate shape: the section {<p, r> = 1} is a single point");
}

}  // namespace

VectorXd SectionFrame::from_section(const VectorXd& c) const { return orthobasis().transpose() * c; }

VectorXd SectionFrame::coordinates(const VectorXd& f) const { return basis * (gram * f); }

FloatPoly SectionFrame::to_float_poly(const VectorXd& f) const {
  return FloatPoly(shape, monomials, std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
}

SectionFrame make_section_frame(const Shape& shape) {
  if (!shape.all_even()) throw std::domain_error("section frame requires even block degrees");
  check_exact_size(shape);
  SectionFrame frame;
  frame.shape = shape;
  frame.monomials = monomial_basis(shape);
  const std::size_t d = frame.monomials.size();
  RationalMatrix g = monomial_gram(shape);
  std::vector<std::vector<Rational>> vectors;
  vectors.push_back(radial_power(shape).coefficients());
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Rational> e(d);
    e[i] = 1;
    vectors.push_back(std::move(e));
  }
  frame.basis = orthonormalize(g, vectors);
  frame.gram = to_eigen(g);
  frame.M = d - 1;
  return frame;
}

VectorXd sample_direction(const SectionFrame& frame, std::mt19937_64& rng) {
  return frame.from_section(unit_gaussian(static_cast<Index>(frame.M), rng));
}

double sup_norm(const FloatPoly& f, const MinimizeOptions& options) {
  double lo = minimize_on_spheres(f, options).value;
  double hi = -minimize_on_spheres(f.negated(), options).value;
  return std::max(std::fabs(lo), std::fabs(hi));
}

EstimateReport estimate_mu_pos(const Shape& shape, const MonteCarloOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  SectionFrame frame = make_section_frame(shape);
  require_section(frame);
  const Index M = static_cast<Index>(frame.M);
  Index e = M;
  MatrixXd slice;
  if (opt.slice_dim) {
    e = static_cast<Index>(*opt.slice_dim);
    if (e < 1 || e > M) throw std::invalid_argument("slice dimension must lie in [1, M]");
    std::mt19937_64 rng(mix_seed(opt.seed, ~std::uint64_t{0}));
    MatrixXd a(M, e);
    for (Index j = 0; j < e; ++j) a.col(j) = gaussian(M, rng);
    Eigen::HouseholderQR<MatrixXd> qr(a);
    slice = qr.householderQ() * MatrixXd::Identity(M, e);
  }
  const std::size_t n = opt.samples;
  std::vector<double> g(n), sup(n);
  parallel_for(n, opt.workers, [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(opt.seed, i));
    VectorXd c = unit_gaussian(e, rng);
    if (opt.slice_dim) c = slice * c;
    FloatPoly f = frame.to_float_poly(frame.from_section(c));
    MinimizeOptions mo;
    mo.starts = opt.budget;
    mo.seed = mix_seed(opt.seed ^ 0x5eedULL, i);
    double lo = minimize_on_spheres(f, mo).value;
    double hi = -minimize_on_spheres(f.negated(), mo).value;
    g[i] = std::fabs(std::min(lo, 0.0));
    sup[i] = std::max(std::fabs(lo), std::fabs(hi));
  });

  EstimateReport rep;
  rep.tag = opt.slice_dim ? "mu_pos_slice" : "mu_pos";
  rep.samples = n;
  rep.seed = opt.seed;
  rep.workers = opt.workers;
  rep.values.resize(n);
  std::vector<double> unclipped(n);
  const double ed = static_cast<double>(e);
  for (std::size_t i = 0; i < n; ++i) {
    rep.values[i] = std::pow(std::max(g[i], 1e-9), -ed);
    unclipped[i] = std::pow(g[i], -ed);
  }
  auto [mean, se] = batch_mean_se(rep.values);
  rep.estimate = std::pow(mean, 1 / ed);
  rep.std_error = rep.estimate / (ed * mean) * se;
  const double mean_u = std::accumulate(unclipped.begin(), unclipped.end(), 0.0) / static_cast<double>(n);
  const double mean_sup = std::accumulate(sup.begin(), sup.end(), 0.0) / static_cast<double>(n);
  rep.extra["clipped"] = rep.estimate;
  rep.extra["unclipped"] = std::pow(mean_u, 1 / ed);
  rep.extra["jensen_lower"] = 1 / mean_sup;
  rep.extra["exponent"] = ed;
  if (!opt.slice_dim) rep.extra["normalized_by_dim_P"] = std::pow(mean, 1 / static_cast<double>(M + 1));
  rep.wall_time = seconds_since(start);
  return rep;
}

double sq_support(const SectionFrame& frame, const VectorXd& f) {
  const SquareFrame& sf = square_frame(frame.shape);
  VectorXd w = frame.gram * f;
  MatrixXd W(sf.q, sf.q);
  for (Index i = 0; i < sf.q; ++i)
    for (Index j = 0; j < sf.q; ++j) W(i, j) = w(sf.cls[static_cast<std::size_t>(i * sf.q + j)]);
  MatrixXd Q = sf.basis * W * sf.basis.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (Q + Q.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(sf.q - 1);
}

EstimateReport mean_width_sq(const Shape& shape, const MonteCarloOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  SectionFrame frame = make_section_frame(shape);
  require_section(frame);
  square_frame(shape);
  EstimateReport rep;
  rep.tag = "sq_half_mean_width";
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  rep.workers = opt.workers;
  rep.values.resize(opt.samples);
  parallel_for(opt.samples, opt.workers, [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(opt.seed, i));
    rep.values[i] = sq_support(frame, sample_direction(frame, rng));
  });
  auto [mean, se] = batch_mean_se(rep.values);
  rep.estimate = mean;
  rep.std_error = se;
  rep.extra["mean_width"] = 2 * mean;
  rep.wall_time = seconds_since(start);
  return rep;
}

VectorXd phi_coordinates(const SectionFrame& frame, std::span<const double> v) {
  auto mv = monomial_values(frame.monomials, v);
  Eigen::Map<const VectorXd> m(mv.data(), static_cast<Index>(mv.size()));
  return frame.orthobasis() * m / std::sqrt(static_cast<double>(frame.M));
}

EstimateReport isotropy_check(const Shape& shape, const MonteCarloOptions& opt, int num_q) {
  const auto start = std::chrono::steady_clock::now();
  SectionFrame frame = make_section_frame(shape);
  require_section(frame);
  const Index M = static_cast<Index>(frame.M);
  const MatrixXd ortho = frame.orthobasis();
  MatrixXd q(num_q, M);
  {
    std::mt19937_64 rng(mix_seed(opt.seed, ~std::uint64_t{0}));
    for (int j = 0; j < num_q; ++j) q.row(j) = unit_gaussian(M, rng).transpose();
  }
  // Fixed-size chunks reduced in order, so the result does not depend on the worker count.
  const std::size_t n = opt.samples;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  struct Partial {
    VectorXd sq, sq2, phi, phi2;
    double norm_dev = 0;
  };
  std::vector<Partial> parts(chunks);
  parallel_for(chunks, opt.workers, [&](std::size_t c) {
    Partial p{VectorXd::Zero(num_q), VectorXd::Zero(num_q), VectorXd::Zero(M), VectorXd::Zero(M), 0};
    for (std::size_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i) {
      std::mt19937_64 rng(mix_seed(opt.seed, i));
      auto v = random_sphere_point(shape, rng);
      auto mv = monomial_values(frame.monomials, v);
      VectorXd phi = ortho * Eigen::Map<const VectorXd>(mv.data(), static_cast<Index>(mv.size()));
      phi /= std::sqrt(static_cast<double>(M));
      p.norm_dev = std::max(p.norm_dev, std::fabs(phi.norm() - 1));
      VectorXd t = (q * phi).array().square() * static_cast<double>(M);
      p.sq += t;
      p.sq2 += t.cwiseProduct(t);
      p.phi += phi;
      p.phi2 += phi.cwiseProduct(phi);
    }
    parts[c] = std::move(p);
  });
  VectorXd sq = VectorXd::Zero(num_q), sq2 = VectorXd::Zero(num_q), phi = VectorXd::Zero(M), phi2 = VectorXd::Zero(M);
  double norm_dev = 0;
  for (const auto& p : parts) {
    sq += p.sq;
    sq2 += p.sq2;
    phi += p.phi;
    phi2 += p.phi2;
    norm_dev = std::max(norm_dev, p.norm_dev);
  }
  const double nd = static_cast<double>(n);
  EstimateReport rep;
  rep.tag = "isotropy";
  rep.samples = n;
  rep.seed = opt.seed;
  rep.workers = opt.workers;
  double worst = 0, worst_se = 0;
  for (int j = 0; j < num_q; ++j) {
    const double mean = sq(j) / nd;  // |q| = 1
    const double var = std::max(0.0, sq2(j) / nd - mean * mean);
    if (std::fabs(mean - 1) >= worst) {
      worst = std::fabs(mean - 1);
      worst_se = std::sqrt(var / nd);
    }
  }
  VectorXd centroid = phi / nd;
  const double total_var = (phi2 / nd - centroid.cwiseProduct(centroid)).sum();
  rep.estimate = worst;
  rep.std_error = worst_se;
  rep.extra["centroid_norm"] = centroid.norm();
  rep.extra["centroid_se"] = std::sqrt(std::max(0.0, total_var) / nd);
  rep.extra["max_phi_norm_deviation"] = norm_dev;
  rep.extra["M"] = static_cast<double>(M);
  rep.wall_time = seconds_since(start);
  return rep;
}

VectorXd sample_nonnegative_form(const SectionFrame& frame, std::mt19937_64& rng, double radius, double margin,
                                 const MinimizeOptions& options) {
  require_section(frame);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const VectorXd r = frame.basis.row(0).transpose();
  MinimizeOptions mo = options;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    VectorXd f = sample_direction(frame, rng);
    const double s = radius * std::pow(unif(rng), 1 / static_cast<double>(frame.M));
    VectorXd p = r + s * f;
    mo.seed = rng();
    if (minimize_on_spheres(frame.to_float_poly(p), mo).value >= margin) return p;
  }
  throw std::runtime_error("rejection sampling exhausted its attempts");
}

}  // namespace mhsos
