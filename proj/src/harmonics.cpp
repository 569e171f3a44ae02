#include "mhsos/harmonics.hpp"

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <string>

#include "mhsos/linalg.hpp"
#include "mhsos/measures.hpp"

namespace mhsos {

namespace {

std::atomic<std::uint64_t> g_size_cap{2000};

template <typename T>
class ShapeCache {
 public:
  template <typename Build>
  const T& get(const Shape& shape, Build&& build) {
    const std::string key = shape.to_string();
    {
      std::lock_guard lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) return *it->second;
    }
    auto value = std::make_shared<const T>(build());
    std::lock_guard lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, std::move(value));
    return *it->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const T>> entries_;
};

void require_even(const Shape& shape, const char* what) {
  if (!shape.all_even()) throw std::domain_error(std::string(what) + " requires even block degrees");
}

std::vector<Polynomial> compute_harmonic_basis(const Shape& alpha_shape) {
  MonomialBasis domain(alpha_shape);
  // Stack the matrices of all block Laplacians.
  std::vector<MonomialBasis> targets;
  std::vector<std::size_t> row_offset{0};
  for (std::size_t b = 0; b < alpha_shape.num_blocks(); ++b) {
    auto deg = alpha_shape.degrees();
    deg[b] = std::max(0, deg[b] - 2);
    targets.emplace_back(alpha_shape.with_degrees(deg));
    row_offset.push_back(row_offset.back() + (alpha_shape.block(b).degree >= 2 ? targets.back().size() : 0));
  }
  RationalMatrix lap(row_offset.back(), domain.size());
  for (std::size_t j = 0; j < domain.size(); ++j) {
    Polynomial mono = Polynomial::monomial(alpha_shape, domain[j]);
    for (std::size_t b = 0; b < alpha_shape.num_blocks(); ++b) {
      if (alpha_shape.block(b).degree < 2) continue;
      Polynomial img = block_laplacian(mono, b);
      for (const auto& [m, c] : img.terms()) lap(row_offset[b] + targets[b].index_of(m), j) = c;
    }
  }
  std::vector<Polynomial> out;
  if (lap.rows() == 0) {
    for (std::size_t j = 0; j < domain.size(); ++j) out.push_back(Polynomial::monomial(alpha_shape, domain[j]));
    return out;
  }
  for (const auto& v : nullspace(lap)) out.push_back(Polynomial::from_coefficients(alpha_shape, v));
  return out;
}

struct Decomposer {
  std::vector<AlphaIndex> alphas;
  std::vector<std::size_t> first_column;  // per alpha, into the expanded basis
  RationalMatrix inverse;                 // maps monomial coefficients to expanded-basis coordinates
};

Decomposer build_decomposer(const Shape& shape) {
  Decomposer d;
  d.alphas = alpha_indices(shape);
  const std::size_t dim = shape.dim_P();
  MonomialBasis basis(shape);
  RationalMatrix columns(dim, dim);
  std::size_t col = 0;
  for (const auto& alpha : d.alphas) {
    d.first_column.push_back(col);
    std::vector<int> rest(shape.num_blocks());
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = shape.block(i).degree - alpha[i];
    Polynomial radial = radial_power(shape.with_degrees(rest));
    for (const auto& h : harmonic_basis(shape.with_degrees(alpha))) {
      if (col >= dim) throw std::logic_error("decomposition produced more than dim P columns");
      Polynomial e = multiply(radial, h);
      for (const auto& [m, c] : e.terms()) columns(basis.index_of(m), col) = c;
      ++col;
    }
  }
  if (col != dim) throw std::logic_error("harmonic dimensions do not sum to dim P");
  d.inverse = inverse(columns);
  return d;
}

ShapeCache<std::vector<Polynomial>> g_harmonic_cache;
ShapeCache<OrthogonalHarmonics> g_orthogonal_cache;
ShapeCache<Decomposer> g_decomposer_cache;

}  // namespace

std::vector<AlphaIndex> alpha_indices(const Shape& shape) {
  require_even(shape, "alpha_indices");
  std::vector<AlphaIndex> out{AlphaIndex{}};
  for (const auto& b : shape.blocks()) {
    std::vector<AlphaIndex> next;
    for (const auto& prefix : out) {
      for (int a = 0; a <= b.degree; a += 2) {
        AlphaIndex x = prefix;
        x.push_back(a);
        next.push_back(std::move(x));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::uint64_t dim_H(int n, int j) {
  if (n < 1 || j < 0) throw std::invalid_argument("dim_H needs n >= 1 and j >= 0");
  return binomial(n + j - 1, j) - binomial(n + j - 3, j - 2);
}

std::uint64_t dim_H(const Shape& shape, const AlphaIndex& alpha) {
  if (alpha.size() != shape.num_blocks()) throw std::invalid_argument("alpha has wrong block count");
  std::uint64_t d = 1;
  for (std::size_t i = 0; i < alpha.size(); ++i) d *= dim_H(shape.block(i).dim, alpha[i]);
  return d;
}

std::uint64_t exact_size_cap() { return g_size_cap.load(); }
void set_exact_size_cap(std::uint64_t cap) { g_size_cap.store(cap); }

void check_exact_size(const Shape& shape) {
  if (shape.dim_P() > exact_size_cap()) {
    throw std::length_error("dim P = " + std::to_string(shape.dim_P()) + " exceeds the exact-arithmetic cap of " +
                            std::to_string(exact_size_cap()));
  }
}

const std::vector<Polynomial>& harmonic_basis(const Shape& alpha_shape) {
  check_exact_size(alpha_shape);
  return g_harmonic_cache.get(alpha_shape, [&] { return compute_harmonic_basis(alpha_shape); });
}

const OrthogonalHarmonics& orthogonal_harmonics(const Shape& alpha_shape) {
  return g_orthogonal_cache.get(alpha_shape, [&] {
    OrthogonalHarmonics out;
    for (const auto& h : harmonic_basis(alpha_shape)) {
      Polynomial u = h;
      for (std::size_t l = 0; l < out.basis.size(); ++l) {
        Rational proj = usual_ip(h, out.basis[l]) / out.norms[l];
        if (proj != 0) u -= out.basis[l] * proj;
      }
      out.norms.push_back(usual_ip(u, u));
      out.basis.push_back(std::move(u));
    }
    return out;
  });
}

Polynomial HarmonicSplit::reconstruct() const {
  Polynomial sum(shape);
  for (const auto& [alpha, f] : components) {
    std::vector<int> rest(shape.num_blocks());
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = shape.block(i).degree - alpha[i];
    sum += multiply(radial_power(shape.with_degrees(rest)), f);
  }
  return sum;
}

HarmonicSplit pi_decompose(const Polynomial& p) {
  const Shape& shape = p.shape();
  require_even(shape, "pi_decompose");
  check_exact_size(shape);
  const Decomposer& d = g_decomposer_cache.get(shape, [&] { return build_decomposer(shape); });
  auto coords = d.inverse.apply(p.coefficients());
  HarmonicSplit split{shape, {}};
  for (std::size_t a = 0; a < d.alphas.size(); ++a) {
    Shape alpha_shape = shape.with_degrees(d.alphas[a]);
    Polynomial f(alpha_shape);
    const auto& hb = harmonic_basis(alpha_shape);
    for (std::size_t j = 0; j < hb.size(); ++j) {
      const Rational& x = coords[d.first_column[a] + j];
      if (x != 0) f += hb[j] * x;
    }
    split.components.emplace(d.alphas[a], std::move(f));
  }
  return split;
}

bool on_sphere(const Shape& shape, std::span<const Rational> v) {
  if (v.size() != shape.num_vars()) return false;
  for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
    Rational s = 0;
    for (std::size_t i = shape.offset(b); i < shape.offset(b + 1); ++i) s += v[i] * v[i];
    if (s != 1) return false;
  }
  return true;
}

Polynomial zonal(std::span<const Rational> v, const Shape& shape, const AlphaIndex& alpha) {
  if (!on_sphere(shape, v)) throw std::invalid_argument("zonal: point is not on the product of unit spheres");
  Shape alpha_shape = shape.with_degrees(alpha);
  if (!alpha_shape.all_even()) throw std::domain_error("zonal: alpha must be even");
  const auto& oh = orthogonal_harmonics(alpha_shape);
  Polynomial q(alpha_shape);
  for (std::size_t j = 0; j < oh.basis.size(); ++j) {
    Rational w = oh.basis[j].evaluate(v) / oh.norms[j];
    if (w != 0) q += oh.basis[j] * w;
  }
  return q;
}

Polynomial kernel_poly(std::span<const Rational> v, const Shape& shape) {
  require_even(shape, "kernel_poly");
  check_exact_size(shape);
  if (!on_sphere(shape, v)) throw std::invalid_argument("kernel_poly: point is not on the product of unit spheres");
  Polynomial p(shape);
  for (const auto& alpha : alpha_indices(shape)) {
    std::vector<int> rest(shape.num_blocks());
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = shape.block(i).degree - alpha[i];
    p += multiply(radial_power(shape.with_degrees(rest)), zonal(v, shape, alpha));
  }
  return p;
}

}  // namespace mhsos
