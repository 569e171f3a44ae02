#include "mhsos/polynomial.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace mhsos {

int total_degree(const MultiIndex& m) { return std::accumulate(m.begin(), m.end(), 0); }

bool MonomialOrder::operator()(const MultiIndex& a, const MultiIndex& b) const {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

// Compositions of `degree` into `parts` nonnegative parts, lexicographically descending.
void compositions(int parts, int degree, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(degree);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int first = degree; first >= 0; --first) {
    cur.push_back(first);
    compositions(parts - 1, degree - first, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> monomial_basis(const Shape& shape) {
  std::vector<MultiIndex> result{MultiIndex{}};
  for (const auto& b : shape.blocks()) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    compositions(b.dim, b.degree, cur, parts);
    std::vector<MultiIndex> next;
    next.reserve(result.size() * parts.size());
    for (const auto& prefix : result) {
      for (const auto& p : parts) {
        MultiIndex m = prefix;
        m.insert(m.end(), p.begin(), p.end());
        next.push_back(std::move(m));
      }
    }
    result = std::move(next);
  }
  return result;
}

MonomialBasis::MonomialBasis(const Shape& shape) : shape_(shape), monomials_(monomial_basis(shape)) {
  for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
}

std::size_t MonomialBasis::index_of(const MultiIndex& m) const {
  auto it = index_.find(m);
  return it == index_.end() ? monomials_.size() : it->second;
}

Polynomial::Polynomial(Shape shape) : shape_(std::move(shape)) {}

Polynomial::Polynomial(Shape shape, TermMap terms) : shape_(std::move(shape)) {
  for (auto& [m, c] : terms) {
    check_key(m);
    c.canonicalize();  // mpq_class(p, q) does not reduce on its own
    if (c != 0) terms_.emplace(m, std::move(c));
  }
}

void Polynomial::check_key(const MultiIndex& m) const {
  if (m.size() != shape_.num_vars()) {
    throw std::invalid_argument("exponent vector length does not match the shape's variable count");
  }
  for (std::size_t b = 0; b < shape_.num_blocks(); ++b) {
    int sum = 0;
    for (std::size_t v = shape_.offset(b); v < shape_.offset(b + 1); ++v) {
      if (m[v] < 0) throw std::invalid_argument("negative exponent");
      sum += m[v];
    }
    if (sum != shape_.block(b).degree) {
      throw std::invalid_argument("monomial degree in block " + std::to_string(b + 1) +
                                  " does not match shape " + shape_.to_string());
    }
  }
}

Polynomial Polynomial::monomial(const Shape& shape, MultiIndex exponents, Rational coeff) {
  TermMap t;
  t.emplace(std::move(exponents), std::move(coeff));
  return Polynomial(shape, std::move(t));
}

Polynomial Polynomial::constant(const Shape& shape, Rational value) {
  return monomial(shape, MultiIndex(shape.num_vars(), 0), std::move(value));
}

Polynomial Polynomial::from_coefficients(const Shape& shape, std::span<const Rational> coeffs) {
  auto basis = monomial_basis(shape);
  if (coeffs.size() != basis.size()) throw std::invalid_argument("coefficient vector length != dim P");
  TermMap t;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coeffs[i] != 0) t.emplace(basis[i], coeffs[i]);
  }
  return Polynomial(shape, std::move(t));
}

Rational Polynomial::coefficient(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<Rational> Polynomial::coefficients() const {
  MonomialBasis basis(shape_);
  std::vector<Rational> out(basis.size());
  for (const auto& [m, c] : terms_) out[basis.index_of(m)] = c;
  return out;
}

std::vector<double> Polynomial::coefficients_double() const {
  auto exact = coefficients();
  std::vector<double> out(exact.size());
  for (std::size_t i = 0; i < exact.size(); ++i) out[i] = exact[i].get_d();
  return out;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != shape_.num_vars()) throw std::invalid_argument("evaluation point has wrong length");
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t v = 0; v < m.size(); ++v) {
      for (int e = 0; e < m[v]; ++e) t *= point[v];
    }
    sum += t;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (point.size() != shape_.num_vars()) throw std::invalid_argument("evaluation point has wrong length");
  double sum = 0;
  for (const auto& [m, c] : terms_) {
    double t = c.get_d();
    for (std::size_t v = 0; v < m.size(); ++v) {
      for (int e = 0; e < m[v]; ++e) t *= point[v];
    }
    sum += t;
  }
  return sum;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (!(other.shape_ == shape_)) throw std::invalid_argument("adding polynomials of different shapes");
  for (const auto& [m, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += -other; }

Polynomial& Polynomial::operator*=(const Rational& scale) {
  if (scale == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= scale;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial multiply(const Polynomial& p, const Polynomial& q) {
  if (!p.shape().same_dims(q.shape())) throw std::invalid_argument("multiply: block structures differ");
  std::vector<int> deg = p.shape().degrees();
  auto dq = q.shape().degrees();
  for (std::size_t i = 0; i < deg.size(); ++i) deg[i] += dq[i];
  Polynomial::TermMap out;
  for (const auto& [a, ca] : p.terms()) {
    for (const auto& [b, cb] : q.terms()) {
      MultiIndex m(a.size());
      for (std::size_t v = 0; v < a.size(); ++v) m[v] = a[v] + b[v];
      out[m] += ca * cb;
    }
  }
  return Polynomial(p.shape().with_degrees(deg), std::move(out));
}

Polynomial block_laplacian(const Polynomial& p, std::size_t block) {
  const Shape& s = p.shape();
  if (block >= s.num_blocks()) throw std::out_of_range("block index out of range");
  std::vector<int> deg = s.degrees();
  if (deg[block] < 2) {
    deg[block] = 0;
    return Polynomial(s.with_degrees(deg));
  }
  deg[block] -= 2;
  Polynomial::TermMap out;
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t v = s.offset(block); v < s.offset(block + 1); ++v) {
      if (m[v] < 2) continue;
      MultiIndex d = m;
      d[v] -= 2;
      out[d] += c * (m[v] * (m[v] - 1));
    }
  }
  return Polynomial(s.with_degrees(deg), std::move(out));
}

Polynomial apply_D(const Polynomial& f, const Polynomial& g) {
  if (f.shape().num_vars() != g.shape().num_vars() || !f.shape().same_dims(g.shape())) {
    throw std::invalid_argument("apply_D: variable blocks differ");
  }
  std::vector<int> deg = g.shape().degrees();
  auto df = f.shape().degrees();
  bool vanishes = false;
  for (std::size_t i = 0; i < deg.size(); ++i) {
    deg[i] -= df[i];
    if (deg[i] < 0) {
      vanishes = true;
      deg[i] = 0;
    }
  }
  Shape out_shape = g.shape().with_degrees(deg);
  if (vanishes) return Polynomial(out_shape);
  Polynomial::TermMap out;
  for (const auto& [a, ca] : f.terms()) {
    for (const auto& [b, cb] : g.terms()) {
      MultiIndex m(a.size());
      Rational factor = ca * cb;
      bool ok = true;
      for (std::size_t v = 0; v < a.size() && ok; ++v) {
        if (b[v] < a[v]) {
          ok = false;
          break;
        }
        m[v] = b[v] - a[v];
        for (int t = b[v]; t > m[v]; --t) factor *= t;
      }
      if (ok) out[m] += factor;
    }
  }
  return Polynomial(out_shape, std::move(out));
}

Polynomial radial_power(const Shape& shape) {
  std::vector<int> zeros(shape.num_blocks(), 0);
  Polynomial result = Polynomial::constant(shape.with_degrees(zeros), 1);
  for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
    int d = shape.block(b).degree;
    if (d % 2 != 0) throw std::domain_error("radial_power needs even degrees");
    if (d == 0) continue;
    std::vector<int> deg(shape.num_blocks(), 0);
    deg[b] = 2;
    Shape sq_shape = shape.with_degrees(deg);
    Polynomial::TermMap t;
    for (std::size_t v = shape.offset(b); v < shape.offset(b + 1); ++v) {
      MultiIndex m(shape.num_vars(), 0);
      m[v] = 2;
      t.emplace(m, 1);
    }
    Polynomial r2(sq_shape, std::move(t));
    for (int e = 0; e < d / 2; ++e) result = multiply(result, r2);
  }
  return result;
}

}  // namespace mhsos
