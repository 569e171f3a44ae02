#include "mhsos/float_poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace mhsos {

FloatPoly::FloatPoly(const Shape& shape, std::span<const MultiIndex> monomials, std::span<const double> coeffs)
    : shape_(shape), nvars_(shape.num_vars()) {
  if (monomials.size() != coeffs.size()) throw std::invalid_argument("FloatPoly: size mismatch");
  for (std::size_t t = 0; t < coeffs.size(); ++t) {
    if (coeffs[t] == 0) continue;
    if (monomials[t].size() != nvars_) throw std::invalid_argument("FloatPoly: exponent length mismatch");
    coeffs_.push_back(coeffs[t]);
    for (int e : monomials[t]) {
      exps_.push_back(e);
      max_exp_ = std::max(max_exp_, e);
    }
  }
}

FloatPoly::FloatPoly(const Polynomial& p) : shape_(p.shape()), nvars_(p.shape().num_vars()) {
  for (const auto& [m, c] : p.terms()) {
    coeffs_.push_back(c.get_d());
    for (int e : m) {
      exps_.push_back(e);
      max_exp_ = std::max(max_exp_, e);
    }
  }
}

void FloatPoly::fill_powers(std::span<const double> x, std::vector<double>& pw) const {
  const std::size_t stride = static_cast<std::size_t>(max_exp_) + 1;
  pw.resize(nvars_ * stride);
  for (std::size_t v = 0; v < nvars_; ++v) {
    double* row = pw.data() + v * stride;
    row[0] = 1;
    for (int e = 1; e <= max_exp_; ++e) row[e] = row[e - 1] * x[v];
  }
}

double FloatPoly::value(std::span<const double> x) const {
  thread_local std::vector<double> pw;
  fill_powers(x, pw);
  const std::size_t stride = static_cast<std::size_t>(max_exp_) + 1;
  double sum = 0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    const int* e = exps_.data() + t * nvars_;
    double term = coeffs_[t];
    for (std::size_t v = 0; v < nvars_; ++v) term *= pw[v * stride + e[v]];
    sum += term;
  }
  return sum;
}

double FloatPoly::value_and_gradient(std::span<const double> x, std::span<double> grad) const {
  thread_local std::vector<double> pw, prefix, suffix;
  fill_powers(x, pw);
  const std::size_t stride = static_cast<std::size_t>(max_exp_) + 1;
  prefix.resize(nvars_ + 1);
  suffix.resize(nvars_ + 1);
  std::fill(grad.begin(), grad.end(), 0.0);
  double sum = 0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    const int* e = exps_.data() + t * nvars_;
    prefix[0] = 1;
    for (std::size_t v = 0; v < nvars_; ++v) prefix[v + 1] = prefix[v] * pw[v * stride + e[v]];
    suffix[nvars_] = 1;
    for (std::size_t v = nvars_; v-- > 0;) suffix[v] = suffix[v + 1] * pw[v * stride + e[v]];
    sum += coeffs_[t] * prefix[nvars_];
    for (std::size_t v = 0; v < nvars_; ++v) {
      if (e[v] == 0) continue;
      grad[v] += coeffs_[t] * e[v] * pw[v * stride + e[v] - 1] * prefix[v] * suffix[v + 1];
    }
  }
  return sum;
}

Eigen::MatrixXd FloatPoly::hessian(std::span<const double> x) const {
  std::vector<double> pw;
  fill_powers(x, pw);
  const std::size_t stride = static_cast<std::size_t>(max_exp_) + 1;
  const auto n = static_cast<Eigen::Index>(nvars_);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> d(nvars_);
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    const int* e = exps_.data() + t * nvars_;
    for (std::size_t u = 0; u < nvars_; ++u) {
      if (e[u] == 0) continue;
      for (std::size_t v = u; v < nvars_; ++v) {
        if (e[v] == 0 || (u == v && e[u] < 2)) continue;
        std::copy(e, e + nvars_, d.begin());
        double c = coeffs_[t] * d[u];
        --d[u];
        c *= d[v];
        --d[v];
        for (std::size_t w = 0; w < nvars_; ++w) c *= pw[w * stride + d[w]];
        h(u, v) += c;
        if (u != v) h(v, u) += c;
      }
    }
  }
  return h;
}

FloatPoly FloatPoly::negated() const {
  FloatPoly out = *this;
  for (double& c : out.coeffs_) c = -c;
  return out;
}

}  // namespace mhsos
