#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "mhsos/polynomial.hpp"

namespace mhsos {

/// Binary64 copy of a polynomial, laid out for fast evaluation, gradients and Hessians.
class FloatPoly {
 public:
  FloatPoly(const Shape& shape, std::span<const MultiIndex> monomials, std::span<const double> coeffs);
  explicit FloatPoly(const Polynomial& p);

  const Shape& shape() const { return shape_; }
  std::size_t num_vars() const { return nvars_; }
  std::size_t num_terms() const { return coeffs_.size(); }

  double value(std::span<const double> x) const;
  /// Returns f(x) and writes the Euclidean gradient into grad.
  double value_and_gradient(std::span<const double> x, std::span<double> grad) const;
  Eigen::MatrixXd hessian(std::span<const double> x) const;

  FloatPoly negated() const;

 private:
  void fill_powers(std::span<const double> x, std::vector<double>& pw) const;

  Shape shape_;
  std::size_t nvars_ = 0;
  int max_exp_ = 0;
  std::vector<double> coeffs_;
  std::vector<int> exps_;  // num_terms x nvars
};

}  // namespace mhsos
