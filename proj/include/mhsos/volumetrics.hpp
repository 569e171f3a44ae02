#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mhsos/float_poly.hpp"
#include "mhsos/polynomial.hpp"
#include "mhsos/sphere_opt.hpp"

namespace mhsos {

/// Usual-orthonormal coordinates on P_{N,K}. Row 0 of `basis` is r^K itself, rows 1..M span
/// U = {f : <f, r> = 0}. Rows hold monomial coefficients (monomial_basis order).
struct SectionFrame {
  Shape shape;
  std::vector<MultiIndex> monomials;
  Eigen::MatrixXd basis;  // dim_P x dim_P
  Eigen::MatrixXd gram;   // usual Gram matrix of the monomials
  std::size_t M = 0;

  /// Rows 1..M.
  Eigen::MatrixXd orthobasis() const { return basis.bottomRows(static_cast<Eigen::Index>(M)); }
  /// Monomial coefficients of sum_j c_j e_{j+1} (c has length M).
  Eigen::VectorXd from_section(const Eigen::VectorXd& c) const;
  /// Coordinates of coefficient vector f in the full frame (length dim_P).
  Eigen::VectorXd coordinates(const Eigen::VectorXd& f) const;
  double usual_ip(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const { return f.dot(gram * g); }
  FloatPoly to_float_poly(const Eigen::VectorXd& f) const;
};

/// Built by exact Gram-Schmidt (r^K first, then the monomials) and floated once.
/// Requires even degrees.
SectionFrame make_section_frame(const Shape& shape);

/// Uniform direction on the unit sphere of U; returns monomial coefficients.
Eigen::VectorXd sample_direction(const SectionFrame& frame, std::mt19937_64& rng);

/// max over S of |f|, from minimizing f and -f.
double sup_norm(const FloatPoly& f, const MinimizeOptions& options = {});

struct EstimateReport {
  std::string tag;
  double estimate = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double wall_time = 0;
  std::map<std::string, double> extra;  // companion quantities, keyed by name
  std::vector<double> values;           // per-sample integrand, in sample order
};

struct MonteCarloOptions {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  int budget = 16;  // multistarts per minimization
  std::optional<std::size_t> slice_dim;
};

/// (integral over the unit sphere of U of |min_S f|^{-M})^{1/M}, the normalized volume
/// radius of {p : <p, r> = 1, p >= 0} around r. Extras: clipped/unclipped estimates, the
/// Jensen lower bound 1/mean(sup_norm) and the 1/dim_P normalization.
EstimateReport estimate_mu_pos(const Shape& shape, const MonteCarloOptions& options = {});

/// Half the mean width of the section of the SOS cone: mean over f of the largest
/// eigenvalue of (<f, b_i b_j>) for a usual-orthonormal basis b of P_{N,K/2}.
EstimateReport mean_width_sq(const Shape& shape, const MonteCarloOptions& options = {});

/// Largest eigenvalue of (<f, b_i b_j>) for one f given by monomial coefficients.
double sq_support(const SectionFrame& frame, const Eigen::VectorXd& f);

/// Phi(v) = (p_v - r)/sqrt(M) in section coordinates, for v on S.
Eigen::VectorXd phi_coordinates(const SectionFrame& frame, std::span<const double> v);

/// Max relative deviation of E[M <q, Phi(v)>^2] / |q|^2 from 1 over `num_q` fixed random q.
/// Extras: centroid norm, its standard error, and the worst |Phi(v)| - 1.
EstimateReport isotropy_check(const Shape& shape, const MonteCarloOptions& options = {}, int num_q = 20);

/// Draws p = r + s f with f uniform in U and s = radius u^{1/M} until pos_min(p) >= margin.
/// Returns monomial coefficients.
Eigen::VectorXd sample_nonnegative_form(const SectionFrame& frame, std::mt19937_64& rng, double radius,
                                        double margin, const MinimizeOptions& options = {});

}  // namespace mhsos
