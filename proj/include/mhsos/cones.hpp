#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mhsos/polynomial.hpp"
#include "mhsos/sphere_opt.hpp"

namespace mhsos {

using PosMinOptions = MinimizeOptions;

/// Global minimum of p over S (equivalently, the sign of p on R^n). `starts` is the budget.
MinimizeResult pos_min(const Polynomial& p, const PosMinOptions& options = {});

enum class SosVerdict { feasible, infeasible, undecided };
const char* to_string(SosVerdict v);

/// PSD Gram matrix G over the half-degree monomial basis b with b^T G b = p.
struct SosWitness {
  std::vector<MultiIndex> basis;
  Eigen::MatrixXd gram;
  double min_eigenvalue = 0;
  double residual = 0;  // max coefficient error of the reconstruction
};

/// Linear functional y on P_{N,K} (one value per monomial, monomial_basis order) whose
/// moment matrix M_ij = y(b_i b_j) is PSD with unit trace while y(p) < 0.
struct SosCertificate {
  std::vector<double> moments;
  Eigen::MatrixXd moment_matrix;
  double min_eigenvalue = 0;
  double pairing = 0;
};

struct SosStatus {
  SosVerdict verdict = SosVerdict::undecided;
  std::optional<SosWitness> witness;
  std::optional<SosCertificate> certificate;
  int iterations = 0;
  double final_gap = 0;
  std::string note;
};

struct SosOptions {
  int max_iters = 50000;
  double residual_tol = 1e-9;
  double relaxation = 1.5;
  std::vector<double> shifts{0.0, 1e-6};
};

/// Gram-matrix SOS test by alternating projections between the affine slice of Gram matrices
/// representing p and the PSD cone. A persistent gap yields a dual certificate; `undecided`
/// is returned rather than an unverified answer.
SosStatus sos_feasibility(const Polynomial& p, const SosOptions& options = {});

/// Independent checks of the two invariants (reconstruction within coeff_tol with
/// min eigenvalue >= -eig_tol; moment matrix PSD to eig_tol with pairing <= -pairing_tol).
bool verify_witness(const Polynomial& p, const SosWitness& w, double coeff_tol = 1e-7, double eig_tol = 1e-9);
bool verify_certificate(const Polynomial& p, const SosCertificate& c, double eig_tol = 1e-9,
                        double pairing_tol = 1e-6);

/// K_v(x) = prod_i (v_i . x_i)^{d_i} for v on S.
Polynomial linpow_kernel(std::span<const Rational> v, const Shape& shape);

/// Max-abs deviation of T(p_v) from A^{-1} K_v, together with |<A^{-1} K_v, r^K> - 1|.
/// Zero when the identity holds.
Rational l_extreme_check(std::span<const Rational> v, const Shape& shape);

}  // namespace mhsos
