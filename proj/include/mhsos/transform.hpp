#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "mhsos/harmonics.hpp"
#include "mhsos/linalg.hpp"
#include "mhsos/polynomial.hpp"

namespace mhsos {

/// Eigenvalue of the averaging operator T on r^{K-alpha} H_{N,alpha}:
///   prod_i k_i! Gamma(n_i/2 + k_i) / ((k_i - alpha_i/2)! Gamma(n_i/2 + k_i + alpha_i/2)),
/// with k_i = d_i / 2. The Gamma ratio telescopes, so the value is rational.
Rational spectrum_eigenvalue(const Shape& shape, const AlphaIndex& alpha);

struct SpectrumEntry {
  Rational eigenvalue;
  std::uint64_t multiplicity = 0;
};

struct Spectrum {
  Shape shape;
  std::map<AlphaIndex, SpectrumEntry> eigen;
};

Spectrum spectrum(const Shape& shape);

/// T(f) = sum_alpha a_alpha r^{K-alpha} f_alpha, through the harmonic decomposition.
Polynomial apply_T_spectral(const Polynomial& f);

/// T(f)(x) = A^{-1} integral_S f(v) K(v, x) dsigma(v), expanding K in v-monomials and
/// integrating with exact sphere moments. Shares no code with apply_T_spectral.
Polynomial apply_T_direct(const Polynomial& f);

/// Matrix of T in the monomial basis (column j = image of monomial j), from the moment
/// expansion.
RationalMatrix t_matrix(const Shape& shape);

struct DetT {
  Rational closed_form;
  std::optional<Rational> direct;  // determinant of t_matrix, when dim P <= direct_limit
  double log_det = 0;
  double root = 0;  // |det T|^{1/dim P}
};

DetT det_T(const Shape& shape, std::uint64_t direct_limit = 64);

/// (<T f, g>_D, C_{N,K} <f, g>); the two entries agree.
std::pair<Rational, Rational> lemma_T_check(const Polynomial& f, const Polynomial& g);

/// Ball-volume comparison between the usual and differential unit balls.
struct BallRatioBounds {
  double max_eigenvalue = 0;           // A_{N,K}
  Rational min_eigenvalue;             // B_{N,K} = a_K
  double min_eigenvalue_binomial_form = 0;  // (prod C(n_i/2 + 2k_i, k_i))^{-1}
  Rational constant_C;
  double det_root = 0;
  double det_lower = 0;        // prod (1/(2k_i + n_i/2))^{k_i/2}
  double det_upper = 0;        // prod (1/(1 + n_i/(2k_i)))^{k_i/2}
  double det_upper_alt = 0;  // prod (k_i/(n_i/2 + k_i + 1))^{k_i/2}
  bool det_inside = false;
  double ball_ratio_scaled = 0;  // sqrt(C) (|B_D|/|B|)^{1/dim}
  bool ball_ratio_from_gram = false;
  double ball_lower = 0;
  double ball_upper = 0;        // e^{k/2} prod (1 + 1/(n_i/(2k_i) + 1))^{k_i/2}
  bool ball_inside = false;
};

BallRatioBounds ball_ratio_bounds(const Shape& shape);

/// a_alpha recomputed by Funk-Hecke: per block, Gauss-Legendre quadrature of
/// t^{d_i} P(t) against the sphere weight, P the degree-alpha_i orthogonal polynomial for that
/// weight with P(1) = 1. Floating point.
double funk_hecke_eigenvalue(const Shape& shape, const AlphaIndex& alpha);

/// Natural log of a positive rational without overflow.
double log_rational(const Rational& value);

}  // namespace mhsos
