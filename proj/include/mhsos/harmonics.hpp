#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "mhsos/polynomial.hpp"

namespace mhsos {

/// Blockwise degree alpha of a Pi-harmonic component: alpha_i even, 0 <= alpha_i <= d_i.
using AlphaIndex = std::vector<int>;

/// The index set of the decomposition of P_{N,K}, ordered lexicographically (alpha = 0 first).
/// Requires even degrees.
std::vector<AlphaIndex> alpha_indices(const Shape& shape);

/// dim H_{n,j} = C(n+j-1, j) - C(n+j-3, j-2).
std::uint64_t dim_H(int n, int j);
/// prod_i dim_H(n_i, alpha_i).
std::uint64_t dim_H(const Shape& shape, const AlphaIndex& alpha);

/// Exact operations refuse shapes whose dim P exceeds this cap (default 2000).
std::uint64_t exact_size_cap();
void set_exact_size_cap(std::uint64_t cap);
/// Throws std::length_error when dim P of `shape` exceeds the cap.
void check_exact_size(const Shape& shape);

/// Basis of the joint kernel of all block Laplacians on P_{N,alpha}, where alpha is given as
/// the degrees of `alpha_shape`. Cached per shape.
const std::vector<Polynomial>& harmonic_basis(const Shape& alpha_shape);

/// The same space with a usual-orthogonal (unnormalized) basis and its squared norms.
struct OrthogonalHarmonics {
  std::vector<Polynomial> basis;
  std::vector<Rational> norms;
};
const OrthogonalHarmonics& orthogonal_harmonics(const Shape& alpha_shape);

/// p = sum_alpha r^{K-alpha} f_alpha with f_alpha Pi-harmonic of degree alpha.
struct HarmonicSplit {
  Shape shape;
  std::map<AlphaIndex, Polynomial> components;

  Polynomial reconstruct() const;
};

HarmonicSplit pi_decompose(const Polynomial& p);

/// True when every block of v has exact unit Euclidean norm.
bool on_sphere(const Shape& shape, std::span<const Rational> v);

/// Zonal harmonic q_{v,alpha} of H_{N,alpha}: <f, q_{v,alpha}> = f(v) for f in H_{N,alpha}.
Polynomial zonal(std::span<const Rational> v, const Shape& shape, const AlphaIndex& alpha);

/// Reproducing kernel p_v = sum_alpha r^{K-alpha} q_{v,alpha} of P_{N,K}.
Polynomial kernel_poly(std::span<const Rational> v, const Shape& shape);

}  // namespace mhsos
