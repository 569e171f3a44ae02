#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mhsos/float_poly.hpp"

namespace mhsos {

/// Scales every block of x to unit norm (a zero block becomes the first basis vector).
void normalize_blocks(const Shape& shape, std::span<double> x);

/// Uniform point on S = S^{n_1-1} x ... x S^{n_m-1} (Gaussian, normalized per block).
std::vector<double> random_sphere_point(const Shape& shape, std::mt19937_64& rng);

/// Projects an ambient vector onto the tangent space of S at x, in place.
void project_tangent(const Shape& shape, std::span<const double> x, std::span<double> v);

/// Sphere-retracted (Riemannian) gradient of f at x.
std::vector<double> riemannian_gradient(const FloatPoly& f, std::span<const double> x);

struct MinimizeOptions {
  int starts = 64;
  std::uint64_t seed = 0;
  int max_iters = 300;
  int polish_steps = 20;
  bool grid = true;
  std::size_t grid_cap = 1024;
  double grad_tol = 1e-12;
};

struct MinimizeResult {
  double value = 0;
  std::vector<double> argmin;
};

/// Multistart minimization of f over S: a coarse product grid (all n_i <= 4) seeds half the
/// starts, the rest are uniform random. Each start runs Armijo-backtracked Riemannian
/// gradient descent followed by saddle-free Newton polish. Deterministic given the seed.
MinimizeResult minimize_on_spheres(const FloatPoly& f, const MinimizeOptions& options);

}  // namespace mhsos
