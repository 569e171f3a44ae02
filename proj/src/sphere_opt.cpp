#include "mhsos/sphere_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mhsos {

void normalize_blocks(const Shape& shape, std::span<double> x) {
  for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
    double s = 0;
    for (std::size_t v = shape.offset(b); v < shape.offset(b + 1); ++v) s += x[v] * x[v];
    if (s == 0) {
      x[shape.offset(b)] = 1;
      continue;
    }
    s = 1 / std::sqrt(s);
    for (std::size_t v = shape.offset(b); v < shape.offset(b + 1); ++v) x[v] *= s;
  }
}

std::vector<double> random_sphere_point(const Shape& shape, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> x(shape.num_vars());
  for (double& v : x) v = normal(rng);
  normalize_blocks(shape, x);
  return x;
}

void project_tangent(const Shape& shape, std::span<const double> x, std::span<double> v) {
  for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
    double d = 0;
    for (std::size_t i = shape.offset(b); i < shape.offset(b + 1); ++i) d += x[i] * v[i];
    for (std::size_t i = shape.offset(b); i < shape.offset(b + 1); ++i) v[i] -= d * x[i];
  }
}

std::vector<double> riemannian_gradient(const FloatPoly& f, std::span<const double> x) {
  std::vector<double> g(x.size());
  f.value_and_gradient(x, g);
  project_tangent(f.shape(), x, g);
  return g;
}

namespace {

double norm2(std::span<const double> v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

// Primitive integer directions in [-g, g]^n, normalized.
std::vector<std::vector<double>> block_grid(int n, int g) {
  std::vector<std::vector<double>> pts;
  std::vector<int> c(n, -g);
  while (true) {
    int gcd = 0;
    for (int v : c) gcd = std::gcd(gcd, std::abs(v));
    if (gcd == 1) {
      std::vector<double> p(c.begin(), c.end());
      double s = std::sqrt(norm2(p));
      for (double& v : p) v /= s;
      pts.push_back(std::move(p));
    }
    int i = 0;
    while (i < n && c[i] == g) c[i++] = -g;
    if (i == n) break;
    ++c[i];
  }
  return pts;
}

std::vector<std::vector<double>> product_grid(const Shape& shape, std::size_t cap) {
  if (shape.max_dim() > 4) return {};
  std::vector<int> g(shape.num_blocks(), 1);
  auto size_for = [&](const std::vector<int>& gs) {
    std::size_t total = 1;
    for (std::size_t b = 0; b < gs.size(); ++b) total *= block_grid(shape.block(b).dim, gs[b]).size();
    return total;
  };
  if (size_for(g) > cap) return {};
  // Refine blocks round-robin while the product stays under the cap.
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (shape.block(b).dim == 1) continue;
      ++g[b];
      if (g[b] > 12 || size_for(g) > cap) {
        --g[b];
      } else {
        grew = true;
      }
    }
  }
  std::vector<std::vector<double>> pts{std::vector<double>{}};
  for (std::size_t b = 0; b < g.size(); ++b) {
    auto blk = block_grid(shape.block(b).dim, g[b]);
    std::vector<std::vector<double>> next;
    for (const auto& pre : pts)
      for (const auto& q : blk) {
        auto p = pre;
        p.insert(p.end(), q.begin(), q.end());
        next.push_back(std::move(p));
      }
    pts = std::move(next);
  }
  return pts;
}

// Grids depend only on the shape; volume estimates ask for the same one thousands of times.
const std::vector<std::vector<double>>& cached_grid(const Shape& shape, std::size_t cap) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, std::size_t>, std::vector<std::vector<double>>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(shape.to_string(), cap);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, product_grid(shape, cap)).first;
  return it->second;
}

struct LocalResult {
  double value;
  std::vector<double> x;
};

LocalResult descend(const FloatPoly& f, std::vector<double> x, const MinimizeOptions& opt) {
  const Shape& shape = f.shape();
  const std::size_t n = x.size();
  std::vector<double> g(n), trial(n), gtrial(n);
  double fx = f.value_and_gradient(x, g);
  project_tangent(shape, x, g);
  double step = 0.1;
  for (int it = 0; it < opt.max_iters; ++it) {
    double gg = norm2(g);
    if (gg < opt.grad_tol * opt.grad_tol) break;
    bool accepted = false;
    while (step > 1e-16) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * g[i];
      normalize_blocks(shape, trial);
      double ft = f.value(trial);
      if (ft <= fx - 1e-4 * step * gg) {
        x.swap(trial);
        fx = f.value_and_gradient(x, g);
        project_tangent(shape, x, g);
        step *= 2;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }

  // Saddle-free Newton polish on the tangent space.
  for (int it = 0; it < opt.polish_steps; ++it) {
    if (norm2(g) < 1e-30) break;
    std::vector<double> full(n);
    f.value_and_gradient(x, full);
    Eigen::MatrixXd h = f.hessian(x);
    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
      double lambda = 0;
      for (std::size_t i = shape.offset(b); i < shape.offset(b + 1); ++i) lambda += x[i] * full[i];
      for (std::size_t i = shape.offset(b); i < shape.offset(b + 1); ++i) {
        h(i, i) -= lambda;
        for (std::size_t j = shape.offset(b); j < shape.offset(b + 1); ++j) proj(i, j) -= x[i] * x[j];
      }
    }
    Eigen::MatrixXd m = proj * h * proj + (Eigen::MatrixXd::Identity(n, n) - proj);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::Map<const Eigen::VectorXd> gv(g.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd coeff = es.eigenvectors().transpose() * gv;
    for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) /= std::max(std::fabs(es.eigenvalues()(i)), 1e-12);
    Eigen::VectorXd dir = -(es.eigenvectors() * coeff);
    double t = 1;
    bool improved = false;
    for (int bt = 0; bt < 30; ++bt, t *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + t * dir(static_cast<Eigen::Index>(i));
      normalize_blocks(shape, trial);
      double ft = f.value_and_gradient(trial, gtrial);
      project_tangent(shape, trial, gtrial);
      if (ft < fx || (ft == fx && norm2(gtrial) < norm2(g))) {
        x.swap(trial);
        g.swap(gtrial);
        fx = ft;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return {fx, std::move(x)};
}

}  // namespace

MinimizeResult minimize_on_spheres(const FloatPoly& f, const MinimizeOptions& opt) {
  if (opt.starts <= 0) throw std::invalid_argument("minimization budget must be positive");
  const Shape& shape = f.shape();
  std::vector<std::vector<double>> starts;
  if (opt.grid) {
    const auto& grid = cached_grid(shape, opt.grid_cap);
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ranked.emplace_back(f.value(grid[i]), i);
    const std::size_t keep = std::min<std::size_t>(grid.size(), std::max(1, opt.starts / 2));
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end());
    for (std::size_t i = 0; i < keep; ++i) starts.push_back(grid[ranked[i].second]);
  }
  std::mt19937_64 rng(opt.seed);
  while (starts.size() < static_cast<std::size_t>(opt.starts)) starts.push_back(random_sphere_point(shape, rng));

  MinimizeResult best{std::numeric_limits<double>::infinity(), {}};
  for (auto& s : starts) {
    LocalResult r = descend(f, std::move(s), opt);
    if (r.value < best.value) {
      best.value = r.value;
      best.argmin = std::move(r.x);
    }
  }
  return best;
}

}  // namespace mhsos
