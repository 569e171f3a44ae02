#include "mhsos/cones.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "mhsos/harmonics.hpp"
#include "mhsos/measures.hpp"
#include "mhsos/transform.hpp"

namespace mhsos {

MinimizeResult pos_min(const Polynomial& p, const PosMinOptions& options) {
  if (options.starts <= 0) throw std::invalid_argument("pos_min: budget must be positive");
  return minimize_on_spheres(FloatPoly(p), options);
}

const char* to_string(SosVerdict v) {
  switch (v) {
    case SosVerdict::feasible: return "feasible";
    case SosVerdict::infeasible: return "infeasible";
    case SosVerdict::undecided: return "undecided";
  }
  return "?";
}

namespace {

using Eigen::MatrixXd;

// Index structure of b^T G b: entry (i, j) contributes to monomial class_of(i, j).
struct GramLayout {
  std::vector<MultiIndex> half_basis;
  std::size_t dim = 0;      // number of monomials of P_{N,K}
  std::vector<int> cls;     // q x q
  std::vector<int> count;   // per class, number of (i, j) pairs
  Eigen::Index q = 0;

  int at(Eigen::Index i, Eigen::Index j) const { return cls[static_cast<std::size_t>(i * q + j)]; }
};

GramLayout make_layout(const Shape& shape) {
  GramLayout l;
  l.half_basis = monomial_basis(shape.half());
  MonomialBasis full(shape);
  l.dim = full.size();
  l.q = static_cast<Eigen::Index>(l.half_basis.size());
  l.cls.resize(static_cast<std::size_t>(l.q * l.q));
  l.count.assign(l.dim, 0);
  MultiIndex m(shape.num_vars());
  for (Eigen::Index i = 0; i < l.q; ++i)
    for (Eigen::Index j = 0; j < l.q; ++j) {
      for (std::size_t v = 0; v < m.size(); ++v) m[v] = l.half_basis[i][v] + l.half_basis[j][v];
      int c = static_cast<int>(full.index_of(m));
      l.cls[static_cast<std::size_t>(i * l.q + j)] = c;
      ++l.count[static_cast<std::size_t>(c)];
    }
  return l;
}

std::vector<double> class_sums(const GramLayout& l, const MatrixXd& g) {
  std::vector<double> s(l.dim, 0.0);
  for (Eigen::Index i = 0; i < l.q; ++i)
    for (Eigen::Index j = 0; j < l.q; ++j) s[static_cast<std::size_t>(l.at(i, j))] += g(i, j);
  return s;
}

// Orthogonal projection onto the linear subspace {G : class sums = 0} plus a target shift.
void project_affine(const GramLayout& l, const std::vector<double>& target, MatrixXd& g) {
  auto s = class_sums(l, g);
  for (std::size_t c = 0; c < l.dim; ++c) s[c] = (s[c] - target[c]) / l.count[c];
  for (Eigen::Index i = 0; i < l.q; ++i)
    for (Eigen::Index j = 0; j < l.q; ++j) g(i, j) -= s[static_cast<std::size_t>(l.at(i, j))];
}

MatrixXd project_psd(const MatrixXd& g, double* min_eig = nullptr) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (g + g.transpose()));
  if (min_eig) *min_eig = es.eigenvalues()(0);
  Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

double max_residual(const GramLayout& l, const std::vector<double>& target, const MatrixXd& g) {
  auto s = class_sums(l, g);
  double r = 0;
  for (std::size_t c = 0; c < l.dim; ++c) r = std::max(r, std::fabs(s[c] - target[c]));
  return r;
}

MatrixXd moment_matrix(const GramLayout& l, const std::vector<double>& y) {
  MatrixXd m(l.q, l.q);
  for (Eigen::Index i = 0; i < l.q; ++i)
    for (Eigen::Index j = 0; j < l.q; ++j) m(i, j) = y[static_cast<std::size_t>(l.at(i, j))];
  return m;
}

// Least-squares moment vector of a symmetric matrix: class averages.
std::vector<double> structure_average(const GramLayout& l, const MatrixXd& m) {
  auto s = class_sums(l, m);
  for (std::size_t c = 0; c < l.dim; ++c) s[c] /= l.count[c];
  return s;
}

double min_eigenvalue(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Turns a candidate moment vector into a unit-trace PSD moment matrix, shifting toward the
// sphere moments (a strictly positive functional) when needed.
std::optional<SosCertificate> finalize_certificate(const GramLayout& l, std::vector<double> y,
                                                   const std::vector<double>& sphere_y,
                                                   const std::vector<double>& target, double sphere_min_eig) {
  MatrixXd m = moment_matrix(l, y);
  double tr = m.trace();
  if (!(tr > 0)) return std::nullopt;
  for (double& v : y) v /= tr;
  m = moment_matrix(l, y);
  double lmin = min_eigenvalue(m);
  if (lmin < 0) {
    double t = -lmin / sphere_min_eig * (1 + 1e-6) + 1e-15;
    for (std::size_t c = 0; c < y.size(); ++c) y[c] += t * sphere_y[c];
    m = moment_matrix(l, y);
    tr = m.trace();
    for (double& v : y) v /= tr;
    m = moment_matrix(l, y);
    lmin = min_eigenvalue(m);
  }
  SosCertificate c{y, m, lmin, dot(target, y)};
  if (c.min_eigenvalue >= -1e-9 && c.pairing <= -1e-6) return c;
  return std::nullopt;
}

std::optional<SosCertificate> extract_certificate(const GramLayout& l, const MatrixXd& g_affine,
                                                  const std::vector<double>& target,
                                                  const std::vector<double>& sphere_y, double sphere_min_eig) {
  // At the closest pair, P - G is PSD and lies in the range of the adjoint coefficient map.
  MatrixXd y_mat = project_psd(g_affine) - g_affine;
  std::vector<double> y = structure_average(l, y_mat);
  auto best = finalize_certificate(l, y, sphere_y, target, sphere_min_eig);
  if (best) return best;

  // Projected-gradient refinement of min y(p) over unit-trace PSD moment matrices.
  double tnorm = std::sqrt(dot(target, target));
  if (tnorm == 0) return std::nullopt;
  double tr = moment_matrix(l, y).trace();
  if (tr > 0)
    for (double& v : y) v /= tr;
  const double eta = 0.05 / tnorm;
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t c = 0; c < y.size(); ++c) y[c] -= eta * target[c];
    MatrixXd m = project_psd(moment_matrix(l, y));
    y = structure_average(l, m);
    double t = moment_matrix(l, y).trace();
    if (!(t > 0)) return std::nullopt;
    for (double& v : y) v /= t;
    if (it % 50 == 49) {
      if (auto c = finalize_certificate(l, y, sphere_y, target, sphere_min_eig)) return c;
    }
  }
  return std::nullopt;
}

// Levenberg-Marquardt on a rank-r factor G = L L^T, L seeded from the top eigenpairs of a
// PSD matrix. Alternating projections crawl when the Gram solutions sit on a low-rank face;
// the factored residual converges fast once r matches that rank.
struct FactorFit {
  MatrixXd gram;
  double residual = std::numeric_limits<double>::infinity();
};

FactorFit fit_factor(const GramLayout& l, const std::vector<double>& target,
                     const Eigen::SelfAdjointEigenSolver<MatrixXd>& es, Eigen::Index rank, double tol) {
  const Eigen::Index q = l.q;
  const auto dim = static_cast<Eigen::Index>(l.dim);
  MatrixXd f = es.eigenvectors().rightCols(rank) * es.eigenvalues().tail(rank).cwiseMax(0.0).cwiseSqrt().asDiagonal();
  auto residual = [&](const MatrixXd& x) {
    auto s = class_sums(l, x * x.transpose());
    Eigen::VectorXd r(dim);
    for (Eigen::Index c = 0; c < dim; ++c) r(c) = s[static_cast<std::size_t>(c)] - target[static_cast<std::size_t>(c)];
    return r;
  };
  Eigen::VectorXd r = residual(f);
  double lambda = 1e-3 * (1 + r.squaredNorm());
  for (int it = 0; it < 1000 && r.lpNorm<Eigen::Infinity>() > tol; ++it) {
    MatrixXd jac = MatrixXd::Zero(dim, q * rank);
    for (Eigen::Index a = 0; a < q; ++a)
      for (Eigen::Index j = 0; j < q; ++j) {
        const int c = l.at(a, j);
        for (Eigen::Index k = 0; k < rank; ++k) jac(c, a * rank + k) += 2 * f(j, k);
      }
    const MatrixXd jjt = jac * jac.transpose();
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      MatrixXd sys = jjt;
      sys.diagonal().array() += lambda;
      Eigen::VectorXd step = -jac.transpose() * sys.ldlt().solve(r);
      MatrixXd trial = f;
      for (Eigen::Index a = 0; a < q; ++a)
        for (Eigen::Index k = 0; k < rank; ++k) trial(a, k) += step(a * rank + k);
      Eigen::VectorXd rt = residual(trial);
      if (rt.squaredNorm() < r.squaredNorm()) {
        f = std::move(trial);
        r = std::move(rt);
        lambda = std::max(lambda / 3, 1e-15);
        improved = true;
      } else {
        lambda *= 4;
      }
    }
    if (!improved) break;
  }
  FactorFit fit;
  fit.gram = f * f.transpose();
  fit.residual = max_residual(l, target, fit.gram);
  return fit;
}

Eigen::Index numerical_rank(const Eigen::VectorXd& eigenvalues, double rel) {
  const double top = eigenvalues(eigenvalues.size() - 1);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) rank += eigenvalues(k) > rel * top;
  return rank;
}

// First pass: a few ranks seeded from the iterate. Second pass: the best fit is truncated to
// each small rank and refit, which escapes the slow over-parameterized regime.
std::optional<SosWitness> polish_factor(const GramLayout& l, const std::vector<double>& target, const MatrixXd& psd,
                                        double tol) {
  const Eigen::Index q = l.q;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(psd);
  if (!(es.eigenvalues()(q - 1) > 0)) return std::nullopt;
  const Eigen::Index rank = numerical_rank(es.eigenvalues(), 1e-8);
  FactorFit best;
  auto accept = [&](FactorFit fit) -> std::optional<SosWitness> {
    if (fit.residual <= tol) return SosWitness{l.half_basis, fit.gram, min_eigenvalue(fit.gram), fit.residual};
    if (fit.residual < best.residual) best = std::move(fit);
    return std::nullopt;
  };
  for (Eigen::Index r : std::set<Eigen::Index>{1, 2, 3, rank, rank + 1})
    if (r >= 1 && r <= q)
      if (auto w = accept(fit_factor(l, target, es, r, tol))) return w;
  Eigen::SelfAdjointEigenSolver<MatrixXd> refined(best.gram);
  const Eigen::Index cap = std::min<Eigen::Index>(q, numerical_rank(refined.eigenvalues(), 1e-8));
  for (Eigen::Index r = 1; r <= std::min<Eigen::Index>(cap, 8); ++r)
    if (auto w = accept(fit_factor(l, target, refined, r, tol))) return w;
  return std::nullopt;
}

SosStatus run_alternating_projections(const Shape& shape, const GramLayout& l, const std::vector<double>& target,
                                      const SosOptions& opt) {
  SosStatus st;
  // Sphere moments: their moment matrix is the usual Gram matrix of the half basis (PD).
  std::vector<double> sphere_y(l.dim);
  {
    MonomialBasis full(shape);
    for (std::size_t c = 0; c < l.dim; ++c) sphere_y[c] = product_moment(shape, full[c]).get_d();
  }
  const double sphere_min_eig = min_eigenvalue(moment_matrix(l, sphere_y));

  MatrixXd g = MatrixXd::Zero(l.q, l.q);
  project_affine(l, target, g);
  double omega = opt.relaxation;
  double gap = 0, gap_ref = std::numeric_limits<double>::infinity();
  int ref_iter = 0;
  int cert_attempts = 0;
  for (int it = 1; it <= opt.max_iters; ++it) {
    st.iterations = it;
    MatrixXd p = project_psd(g);
    if (max_residual(l, target, p) <= opt.residual_tol) {
      SosWitness w{l.half_basis, p, min_eigenvalue(p), max_residual(l, target, p)};
      st.verdict = SosVerdict::feasible;
      st.witness = std::move(w);
      st.final_gap = 0;
      return st;
    }
    MatrixXd next = g + omega * (p - g);
    project_affine(l, target, next);
    gap = (p - g).norm();
    g = std::move(next);
    st.final_gap = gap;

    if (it - ref_iter >= 200) {
      bool stalled = gap > 1e-8 && gap_ref - gap < 1e-3 * gap;
      if (stalled) {
        if (omega != 1.0) {
          omega = 1.0;  // plain projections settle onto the closest pair
        } else if (cert_attempts < 20) {
          ++cert_attempts;
          if (auto w = polish_factor(l, target, project_psd(g), opt.residual_tol)) {
            st.verdict = SosVerdict::feasible;
            st.witness = std::move(w);
            return st;
          }
          if (auto c = extract_certificate(l, g, target, sphere_y, sphere_min_eig)) {
            st.verdict = SosVerdict::infeasible;
            st.certificate = std::move(c);
            return st;
          }
        }
      }
      gap_ref = gap;
      ref_iter = it;
    }
  }
  if (auto w = polish_factor(l, target, project_psd(g), opt.residual_tol)) {
    st.verdict = SosVerdict::feasible;
    st.witness = std::move(w);
  } else if (auto c = extract_certificate(l, g, target, sphere_y, sphere_min_eig)) {
    st.verdict = SosVerdict::infeasible;
    st.certificate = std::move(c);
  }
  return st;
}

}  // namespace

SosStatus sos_feasibility(const Polynomial& p, const SosOptions& options) {
  const Shape& shape = p.shape();
  if (!shape.all_even()) throw std::domain_error("sos_feasibility requires even block degrees");
  GramLayout layout = make_layout(shape);
  std::vector<double> target = p.coefficients_double();
  const Polynomial r = radial_power(shape);
  const std::vector<double> r_coeffs = r.coefficients_double();

  SosStatus first;
  for (std::size_t s = 0; s < options.shifts.size(); ++s) {
    const double eps = options.shifts[s];
    std::vector<double> shifted = target;
    for (std::size_t c = 0; c < shifted.size(); ++c) shifted[c] += eps * r_coeffs[c];
    SosStatus st = run_alternating_projections(shape, layout, shifted, options);
    if (s == 0) {
      if (st.verdict != SosVerdict::undecided) return st;
      first = st;
      continue;
    }
    if (st.verdict == SosVerdict::feasible) {
      first.note = "boundary: p + " + std::to_string(eps) + " r^K is SOS, p itself not resolved";
      return first;
    }
  }
  first.note = "iteration cap reached without a witness or a verified certificate";
  return first;
}

bool verify_witness(const Polynomial& p, const SosWitness& w, double coeff_tol, double eig_tol) {
  const auto q = static_cast<Eigen::Index>(w.basis.size());
  if (w.gram.rows() != q || w.gram.cols() != q) return false;
  std::map<MultiIndex, double> recon;
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j) {
      MultiIndex m = w.basis[i];
      for (std::size_t v = 0; v < m.size(); ++v) m[v] += w.basis[j][v];
      recon[m] += w.gram(i, j);
    }
  double err = 0;
  for (const auto& [m, c] : p.terms()) {
    if (!recon.count(m)) return false;
  }
  for (const auto& [m, v] : recon) err = std::max(err, std::fabs(v - p.coefficient(m).get_d()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w.gram + w.gram.transpose()), Eigen::EigenvaluesOnly);
  return err <= coeff_tol && es.eigenvalues()(0) >= -eig_tol;
}

bool verify_certificate(const Polynomial& p, const SosCertificate& c, double eig_tol, double pairing_tol) {
  const Shape& shape = p.shape();
  auto half = monomial_basis(shape.half());
  MonomialBasis full(shape);
  if (c.moments.size() != full.size()) return false;
  const auto q = static_cast<Eigen::Index>(half.size());
  Eigen::MatrixXd m(q, q);
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j) {
      MultiIndex s = half[i];
      for (std::size_t v = 0; v < s.size(); ++v) s[v] += half[j][v];
      m(i, j) = c.moments[full.index_of(s)];
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  double trace = m.trace();
  double pairing = 0;
  for (const auto& [mono, coeff] : p.terms()) pairing += coeff.get_d() * c.moments[full.index_of(mono)];
  return std::fabs(trace - 1) <= 1e-9 && es.eigenvalues()(0) >= -eig_tol && pairing <= -pairing_tol;
}

Polynomial linpow_kernel(std::span<const Rational> v, const Shape& shape) {
  if (!on_sphere(shape, v)) throw std::invalid_argument("linpow_kernel: point is not on the product of unit spheres");
  std::vector<int> zeros(shape.num_blocks(), 0);
  Polynomial k = Polynomial::constant(shape.with_degrees(zeros), 1);
  for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
    std::vector<int> deg(shape.num_blocks(), 0);
    deg[b] = 1;
    Polynomial::TermMap t;
    for (std::size_t i = shape.offset(b); i < shape.offset(b + 1); ++i) {
      MultiIndex m(shape.num_vars(), 0);
      m[i] = 1;
      t.emplace(m, v[i]);
    }
    Polynomial linear(shape.with_degrees(deg), std::move(t));
    for (int e = 0; e < shape.block(b).degree; ++e) k = multiply(k, linear);
  }
  return k;
}

Rational l_extreme_check(std::span<const Rational> v, const Shape& shape) {
  Polynomial scaled = linpow_kernel(v, shape) * (1 / constant_A(shape));
  Polynomial diff = apply_T_spectral(kernel_poly(v, shape)) - scaled;
  Rational dev = 0;
  for (const auto& [m, c] : diff.terms()) dev = std::max(dev, Rational(abs(c)));
  Rational norm_dev = abs(usual_ip(scaled, radial_power(shape)) - 1);
  return std::max(dev, norm_dev);
}

}  // namespace mhsos
