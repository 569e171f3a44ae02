#include "mhsos/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "mhsos/bounds.hpp"
#include "mhsos/cones.hpp"
#include "mhsos/harmonics.hpp"
#include "mhsos/measures.hpp"
#include "mhsos/poly_text.hpp"
#include "mhsos/transform.hpp"
#include "mhsos/volumetrics.hpp"

namespace mhsos {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string shape;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;  // 0: the command's default
  unsigned workers = 1;
  int budget = 0;             // 0: the command's default
  std::string format = "json";
  std::string dump;
  std::string constants;
  std::string poly;
  std::string poly_file;
  std::string point;
  std::string alpha;
  std::string ip = "usual";
  int n = 0, k = 0, variant = 1;
  std::size_t slice = 0;
  bool timing = false;
};

// Report payload plus the alternative CSV body for commands that have one.
struct Output {
  json result;
  std::string csv;
  bool ok = true;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("expected a comma-separated integer list: " + text);
    }
  }
  return out;
}

Shape shape_of(const RunConfig& cfg) {
  if (cfg.shape.empty()) throw UsageError("--shape is required");
  try {
    return parse_shape(cfg.shape);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Polynomial poly_of(const RunConfig& cfg, const Shape& shape) {
  std::string text = cfg.poly;
  if (!cfg.poly_file.empty()) {
    std::ifstream in(cfg.poly_file);
    if (!in) throw UsageError("cannot read " + cfg.poly_file);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  if (text.empty()) throw UsageError("a polynomial is required (--poly or --poly-file)");
  try {
    return parse_polynomial(text, shape);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<Rational> point_of(const RunConfig& cfg, const Shape& shape) {
  if (cfg.point.empty()) throw UsageError("--point is required");
  std::vector<Rational> v;
  std::stringstream ss(cfg.point);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (v.size() != shape.num_vars()) throw UsageError("--point needs one coordinate per variable");
  return v;
}

std::string alpha_key(const AlphaIndex& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json report_json(const EstimateReport& r, bool timing) {
  json j;
  j["tag"] = r.tag;
  j["estimate"] = r.estimate;
  j["std_error"] = r.std_error;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["workers"] = r.workers;
  for (const auto& [k, v] : r.extra) j[k] = v;
  if (timing) j["wall_time"] = r.wall_time;
  return j;
}

std::string report_csv(const EstimateReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "tag,estimate,std_error,samples,seed,workers";
  for (const auto& [k, v] : r.extra) out << ',' << k;
  out << '\n' << r.tag << ',' << r.estimate << ',' << r.std_error << ',' << r.samples << ',' << r.seed << ','
      << r.workers;
  for (const auto& [k, v] : r.extra) out << ',' << v;
  out << '\n';
  return out.str();
}

void write_dump(const std::string& path, const EstimateReport& r) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "index,value\n";
  for (std::size_t i = 0; i < r.values.size(); ++i) out << i << ',' << r.values[i] << '\n';
}

json bound_json(const BoundReport& rep) {
  json j;
  j["subject"] = rep.subject;
  json recs = json::array();
  for (const auto& r : rep.records) {
    json x;
    x["name"] = r.name;
    x["lower"] = r.lower;
    x["upper"] = r.upper;
    x["formula"] = r.formula;
    x["unresolved"] = r.unresolved;
    recs.push_back(std::move(x));
  }
  j["records"] = std::move(recs);
  json vals = json::object();
  for (const auto& [k, v] : rep.values) vals[k] = v;
  j["values"] = std::move(vals);
  return j;
}

std::string bound_csv(const BoundReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "subject,record,lower,upper,unresolved\n";
  for (const auto& r : rep.records) {
    std::string flags;
    for (const auto& f : r.unresolved) flags += (flags.empty() ? "" : ";") + f;
    out << '"' << rep.subject << "\"," << r.name << ',' << r.lower << ',' << r.upper << ",\"" << flags << "\"\n";
  }
  return out.str();
}

BoundConstants constants_of(const RunConfig& cfg) {
  try {
    return parse_constants(cfg.constants);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

MonteCarloOptions mc_options(const RunConfig& cfg, std::uint64_t default_samples) {
  MonteCarloOptions o;
  o.samples = cfg.samples ? cfg.samples : default_samples;
  o.seed = cfg.seed;
  o.workers = cfg.workers;
  if (cfg.budget) o.budget = cfg.budget;
  if (cfg.slice) o.slice_dim = cfg.slice;
  return o;
}

// ---- commands ----

Output cmd_dims(const RunConfig& cfg) {
  Shape s = shape_of(cfg);
  Output o;
  o.result["dim_P"] = s.dim_P();
  o.result["M"] = s.dim_P() - 1;
  // alpha_i runs over d_i, d_i - 2, ... down to the parity of d_i.
  json h = json::object();
  AlphaIndex a(s.num_blocks());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = s.block(i).degree % 2;
  while (true) {
    h[alpha_key(a)] = dim_H(s, a);
    std::size_t i = a.size();
    while (i > 0 && a[i - 1] + 2 > s.block(i - 1).degree) {
      a[i - 1] = s.block(i - 1).degree % 2;
      --i;
    }
    if (i == 0) break;
    a[i - 1] += 2;
  }
  o.result["dims_H"] = std::move(h);
  return o;
}

Output cmd_gram(const RunConfig& cfg) {
  Shape s = shape_of(cfg);
  check_exact_size(s);
  InnerProduct which;
  if (cfg.ip == "usual") which = InnerProduct::usual;
  else if (cfg.ip == "diff" || cfg.ip == "differential") which = InnerProduct::differential;
  else throw UsageError("--ip must be usual or diff");
  std::vector<Polynomial> basis;
  for (const auto& m : monomial_basis(s)) basis.push_back(Polynomial::monomial(s, m));
  GramMatrix g = gram(basis, which);
  Output o;
  o.result["inner_product"] = to_string(which);
  json b = json::array();
  for (const auto& p : basis) b.push_back(format_polynomial(p));
  o.result["basis"] = std::move(b);
  json rows = json::array();
  for (std::size_t i = 0; i < g.entries.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < g.entries.cols(); ++j) row.push_back(to_string(g.entries(i, j)));
    rows.push_back(std::move(row));
  }
  o.result["matrix"] = std::move(rows);
  return o;
}

Output cmd_decompose(const RunConfig& cfg) {
  Shape s = shape_of(cfg);
  Polynomial p = poly_of(cfg, s);
  HarmonicSplit split = pi_decompose(p);
  Output o;
  json comps = json::object();
  for (const auto& [a, f] : split.components) comps[alpha_key(a)] = format_polynomial(f);
  o.result["components"] = std::move(comps);
  o.result["round_trip"] = split.reconstruct() == p;
  return o;
}

Output cmd_zonal(const RunConfig& cfg) {
  Shape s = shape_of(cfg);
  auto v = point_of(cfg, s);
  if (!on_sphere(s, v)) throw std::domain_error("--point is not on the product of unit spheres");
  Output o;
  Polynomial q = cfg.alpha.empty() ? kernel_poly(v, s) : zonal(v, s, parse_int_list(cfg.alpha));
  o.result["kind"] = cfg.alpha.empty() ? "kernel" : "zonal";
  o.result["polynomial"] = format_polynomial(q);
  o.result["norm_squared"] = to_string(usual_ip(q, q));
  o.result["value_at_point"] = to_string(q.evaluate(v));
  return o;
}

Output cmd_t(const RunConfig& cfg, const std::string& what) {
  Shape s = shape_of(cfg);
  Output o;
  if (what == "spectrum") {
    json e = json::array();
    for (const auto& [a, entry] : spectrum(s).eigen) {
      json x;
      x["alpha"] = a;
      x["eigenvalue"] = to_string(entry.eigenvalue);
      x["multiplicity"] = entry.multiplicity;
      x["funk_hecke"] = funk_hecke_eigenvalue(s, a);
      e.push_back(std::move(x));
    }
    o.result["spectrum"] = std::move(e);
  } else if (what == "apply") {
    Polynomial p = poly_of(cfg, s);
    Polynomial spectral = apply_T_spectral(p);
    Polynomial direct = apply_T_direct(p);
    o.result["spectral"] = format_polynomial(spectral);
    o.result["direct"] = format_polynomial(direct);
    o.result["agree"] = spectral == direct;
  } else {
    DetT d = det_T(s);
    o.result["det"] = to_string(d.closed_form);
    if (d.direct) {
      o.result["det_direct"] = to_string(*d.direct);
      o.result["agree"] = *d.direct == d.closed_form;
    }
    o.result["log_det"] = d.log_det;
    o.result["root"] = d.root;
    BallRatioBounds b = ball_ratio_bounds(s);
    o.result["bracket_lower"] = b.det_lower;
    o.result["bracket_upper"] = b.det_upper;
    o.result["inside"] = b.det_inside;
  }
  return o;
}

Output cmd_cone(const RunConfig& cfg, const std::string& what) {
  Shape s = shape_of(cfg);
  Output o;
  if (what == "pos") {
    Polynomial p = poly_of(cfg, s);
    PosMinOptions opt;
    opt.seed = cfg.seed;
    if (cfg.budget) opt.starts = cfg.budget;
    MinimizeResult r = pos_min(p, opt);
    o.result["min"] = r.value;
    o.result["argmin"] = r.argmin;
    o.result["nonnegative"] = r.value >= -1e-9;
  } else if (what == "sos") {
    Polynomial p = poly_of(cfg, s);
    SosOptions opt;
    if (cfg.budget) opt.max_iters = cfg.budget;
    SosStatus st = sos_feasibility(p, opt);
    o.result["verdict"] = to_string(st.verdict);
    o.result["iterations"] = st.iterations;
    o.result["final_gap"] = st.final_gap;
    if (!st.note.empty()) o.result["note"] = st.note;
    if (st.witness) {
      json w;
      json basis = json::array();
      for (const auto& m : st.witness->basis) basis.push_back(format_polynomial(Polynomial::monomial(s.half(), m)));
      w["basis"] = std::move(basis);
      w["gram"] = matrix_json(st.witness->gram);
      w["min_eigenvalue"] = st.witness->min_eigenvalue;
      w["residual"] = st.witness->residual;
      w["verified"] = verify_witness(p, *st.witness);
      o.result["witness"] = std::move(w);
    }
    if (st.certificate) {
      json c;
      c["moments"] = st.certificate->moments;
      c["moment_matrix"] = matrix_json(st.certificate->moment_matrix);
      c["min_eigenvalue"] = st.certificate->min_eigenvalue;
      c["pairing"] = st.certificate->pairing;
      c["verified"] = verify_certificate(p, *st.certificate);
      o.result["certificate"] = std::move(c);
    }
  } else {
    auto v = point_of(cfg, s);
    Polynomial kv = linpow_kernel(v, s);
    o.result["K_v"] = format_polynomial(kv);
    o.result["A_inverse"] = to_string(1 / constant_A(s));
    o.result["t_image_deviation"] = to_string(l_extreme_check(v, s));
  }
  return o;
}

Output cmd_volume(const RunConfig& cfg, const std::string& what) {
  Shape s = shape_of(cfg);
  EstimateReport r;
  if (what == "pos") r = estimate_mu_pos(s, mc_options(cfg, 10000));
  else if (what == "sq-width") r = mean_width_sq(s, mc_options(cfg, 10000));
  else r = isotropy_check(s, mc_options(cfg, 100000));
  write_dump(cfg.dump, r);
  Output o;
  o.result = report_json(r, cfg.timing);
  o.csv = report_csv(r);
  return o;
}

Output cmd_bounds(const RunConfig& cfg, const std::string& what) {
  BoundConstants c = constants_of(cfg);
  Output o;
  if (what == "grid") {
    std::vector<Shape> shapes = cfg.shape.empty() ? default_bounds_grid() : std::vector<Shape>{shape_of(cfg)};
    o.csv = bounds_grid_csv(shapes, c);
    o.result["rows"] = std::count(o.csv.begin(), o.csv.end(), '\n') - 1;
  } else if (what == "corollary") {
    BoundReport r = corollary_bounds(cfg.n, cfg.k, cfg.variant, c);
    o.result = bound_json(r);
    o.csv = bound_csv(r);
  } else if (what == "blekherman") {
    BoundReport r = blekherman_bounds(cfg.n, cfg.k, c);
    o.result = bound_json(r);
    o.csv = bound_csv(r);
  } else {
    Shape s = shape_of(cfg);
    BoundReport thm = thm_main_bounds(s, c), sec = section_bounds(s, c);
    o.result["main"] = bound_json(thm);
    o.result["section"] = bound_json(sec);
    o.csv = bound_csv(thm) + bound_csv(sec).substr(bound_csv(sec).find('\n') + 1);
  }
  return o;
}

std::vector<Rational> rational_sphere_point(const Shape& shape) {
  std::vector<Rational> v;
  for (const auto& b : shape.blocks()) {
    if (b.dim == 1) {
      v.push_back(1);
    } else if (b.dim == 2) {
      v.push_back(Rational(3, 5));
      v.push_back(Rational(4, 5));
    } else {
      v.push_back(Rational(2, 3));
      v.push_back(Rational(1, 3));
      v.push_back(Rational(2, 3));
      for (int i = 3; i < b.dim; ++i) v.push_back(0);
    }
  }
  return v;
}

Output cmd_selftest(const RunConfig&) {
  Output o;
  json checks = json::array();
  auto record = [&](const std::string& name, const Shape& s, bool pass) {
    json c;
    c["check"] = name;
    c["shape"] = s.to_string();
    c["pass"] = pass;
    checks.push_back(std::move(c));
    o.ok = o.ok && pass;
  };
  for (const char* text : {"N=2 K=2", "N=2 K=4", "N=3 K=2", "N=2,2 K=2,2"}) {
    Shape s = parse_shape(text);
    MonomialBasis basis(s);
    std::vector<Polynomial> monos;
    for (const auto& m : basis.monomials()) monos.push_back(Polynomial::monomial(s, m));

    record("a_0 = 1", s, spectrum_eigenvalue(s, AlphaIndex(s.num_blocks(), 0)) == 1);
    bool same = true;
    for (const auto& p : monos) same = same && apply_T_direct(p) == apply_T_spectral(p);
    record("T direct = T spectral", s, same);
    DetT d = det_T(s);
    record("det T closed form = direct", s, d.direct && *d.direct == d.closed_form);
    bool lemma = true;
    for (std::size_t i = 0; i < monos.size(); ++i)
      for (std::size_t j = i; j < monos.size(); j += 3) {
        auto [lhs, rhs] = lemma_T_check(monos[i], monos[j]);
        lemma = lemma && lhs == rhs;
      }
    record("<T f, g>_D = C <f, g>", s, lemma);
    Polynomial mixed = monos.front() - Rational(1, 2) * monos.back();
    for (const auto& p : monos) mixed += Rational(1, 3) * p;
    HarmonicSplit split = pi_decompose(mixed);
    record("harmonic round trip", s, split.reconstruct() == mixed);
    std::vector<Polynomial> pieces;
    for (const auto& [alpha, f] : split.components) {
      std::vector<int> rest(s.num_blocks());
      for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = s.block(i).degree - alpha[i];
      pieces.push_back(multiply(radial_power(s.with_degrees(rest)), f));
    }
    bool ortho = true;
    for (std::size_t a = 0; a < pieces.size(); ++a)
      for (std::size_t b = a + 1; b < pieces.size(); ++b)
        ortho = ortho && usual_ip(pieces[a], pieces[b]) == 0 && diff_ip(pieces[a], pieces[b]) == 0;
    record("cross-degree orthogonality", s, ortho);
    auto v = rational_sphere_point(s);
    Polynomial pv = kernel_poly(v, s);
    bool repro = true;
    for (const auto& p : monos) repro = repro && usual_ip(p, pv) == p.evaluate(v);
    record("<f, p_v> = f(v)", s, repro);
    record("<p_v, p_v> = dim P", s, usual_ip(pv, pv) == Rational(static_cast<long>(s.dim_P())));
    record("T(p_v) = A^-1 K_v", s, l_extreme_check(v, s) == 0);
  }
  o.result["checks"] = std::move(checks);
  o.result["passed"] = o.ok;
  return o;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--shape", cfg.shape, "shape literal, e.g. \"N=3,2 K=2,2\"");
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
  sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--budget", cfg.budget, "multistarts (pos) or iteration cap (sos)")->check(CLI::PositiveNumber);
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--dump", cfg.dump, "per-sample CSV output path");
  sub->add_option("--constants", cfg.constants, "constant overrides, name=value,...");
  sub->add_option("--poly", cfg.poly, "polynomial text");
  sub->add_option("--poly-file", cfg.poly_file, "file holding the polynomial text");
  sub->add_flag("--timing", cfg.timing, "include wall time in reports");
}

json config_json(const RunConfig& cfg) {
  json c;
  c["shape"] = cfg.shape;
  c["seed"] = cfg.seed;
  c["samples"] = cfg.samples;
  c["workers"] = cfg.workers;
  c["budget"] = cfg.budget;
  c["format"] = cfg.format;
  c["constants"] = cfg.constants;
  if (!cfg.point.empty()) c["point"] = cfg.point;
  return c;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multihomogeneous forms: exact algebra, cones and volume estimates", "mhsos"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string command;
  std::function<Output()> action;

  auto leaf = [&](CLI::App* sub, std::string name, std::function<Output()> fn) {
    add_common(sub, cfg);
    sub->callback([&, name, fn] {
      command = name;
      action = fn;
    });
  };

  leaf(app.add_subcommand("dims", "dimensions of P and of the harmonic pieces"), "dims", [&] { return cmd_dims(cfg); });
  auto* gram_cmd = app.add_subcommand("gram", "exact Gram matrix of the monomial basis");
  gram_cmd->add_option("--ip", cfg.ip, "usual or diff");
  leaf(gram_cmd, "gram", [&] { return cmd_gram(cfg); });
  leaf(app.add_subcommand("decompose", "harmonic decomposition of a polynomial"), "decompose",
       [&] { return cmd_decompose(cfg); });
  auto* zonal_cmd = app.add_subcommand("zonal", "zonal harmonic or reproducing kernel at a point");
  zonal_cmd->add_option("--point", cfg.point, "rational point, comma separated");
  zonal_cmd->add_option("--alpha", cfg.alpha, "blockwise harmonic degree; omit for the kernel p_v");
  leaf(zonal_cmd, "zonal", [&] { return cmd_zonal(cfg); });

  auto* t_cmd = app.add_subcommand("t", "the averaging operator T");
  t_cmd->require_subcommand(1);
  for (std::string w : {"spectrum", "apply", "det"})
    leaf(t_cmd->add_subcommand(w), "t " + w, [&, w] { return cmd_t(cfg, w); });

  auto* cone_cmd = app.add_subcommand("cone", "membership in Pos, Sq and L");
  cone_cmd->require_subcommand(1);
  for (std::string w : {"pos", "sos", "lin"}) {
    auto* sub = cone_cmd->add_subcommand(w);
    if (w == "lin") sub->add_option("--point", cfg.point, "rational point on S");
    leaf(sub, "cone " + w, [&, w] { return cmd_cone(cfg, w); });
  }

  auto* vol_cmd = app.add_subcommand("volume", "Monte Carlo volume quantities");
  vol_cmd->require_subcommand(1);
  for (std::string w : {"pos", "sq-width", "isotropy"}) {
    auto* sub = vol_cmd->add_subcommand(w);
    if (w == "pos") sub->add_option("--slice", cfg.slice, "restrict to a random subspace of this dimension");
    leaf(sub, "volume " + w, [&, w] { return cmd_volume(cfg, w); });
  }

  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form bounds");
  bounds_cmd->require_subcommand(0, 1);
  add_common(bounds_cmd, cfg);
  bounds_cmd->callback([&, bounds_cmd] {
    if (!bounds_cmd->get_subcommands().empty()) return;  // a sub-subcommand already chose the action
    command = "bounds";
    action = [&] { return cmd_bounds(cfg, "shape"); };
  });
  for (std::string w : {"grid", "corollary", "blekherman"}) {
    auto* sub = bounds_cmd->add_subcommand(w);
    if (w != "grid") {
      sub->add_option("--n", cfg.n, "number of variables")->required();
      sub->add_option("--k", cfg.k, "half degree / number of blocks")->required();
      if (w == "corollary") sub->add_option("--variant", cfg.variant, "1 or 2");
    }
    leaf(sub, "bounds " + w, [&, w] { return cmd_bounds(cfg, w); });
  }
  leaf(app.add_subcommand("selftest", "exact-identity suite"), "selftest", [&] { return cmd_selftest(cfg); });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (!action) throw UsageError("no command given");
    Output o = action();
    if (cfg.format == "csv") {
      if (o.csv.empty()) throw UsageError("csv output is available for volume and bounds only");
      out << o.csv;
    } else if (command == "bounds grid") {
      out << o.csv;
    } else {
      json report;
      report["command"] = command;
      report["config"] = config_json(cfg);
      report["result"] = std::move(o.result);
      out << report.dump(2) << "\n";
    }
    return o.ok ? 0 : 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mhsos
