#include "mhsos/bounds.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mhsos/transform.hpp"

namespace mhsos {

namespace {

struct HalfBlock {
  double n, k;
};

std::vector<HalfBlock> half_blocks(const Shape& shape) {
  if (!shape.all_even()) throw std::domain_error("bounds require even block degrees");
  std::vector<HalfBlock> out;
  for (const auto& b : shape.blocks()) out.push_back({static_cast<double>(b.dim), b.degree / 2.0});
  return out;
}

// sum over blocks with k > 0 of (k/2) log(term(n, k)); zero-degree blocks contribute 1.
template <typename Fn>
double log_prod_half_k(const std::vector<HalfBlock>& blocks, Fn term) {
  double s = 0;
  for (const auto& b : blocks)
    if (b.k > 0) s += (b.k / 2) * std::log(term(b.n, b.k));
  return s;
}

double prod_2k_plus_1(const std::vector<HalfBlock>& blocks) {
  double p = 1;
  for (const auto& b : blocks) p *= 2 * b.k + 1;
  return p;
}

double max_n(const std::vector<HalfBlock>& blocks) {
  double m = 0;
  for (const auto& b : blocks) m = std::max(m, b.n);
  return m;
}

void flag(BoundRecord& r, const BoundConstants& c, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (!c.resolved(n)) r.unresolved.emplace_back(n);
}

double log_factorial(double n) { return std::lgamma(n + 1); }

}  // namespace

bool BoundConstants::resolved(const std::string& name) const {
  if (name == "c" || name == "c0") return true;
  return explicit_set.count(name) > 0;
}

BoundConstants parse_constants(std::string_view text) {
  BoundConstants c;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("constant override needs name=value: " + item);
    std::string name = item.substr(0, eq);
    if (!c.values.count(name)) throw std::invalid_argument("unknown constant: " + name);
    std::size_t used = 0;
    double v = std::stod(item.substr(eq + 1), &used);
    if (used != item.size() - eq - 1 || !(v > 0) || !std::isfinite(v))
      throw std::invalid_argument("constant must be a positive number: " + item);
    c.values[name] = v;
    c.explicit_set.insert(name);
  }
  return c;
}

const BoundRecord& BoundReport::record(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return r;
  throw std::out_of_range("no bound record named " + name);
}

BoundReport thm_main_bounds(const Shape& shape, const BoundConstants& c) {
  auto blocks = half_blocks(shape);
  const double m = static_cast<double>(blocks.size());
  const double h = max_n(blocks);
  const double p21 = prod_2k_plus_1(blocks);
  BoundReport rep;
  rep.subject = shape.to_string();

  BoundRecord pos{"pos", 1 / (std::pow(4.0, m) * std::sqrt(h) * std::sqrt(p21)), c.get("c0"),
                  "1/(4^m sqrt(max n)) prod (2k+1)^(-1/2) <= mu <= c0", {}};
  rep.values["pos_lower_single_16"] = 1 / std::sqrt(16 * h * p21);

  const double log_sq_lower = log_prod_half_k(blocks, [](double n, double k) { return 1 / (2 * k + n / 2); });
  const double cc = c.get("c");
  BoundRecord sq{"sq", c.get("c1") * std::exp(log_sq_lower),
                 c.get("c2") * std::exp(log_prod_half_k(blocks, [cc](double n, double k) { return cc * k / (n + k); })),
                 "c1 prod (2k+n/2)^(-k/2) <= mu <= c2 prod (c k/(n+k))^(k/2)", {}};
  flag(sq, c, {"c1", "c2"});
  rep.values["sq_lower_det_bracket"] = std::exp(log_sq_lower);

  double log_lin_upper = 0.5 * std::log(h);
  for (const auto& b : blocks) log_lin_upper += std::log(4.0) + 0.5 * std::log(2 * b.k + 1);
  log_lin_upper += log_prod_half_k(blocks, [](double n, double k) { return 2 * k / n; });
  BoundRecord lin{"lin", c.get("c3") * std::exp(log_sq_lower), std::exp(log_lin_upper),
                  "c3 prod (2k+n/2)^(-k/2) <= mu <= sqrt(max n) prod 4 (2k+1)^(1/2) prod (n/(2k))^(-k/2)", {}};
  flag(lin, c, {"c3"});

  rep.records = {pos, sq, lin};
  return rep;
}

BoundReport corollary_bounds(int n, int k, int variant, const BoundConstants& c) {
  BoundReport rep;
  const double nd = n, kd = k;
  if (variant == 1) {
    if (n < 3 || k < 2) throw std::invalid_argument("variant 1 needs n >= 3 and k >= 2");
    rep.subject = "N=2," + std::to_string(n - 2) + " K=" + std::to_string(2 * k - 2) + ",2";
    BoundRecord r{"sq_over_pos",
                  c.get("c1") * std::pow(2 * kd - 1, (-kd + 1) / 2) / std::sqrt(nd + 2), 1.0,
                  "c1 (2k-1)^((1-k)/2) (n+2)^(-1/2) <= ratio <= 1", {}};
    flag(r, c, {"c1"});
    rep.records.push_back(r);
  } else if (variant == 2) {
    if (k < 1 || n < k || n % k != 0) throw std::invalid_argument("variant 2 needs k >= 1 dividing n");
    std::string dims, degs;
    for (int i = 0; i < k; ++i) {
      dims += (i ? "," : "") + std::to_string(n / k);
      degs += i ? ",2" : "2";
    }
    rep.subject = "N=" + dims + " K=" + degs;
    const double cc = c.get("c") / 48;
    BoundRecord r{"sq_over_pos", c.get("c1") * std::pow(2 + nd / (2 * kd), -kd / 2),
                  c.get("c2") * std::pow(nd / (cc * kd), (-kd + 1) / 2),
                  "c1 (2+n/(2k))^(-k/2) <= ratio <= c2 (n/(c k))^((1-k)/2), c = 2^10 e/48", {}};
    flag(r, c, {"c1", "c2"});
    rep.records.push_back(r);
    rep.values["upper_exponent"] = (-kd + 1) / 2;
  } else {
    throw std::invalid_argument("corollary variant must be 1 or 2");
  }
  return rep;
}

BoundReport blekherman_bounds(int n, int k, const BoundConstants& c) {
  if (n < 3 || k < 2) throw std::invalid_argument("Blekherman bounds need n >= 3 and k >= 2");
  const double nd = n, kd = k;
  const double log_lower = (kd + 1) / 2 * std::log(nd) - kd * std::log(nd / 2 + 2 * kd) + log_factorial(kd) +
                           log_factorial(kd - 1) - 2 * kd * std::log(4.0) - log_factorial(2 * kd);
  const double log_upper = 2 * kd * std::log(4.0) + log_factorial(2 * kd) + 0.5 * std::log(kd) - log_factorial(kd) +
                           (-kd + 1) / 2 * std::log(nd);
  BoundReport rep;
  rep.subject = "N=" + std::to_string(n) + " K=" + std::to_string(2 * k);
  BoundRecord r{"sq_over_pos", c.get("c1") * std::exp(log_lower), c.get("c2") * std::exp(log_upper),
                "n^((k+1)/2)/(n/2+2k)^k c1 k!(k-1)!/(4^(2k)(2k)!) <= ratio <= c2 4^(2k)(2k)! sqrt(k)/k! n^((1-k)/2)",
                {}};
  flag(r, c, {"c1", "c2"});
  rep.records.push_back(r);
  rep.values["upper_n_exponent"] = (-kd + 1) / 2;
  rep.values["lower_n_exponent"] = (kd + 1) / 2 - kd;
  return rep;
}

BoundReport section_bounds(const Shape& shape, const BoundConstants& c) {
  auto blocks = half_blocks(shape);
  const double h = max_n(blocks);
  const double p21 = prod_2k_plus_1(blocks);
  const bool two_blocks = blocks.size() == 2;
  const double M = static_cast<double>(shape.dim_P()) - 1;
  BoundReport rep;
  rep.subject = shape.to_string();
  auto caveat = [&](BoundRecord& r) {
    if (!two_blocks) r.unresolved.emplace_back("two-block display evaluated at m=" + std::to_string(blocks.size()));
  };

  BoundRecord pos{"pos_section", 1 / std::sqrt(16 * h * p21), 5.0,
                  "1/sqrt(16 max n prod (2k+1)) <= (|Pos|/|B|)^(1/M) <= 5", {}};
  caveat(pos);
  if (M >= 1) {
    const double log_ball = M / 2 * std::log(std::numbers::pi) - std::lgamma(M / 2 + 1);
    // (M+1)^((M+1)/2) / (M! |B_M|), the M^(M/2) factors cancelling.
    rep.values["pos_upper_lyz"] = std::exp(((M + 1) / 2 * std::log(M + 1) - log_factorial(M) - log_ball) / M);
    rep.values["pos_upper_stirling"] = std::exp(1.0 - 0.5 * std::log(M) - log_ball / M);
  }

  const double cc = c.get("c");
  double log_sq_upper = std::log(4.5);
  for (const auto& b : blocks) log_sq_upper += b.k / 2 * std::log(cc);
  log_sq_upper += log_prod_half_k(blocks, [](double n, double k) { return k / (n + k); });
  const double log_det_lower = log_prod_half_k(blocks, [](double n, double k) { return 1 / (2 * k + n / 2); });
  const double sqrt_crs = std::sqrt(c.get("c_rs"));
  BoundRecord sq{"sq_section", sqrt_crs * std::exp(log_det_lower), std::exp(log_sq_upper),
                 "sqrt(c_rs) prod (1/(2k+n/2))^(k/2) <= (|Sq|/|B|)^(1/M) <= 9/2 (2^10 e)^(sum k/2) prod (k/(n+k))^(k/2)",
                 {}};
  flag(sq, c, {"c_rs"});
  caveat(sq);
  BallRatioBounds ball = ball_ratio_bounds(shape);
  rep.values["sq_lower_ball_ratio"] = sqrt_crs * ball.ball_ratio_scaled;
  rep.values["det_root"] = ball.det_root;
  rep.values["constant_C"] = ball.constant_C.get_d();

  double log_lin_upper = std::log(4.0) + 0.5 * std::log(h * p21);
  log_lin_upper += log_prod_half_k(blocks, [](double n, double k) { return 1 / (1 + n / (2 * k)); });
  BoundRecord lin{"lin_section",
                  c.get("c_lin") * std::exp(log_prod_half_k(blocks, [](double n, double k) { return (1 / k) / (2 + n / (2 * k)); })),
                  std::exp(log_lin_upper),
                  "c_lin prod ((1/k)/(2+n/(2k)))^(k/2) <= (|L|/|B|)^(1/M) <= 4 sqrt(max n prod (2k+1)) prod (1/(1+n/(2k)))^(k/2)",
                  {}};
  flag(lin, c, {"c_lin"});
  caveat(lin);

  BoundRecord body{"body_A", c.get("c_A"), 4 * std::sqrt(h * p21), "c_A <= (|A|/|B|)^(1/M) <= 4 sqrt(max n prod (2k+1))",
                   {}};
  flag(body, c, {"c_A"});
  caveat(body);

  rep.records = {pos, sq, lin, body};
  return rep;
}

std::vector<Shape> default_bounds_grid() {
  std::vector<Shape> out;
  for (int n = 2; n <= 8; ++n)
    for (int d = 2; d <= 8; d += 2) out.push_back(Shape({Block{n, d}}));
  for (int n1 = 2; n1 <= 5; ++n1)
    for (int n2 = 2; n2 <= n1; ++n2)
      for (int d1 = 2; d1 <= 6; d1 += 2)
        for (int d2 = 2; d2 <= 6; d2 += 2) out.push_back(Shape({Block{n1, d1}, Block{n2, d2}}));
  return out;
}

std::string bounds_grid_csv(const std::vector<Shape>& shapes, const BoundConstants& c) {
  std::ostringstream out;
  out.precision(17);
  out << "shape,family,record,lower,upper,unresolved\n";
  for (const auto& s : shapes) {
    for (const auto& [family, rep] : {std::pair{"main", thm_main_bounds(s, c)}, std::pair{"section", section_bounds(s, c)}})
      for (const auto& r : rep.records) {
        std::string flags;
        for (const auto& f : r.unresolved) flags += (flags.empty() ? "" : ";") + f;
        out << '"' << s.to_string() << "\"," << family << ',' << r.name << ',' << r.lower << ',' << r.upper << ",\""
            << flags << "\"\n";
      }
  }
  return out.str();
}

}  // namespace mhsos
