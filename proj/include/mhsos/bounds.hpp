#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mhsos/shape.hpp"

namespace mhsos {

/// Absolute constants of the displayed bounds. `c` and `c0` carry their stated values; the
/// others are unknown and default to 1. Any constant named in `explicit_set`
/// counts as resolved.
struct BoundConstants {
  std::map<std::string, double> values{{"c", 1024.0 * 2.718281828459045}, {"c0", 5.0}, {"c1", 1.0},
                                       {"c2", 1.0},  {"c3", 1.0},  {"c_rs", 1.0}, {"c_lin", 1.0},
                                       {"c_A", 1.0}};
  std::set<std::string> explicit_set;

  double get(const std::string& name) const { return values.at(name); }
  bool resolved(const std::string& name) const;
};

/// "c1=0.5,c2=2"; unknown names are rejected.
BoundConstants parse_constants(std::string_view text);

struct BoundRecord {
  std::string name;
  double lower = 0;
  double upper = 0;
  std::string formula;
  std::vector<std::string> unresolved;  // constants still at their placeholder value, plus caveats
  bool ordered() const { return lower <= upper; }
};

struct BoundReport {
  std::string subject;
  std::vector<BoundRecord> records;
  std::map<std::string, double> values;  // companion numbers

  const BoundRecord& record(const std::string& name) const;
};

/// Pos / Sq / L bounds on mu for the full cones.
BoundReport thm_main_bounds(const Shape& shape, const BoundConstants& constants = {});

/// Sq/Pos ratio bounds of the two special families: variant 1 is N=(2,n-2), K=(2k-2,2);
/// variant 2 is n = k n_1 split into k blocks of quadratics.
BoundReport corollary_bounds(int n, int k, int variant, const BoundConstants& constants = {});

/// Blekherman's single-block ratio bounds for degree 2k forms in n variables.
BoundReport blekherman_bounds(int n, int k, const BoundConstants& constants = {});

/// Section-level bounds: Pos (gauge lower bound, constant upper bound), Sq (mean-width upper
/// bound, Santalo lower bound), L, and the bracket for the body A. Two-block displays
/// evaluated at m != 2 are flagged.
BoundReport section_bounds(const Shape& shape, const BoundConstants& constants = {});

/// Shapes swept by `bounds grid`.
std::vector<Shape> default_bounds_grid();

/// One CSV row per (shape, family, record).
std::string bounds_grid_csv(const std::vector<Shape>& shapes, const BoundConstants& constants = {});

}  // namespace mhsos
