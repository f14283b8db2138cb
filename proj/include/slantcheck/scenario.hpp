#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slantcheck/expr.hpp"
#include "slantcheck/linalg.hpp"
#include "slantcheck/tolerances.hpp"

namespace slantcheck {

struct AxisSpec {
  std::string name;  // x1..xk
  double lo = 0.0, hi = 0.0;
  std::size_t steps = 1;
};

struct GridSpec {
  std::string name;
  std::vector<AxisSpec> axes;  // stored sorted by variable index

  // Cartesian product, first axis slowest; steps == 1 yields lo.
  std::vector<Vec> points() const;
};

struct StructureDef {
  enum class Kind { Preset, Rows, Conjugate };
  std::string name;
  Kind kind = Kind::Preset;
  std::string preset;
  Mat rows;
  std::string base;  // Conjugate: name of a constant structure
  std::size_t plane_i = 0, plane_j = 0;  // 0-based coordinate indices
  Expr angle;
  std::size_t dim = 0;  // resolved during validation
};

struct CoefficientsDef {
  std::string name;
  std::vector<Expr> entries;  // a1..ak over ambient coordinates
};

struct ImmersionDef {
  std::string name;
  std::size_t domain = 0;
  std::vector<Expr> components;  // y1..yn over domain coordinates
};

struct ChainDef {
  std::string name;
  std::vector<std::string> immersions;  // outermost first
};

struct FieldDef {
  std::string name;
  std::vector<Expr> components;  // v1..vn; a vector field on R^n
};

struct CheckDef {
  std::string name;
  std::string kind;
  std::vector<std::pair<std::string, std::string>> keys;

  const std::string* find(const std::string& key) const;
};

struct ScenarioConfig {
  std::string name;
  std::size_t ambient_dim = 0;
  Mat metric;
  Tolerances tols;
  std::vector<StructureDef> structures;
  std::vector<CoefficientsDef> coefficients;
  std::vector<ImmersionDef> immersions;
  std::vector<ChainDef> chains;
  std::vector<GridSpec> grids;
  std::vector<FieldDef> fields;
  std::vector<CheckDef> checks;
};

// Parses scenario text.  ValidationError messages carry 'line N'.
ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& source_name);

ScenarioConfig load_scenario(const std::string& path);

// Applies a CLI-style axis override "x1=-2:2:5" to every grid that has the
// axis, or a tolerance override "spectral=1e-6".
void override_grid_axis(ScenarioConfig& cfg, const std::string& spec);
void override_tolerance(ScenarioConfig& cfg, const std::string& spec);

// Known preset structure matrices; throws ValidationError for unknown names.
Mat preset_structure(const std::string& name);
const std::vector<std::string>& preset_structure_names();

}  // namespace slantcheck
