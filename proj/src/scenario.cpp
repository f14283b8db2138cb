#include "slantcheck/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "slantcheck/errors.hpp"
#include "slantcheck/fields.hpp"

namespace slantcheck {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ValidationError("line " + std::to_string(line) + ": " + msg);
}

bool try_parse_number(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return !s.empty() && end != nullptr && *end == '\0';
}

double parse_number(const std::string& s, std::size_t line) {
  double v = 0.0;
  if (!try_parse_number(s, v)) fail(line, "malformed number '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s, std::size_t line) {
  const double v = parse_number(s, line);
  if (v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v)))
    fail(line, "expected a positive integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

// Index of variable "x<i>"; 0 if the name is not of that form.
std::size_t axis_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x') return 0;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return 0;
  return static_cast<std::size_t>(std::strtol(name.c_str() + 1, nullptr, 10));
}

Expr parse_expr_at(const std::string& text, std::size_t vars,
                   std::size_t line, const std::string& what) {
  try {
    return Expr::parse(text, vars);
  } catch (const ParseError& e) {
    fail(line, what + ": " + e.what());
  }
}

// Rotation by angle within one coordinate pair: block [[0, 1], [-1, 0]]
// placed at (2m, 2m+1), i.e. J e_{2m} = -e_{2m+1}, J e_{2m+1} = e_{2m}.
Mat pair_rotation(std::size_t n) {
  Mat j(n, n);
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    j(2 * m + 1, 2 * m) = -1.0;
    j(2 * m, 2 * m + 1) = 1.0;
  }
  return j;
}

}  // namespace

Mat preset_structure(const std::string& name) {
  if (name == "uv4") return pair_rotation(4);
  if (name == "uv6") return pair_rotation(6);
  if (name == "uv8") return pair_rotation(8);
  if (name == "uu8") {
    // Pairs coordinates at distance four: e0<->e4, e2<->e6 (and the same
    // for odd indices), J e_i = -e_{i+4}, J e_{i+4} = e_i.
    Mat j(8, 8);
    for (std::size_t i = 0; i < 4; ++i) {
      j(i + 4, i) = -1.0;
      j(i, i + 4) = 1.0;
    }
    return j;
  }
  if (name == "uv8_split") {
    // Pair rotation with opposite orientation on the last two pairs.
    Mat j = pair_rotation(8);
    for (std::size_t m = 2; m < 4; ++m) {
      j(2 * m + 1, 2 * m) = 1.0;
      j(2 * m, 2 * m + 1) = -1.0;
    }
    return j;
  }
  if (name == "uv8_mixed") {
    // Product of uu8 and uv8_split; completes them to an anti-commuting
    // triple.
    return mat_mul(preset_structure("uu8"), preset_structure("uv8_split"));
  }
  throw ValidationError("unknown structure preset '" + name +
                        "'; known presets: uv4, uv6, uv8, uu8, uv8_split, "
                        "uv8_mixed");
}

const std::vector<std::string>& preset_structure_names() {
  static const std::vector<std::string> names = {
      "uv4", "uv6", "uv8", "uu8", "uv8_split", "uv8_mixed"};
  return names;
}

std::vector<Vec> GridSpec::points() const {
  std::vector<Vec> pts;
  if (axes.empty()) return pts;
  std::vector<std::size_t> idx(axes.size(), 0);
  bool done = false;
  while (!done) {
    Vec p(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const AxisSpec& a = axes[i];
      p[i] = a.steps == 1 ? a.lo
                          : a.lo + (a.hi - a.lo) * static_cast<double>(idx[i]) /
                                       static_cast<double>(a.steps - 1);
    }
    pts.push_back(std::move(p));
    done = true;
    for (std::size_t i = axes.size(); i-- > 0;) {
      if (++idx[i] < axes[i].steps) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
  }
  return pts;
}

const std::string* CheckDef::find(const std::string& key) const {
  for (const auto& kv : keys)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

namespace {

struct Section {
  std::string kind;  // "scenario", "ambient", "structure", ...
  std::string name;  // second word, may be empty
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::string>> entries;  // key, value
  std::vector<std::size_t> entry_lines;
};

const std::string* find_entry(const Section& s, const std::string& key) {
  for (const auto& kv : s.entries)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

std::size_t entry_line(const Section& s, const std::string& key) {
  for (std::size_t i = 0; i < s.entries.size(); ++i)
    if (s.entries[i].first == key) return s.entry_lines[i];
  return s.line;
}

// Ordered components "y1".."yn" (or another prefix); fails on gaps.
std::vector<Expr> ordered_components(const Section& s, char prefix,
                                     std::size_t vars,
                                     const std::string& what) {
  std::vector<std::pair<std::size_t, const std::pair<std::string,
                                                     std::string>*>> found;
  std::vector<std::size_t> lines;
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    const std::string& k = s.entries[i].first;
    if (k.size() >= 2 && k[0] == prefix) {
      bool digits = true;
      for (std::size_t c = 1; c < k.size(); ++c)
        if (!std::isdigit(static_cast<unsigned char>(k[c]))) digits = false;
      if (digits) {
        found.push_back({static_cast<std::size_t>(
                             std::strtol(k.c_str() + 1, nullptr, 10)),
                         &s.entries[i]});
        lines.push_back(s.entry_lines[i]);
      }
    }
  }
  if (found.empty())
    fail(s.line, what + " needs components " + prefix + "1, " + prefix +
                     "2, ...");
  std::vector<Expr> out(found.size());
  std::vector<bool> seen(found.size(), false);
  for (std::size_t i = 0; i < found.size(); ++i) {
    const std::size_t idx = found[i].first;
    if (idx < 1 || idx > found.size() || seen[idx - 1])
      fail(lines[i], what + " components must be " + prefix + "1.." + prefix +
                         std::to_string(found.size()) + " without gaps");
    seen[idx - 1] = true;
    out[idx - 1] = parse_expr_at(found[i].second->second, vars, lines[i],
                                 "component " + found[i].second->first);
  }
  return out;
}

Mat parse_metric(const std::string& value, std::size_t dim, std::size_t line) {
  const std::vector<std::string> words = split(value, ' ');
  if (words.size() == 1 && words[0] == "euclidean")
    return Mat::identity(dim);
  if (!words.empty() && words[0] == "diag") {
    if (words.size() != dim + 1)
      fail(line, "metric diag needs " + std::to_string(dim) + " entries");
    Mat g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      g(i, i) = parse_number(words[i + 1], line);
    return g;
  }
  if (!words.empty() && words[0] == "rows") {
    const std::vector<std::string> rows =
        split(value.substr(4), ';');
    if (rows.size() != dim)
      fail(line, "metric rows needs " + std::to_string(dim) + " rows");
    Mat g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<std::string> cells;
      for (const std::string& w : split(rows[i], ' '))
        if (!w.empty()) cells.push_back(w);
      if (cells.size() != dim)
        fail(line, "metric row " + std::to_string(i + 1) + " needs " +
                       std::to_string(dim) + " entries");
      for (std::size_t j = 0; j < dim; ++j)
        g(i, j) = parse_number(cells[j], line);
    }
    return g;
  }
  fail(line, "metric must be 'euclidean', 'diag ...', or 'rows ... ; ...'");
}

// Name / dimension resolution of everything the checks reference, so a
// loaded config never fails later for a reason the file already shows.
void validate_config(const ScenarioConfig& cfg) {
  auto fail_check = [](const CheckDef& c, const std::string& msg) {
    throw ValidationError("check '" + c.name + "' (" + c.kind + "): " + msg);
  };
  auto need = [&](const CheckDef& c, const char* key) -> const std::string& {
    const std::string* v = c.find(key);
    if (!v) fail_check(c, std::string("missing key '") + key + "'");
    return *v;
  };
  auto names_of = [](const std::string& csv) {
    std::vector<std::string> out;
    for (const std::string& w : split(csv, ','))
      if (!w.empty()) out.push_back(w);
    return out;
  };
  auto structure_dim = [&](const CheckDef& c, const std::string& n) {
    for (const StructureDef& d : cfg.structures)
      if (d.name == n) return d.dim;
    fail_check(c, "unknown structure '" + n + "'");
    return std::size_t{0};
  };
  auto ambient_structure = [&](const CheckDef& c, const std::string& n) {
    if (structure_dim(c, n) != cfg.ambient_dim)
      fail_check(c, "structure '" + n + "' has dimension " +
                        std::to_string(structure_dim(c, n)) +
                        ", ambient is " + std::to_string(cfg.ambient_dim));
  };
  auto immersion_of = [&](const CheckDef& c,
                          const std::string& n) -> const ImmersionDef& {
    for (const ImmersionDef& d : cfg.immersions)
      if (d.name == n) return d;
    fail_check(c, "unknown immersion '" + n + "'");
    throw ValidationError("unreachable");
  };
  auto ambient_immersion = [&](const CheckDef& c,
                               const std::string& n) -> const ImmersionDef& {
    const ImmersionDef& d = immersion_of(c, n);
    if (d.components.size() != cfg.ambient_dim)
      fail_check(c, "immersion '" + n + "' maps into dimension " +
                        std::to_string(d.components.size()) +
                        ", ambient is " + std::to_string(cfg.ambient_dim));
    return d;
  };
  auto grid_axes = [&](const CheckDef& c, const std::string& n,
                       std::size_t expect) {
    for (const GridSpec& g : cfg.grids)
      if (g.name == n) {
        if (g.axes.size() != expect)
          fail_check(c, "grid '" + n + "' has " +
                            std::to_string(g.axes.size()) + " axes, need " +
                            std::to_string(expect));
        return;
      }
    fail_check(c, "unknown grid '" + n + "'");
  };
  auto field_of = [&](const CheckDef& c, const std::string& n,
                      std::size_t expect) {
    for (const FieldDef& d : cfg.fields)
      if (d.name == n) {
        if (d.components.size() != expect)
          fail_check(c, "field '" + n + "' has " +
                            std::to_string(d.components.size()) +
                            " components, need " + std::to_string(expect));
        return;
      }
    fail_check(c, "unknown field '" + n + "'");
  };
  auto coeffs_of = [&](const CheckDef& c, const std::string& n,
                       std::size_t expect) {
    for (const CoefficientsDef& d : cfg.coefficients)
      if (d.name == n) {
        if (d.entries.size() != expect)
          fail_check(c, "coefficients '" + n + "' has " +
                            std::to_string(d.entries.size()) +
                            " entries, need " + std::to_string(expect));
        return;
      }
    fail_check(c, "unknown coefficients '" + n + "'");
  };
  auto real_key = [&](const CheckDef& c, const char* key) {
    double v = 0.0;
    if (!try_parse_number(need(c, key), v))
      fail_check(c, std::string("key '") + key + "' is not a number");
    return v;
  };

  for (const CheckDef& c : cfg.checks) {
    if (c.kind == "almost_hermitian") {
      ambient_structure(c, need(c, "structure"));
      grid_axes(c, need(c, "grid"), cfg.ambient_dim);
    } else if (c.kind == "anticommute") {
      const auto ns = names_of(need(c, "structures"));
      if (ns.size() != 2) fail_check(c, "'structures' needs exactly two names");
      for (const std::string& n : ns) ambient_structure(c, n);
      grid_axes(c, need(c, "grid"), cfg.ambient_dim);
    } else if (c.kind == "decomposition") {
      const auto ns = names_of(need(c, "structures"));
      if (ns.size() != 2) fail_check(c, "'structures' needs exactly two names");
      for (const std::string& n : ns) ambient_structure(c, n);
      const double a = real_key(c, "a");
      const double b = real_key(c, "b");
      if (std::fabs(a * a + b * b - 1.0) > kCoeffNormTol)
        fail_check(c, "a^2 + b^2 = " + std::to_string(a * a + b * b) +
                          ", weights must have unit norm");
      field_of(c, need(c, "xfield"), cfg.ambient_dim);
      field_of(c, need(c, "yfield"), cfg.ambient_dim);
      grid_axes(c, need(c, "grid"), cfg.ambient_dim);
    } else if (c.kind == "nabla_family") {
      const auto ns = names_of(need(c, "structures"));
      if (ns.size() != 2) fail_check(c, "'structures' needs exactly two names");
      for (const std::string& n : ns) {
        ambient_structure(c, n);
        for (const StructureDef& d : cfg.structures)
          if (d.name == n && d.kind == StructureDef::Kind::Conjugate)
            fail_check(c, "structure '" + n +
                              "' must be constant for this check");
      }
      coeffs_of(c, need(c, "coefficients"), 2);
      field_of(c, need(c, "xfield"), cfg.ambient_dim);
      field_of(c, need(c, "yfield"), cfg.ambient_dim);
      grid_axes(c, need(c, "grid"), cfg.ambient_dim);
    } else if (c.kind == "slant_scan") {
      const ImmersionDef& f = ambient_immersion(c, need(c, "immersion"));
      ambient_structure(c, need(c, "structure"));
      grid_axes(c, need(c, "grid"), f.domain);
      if (const std::string* r = c.find("require"))
        if (*r != "slant" && *r != "proper" && *r != "anti_invariant")
          fail_check(c, "'require' must be slant, proper, or anti_invariant");
    } else if (c.kind == "cross_term") {
      const ImmersionDef& f = ambient_immersion(c, need(c, "immersion"));
      const auto ns = names_of(need(c, "structures"));
      if (ns.size() != 2) fail_check(c, "'structures' needs exactly two names");
      for (const std::string& n : ns) ambient_structure(c, n);
      grid_axes(c, need(c, "grid"), f.domain);
    } else if (c.kind == "family_slant" || c.kind == "family_slant_k") {
      const ImmersionDef& f = ambient_immersion(c, need(c, "immersion"));
      const auto ns = names_of(need(c, "structures"));
      if (c.kind == "family_slant" && ns.size() != 2)
        fail_check(c, "'structures' needs exactly two names");
      if (ns.size() < 2) fail_check(c, "'structures' needs at least two names");
      for (const std::string& n : ns) ambient_structure(c, n);
      coeffs_of(c, need(c, "coefficients"), ns.size());
      grid_axes(c, need(c, "grid"), f.domain);
    } else if (c.kind == "induced_structure") {
      const ImmersionDef& f = ambient_immersion(c, need(c, "immersion"));
      ambient_structure(c, need(c, "structure"));
      grid_axes(c, need(c, "grid"), f.domain);
    } else if (c.kind == "kahler") {
      const ImmersionDef& f = ambient_immersion(c, need(c, "immersion"));
      ambient_structure(c, need(c, "structure"));
      field_of(c, need(c, "xfield"), f.domain);
      field_of(c, need(c, "yfield"), f.domain);
      grid_axes(c, need(c, "grid"), f.domain);
    } else if (c.kind == "transitivity") {
      std::vector<std::string> ns;
      if (const std::string* chain = c.find("chain")) {
        for (const ChainDef& d : cfg.chains)
          if (d.name == *chain) ns = d.immersions;
        if (ns.empty()) fail_check(c, "unknown chain '" + *chain + "'");
      } else {
        ns = names_of(need(c, "immersions"));
        if (ns.size() < 2) fail_check(c, "need at least two immersions");
      }
      std::size_t expect = cfg.ambient_dim;
      for (const std::string& n : ns) {
        const ImmersionDef& d = immersion_of(c, n);
        if (d.components.size() != expect)
          fail_check(c, "immersion '" + n + "' maps into dimension " +
                            std::to_string(d.components.size()) +
                            ", expected " + std::to_string(expect));
        expect = d.domain;
      }
      ambient_structure(c, need(c, "structure"));
      grid_axes(c, need(c, "grid"), expect);
    } else if (c.kind == "product") {
      const auto entries = names_of(need(c, "factors"));
      if (entries.size() < 2)
        fail_check(c, "'factors' needs at least two entries");
      for (const std::string& entry : entries) {
        const std::size_t c1 = entry.find(':');
        const std::size_t c2 = c1 == std::string::npos
                                   ? std::string::npos
                                   : entry.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
          fail_check(c, "factor entry '" + entry +
                            "' must look like immersion:structure:grid");
        const ImmersionDef& f = immersion_of(c, entry.substr(0, c1));
        const std::string jn = entry.substr(c1 + 1, c2 - c1 - 1);
        if (structure_dim(c, jn) != f.components.size())
          fail_check(c, "structure '" + jn + "' has dimension " +
                            std::to_string(structure_dim(c, jn)) +
                            ", factor '" + f.name + "' maps into dimension " +
                            std::to_string(f.components.size()));
        grid_axes(c, entry.substr(c2 + 1), f.domain);
      }
    } else {
      fail_check(c,
                 "unknown check kind; known kinds: almost_hermitian, "
                 "anticommute, decomposition, nabla_family, slant_scan, "
                 "cross_term, family_slant, family_slant_k, "
                 "induced_structure, kahler, transitivity, product");
    }
  }

  // Constant coefficient sets must already satisfy the unit-norm constraint;
  // point-dependent ones are re-checked wherever the family is evaluated.
  for (const CoefficientsDef& d : cfg.coefficients) {
    Vec probe(cfg.ambient_dim);
    for (std::size_t i = 0; i < probe.size(); ++i)
      probe[i] = 0.3 + 0.05 * static_cast<double>(i);
    const JetVec z = seed_coords(probe);
    bool constant = true;
    double sq = 0.0;
    for (const Expr& e : d.entries) {
      const Jet2 v = e.eval(z);
      for (std::size_t s = 0; s < v.dim(); ++s)
        if (std::fabs(v.grad(s)) > 1e-14) constant = false;
      sq += v.v * v.v;
    }
    if (constant && std::fabs(sq - 1.0) > kCoeffNormTol)
      throw ValidationError("coefficients '" + d.name +
                            "': squared entries sum to " +
                            std::to_string(sq) +
                            ", violating normalization (must equal 1)");
  }
}

Mat parse_rows_matrix(const std::string& value, std::size_t line) {
  const std::vector<std::string> rows = split(value, ';');
  const std::size_t n = rows.size();
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> cells;
    for (const std::string& w : split(rows[i], ' '))
      if (!w.empty()) cells.push_back(w);
    if (cells.size() != n)
      fail(line, "structure rows must form a square matrix; row " +
                     std::to_string(i + 1) + " has " +
                     std::to_string(cells.size()) + " of " +
                     std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = parse_number(cells[j], line);
  }
  return m;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& source_name) {
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  bool saw_header = false;
  std::vector<Section> sections;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (!saw_header) {
      if (line != "slantcheck scenario v1")
        fail(lineno,
             "scenario must begin with the line 'slantcheck scenario v1'");
      saw_header = true;
      continue;
    }

    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      const std::vector<std::string> words =
          split(trim(line.substr(1, line.size() - 2)), ' ');
      if (words.empty() || words[0].empty())
        fail(lineno, "empty section header");
      Section s;
      s.kind = words[0];
      if (words.size() > 2) fail(lineno, "section header has too many words");
      if (words.size() == 2) s.name = words[1];
      s.line = lineno;
      sections.push_back(std::move(s));
      continue;
    }

    if (sections.empty())
      fail(lineno, "content before the first section header");
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(lineno, "expected 'key = value'");
    sections.back().entries.push_back(
        {trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    sections.back().entry_lines.push_back(lineno);
  }
  if (!saw_header)
    throw ValidationError(source_name +
                          ": missing 'slantcheck scenario v1' header");

  ScenarioConfig cfg;
  cfg.name = source_name;
  bool have_ambient = false;

  for (const Section& s : sections) {
    if (s.kind == "scenario") {
      if (const std::string* v = find_entry(s, "name")) cfg.name = *v;
    } else if (s.kind == "ambient") {
      const std::string* d = find_entry(s, "dim");
      if (!d) fail(s.line, "[ambient] needs 'dim'");
      cfg.ambient_dim = parse_count(*d, entry_line(s, "dim"));
      const std::string* m = find_entry(s, "metric");
      cfg.metric = m ? parse_metric(*m, cfg.ambient_dim,
                                    entry_line(s, "metric"))
                     : Mat::identity(cfg.ambient_dim);
      have_ambient = true;
    } else if (s.kind == "tolerances") {
      for (std::size_t i = 0; i < s.entries.size(); ++i) {
        const auto& kv = s.entries[i];
        const double v = parse_number(kv.second, s.entry_lines[i]);
        if (kv.first == "structural") cfg.tols.structural = v;
        else if (kv.first == "spectral") cfg.tols.spectral = v;
        else if (kv.first == "fd") cfg.tols.fd = v;
        else
          fail(s.entry_lines[i], "unknown tolerance '" + kv.first +
                                     "'; known: structural, spectral, fd");
      }
    } else if (s.kind == "structure") {
      if (s.name.empty()) fail(s.line, "[structure] needs a name");
      StructureDef def;
      def.name = s.name;
      if (const std::string* p = find_entry(s, "preset")) {
        def.kind = StructureDef::Kind::Preset;
        def.preset = *p;
        try {
          def.dim = preset_structure(*p).rows;
        } catch (const ValidationError& e) {
          fail(entry_line(s, "preset"), e.what());
        }
      } else if (const std::string* r = find_entry(s, "rows")) {
        def.kind = StructureDef::Kind::Rows;
        def.rows = parse_rows_matrix(*r, entry_line(s, "rows"));
        def.dim = def.rows.rows;
      } else if (const std::string* b = find_entry(s, "base")) {
        def.kind = StructureDef::Kind::Conjugate;
        def.base = *b;
        const std::string* plane = find_entry(s, "plane");
        const std::string* angle = find_entry(s, "angle");
        if (!plane || !angle)
          fail(s.line, "conjugated structure needs 'plane' and 'angle'");
        std::vector<std::string> pw;
        for (const std::string& w : split(*plane, ' '))
          if (!w.empty()) pw.push_back(w);
        if (pw.size() != 2)
          fail(entry_line(s, "plane"),
               "'plane' needs two 1-based coordinate indices");
        def.plane_i = parse_count(pw[0], entry_line(s, "plane")) - 1;
        def.plane_j = parse_count(pw[1], entry_line(s, "plane")) - 1;
        // Dimension and the angle expression are resolved after all
        // structures are known.
        def.preset = *angle;  // raw text, parsed during resolution
      } else {
        fail(s.line,
             "[structure] needs 'preset', 'rows', or 'base'/'plane'/'angle'");
      }
      cfg.structures.push_back(std::move(def));
    } else if (s.kind == "coefficients") {
      if (s.name.empty()) fail(s.line, "[coefficients] needs a name");
      if (!have_ambient) fail(s.line, "[ambient] must come first");
      CoefficientsDef def;
      def.name = s.name;
      def.entries = ordered_components(s, 'a', cfg.ambient_dim,
                                       "[coefficients " + s.name + "]");
      cfg.coefficients.push_back(std::move(def));
    } else if (s.kind == "immersion") {
      if (s.name.empty()) fail(s.line, "[immersion] needs a name");
      const std::string* d = find_entry(s, "domain");
      if (!d) fail(s.line, "[immersion] needs 'domain'");
      ImmersionDef def;
      def.name = s.name;
      def.domain = parse_count(*d, entry_line(s, "domain"));
      def.components = ordered_components(s, 'y', def.domain,
                                          "[immersion " + s.name + "]");
      if (def.components.size() < def.domain)
        fail(s.line, "[immersion " + s.name + "] maps " +
                         std::to_string(def.domain) + " parameters into " +
                         std::to_string(def.components.size()) +
                         " components; the target cannot be smaller");
      cfg.immersions.push_back(std::move(def));
    } else if (s.kind == "chain") {
      if (s.name.empty()) fail(s.line, "[chain] needs a name");
      const std::string* v = find_entry(s, "immersions");
      if (!v) fail(s.line, "[chain] needs 'immersions'");
      ChainDef def;
      def.name = s.name;
      for (const std::string& w : split(*v, ','))
        if (!w.empty()) def.immersions.push_back(w);
      if (def.immersions.size() < 2)
        fail(entry_line(s, "immersions"),
             "[chain] needs at least two immersions");
      cfg.chains.push_back(std::move(def));
    } else if (s.kind == "grid") {
      if (s.name.empty()) fail(s.line, "[grid] needs a name");
      GridSpec grid;
      grid.name = s.name;
      for (std::size_t i = 0; i < s.entries.size(); ++i) {
        const auto& kv = s.entries[i];
        const std::vector<std::string> kw = split(kv.first, ' ');
        if (kw.size() != 2 || kw[0] != "axis")
          fail(s.entry_lines[i], "[grid] entries look like 'axis x1 = "
                                 "min : max : steps'");
        const std::size_t vi = axis_index(kw[1]);
        if (vi == 0)
          fail(s.entry_lines[i], "axis name must be x1, x2, ...");
        const std::vector<std::string> parts = split(kv.second, ':');
        if (parts.size() != 3)
          fail(s.entry_lines[i], "axis value must be 'min : max : steps'");
        AxisSpec ax;
        ax.name = kw[1];
        ax.lo = parse_number(parts[0], s.entry_lines[i]);
        ax.hi = parse_number(parts[1], s.entry_lines[i]);
        ax.steps = parse_count(parts[2], s.entry_lines[i]);
        grid.axes.push_back(ax);
      }
      if (grid.axes.empty()) fail(s.line, "[grid] needs at least one axis");
      std::sort(grid.axes.begin(), grid.axes.end(),
                [](const AxisSpec& a, const AxisSpec& b) {
                  return axis_index(a.name) < axis_index(b.name);
                });
      for (std::size_t i = 0; i < grid.axes.size(); ++i)
        if (axis_index(grid.axes[i].name) != i + 1)
          fail(s.line, "[grid " + grid.name + "] axes must cover x1..x" +
                           std::to_string(grid.axes.size()) +
                           " without gaps");
      cfg.grids.push_back(std::move(grid));
    } else if (s.kind == "field") {
      if (s.name.empty()) fail(s.line, "[field] needs a name");
      FieldDef def;
      def.name = s.name;
      // Components determine the dimension; variables match it.
      std::size_t count = 0;
      for (const auto& kv : s.entries)
        if (!kv.first.empty() && kv.first[0] == 'v') ++count;
      if (count == 0)
        fail(s.line, "[field] needs components v1, v2, ...");
      def.components =
          ordered_components(s, 'v', count, "[field " + s.name + "]");
      cfg.fields.push_back(std::move(def));
    } else if (s.kind == "check") {
      if (s.name.empty()) fail(s.line, "[check] needs a name");
      CheckDef def;
      def.name = s.name;
      for (const auto& kv : s.entries) {
        if (kv.first == "kind")
          def.kind = kv.second;
        else
          def.keys.push_back(kv);
      }
      if (def.kind.empty()) fail(s.line, "[check] needs 'kind'");
      cfg.checks.push_back(std::move(def));
    } else {
      fail(s.line, "unknown section '" + s.kind +
                       "'; known sections: scenario, ambient, tolerances, "
                       "structure, coefficients, immersion, chain, grid, "
                       "field, check");
    }
  }

  if (!have_ambient)
    throw ValidationError(source_name + ": missing [ambient] section");

  // Resolve conjugated structures now that all definitions exist.
  for (StructureDef& def : cfg.structures) {
    if (def.kind != StructureDef::Kind::Conjugate) continue;
    const StructureDef* base = nullptr;
    for (const StructureDef& other : cfg.structures)
      if (other.name == def.base) base = &other;
    if (!base || base->kind == StructureDef::Kind::Conjugate)
      throw ValidationError("structure '" + def.name +
                            "': base must be a preset or rows structure");
    def.dim = base->dim;
    if (def.plane_i >= def.dim || def.plane_j >= def.dim ||
        def.plane_i == def.plane_j)
      throw ValidationError("structure '" + def.name +
                            "': rotation plane indices out of range");
    try {
      def.angle = Expr::parse(def.preset, def.dim);
    } catch (const ParseError& e) {
      throw ValidationError("structure '" + def.name + "': angle: " +
                            e.what());
    }
    def.preset.clear();
  }

  validate_config(cfg);
  // Checked last so that more specific definition errors take precedence.
  if (cfg.checks.empty())
    throw ValidationError(source_name + ": scenario defines no checks");
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string base = path;
  const std::size_t slash = base.find_last_of('/');
  if (slash != std::string::npos) base = base.substr(slash + 1);
  const std::size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return parse_scenario(ss.str(), base);
}

void override_grid_axis(ScenarioConfig& cfg, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos)
    throw ValidationError("grid override must look like x1=min:max:steps");
  const std::string axis = trim(spec.substr(0, eq));
  const std::vector<std::string> parts = split(spec.substr(eq + 1), ':');
  double lo = 0.0, hi = 0.0, steps_raw = 0.0;
  if (axis_index(axis) == 0 || parts.size() != 3 ||
      !try_parse_number(parts[0], lo) || !try_parse_number(parts[1], hi) ||
      !try_parse_number(parts[2], steps_raw) || steps_raw < 1.0 ||
      steps_raw != static_cast<double>(static_cast<std::size_t>(steps_raw)))
    throw ValidationError("grid override must look like x1=min:max:steps");
  const std::size_t steps = static_cast<std::size_t>(steps_raw);
  bool applied = false;
  for (GridSpec& g : cfg.grids)
    for (AxisSpec& a : g.axes)
      if (a.name == axis) {
        a.lo = lo;
        a.hi = hi;
        a.steps = steps;
        applied = true;
      }
  if (!applied)
    throw ValidationError("no grid has an axis named '" + axis + "'");
}

void override_tolerance(ScenarioConfig& cfg, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos)
    throw ValidationError("tolerance override must look like name=value");
  const std::string name = trim(spec.substr(0, eq));
  double v = 0.0;
  if (!try_parse_number(trim(spec.substr(eq + 1)), v))
    throw ValidationError("tolerance override must look like name=value");
  if (name == "structural") cfg.tols.structural = v;
  else if (name == "spectral") cfg.tols.spectral = v;
  else if (name == "fd") cfg.tols.fd = v;
  else
    throw ValidationError("unknown tolerance '" + name +
                          "'; known: structural, spectral, fd");
}

}  // namespace slantcheck
