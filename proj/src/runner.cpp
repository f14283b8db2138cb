#include "slantcheck/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "slantcheck/errors.hpp"
#include "slantcheck/slant.hpp"

namespace slantcheck {

const std::vector<std::string>& known_check_kinds() {
  static const std::vector<std::string> kinds = {
      "almost_hermitian", "anticommute",   "decomposition",
      "nabla_family",     "slant_scan",    "cross_term",
      "family_slant",     "family_slant_k", "induced_structure",
      "kahler",           "transitivity",  "product"};
  return kinds;
}

namespace {

bool is_structure_kind(const std::string& kind) {
  return kind == "almost_hermitian" || kind == "anticommute" ||
         kind == "decomposition" || kind == "nabla_family";
}

[[noreturn]] void bad(const CheckDef& c, const std::string& msg) {
  throw ValidationError("check '" + c.name + "' (" + c.kind + "): " + msg);
}

const std::string& want(const CheckDef& c, const char* key) {
  const std::string* v = c.find(key);
  if (!v) bad(c, std::string("missing key '") + key + "'");
  return *v;
}

std::vector<std::string> name_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::size_t b = cur.find_first_not_of(" \t");
    if (b == std::string::npos) {
      cur.clear();
      return;
    }
    std::size_t e = cur.find_last_not_of(" \t");
    out.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char ch : csv) {
    if (ch == ',')
      flush();
    else
      cur += ch;
  }
  flush();
  return out;
}

double parse_real(const CheckDef& c, const char* key) {
  const std::string& text = want(c, key);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end == nullptr || *end != '\0')
    bad(c, std::string("key '") + key + "' is not a number: '" + text + "'");
  return v;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double cos_of(const SlantReport& r) { return std::sqrt(clamp01(r.lambda_mean)); }

RVal rv_vec(const Vec& v) {
  RVal a = RVal::array();
  for (double x : v) a.push(RVal(x));
  return a;
}

RVal rv_exclusions(const std::vector<Exclusion>& ex) {
  RVal a = RVal::array();
  for (const Exclusion& e : ex) {
    RVal o = RVal::object();
    o.set("point", rv_vec(e.param));
    o.set("reason", RVal(e.reason));
    a.push(std::move(o));
  }
  return a;
}

RVal slant_row(const SlantReport& r) {
  RVal o = RVal::object();
  o.set("point", rv_vec(r.param));
  o.set("eigenvalues", rv_vec(r.eigenvalues));
  o.set("spread", RVal(r.spread));
  o.set("lambda_mean", RVal(r.lambda_mean));
  if (r.theta) {
    o.set("theta", RVal(*r.theta));
    o.set("cos_theta", RVal(cos_of(r)));
  }
  o.set("classification", RVal(to_string(r.classification)));
  o.set("tangential_form_max", RVal(r.tangential_form_max));
  return o;
}

// Resolves scenario names into engine objects.
struct Engine {
  const ScenarioConfig& cfg;
  MetricSpec metric;

  explicit Engine(const ScenarioConfig& c)
      : cfg(c), metric{c.ambient_dim, c.metric} {}

  const StructureDef& structure_def(const CheckDef& c,
                                    const std::string& name) const {
    for (const StructureDef& d : cfg.structures)
      if (d.name == name) return d;
    bad(c, "unknown structure '" + name + "'");
  }

  TensorField11 structure(const CheckDef& c, const std::string& name) const {
    const StructureDef& d = structure_def(c, name);
    switch (d.kind) {
      case StructureDef::Kind::Preset:
        return TensorField11::constant(preset_structure(d.preset));
      case StructureDef::Kind::Rows:
        return TensorField11::constant(d.rows);
      case StructureDef::Kind::Conjugate: {
        const StructureDef& base = structure_def(c, d.base);
        const Mat base_mat = base.kind == StructureDef::Kind::Preset
                                 ? preset_structure(base.preset)
                                 : base.rows;
        const Expr angle = d.angle;
        return TensorField11::conjugated_rotation(
            base_mat, d.plane_i, d.plane_j,
            [angle](const JetVec& z) { return angle.eval(z); });
      }
    }
    bad(c, "unknown structure '" + name + "'");
  }

  TensorField11 ambient_structure(const CheckDef& c,
                                  const std::string& name) const {
    const StructureDef& d = structure_def(c, name);
    if (d.dim != cfg.ambient_dim)
      bad(c, "structure '" + name + "' has dimension " +
                 std::to_string(d.dim) + ", ambient is " +
                 std::to_string(cfg.ambient_dim));
    return structure(c, name);
  }

  const ImmersionDef& immersion_def(const CheckDef& c,
                                    const std::string& name) const {
    for (const ImmersionDef& d : cfg.immersions)
      if (d.name == name) return d;
    bad(c, "unknown immersion '" + name + "'");
  }

  static Immersion make_immersion(const ImmersionDef& d) {
    Immersion f;
    f.domain_dim = d.domain;
    f.ambient_dim = d.components.size();
    const std::vector<Expr> comps = d.components;
    f.map = [comps](const JetVec& u) {
      JetVec out(comps.size());
      for (std::size_t i = 0; i < comps.size(); ++i) out[i] = comps[i].eval(u);
      return out;
    };
    return f;
  }

  Immersion immersion(const CheckDef& c, const std::string& name) const {
    return make_immersion(immersion_def(c, name));
  }

  Immersion ambient_immersion(const CheckDef& c,
                              const std::string& name) const {
    const ImmersionDef& d = immersion_def(c, name);
    if (d.components.size() != cfg.ambient_dim)
      bad(c, "immersion '" + name + "' maps into dimension " +
                 std::to_string(d.components.size()) + ", ambient is " +
                 std::to_string(cfg.ambient_dim));
    return make_immersion(d);
  }

  CoefficientFunctions coefficients(const CheckDef& c,
                                    const std::string& name,
                                    std::size_t expected) const {
    for (const CoefficientsDef& d : cfg.coefficients)
      if (d.name == name) {
        if (d.entries.size() != expected)
          bad(c, "coefficients '" + name + "' has " +
                     std::to_string(d.entries.size()) + " entries, need " +
                     std::to_string(expected));
        CoefficientFunctions fns;
        for (const Expr& e : d.entries)
          fns.a.push_back([e](const JetVec& z) { return e.eval(z); });
        return fns;
      }
    bad(c, "unknown coefficients '" + name + "'");
  }

  const GridSpec& grid_def(const CheckDef& c, const std::string& name) const {
    for (const GridSpec& g : cfg.grids)
      if (g.name == name) return g;
    bad(c, "unknown grid '" + name + "'");
  }

  std::vector<Vec> grid(const CheckDef& c, const std::string& name,
                        std::size_t expect_dim) const {
    const GridSpec& g = grid_def(c, name);
    if (g.axes.size() != expect_dim)
      bad(c, "grid '" + name + "' has " + std::to_string(g.axes.size()) +
                 " axes, need " + std::to_string(expect_dim));
    return g.points();
  }

  const FieldDef& field_def(const CheckDef& c, const std::string& name) const {
    for (const FieldDef& d : cfg.fields)
      if (d.name == name) return d;
    bad(c, "unknown field '" + name + "'");
  }

  VectorField field(const CheckDef& c, const std::string& name,
                    std::size_t expect_dim) const {
    const FieldDef& d = field_def(c, name);
    if (d.components.size() != expect_dim)
      bad(c, "field '" + name + "' has " +
                 std::to_string(d.components.size()) + " components, need " +
                 std::to_string(expect_dim));
    const std::vector<Expr> comps = d.components;
    return [comps](const JetVec& u) {
      JetVec out(comps.size());
      for (std::size_t i = 0; i < comps.size(); ++i) out[i] = comps[i].eval(u);
      return out;
    };
  }

  // Immersion list for a transitivity check: either chain=NAME or
  // immersions=F1, F2, ...; outermost first, dims must chain from ambient.
  std::vector<Immersion> chain_list(const CheckDef& c,
                                    std::size_t* innermost) const {
    std::vector<std::string> names;
    if (const std::string* chain = c.find("chain")) {
      for (const ChainDef& d : cfg.chains)
        if (d.name == *chain) names = d.immersions;
      if (names.empty()) bad(c, "unknown chain '" + *chain + "'");
    } else {
      names = name_list(want(c, "immersions"));
      if (names.size() < 2) bad(c, "need at least two immersions");
    }
    std::vector<Immersion> fs;
    std::size_t expect = cfg.ambient_dim;
    for (const std::string& n : names) {
      const ImmersionDef& d = immersion_def(c, n);
      if (d.components.size() != expect)
        bad(c, "immersion '" + n + "' maps into dimension " +
                   std::to_string(d.components.size()) + ", expected " +
                   std::to_string(expect));
      fs.push_back(make_immersion(d));
      expect = d.domain;
    }
    *innermost = expect;
    return fs;
  }
};

CheckRecord run_one(const Engine& eng, const CheckDef& c,
                    const Tolerances& tols) {
  CheckRecord rec;
  rec.name = c.name;
  rec.kind = c.kind;
  RVal& d = rec.details;

  if (c.kind == "almost_hermitian") {
    const TensorField11 j = eng.ambient_structure(c, want(c, "structure"));
    const std::vector<Vec> pts =
        eng.grid(c, want(c, "grid"), eng.cfg.ambient_dim);
    const HermitianReport rep =
        verify_almost_hermitian(j, eng.metric, pts, tols.structural);
    rec.pass = rep.pass;
    d.set("tol", RVal(rep.tol));
    d.set("max_complex_residual", RVal(rep.max_complex_residual));
    d.set("max_skew_residual", RVal(rep.max_skew_residual));
    RVal rows = RVal::array();
    for (const HermitianPointRow& r : rep.rows) {
      RVal o = RVal::object();
      o.set("point", rv_vec(r.point));
      o.set("complex_residual", RVal(r.complex_residual));
      o.set("skew_residual", RVal(r.skew_residual));
      rows.push(std::move(o));
    }
    d.set("points", std::move(rows));
  } else if (c.kind == "anticommute") {
    const std::vector<std::string> names = name_list(want(c, "structures"));
    if (names.size() != 2) bad(c, "'structures' needs exactly two names");
    const TensorField11 j1 = eng.ambient_structure(c, names[0]);
    const TensorField11 j2 = eng.ambient_structure(c, names[1]);
    const std::vector<Vec> pts =
        eng.grid(c, want(c, "grid"), eng.cfg.ambient_dim);
    const AnticommuteReport rep =
        verify_anticommute(j1, j2, pts, tols.structural);
    rec.pass = rep.pass;
    d.set("tol", RVal(rep.tol));
    d.set("max_residual", RVal(rep.max_residual));
    RVal rows = RVal::array();
    for (const ResidualPointRow& r : rep.rows) {
      RVal o = RVal::object();
      o.set("point", rv_vec(r.point));
      o.set("residual", RVal(r.residual));
      rows.push(std::move(o));
    }
    d.set("points", std::move(rows));
  } else if (c.kind == "decomposition") {
    const std::vector<std::string> names = name_list(want(c, "structures"));
    if (names.size() != 2) bad(c, "'structures' needs exactly two names");
    const TensorField11 j1 = eng.ambient_structure(c, names[0]);
    const TensorField11 j2 = eng.ambient_structure(c, names[1]);
    const double a = parse_real(c, "a");
    const double b = parse_real(c, "b");
    const VectorField xf = eng.field(c, want(c, "xfield"), eng.cfg.ambient_dim);
    const VectorField yf = eng.field(c, want(c, "yfield"), eng.cfg.ambient_dim);
    const std::vector<Vec> pts =
        eng.grid(c, want(c, "grid"), eng.cfg.ambient_dim);
    const DecompositionReport rep =
        decomposition_check(j1, j2, a, b, xf, yf, pts, tols.fd);
    rec.pass = rep.pass;
    d.set("tol", RVal(rep.tol));
    d.set("max_residual", RVal(rep.max_residual));

    // Integrability probe for the combined structure: the corollary reduces
    // it to the vanishing of this same combination, so report whether the
    // samples produced a counterexample.  Never claims integrability.
    const TensorField11 fam = build_family(
        j1, j2, CoefficientFunctions::constants(Vec{a, b}), tols.structural);
    double nij_max = 0.0;
    RVal rows = RVal::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec nf = nijenhuis(fam, xf, yf, pts[i]);
      double nn = 0.0;
      for (double t : nf) nn += t * t;
      nn = std::sqrt(nn);
      nij_max = std::max(nij_max, nn);
      RVal o = RVal::object();
      o.set("point", rv_vec(pts[i]));
      o.set("residual", RVal(rep.rows[i].residual));
      o.set("family_nijenhuis", RVal(nn));
      rows.push(std::move(o));
    }
    d.set("family_nijenhuis_max", RVal(nij_max));
    d.set("counterexample_found", RVal(nij_max > tols.fd));
    d.set("points", std::move(rows));
  } else if (c.kind == "nabla_family") {
    const std::vector<std::string> names = name_list(want(c, "structures"));
    if (names.size() != 2) bad(c, "'structures' needs exactly two names");
    for (const std::string& n : names)
      if (eng.structure_def(c, n).kind == StructureDef::Kind::Conjugate)
        bad(c, "structure '" + n + "' must be constant for this check");
    const TensorField11 j1 = eng.ambient_structure(c, names[0]);
    const TensorField11 j2 = eng.ambient_structure(c, names[1]);
    const CoefficientFunctions coeffs =
        eng.coefficients(c, want(c, "coefficients"), 2);
    const VectorField xf = eng.field(c, want(c, "xfield"), eng.cfg.ambient_dim);
    const VectorField yf = eng.field(c, want(c, "yfield"), eng.cfg.ambient_dim);
    const std::vector<Vec> pts =
        eng.grid(c, want(c, "grid"), eng.cfg.ambient_dim);
    const TensorField11 fam = build_family(j1, j2, coeffs, tols.structural);

    double max_residual = 0.0;
    RVal rows = RVal::array();
    for (const Vec& x : pts) {
      const Vec lhs = nabla_j(fam, xf, yf, x);
      const Vec xv = eval_values(xf, x);
      const Vec yv = eval_values(yf, x);
      const JetVec xc = seed_coords(x);
      const Jet2 aj = coeffs.a[0](xc);
      const Jet2 bj = coeffs.a[1](xc);
      double xa = 0.0, xb = 0.0;
      for (std::size_t s = 0; s < x.size(); ++s) {
        xa += aj.grad(s) * xv[s];
        xb += bj.grad(s) * xv[s];
      }
      const Vec j1y = mat_vec(j1.value_at(x), yv);
      const Vec j2y = mat_vec(j2.value_at(x), yv);
      double rr = 0.0;
      for (std::size_t i = 0; i < lhs.size(); ++i) {
        const double t = lhs[i] - xa * j1y[i] - xb * j2y[i];
        rr += t * t;
      }
      rr = std::sqrt(rr);
      max_residual = std::max(max_residual, rr);
      RVal o = RVal::object();
      o.set("point", rv_vec(x));
      o.set("residual", RVal(rr));
      rows.push(std::move(o));
    }
    rec.pass = max_residual <= tols.structural;
    d.set("tol", RVal(tols.structural));
    d.set("max_residual", RVal(max_residual));
    d.set("points", std::move(rows));
  } else if (c.kind == "slant_scan") {
    const Immersion f = eng.ambient_immersion(c, want(c, "immersion"));
    const TensorField11 j = eng.ambient_structure(c, want(c, "structure"));
    const std::vector<Vec> pts = eng.grid(c, want(c, "grid"), f.domain_dim);
    const std::string require = c.find("require") ? *c.find("require")
                                                  : "slant";
    if (require != "slant" && require != "proper" &&
        require != "anti_invariant")
      bad(c, "'require' must be slant, proper, or anti_invariant");
    const ScanOutcome sc = slant_function_scan(f, j, eng.metric, pts, tols);
    bool all_anti = true;
    RVal rows = RVal::array();
    for (const SlantReport& r : sc.reports) {
      if (r.classification != SlantClass::AntiInvariant) all_anti = false;
      rows.push(slant_row(r));
    }
    rec.pass = sc.all_slant;
    if (require == "proper") rec.pass = rec.pass && sc.all_proper;
    if (require == "anti_invariant") rec.pass = rec.pass && all_anti;
    d.set("require", RVal(require));
    d.set("all_slant", RVal(sc.all_slant));
    d.set("all_proper", RVal(sc.all_proper));
    d.set("theta_min", RVal(sc.theta_min));
    d.set("theta_max", RVal(sc.theta_max));
    d.set("points", std::move(rows));
    d.set("exclusions", rv_exclusions(sc.exclusions));
  } else if (c.kind == "cross_term") {
    const Immersion f = eng.ambient_immersion(c, want(c, "immersion"));
    const std::vector<std::string> names = name_list(want(c, "structures"));
    if (names.size() != 2) bad(c, "'structures' needs exactly two names");
    const TensorField11 j1 = eng.ambient_structure(c, names[0]);
    const TensorField11 j2 = eng.ambient_structure(c, names[1]);
    const std::vector<Vec> pts = eng.grid(c, want(c, "grid"), f.domain_dim);
    bool all_independent = true;
    double vmin = 0.0, vmax = 0.0;
    bool first = true;
    std::vector<Exclusion> exclusions;
    RVal rows = RVal::array();
    for (const Vec& u : pts) {
      CrossTermReport r;
      try {
        r = cross_term(f, u, j1, j2, eng.metric, tols.spectral);
      } catch (const DegenerateFrameError& e) {
        exclusions.push_back({u, e.what()});
        continue;
      }
      if (!r.independent) all_independent = false;
      if (first || r.value < vmin) vmin = r.value;
      if (first || r.value > vmax) vmax = r.value;
      first = false;
      RVal o = RVal::object();
      o.set("point", rv_vec(u));
      o.set("eigenvalues", rv_vec(r.eigenvalues));
      o.set("spread", RVal(r.spread));
      o.set("independent", RVal(r.independent));
      o.set("value", RVal(r.value));
      rows.push(std::move(o));
    }
    rec.pass = all_independent && !first;
    d.set("all_independent", RVal(all_independent));
    d.set("value_min", RVal(vmin));
    d.set("value_max", RVal(vmax));
    d.set("points", std::move(rows));
    d.set("exclusions", rv_exclusions(exclusions));
  } else if (c.kind == "family_slant" || c.kind == "family_slant_k") {
    const Immersion f = eng.ambient_immersion(c, want(c, "immersion"));
    const std::vector<std::string> names = name_list(want(c, "structures"));
    if (c.kind == "family_slant" && names.size() != 2)
      bad(c, "'structures' needs exactly two names");
    if (names.size() < 2) bad(c, "'structures' needs at least two names");
    std::vector<TensorField11> js;
    for (const std::string& n : names)
      js.push_back(eng.ambient_structure(c, n));
    const CoefficientFunctions coeffs =
        eng.coefficients(c, want(c, "coefficients"), js.size());
    const std::vector<Vec> pts = eng.grid(c, want(c, "grid"), f.domain_dim);
    const FamilyOutcome fo =
        family_slant_check_k(f, js, coeffs, eng.metric, pts, tols);
    rec.pass = fo.pass && !fo.records.empty();
    d.set("max_mismatch", RVal(fo.max_mismatch));
    d.set("formula_pass", RVal(fo.formula_pass));
    d.set("biconditional_pass", RVal(fo.biconditional_pass));
    d.set("bounds_pass", RVal(fo.bounds_pass));
    RVal rows = RVal::array();
    for (const FamilyPointRecord& r : fo.records) {
      RVal o = RVal::object();
      o.set("point", rv_vec(r.param));
      o.set("coefficients", rv_vec(r.coeff_values));
      o.set("classification", RVal(to_string(r.combined.classification)));
      if (r.combined.theta) {
        o.set("theta", RVal(*r.combined.theta));
        o.set("cos_theta", RVal(cos_of(r.combined)));
      }
      o.set("cos2_direct", RVal(r.combined.lambda_mean));
      o.set("cos2_formula", RVal(r.cos2_formula));
      o.set("mismatch", RVal(r.mismatch));
      RVal fc = RVal::array();
      for (const SlantReport& fr : r.factors) fc.push(RVal(cos_of(fr)));
      o.set("factor_cos_theta", std::move(fc));
      RVal cv = RVal::array();
      for (const CrossTermReport& ct : r.crosses) cv.push(RVal(ct.value));
      o.set("cross_values", std::move(cv));
      o.set("biconditional_ok", RVal(r.biconditional_ok));
      o.set("bound_ok", RVal(r.bound_ok));
      rows.push(std::move(o));
    }
    d.set("points", std::move(rows));
    d.set("exclusions", rv_exclusions(fo.exclusions));
  } else if (c.kind == "induced_structure") {
    const Immersion f = eng.ambient_immersion(c, want(c, "immersion"));
    const TensorField11 j = eng.ambient_structure(c, want(c, "structure"));
    const std::vector<Vec> pts = eng.grid(c, want(c, "grid"), f.domain_dim);
    const TensorField11 ind =
        induced_structure(f, j, eng.metric, tols.spectral);
    bool ok = true;
    double max_complex = 0.0, max_skew = 0.0;
    double th_min = 0.0, th_max = 0.0;
    bool first = true;
    std::vector<Exclusion> exclusions;
    RVal rows = RVal::array();
    for (const Vec& u : pts) {
      try {
        const PointFrame fr = frame_at(f, u, eng.metric);
        const Mat jv = ind.value_at(u);
        const SlantReport sr =
            slant_at(fr, j.value_at(fr.ambient_point), tols.spectral);
        Mat sq = mat_mul(jv, jv);
        for (std::size_t i = 0; i < sq.rows; ++i) sq(i, i) += 1.0;
        const double complex_residual = value_frobenius(sq);
        const Mat gj = mat_mul(fr.gram, jv);
        const Mat skew = mat_add(gj, transpose(gj));
        const double skew_residual = value_frobenius(skew);
        max_complex = std::max(max_complex, complex_residual);
        max_skew = std::max(max_skew, skew_residual);
        if (complex_residual > tols.structural ||
            skew_residual > tols.structural)
          ok = false;
        const double th = sr.theta ? *sr.theta : 0.0;
        if (first || th < th_min) th_min = th;
        if (first || th > th_max) th_max = th;
        first = false;
        RVal o = RVal::object();
        o.set("point", rv_vec(u));
        o.set("theta1", RVal(th));
        o.set("cos_theta1", RVal(cos_of(sr)));
        o.set("complex_residual", RVal(complex_residual));
        o.set("skew_residual", RVal(skew_residual));
        rows.push(std::move(o));
      } catch (const SlantHypothesisError& e) {
        exclusions.push_back({u, e.what()});
        ok = false;
      } catch (const DegenerateFrameError& e) {
        exclusions.push_back({u, e.what()});
      }
    }
    rec.pass = ok && !first;
    d.set("tol", RVal(tols.structural));
    d.set("max_complex_residual", RVal(max_complex));
    d.set("max_skew_residual", RVal(max_skew));
    d.set("theta1_min", RVal(th_min));
    d.set("theta1_max", RVal(th_max));
    d.set("points", std::move(rows));
    d.set("exclusions", rv_exclusions(exclusions));
  } else if (c.kind == "kahler") {
    const Immersion f = eng.ambient_immersion(c, want(c, "immersion"));
    const TensorField11 j = eng.ambient_structure(c, want(c, "structure"));
    const VectorField xf = eng.field(c, want(c, "xfield"), f.domain_dim);
    const VectorField yf = eng.field(c, want(c, "yfield"), f.domain_dim);
    const std::vector<Vec> pts = eng.grid(c, want(c, "grid"), f.domain_dim);
    bool ok = true;
    bool kahler_everywhere = true;
    double max_consistency = 0.0;
    std::vector<Exclusion> exclusions;
    RVal rows = RVal::array();
    for (const Vec& u : pts) {
      try {
        const KahlerReport kr =
            kahler_condition_check(f, j, eng.metric, u, xf, yf, tols);
        const bool equivalence_ok = (kr.structure_residual <= tols.fd) ==
                                    (kr.condition_residual <= tols.fd);
        max_consistency = std::max(max_consistency, kr.consistency_residual);
        if (kr.consistency_residual > tols.fd || !equivalence_ok) ok = false;
        if (!kr.kahler) kahler_everywhere = false;
        RVal o = RVal::object();
        o.set("point", rv_vec(u));
        o.set("theta1", RVal(kr.theta1));
        o.set("structure_residual", RVal(kr.structure_residual));
        o.set("condition_residual", RVal(kr.condition_residual));
        o.set("consistency_residual", RVal(kr.consistency_residual));
        o.set("equivalence_ok", RVal(equivalence_ok));
        o.set("kahler", RVal(kr.kahler));
        rows.push(std::move(o));
      } catch (const SlantHypothesisError& e) {
        exclusions.push_back({u, e.what()});
        ok = false;
      } catch (const DegenerateFrameError& e) {
        exclusions.push_back({u, e.what()});
      }
    }
    rec.pass = ok && !rows.items().empty();
    d.set("tol", RVal(tols.fd));
    d.set("max_consistency_residual", RVal(max_consistency));
    d.set("kahler_everywhere", RVal(kahler_everywhere));
    d.set("points", std::move(rows));
    d.set("exclusions", rv_exclusions(exclusions));
  } else if (c.kind == "transitivity") {
    std::size_t innermost = 0;
    const std::vector<Immersion> fs = eng.chain_list(c, &innermost);
    const TensorField11 j = eng.ambient_structure(c, want(c, "structure"));
    const std::vector<Vec> pts = eng.grid(c, want(c, "grid"), innermost);
    const TransitivityOutcome to =
        transitivity_chain_check(fs, j, eng.metric, pts, tols);
    rec.pass = to.pass;
    if (!to.records.empty()) {
      const TransitivityPointRecord& r0 = to.records.front();
      const double ct = cos_of(r0.composite);
      d.set("cos_theta_tilde", RVal(ct));
      d.set("theta_tilde", RVal(std::acos(clamp01(ct))));
      RVal sc = RVal::array(), st = RVal::array();
      for (const SlantReport& s : r0.stages) {
        sc.push(RVal(cos_of(s)));
        st.push(RVal(std::acos(clamp01(cos_of(s)))));
      }
      d.set("cos_theta_stages", std::move(sc));
      d.set("theta_stages", std::move(st));
    }
    d.set("max_identity_residual", RVal(to.max_identity_residual));
    d.set("bounds_pass", RVal(to.bounds_pass));
    RVal rows = RVal::array();
    for (const TransitivityPointRecord& r : to.records) {
      RVal o = RVal::object();
      o.set("point", rv_vec(r.param));
      RVal scs = RVal::array(), scls = RVal::array(), stan = RVal::array();
      for (const SlantReport& s : r.stages) {
        scs.push(RVal(cos_of(s)));
        scls.push(RVal(to_string(s.classification)));
        stan.push(RVal(s.tangential_form_max));
      }
      o.set("stage_cos", std::move(scs));
      o.set("stage_classifications", std::move(scls));
      o.set("stage_tangential_form_max", std::move(stan));
      o.set("composite_cos", RVal(cos_of(r.composite)));
      o.set("composite_classification",
            RVal(to_string(r.composite.classification)));
      o.set("composite_tangential_form_max",
            RVal(r.composite.tangential_form_max));
      o.set("predicted_cos", RVal(r.predicted_cos));
      o.set("identity_residual", RVal(r.identity_residual));
      o.set("bound_ok", RVal(r.bound_ok));
      rows.push(std::move(o));
    }
    d.set("points", std::move(rows));
    d.set("exclusions", rv_exclusions(to.exclusions));
  } else if (c.kind == "product") {
    const std::vector<std::string> entries = name_list(want(c, "factors"));
    if (entries.size() < 2) bad(c, "'factors' needs at least two entries");
    std::vector<ProductFactor> parts;
    for (const std::string& entry : entries) {
      const std::size_t c1 = entry.find(':');
      const std::size_t c2 =
          c1 == std::string::npos ? std::string::npos : entry.find(':', c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        bad(c, "factor entry '" + entry +
                   "' must look like immersion:structure:grid");
      const std::string fn = entry.substr(0, c1);
      const std::string jn = entry.substr(c1 + 1, c2 - c1 - 1);
      const std::string gn = entry.substr(c2 + 1);
      ProductFactor part;
      part.immersion = eng.immersion(c, fn);
      const StructureDef& jd = eng.structure_def(c, jn);
      if (jd.dim != part.immersion.ambient_dim)
        bad(c, "structure '" + jn + "' has dimension " +
                   std::to_string(jd.dim) + ", factor '" + fn +
                   "' maps into dimension " +
                   std::to_string(part.immersion.ambient_dim));
      part.structure = eng.structure(c, jn);
      part.metric =
          part.immersion.ambient_dim == eng.cfg.ambient_dim
              ? eng.metric
              : MetricSpec::euclidean(part.immersion.ambient_dim);
      part.grid = eng.grid(c, gn, part.immersion.domain_dim);
      parts.push_back(std::move(part));
    }
    const ProductOutcome po = product_check(parts, tols);
    rec.pass = po.pass;
    d.set("product_slant_everywhere", RVal(po.product_slant_everywhere));
    d.set("factors_constant_equal", RVal(po.factors_constant_equal));
    d.set("biconditional_ok", RVal(po.biconditional_ok));
    d.set("common_cos", RVal(po.common_cos));
    d.set("max_product_spread", RVal(po.max_product_spread));
    RVal rows = RVal::array();
    for (const ProductPointRecord& r : po.records) {
      RVal o = RVal::object();
      o.set("point", rv_vec(r.param));
      RVal fc = RVal::array(), fcl = RVal::array();
      for (const SlantReport& s : r.factors) {
        fc.push(RVal(cos_of(s)));
        fcl.push(RVal(to_string(s.classification)));
      }
      o.set("factor_cos", std::move(fc));
      o.set("factor_classifications", std::move(fcl));
      o.set("product_classification",
            RVal(to_string(r.product.classification)));
      o.set("product_lambda_mean", RVal(r.product.lambda_mean));
      o.set("product_spread", RVal(r.product.spread));
      rows.push(std::move(o));
    }
    d.set("points", std::move(rows));
    d.set("exclusions", rv_exclusions(po.exclusions));
  } else {
    std::string kinds;
    for (const std::string& k : known_check_kinds()) {
      if (!kinds.empty()) kinds += ", ";
      kinds += k;
    }
    bad(c, "unknown check kind; known kinds: " + kinds);
  }
  return rec;
}

}  // namespace

Report run_scenario(const ScenarioConfig& cfg, bool structure_only) {
  const Engine eng(cfg);
  Report report;
  report.scenario = cfg.name;
  report.tols = cfg.tols;
  report.pass = true;
  for (const CheckDef& c : cfg.checks) {
    if (structure_only && !is_structure_kind(c.kind)) {
      CheckRecord rec;
      rec.name = c.name;
      rec.kind = c.kind;
      rec.skipped = true;
      rec.details.set("note", RVal("not a structure check"));
      report.checks.push_back(std::move(rec));
      continue;
    }
    CheckRecord rec = run_one(eng, c, cfg.tols);
    if (!rec.pass) report.pass = false;
    report.checks.push_back(std::move(rec));
  }
  return report;
}

}  // namespace slantcheck
