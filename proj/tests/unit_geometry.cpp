#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "slantcheck/errors.hpp"
#include "slantcheck/immersion.hpp"
#include "slantcheck/scenario.hpp"
#include "slantcheck/slant.hpp"
#include "slantcheck/structures.hpp"

using namespace slantcheck;

namespace {

Immersion make_imm(std::size_t dom, std::size_t amb, VectorField f) {
  return Immersion{dom, amb, std::move(f)};
}

// Surface with slant function arccos(2|u1+u2| / sqrt((4u1^2+7)(4u2^2+7)))
// under the first structure below.
Immersion surface_a() {
  return make_imm(2, 8, [](const JetVec& z) {
    return JetVec{2.0 * z[0], z[0],          pow_int(z[0], 2), z[0] + z[1],
                  z[0] - z[1], 2.0 * z[1],   z[1],             pow_int(z[1], 2)};
  });
}

// Surface with slant function arccos(|4u1u2+5| / sqrt((4u1^2+5)(4u2^2+5))).
Immersion surface_b() {
  return make_imm(2, 8, [](const JetVec& z) {
    return JetVec{2.0 * z[0], z[0], pow_int(z[0], 2), Jet2(1.0),
                  2.0 * z[1], z[1], pow_int(z[1], 2), Jet2(1.0)};
  });
}

// Four-dimensional stage with constant cosine 1/3.
Immersion stage1() {
  return make_imm(4, 8, [](const JetVec& z) {
    return JetVec{z[0] + z[1], z[0] - z[1], z[2] + z[3], z[2] - z[3],
                  z[0],        z[1],        z[2],        z[3]};
  });
}

// Two-dimensional stage inside the previous domain, constant cosine 2/3.
Immersion stage2() {
  return make_imm(2, 4, [](const JetVec& z) {
    return JetVec{z[0], z[0] + z[1], z[0] - z[1], z[1]};
  });
}

// Stage whose image is anti-invariant under the induced structure.
Immersion stage2_anti() {
  return make_imm(2, 4, [](const JetVec& z) {
    return JetVec{2.0 * z[0], z[1], 2.0 * z[1], z[0]};
  });
}

// One-dimensional stage; a curve is anti-invariant in any structure.
Immersion curve1() {
  return make_imm(1, 2, [](const JetVec& z) {
    return JetVec{z[0], pow_int(z[0], 2)};
  });
}

Immersion paraboloid4() {
  return make_imm(2, 4, [](const JetVec& z) {
    return JetVec{z[0], z[1], pow_int(z[0], 2) + pow_int(z[1], 2), Jet2(0.0)};
  });
}

// Curved surface whose slant function varies: cos^2 = 1/(1+4u1^2).
Immersion curved4() {
  return make_imm(2, 4, [](const JetVec& z) {
    return JetVec{z[0], z[1], pow_int(z[0], 2), Jet2(0.0)};
  });
}

// Generic three-dimensional fixture; not pointwise slant anywhere on the
// test grid.
Immersion generic3to6() {
  return make_imm(3, 6, [](const JetVec& z) {
    return JetVec{z[0],        z[1],             z[2],
                  z[0] * z[1], pow_int(z[0], 2), z[1] * z[2]};
  });
}

TensorField11 const_structure(const std::string& preset) {
  return TensorField11::constant(preset_structure(preset));
}

const VectorField kFieldU = [](const JetVec& z) {
  return JetVec{z[1], -z[0], z[3], -z[2], z[5], -z[4], z[7], -z[6]};
};

const VectorField kFieldW = [](const JetVec& z) {
  return JetVec{z[0] * z[1], z[2],     Jet2(1.0), z[0],
                z[6],        z[1] * z[1], Jet2(0.0), z[4]};
};

const Vec kProbe8{0.3, -0.7, 0.4, 0.1, -0.2, 0.6, -0.5, 0.8};

}  // namespace

TEST_CASE("preset structures are almost complex and compatible") {
  for (const std::string& name : preset_structure_names()) {
    const Mat j = preset_structure(name);
    const MetricSpec g = MetricSpec::euclidean(j.rows);
    const HermitianReport rep = verify_almost_hermitian(
        TensorField11::constant(j), g, {Vec(j.rows, 0.0)});
    CHECK(rep.pass);
    CHECK(rep.max_complex_residual == 0.0);
    CHECK(rep.max_skew_residual == 0.0);
  }
  const char* pairs[][2] = {{"uu8", "uv8_split"},
                            {"uu8", "uv8_mixed"},
                            {"uv8_split", "uv8_mixed"}};
  for (const auto& p : pairs) {
    const AnticommuteReport rep = verify_anticommute(
        const_structure(p[0]), const_structure(p[1]), {Vec(8, 0.0)});
    CHECK(rep.pass);
    CHECK(rep.max_residual == 0.0);
  }
}

TEST_CASE("conjugated rotation keeps the structure identities") {
  const ScalarField angle = [](const JetVec& z) { return sin(z[0]) + z[1]; };
  const TensorField11 j1 =
      TensorField11::conjugated_rotation(preset_structure("uu8"), 0, 1, angle);
  const TensorField11 j2 = TensorField11::conjugated_rotation(
      preset_structure("uv8_split"), 0, 1, angle);
  const MetricSpec g = MetricSpec::euclidean(8);
  const HermitianReport h = verify_almost_hermitian(j1, g, {kProbe8});
  CHECK(h.pass);
  CHECK(h.max_complex_residual <= 1e-12);
  CHECK(h.max_skew_residual <= 1e-12);
  const AnticommuteReport a = verify_anticommute(j1, j2, {kProbe8});
  CHECK(a.pass);
  CHECK(a.max_residual <= 1e-12);
}

TEST_CASE("nijenhuis torsion vanishes for constant structures") {
  const TensorField11 j = const_structure("uu8");
  const Vec n = nijenhuis(j, kFieldU, kFieldW, kProbe8);
  CHECK(oracle::norm2(n) <= 1e-12);
  const Vec diag = nijenhuis(j, kFieldW, kFieldW, kProbe8);
  CHECK(oracle::norm2(diag) <= 1e-12);
}

TEST_CASE("nijenhuis torsion matches finite differences") {
  const ScalarField angle = [](const JetVec& z) { return z[0]; };
  const TensorField11 j =
      TensorField11::conjugated_rotation(preset_structure("uu8"), 0, 1, angle);
  const Vec n = nijenhuis(j, kFieldU, kFieldW, kProbe8);
  const Vec fd = oracle::fd_nijenhuis(j, kFieldU, kFieldW, kProbe8);
  CHECK(oracle::norm2(oracle::sub(n, fd)) <= 1e-6);
  CHECK(oracle::norm2(n) > 1e-3);  // genuinely non-integrable fixture
}

TEST_CASE("frolicher-nijenhuis bracket properties") {
  const ScalarField angle = [](const JetVec& z) { return z[0]; };
  const TensorField11 j1 =
      TensorField11::conjugated_rotation(preset_structure("uu8"), 0, 1, angle);
  const TensorField11 j2 = TensorField11::conjugated_rotation(
      preset_structure("uv8_split"), 0, 1, angle);

  // [J, J](X, Y) = 2 N_J(X, Y).
  const Vec self = fn_bracket(j1, j1, kFieldU, kFieldW, kProbe8);
  const Vec n = nijenhuis(j1, kFieldU, kFieldW, kProbe8);
  Vec twice(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) twice[i] = 2.0 * n[i];
  CHECK(oracle::norm2(oracle::sub(self, twice)) <= 1e-10);

  const Vec full = fn_bracket(j1, j2, kFieldU, kFieldW, kProbe8);
  const Vec fd = oracle::fd_fn_bracket(j1, j2, kFieldU, kFieldW, kProbe8);
  CHECK(oracle::norm2(oracle::sub(full, fd)) <= 1e-6);

  // The six-term form assumes anti-commutation; it must agree here.
  const Vec six =
      fn_bracket(j1, j2, kFieldU, kFieldW, kProbe8, FnForm::AntiCommuting);
  CHECK(oracle::norm2(oracle::sub(full, six)) <= 1e-10);
}

TEST_CASE("torsion of a combined structure decomposes") {
  const ScalarField angle = [](const JetVec& z) { return z[0]; };
  const TensorField11 j1 =
      TensorField11::conjugated_rotation(preset_structure("uu8"), 0, 1, angle);
  const TensorField11 j2 = TensorField11::conjugated_rotation(
      preset_structure("uv8_split"), 0, 1, angle);
  const DecompositionReport rep = decomposition_check(
      j1, j2, 0.6, 0.8, kFieldU, kFieldW, {kProbe8, Vec(8, 0.25)});
  CHECK(rep.pass);
  CHECK(rep.max_residual <= 1e-9);

  CHECK_THROWS_AS(decomposition_check(j1, j2, 0.8, 0.7, kFieldU, kFieldW,
                                      {kProbe8}),
                  NormalizationError);
  try {
    decomposition_check(j1, j2, 0.8, 0.7, kFieldU, kFieldW, {kProbe8});
  } catch (const NormalizationError& e) {
    CHECK(std::string(e.what()).find("normalization") != std::string::npos);
  }
}

TEST_CASE("covariant derivative of a combined structure follows the weights") {
  const TensorField11 j1 = const_structure("uu8");
  const TensorField11 j2 = const_structure("uv8_split");
  CoefficientFunctions trig;
  trig.a.push_back([](const JetVec& z) { return cos(z[0]); });
  trig.a.push_back([](const JetVec& z) { return sin(z[0]); });
  const TensorField11 fam = build_family(j1, j2, trig);

  const Vec lhs = nabla_j(fam, kFieldU, kFieldW, kProbe8);
  // X(a) = -sin(x1) X^1 and X(b) = cos(x1) X^1 for these weights.
  const Vec xv = eval_values(kFieldU, kProbe8);
  const Vec yv = eval_values(kFieldW, kProbe8);
  const double xa = -std::sin(kProbe8[0]) * xv[0];
  const double xb = std::cos(kProbe8[0]) * xv[0];
  const Vec j1y = mat_vec(j1.value_at(kProbe8), yv);
  const Vec j2y = mat_vec(j2.value_at(kProbe8), yv);
  double err = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const double d = lhs[i] - (xa * j1y[i] + xb * j2y[i]);
    err += d * d;
  }
  CHECK(std::sqrt(err) <= 1e-9);

  const TensorField11 flat = build_family(
      j1, j2, CoefficientFunctions::constants(Vec{0.6, 0.8}));
  CHECK(oracle::norm2(nabla_j(flat, kFieldU, kFieldW, kProbe8)) <= 1e-12);
}

TEST_CASE("combined structures guard their hypotheses at evaluation") {
  const TensorField11 j1 = const_structure("uu8");
  const TensorField11 j2 = const_structure("uv8_split");
  const TensorField11 bad_norm = build_family(
      j1, j2, CoefficientFunctions::constants(Vec{0.8, 0.7}));
  CHECK_THROWS_AS(bad_norm.value_at(kProbe8), NormalizationError);

  const TensorField11 same_pair = build_family(
      j1, j1, CoefficientFunctions::constants(Vec{0.6, 0.8}));
  CHECK_THROWS_AS(same_pair.value_at(kProbe8), StructureError);
}

TEST_CASE("tangent frames expose gram data and reject rank drops") {
  const PointFrame fr =
      frame_at(stage1(), Vec{0.2, -0.4, 0.6, 0.8}, MetricSpec::euclidean(8));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(fr.gram(i, j) == (i == j ? 3.0 : 0.0));

  const Immersion pinched = make_imm(2, 2, [](const JetVec& z) {
    return JetVec{z[0], pow_int(z[1], 2)};
  });
  CHECK_THROWS_AS(frame_at(pinched, Vec{0.5, 0.0}, MetricSpec::euclidean(2)),
                  DegenerateFrameError);
  try {
    frame_at(pinched, Vec{0.5, 0.0}, MetricSpec::euclidean(2));
  } catch (const DegenerateFrameError& e) {
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
}

TEST_CASE("normal component of the structure action has the expected size") {
  const PointFrame fr =
      frame_at(stage1(), Vec{0.2, -0.4, 0.6, 0.8}, MetricSpec::euclidean(8));
  const double r =
      normal_residual(fr, const_structure("uv8"), Vec{1.0, 0.0, 0.0, 0.0});
  CHECK(r == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("induced covariant derivative on a paraboloid") {
  const Immersion f = paraboloid4();
  const MetricSpec g = MetricSpec::euclidean(4);
  const VectorField e1 = constant_vector_field(Vec{1.0, 0.0});
  const Vec w = induced_covariant_derivative(f, Vec{1.0, 0.0}, e1, e1, g);
  CHECK(w[0] == doctest::Approx(0.8).epsilon(1e-13));
  CHECK(w[1] == doctest::Approx(0.0).epsilon(1e-13));

  // Torsion-free: nabla_X Y - nabla_Y X = [X, Y].
  const VectorField xf = [](const JetVec& z) {
    return JetVec{Jet2(1.0), z[0] * z[1]};
  };
  const VectorField yf = [](const JetVec& z) {
    return JetVec{z[1], pow_int(z[0], 2)};
  };
  const Vec u{0.7, -0.3};
  const Vec dxy = induced_covariant_derivative(f, u, xf, yf, g);
  const Vec dyx = induced_covariant_derivative(f, u, yf, xf, g);
  const Vec br = lie_bracket(xf, yf, u);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(std::fabs(dxy[i] - dyx[i] - br[i]) <= 1e-9);

  // Metric compatibility: X(g(Y,Z)) = g(nabla_X Y, Z) + g(Y, nabla_X Z),
  // with the left side taken by finite differences of the induced metric.
  const VectorField zf = [](const JetVec& z) {
    return JetVec{z[0], -z[1]};
  };
  auto inner = [&](const Vec& at) {
    const PointFrame fr = frame_at(f, at, g);
    const Vec yv = oracle::values_at(yf, at);
    const Vec zv = oracle::values_at(zf, at);
    double s = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) s += yv[i] * fr.gram(i, j) * zv[j];
    return s;
  };
  const Vec xv = oracle::values_at(xf, u);
  const double h = 1e-5;
  double lhs = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    Vec up = u, dn = u;
    up[c] += h;
    dn[c] -= h;
    lhs += xv[c] * (inner(up) - inner(dn)) / (2 * h);
  }
  const PointFrame fr = frame_at(f, u, g);
  const Vec dxz = induced_covariant_derivative(f, u, xf, zf, g);
  const Vec yv = oracle::values_at(yf, u);
  const Vec zv = oracle::values_at(zf, u);
  double rhs = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      rhs += dxy[i] * fr.gram(i, j) * zv[j] + yv[i] * fr.gram(i, j) * dxz[j];
  CHECK(std::fabs(lhs - rhs) <= 1e-6);
}

TEST_CASE("slant data at frozen points") {
  const MetricSpec g = MetricSpec::euclidean(8);

  const SlantReport r1 =
      slant_at(surface_a(), Vec{1.0, 1.0}, const_structure("uu8"), g);
  CHECK(r1.classification == SlantClass::Proper);
  CHECK(r1.spread <= 1e-12);
  REQUIRE(r1.theta.has_value());
  CHECK(std::cos(*r1.theta) == doctest::Approx(4.0 / 11.0).epsilon(1e-12));

  const SlantReport r2 =
      slant_at(surface_b(), Vec{1.0, -1.0}, const_structure("uu8"), g);
  CHECK(std::cos(*r2.theta) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));

  const SlantReport r3 = slant_at(stage1(), Vec{0.2, -0.4, 0.6, 0.8},
                                  const_structure("uv8"), g);
  CHECK(r3.eigenvalues.size() == 4);
  for (double ev : r3.eigenvalues)
    CHECK(ev == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(std::cos(*r3.theta) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // Combined structure at the origin of the first surface: the weights
  // (1/sqrt(2), 1/sqrt(2)) give cosine sqrt(2)/7 there.
  const double s = std::sqrt(0.5);
  const TensorField11 fam = build_family(
      const_structure("uu8"), const_structure("uv8_split"),
      CoefficientFunctions::constants(Vec{s, s}));
  const SlantReport r4 = slant_at(surface_a(), Vec{0.0, 0.0}, fam, g);
  CHECK(std::cos(*r4.theta) ==
        doctest::Approx(std::sqrt(2.0) / 7.0).epsilon(1e-12));
}

TEST_CASE("tangential operator squares to minus cos^2 and scaling is inert") {
  const MetricSpec g = MetricSpec::euclidean(8);
  const SlantReport r =
      slant_at(surface_a(), Vec{1.0, 1.0}, const_structure("uu8"), g);
  const Mat& c = r.tangent_coords;
  Mat sq = mat_mul(c, c);
  const double c2 = r.lambda_mean;
  for (std::size_t i = 0; i < sq.rows; ++i) sq(i, i) += c2;
  CHECK(value_frobenius(sq) <= 1e-12);

  Immersion scaled = surface_a();
  const VectorField base = scaled.map;
  scaled.map = [base](const JetVec& z) {
    JetVec out = base(z);
    for (Jet2& t : out) t = 3.0 * t;
    return out;
  };
  const SlantReport rs =
      slant_at(scaled, Vec{1.0, 1.0}, const_structure("uu8"), g);
  CHECK(rs.lambda_mean == doctest::Approx(r.lambda_mean).epsilon(1e-12));
}

TEST_CASE("two-dimensional domains are always pointwise slant") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const TensorField11 j = const_structure("uv6");
  const MetricSpec g = MetricSpec::euclidean(6);
  for (int trial = 0; trial < 20; ++trial) {
    Vec coef(24);
    for (double& c : coef) c = dist(rng);
    const Immersion f = make_imm(2, 6, [coef](const JetVec& z) {
      JetVec out;
      for (int k = 0; k < 6; ++k)
        out.push_back(coef[4 * k] * z[0] + coef[4 * k + 1] * z[1] +
                      coef[4 * k + 2] * z[0] * z[1] +
                      coef[4 * k + 3] * pow_int(z[0], 2));
      return out;
    });
    const Vec u{dist(rng), dist(rng)};
    try {
      const SlantReport r = slant_at(f, u, j, g);
      CHECK(r.spread <= 1e-9);
      CHECK(r.classification != SlantClass::NotSlant);
    } catch (const DegenerateFrameError&) {
      // A random polynomial surface can pinch; skip such draws.
    }
  }
}

TEST_CASE("three-dimensional domains can fail to be pointwise slant") {
  const SlantReport r =
      slant_at(generic3to6(), Vec{1.0, -0.5, 0.5}, const_structure("uv6"),
               MetricSpec::euclidean(6));
  CHECK(r.classification == SlantClass::NotSlant);
  CHECK(r.spread > 1e-3);
  CHECK(!r.theta.has_value());
}

TEST_CASE("sampled direction ratios match the spectral data") {
  const MetricSpec g8 = MetricSpec::euclidean(8);
  const SlantReport slanted =
      slant_at(surface_a(), Vec{1.0, 1.0}, const_structure("uu8"), g8);
  const PointFrame fr = frame_at(surface_a(), Vec{1.0, 1.0}, g8);
  const Mat m = mat_mul(transpose(slanted.tangent_coords),
                        mat_mul(fr.gram, slanted.tangent_coords));
  for (const Vec& u : oracle::unit_directions(2, 64)) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        num += u[i] * m(i, j) * u[j];
        den += u[i] * fr.gram(i, j) * u[j];
      }
    CHECK(std::fabs(num / den - slanted.lambda_mean) <= 1e-6);
  }

  const Vec p{1.0, -0.5, 0.5};
  const SlantReport skewed = slant_at(generic3to6(), p,
                                      const_structure("uv6"),
                                      MetricSpec::euclidean(6));
  const PointFrame fr3 = frame_at(generic3to6(), p, MetricSpec::euclidean(6));
  const oracle::DirectionExtremes ex =
      oracle::rayleigh_extremes(skewed.tangent_coords, fr3.gram);
  CHECK(std::fabs(ex.min - skewed.eigenvalues.front()) <= 1e-6);
  CHECK(std::fabs(ex.max - skewed.eigenvalues.back()) <= 1e-6);
}

TEST_CASE("scans classify invariant and anti-invariant loci") {
  const MetricSpec g = MetricSpec::euclidean(8);
  const ScanOutcome inv = slant_function_scan(
      surface_b(), const_structure("uu8"), g, {Vec{1.0, 1.0}, Vec{1.0, -1.0}});
  REQUIRE(inv.exclusions.size() == 1);
  CHECK(inv.exclusions[0].reason.find("invariant") != std::string::npos);
  // Excluded points are still probed, so both grid points report.
  REQUIRE(inv.reports.size() == 2);
  CHECK(inv.reports[0].classification == SlantClass::Invariant);
  CHECK(inv.reports[1].param == Vec{1.0, -1.0});
  CHECK(std::cos(*inv.reports[1].theta) ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(inv.all_slant);

  const ScanOutcome anti = slant_function_scan(
      surface_b(), const_structure("uv8_split"), g,
      {Vec{-2.0, -1.75}, Vec{1.0, 0.25}, Vec{2.0, 2.25}});
  CHECK(anti.all_slant);
  CHECK(!anti.all_proper);
  for (const SlantReport& r : anti.reports) {
    CHECK(r.classification == SlantClass::AntiInvariant);
    CHECK(r.tangential_form_max <= 1e-12);
  }
}

TEST_CASE("combining a slant and an anti-invariant structure scales the cosine") {
  const MetricSpec g = MetricSpec::euclidean(8);
  const FamilyOutcome fo = family_slant_check(
      surface_b(), const_structure("uu8"), const_structure("uv8_split"),
      CoefficientFunctions::constants(Vec{0.6, 0.8}), g,
      {Vec{1.0, -1.0}, Vec{2.0, 0.25}});
  CHECK(fo.pass);
  CHECK(fo.max_mismatch <= 1e-9);
  REQUIRE(fo.records.size() == 2);
  const FamilyPointRecord& rec = fo.records[0];
  CHECK(std::cos(*rec.combined.theta) ==
        doctest::Approx(0.6 * (1.0 / 9.0)).epsilon(1e-12));
  CHECK(rec.biconditional_ok);

  // Two anti-invariant factors combine to an anti-invariant structure.
  const FamilyOutcome anti = family_slant_check(
      surface_b(), const_structure("uv8_split"), const_structure("uv8_mixed"),
      CoefficientFunctions::constants(Vec{0.6, 0.8}), g, {Vec{1.0, -1.0}});
  CHECK(anti.pass);
  REQUIRE(anti.records.size() == 1);
  CHECK(anti.records[0].combined.classification == SlantClass::AntiInvariant);
}

TEST_CASE("family checks exclude points where a factor is not slant") {
  // Three-dimensional fixture that is not pointwise slant under either
  // factor: every grid point lands in the exclusions, none in the records.
  const Immersion f = make_imm(3, 8, [](const JetVec& z) {
    return JetVec{z[0],
                  z[1],
                  z[2],
                  z[0] * z[1],
                  pow_int(z[0], 2),
                  z[1] * z[2],
                  Jet2(0.0),
                  Jet2(0.0)};
  });
  const FamilyOutcome fo = family_slant_check(
      f, const_structure("uu8"), const_structure("uv8_split"),
      CoefficientFunctions::constants(Vec{0.6, 0.8}),
      MetricSpec::euclidean(8), {Vec{1.0, -0.5, 0.5}, Vec{0.5, 1.0, -1.0}});
  CHECK(fo.records.empty());
  REQUIRE(fo.exclusions.size() == 2);
  CHECK(fo.exclusions[0].reason.find("not pointwise slant") !=
        std::string::npos);
}

TEST_CASE("cross form of two structures on a surface") {
  const MetricSpec g = MetricSpec::euclidean(8);
  const CrossTermReport r =
      cross_term(surface_a(), Vec{2.0, 1.0}, const_structure("uu8"),
                 const_structure("uv8_split"), g);
  CHECK(r.independent);
  // Closed form 4(u1+u2)(u1-1) / ((4u1^2+7)(4u2^2+7)) at (2, 1).
  CHECK(r.value == doctest::Approx(12.0 / 253.0).epsilon(1e-12));
}

TEST_CASE("induced structure is almost complex on its stage") {
  const MetricSpec g = MetricSpec::euclidean(8);
  const TensorField11 ind = induced_structure(stage1(), const_structure("uv8"), g);
  const Vec u{0.2, -0.4, 0.6, 0.8};
  const Mat jv = ind.value_at(u);
  Mat sq = mat_mul(jv, jv);
  for (std::size_t i = 0; i < 4; ++i) sq(i, i) += 1.0;
  CHECK(value_frobenius(sq) <= 1e-12);
  const PointFrame fr = frame_at(stage1(), u, g);
  const Mat gj = mat_mul(fr.gram, jv);
  CHECK(value_frobenius(mat_add(gj, transpose(gj))) <= 1e-12);

  // The normalization needs a proper slant point; anti-invariant and
  // invariant loci are rejected by name.
  const TensorField11 flat =
      induced_structure(surface_b(), const_structure("uv8_split"), g);
  CHECK_THROWS_AS(flat.value_at(Vec{1.0, -1.0}), SlantHypothesisError);
  const TensorField11 inv =
      induced_structure(surface_b(), const_structure("uu8"), g);
  CHECK_THROWS_AS(inv.value_at(Vec{1.0, 1.0}), SlantHypothesisError);
}

TEST_CASE("stage spaces chain through induced geometry") {
  const MetricSpec g = MetricSpec::euclidean(8);
  const Space ambient = ambient_space(g, const_structure("uv8"));
  const SlantReport top =
      slant_in_space(ambient, stage1(), Vec{0.2, -0.4, 0.6, 0.8});
  CHECK(std::cos(*top.theta) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const Space stage = induced_space(ambient, stage1());
  const SlantReport inner = slant_in_space(stage, stage2(), Vec{0.5, -0.5});
  CHECK(std::cos(*inner.theta) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("transitivity multiplies stage cosines") {
  const MetricSpec g = MetricSpec::euclidean(8);
  const TransitivityOutcome to = transitivity_check(
      stage1(), stage2(), const_structure("uv8"), g,
      {Vec{0.0, 0.0}, Vec{1.0, -1.0}, Vec{0.5, 0.25}});
  CHECK(to.pass);
  CHECK(to.max_identity_residual <= 1e-12);
  CHECK(to.bounds_pass);
  REQUIRE(!to.records.empty());
  const TransitivityPointRecord& rec = to.records.front();
  CHECK(std::cos(*rec.stages[0].theta) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::cos(*rec.stages[1].theta) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::cos(*rec.composite.theta) ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK(rec.predicted_cos == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("anti-invariant stages stay anti-invariant through the chain") {
  const MetricSpec g = MetricSpec::euclidean(8);
  const TransitivityOutcome to = transitivity_check(
      stage1(), stage2_anti(), const_structure("uv8"), g,
      {Vec{0.0, 0.0}, Vec{1.0, 1.0}});
  CHECK(to.pass);
  for (const TransitivityPointRecord& rec : to.records) {
    CHECK(rec.stages[1].classification == SlantClass::AntiInvariant);
    CHECK(rec.stages[1].tangential_form_max <= 1e-12);
    CHECK(rec.composite.classification == SlantClass::AntiInvariant);
    CHECK(rec.composite.tangential_form_max <= 1e-12);
    CHECK(rec.identity_residual <= 1e-12);
  }
}

TEST_CASE("three-stage chains multiply all cosines") {
  const MetricSpec g = MetricSpec::euclidean(8);
  const TransitivityOutcome to = transitivity_chain_check(
      {stage1(), stage2(), curve1()}, const_structure("uv8"), g,
      {Vec{0.0}, Vec{0.5}, Vec{-1.0}});
  CHECK(to.pass);
  CHECK(to.max_identity_residual <= 1e-12);
  for (const TransitivityPointRecord& rec : to.records) {
    CHECK(rec.stages.size() == 3);
    // A curve is anti-invariant, so the composite cosine collapses to zero.
    CHECK(rec.stages[2].classification == SlantClass::AntiInvariant);
    CHECK(rec.composite.classification == SlantClass::AntiInvariant);
    CHECK(rec.predicted_cos == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("kahler condition holds on flat and two-dimensional stages") {
  const MetricSpec g8 = MetricSpec::euclidean(8);
  const VectorField x4 = constant_vector_field(Vec{1.0, 0.0, 0.0, 0.0});
  const VectorField y4 = [](const JetVec& z) {
    return JetVec{z[1], z[0], z[3], z[2]};
  };
  const KahlerReport flat = kahler_condition_check(
      stage1(), const_structure("uv8"), g8, Vec{0.2, -0.4, 0.6, 0.8}, x4, y4);
  CHECK(flat.kahler);
  CHECK(flat.structure_residual <= 1e-9);
  CHECK(flat.consistency_residual <= 1e-9);

  // On a surface the induced structure is the 90-degree rotation, which is
  // parallel for every metric, so even a varying angle stays kahler.
  const MetricSpec g4 = MetricSpec::euclidean(4);
  const VectorField x2 = constant_vector_field(Vec{1.0, 0.0});
  const VectorField y2 = [](const JetVec& z) { return JetVec{z[1], z[0]}; };
  const KahlerReport curved = kahler_condition_check(
      curved4(), const_structure("uv4"), g4, Vec{1.0, 0.5}, x2, y2);
  const KahlerReport curved_b = kahler_condition_check(
      curved4(), const_structure("uv4"), g4, Vec{0.25, 0.5}, x2, y2);
  CHECK(curved.kahler);
  CHECK(curved.structure_residual <= 1e-9);
  CHECK(curved.condition_residual <= 1e-9);
  CHECK(curved.consistency_residual <= 1e-9);
  CHECK(curved_b.kahler);
  CHECK(std::fabs(curved.theta1 - curved_b.theta1) > 0.5);
}

TEST_CASE("kahler condition fails when the induced structure is not parallel") {
  // Two copies of the curved surface, probed on the diagonal u1 == u3 where
  // both sheets share the same angle: the probe point is properly slant, but
  // the angle gradient splits between the sheets and (nabla J2) Y != 0.
  const Immersion pair = make_imm(4, 8, [](const JetVec& z) {
    return JetVec{z[0], z[1], pow_int(z[0], 2), Jet2(0.0),
                  z[2], z[3], pow_int(z[2], 2), Jet2(0.0)};
  });
  const MetricSpec g8 = MetricSpec::euclidean(8);
  const Vec probe{1.0, 0.5, 1.0, 0.7};

  const SlantReport sr = slant_at(pair, probe, const_structure("uv8"), g8,
                                  Tolerances{}.spectral);
  REQUIRE(sr.classification == SlantClass::Proper);
  CHECK(*sr.theta ==
        doctest::Approx(std::acos(1.0 / std::sqrt(5.0))).epsilon(1e-12));

  const VectorField x4 = constant_vector_field(Vec{1.0, 0.0, 0.0, 0.0});
  const VectorField y4 = [](const JetVec& z) {
    return JetVec{z[1], z[0], z[3], z[2]};
  };
  const KahlerReport rep =
      kahler_condition_check(pair, const_structure("uv8"), g8, probe, x4, y4);
  CHECK(!rep.kahler);
  CHECK(rep.structure_residual > 1e-2);
  CHECK(rep.condition_residual > 1e-2);
  // The two formulations remain equivalent even when both are nonzero.
  CHECK(rep.consistency_residual <= 1e-12);
}

TEST_CASE("products are slant exactly when factor angles agree") {
  const MetricSpec g8 = MetricSpec::euclidean(8);
  const std::vector<Vec> quad{Vec{0.1, -0.3, 0.5, 0.7}, Vec{0.4, 0.2, -0.6, 0.8}};
  ProductFactor fa{stage1(), const_structure("uv8"), g8, quad};
  const ProductOutcome equal = product_check({fa, fa});
  CHECK(equal.pass);
  CHECK(equal.product_slant_everywhere);
  CHECK(equal.factors_constant_equal);
  CHECK(equal.biconditional_ok);
  CHECK(equal.common_cos == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(equal.max_product_spread <= 1e-9);

  const Immersion flatb = make_imm(2, 4, [](const JetVec& z) {
    return JetVec{z[0], Jet2(0.0), z[1], Jet2(0.0)};
  });
  ProductFactor fb{flatb, const_structure("uv4"), MetricSpec::euclidean(4),
                   {Vec{0.0, 0.0}, Vec{1.0, 1.0}}};
  const ProductOutcome mixed = product_check({fa, fb});
  CHECK(mixed.pass);
  CHECK(!mixed.product_slant_everywhere);
  CHECK(!mixed.factors_constant_equal);
  CHECK(mixed.biconditional_ok);
}
