#include "slantcheck/slant.hpp"

#include <algorithm>
#include <cmath>

namespace slantcheck {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

double gram_norm(const Vec& v, const Mat& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) s += v[i] * g(i, j) * v[j];
  return std::sqrt(std::max(0.0, s));
}

SlantReport classify(const Vec& param, const SymEig& eig, const Mat& c,
                     double form_max, double tol) {
  SlantReport r;
  r.param = param;
  r.eigenvalues = eig.eigenvalues;
  r.tangent_coords = c;
  r.tangential_form_max = form_max;
  r.spread = eig.eigenvalues.back() - eig.eigenvalues.front();
  double sum = 0.0;
  for (double l : eig.eigenvalues) sum += l;
  r.lambda_mean = sum / static_cast<double>(eig.eigenvalues.size());
  if (r.spread > tol) {
    r.classification = SlantClass::NotSlant;
    return r;
  }
  const double lm = clamp01(r.lambda_mean);
  r.theta = std::acos(std::sqrt(lm));
  if (1.0 - lm <= tol)
    r.classification = SlantClass::Invariant;
  else if (lm <= tol)
    r.classification = SlantClass::AntiInvariant;
  else
    r.classification = SlantClass::Proper;
  return r;
}

// E^T g J E in frame coordinates; skew when J is g-skew.
Mat tangential_form(const PointFrame& fr, const Mat& j_value) {
  return mat_mul(transpose(fr.frame),
                 mat_mul(fr.ambient_gram, mat_mul(j_value, fr.frame)));
}

Mat gram_solve(const PointFrame& fr, const Mat& b) {
  return backward_solve(fr.chol, forward_solve(fr.chol, b));
}

}  // namespace

const char* to_string(SlantClass c) {
  switch (c) {
    case SlantClass::Proper: return "pointwise-slant-proper";
    case SlantClass::AntiInvariant: return "anti-invariant";
    case SlantClass::Invariant: return "invariant";
    case SlantClass::NotSlant: return "not-slant";
  }
  return "unknown";
}

SlantReport slant_at(const PointFrame& fr, const Mat& j_value,
                     double spectral_tol) {
  const Mat a = tangential_form(fr, j_value);
  const Mat c = gram_solve(fr, a);
  const Mat m = mat_mul(transpose(c), mat_mul(fr.gram, c));
  const SymEig eig =
      gen_sym_eig(m, fr.gram, "slant pencil at " + format_point(fr.param));
  return classify(fr.param, eig, c, max_abs_value(a), spectral_tol);
}

SlantReport slant_at(const Immersion& f, const Vec& u, const TensorField11& j,
                     const MetricSpec& g, double spectral_tol) {
  const PointFrame fr = frame_at(f, u, g);
  return slant_at(fr, j.value_at(fr.ambient_point), spectral_tol);
}

ScanOutcome slant_function_scan(const Immersion& f, const TensorField11& j,
                                const MetricSpec& g,
                                const std::vector<Vec>& grid,
                                const Tolerances& tols) {
  ScanOutcome out;
  bool have_theta = false;
  for (const Vec& u : grid) {
    SlantReport rep;
    try {
      rep = slant_at(f, u, j, g, tols.spectral);
    } catch (const DegenerateFrameError& e) {
      out.exclusions.push_back({u, e.what()});
      continue;
    }
    if (rep.classification == SlantClass::Invariant)
      out.exclusions.push_back(
          {u, "invariant (theta = 0) at " + format_point(u)});
    else if (rep.classification == SlantClass::NotSlant)
      out.all_slant = false;
    if (rep.classification == SlantClass::AntiInvariant) out.all_proper = false;
    if (rep.theta && rep.classification != SlantClass::Invariant) {
      if (!have_theta) {
        out.theta_min = out.theta_max = *rep.theta;
        have_theta = true;
      } else {
        out.theta_min = std::min(out.theta_min, *rep.theta);
        out.theta_max = std::max(out.theta_max, *rep.theta);
      }
    }
    out.reports.push_back(std::move(rep));
  }
  if (!out.all_slant) out.all_proper = false;
  return out;
}

CrossTermReport cross_term(const PointFrame& fr, const Mat& j1_value,
                           const Mat& j2_value, double spectral_tol) {
  const Mat c1 = gram_solve(fr, tangential_form(fr, j1_value));
  const Mat c2 = gram_solve(fr, tangential_form(fr, j2_value));
  const Mat b = mat_mul(transpose(c1), mat_mul(fr.gram, c2));
  Mat s(b.rows, b.cols);
  for (std::size_t i = 0; i < b.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j)
      s(i, j) = 0.5 * (b(i, j) + b(j, i));
  const SymEig eig =
      gen_sym_eig(s, fr.gram, "cross form at " + format_point(fr.param));
  CrossTermReport rep;
  rep.param = fr.param;
  rep.sym_form = s;
  rep.eigenvalues = eig.eigenvalues;
  rep.spread = eig.eigenvalues.back() - eig.eigenvalues.front();
  rep.independent = rep.spread <= spectral_tol;
  double sum = 0.0;
  for (double l : eig.eigenvalues) sum += l;
  rep.value = sum / static_cast<double>(eig.eigenvalues.size());
  return rep;
}

CrossTermReport cross_term(const Immersion& f, const Vec& u,
                           const TensorField11& j1, const TensorField11& j2,
                           const MetricSpec& g, double spectral_tol) {
  const PointFrame fr = frame_at(f, u, g);
  return cross_term(fr, j1.value_at(fr.ambient_point),
                    j2.value_at(fr.ambient_point), spectral_tol);
}

FamilyOutcome family_slant_check(const Immersion& f, const TensorField11& j1,
                                 const TensorField11& j2,
                                 const CoefficientFunctions& coeffs,
                                 const MetricSpec& g,
                                 const std::vector<Vec>& grid,
                                 const Tolerances& tols) {
  return family_slant_check_k(f, {j1, j2}, coeffs, g, grid, tols);
}

FamilyOutcome family_slant_check_k(const Immersion& f,
                                   const std::vector<TensorField11>& js,
                                   const CoefficientFunctions& coeffs,
                                   const MetricSpec& g,
                                   const std::vector<Vec>& grid,
                                   const Tolerances& tols) {
  const TensorField11 fam = build_family_k(js, coeffs, tols.structural);
  FamilyOutcome out;
  const std::size_t k = js.size();
  for (const Vec& u : grid) {
    PointFrame fr;
    Mat fam_value;
    try {
      fr = frame_at(f, u, g);
      fam_value = fam.value_at(fr.ambient_point);
    } catch (const DegenerateFrameError& e) {
      out.exclusions.push_back({u, e.what()});
      continue;
    }

    FamilyPointRecord rec;
    rec.param = u;
    const JetVec z = seed_point(fr.ambient_point);
    for (const ScalarField& af : coeffs.a)
      rec.coeff_values.push_back(af(z).v);

    std::vector<Mat> jv;
    jv.reserve(k);
    for (const TensorField11& j : js)
      jv.push_back(value_part(j.coeff(z)));

    rec.combined = slant_at(fr, fam_value, tols.spectral);
    for (std::size_t i = 0; i < k; ++i)
      rec.factors.push_back(slant_at(fr, jv[i], tols.spectral));

    // The formula and the biconditional presuppose slantness under every
    // factor structure; points violating that hypothesis are excluded.
    bool factors_slant = true;
    for (std::size_t i = 0; i < k; ++i)
      if (rec.factors[i].classification == SlantClass::NotSlant) {
        out.exclusions.push_back(
            {u, "factor " + std::to_string(i + 1) +
                    " not pointwise slant at " + format_point(u)});
        factors_slant = false;
        break;
      }
    if (!factors_slant) continue;

    double cos2 = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      cos2 += rec.coeff_values[i] * rec.coeff_values[i] *
              clamp01(rec.factors[i].lambda_mean);

    // Weighted cross form: its direction-independence is the exact
    // criterion for the combined structure to be slant at this point.
    Mat weighted(fr.gram.rows, fr.gram.cols);
    double cross_abs_max = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        CrossTermReport ct =
            cross_term(fr, jv[i], jv[j], tols.spectral);
        cos2 += 2.0 * rec.coeff_values[i] * rec.coeff_values[j] * ct.value;
        cross_abs_max = std::max(cross_abs_max, max_abs_value(ct.sym_form));
        weighted = mat_add(
            weighted, mat_scale(rec.coeff_values[i] * rec.coeff_values[j],
                                ct.sym_form));
        rec.crosses.push_back(std::move(ct));
      }
    rec.cos2_formula = cos2;

    const SymEig weig = gen_sym_eig(weighted, fr.gram,
                                    "weighted cross form at " +
                                        format_point(u));
    const bool weighted_independent =
        (weig.eigenvalues.back() - weig.eigenvalues.front()) <= tols.spectral;
    const bool combined_slant =
        rec.combined.classification != SlantClass::NotSlant;
    rec.biconditional_ok = (combined_slant == weighted_independent);

    if (combined_slant) {
      rec.mismatch = std::fabs(rec.combined.lambda_mean - rec.cos2_formula);
      out.max_mismatch = std::max(out.max_mismatch, rec.mismatch);
      if (rec.mismatch > tols.spectral) out.formula_pass = false;
    }

    if (cross_abs_max <= tols.spectral && combined_slant) {
      double lo = 1.0, hi = 0.0;
      for (const SlantReport& fr2 : rec.factors) {
        lo = std::min(lo, clamp01(fr2.lambda_mean));
        hi = std::max(hi, clamp01(fr2.lambda_mean));
      }
      rec.bound_ok = rec.combined.lambda_mean >= lo - tols.spectral &&
                     rec.combined.lambda_mean <= hi + tols.spectral;
      if (!rec.bound_ok) out.bounds_pass = false;
    }

    if (!rec.biconditional_ok) out.biconditional_pass = false;
    out.records.push_back(std::move(rec));
  }
  out.pass = out.formula_pass && out.biconditional_pass && out.bounds_pass;
  return out;
}

namespace {

struct FrameJets {
  JetVec image;
  JetMat frame;
  JetMat gram;
  JetMat tangent;   // C
  Jet2 lambda_mean; // trace(G^{-1} C^T G C) / k
};

FrameJets frame_jets(const Space& s, const Immersion& f, const JetVec& u) {
  const Vec u0 = value_part(u);
  const MapJet mj = eval_map_jet(f.map, u0);
  const std::size_t n = f.ambient_dim;
  const std::size_t k = f.domain_dim;
  std::size_t seeds = 0;
  for (const Jet2& j : u) seeds = std::max(seeds, j.dim());

  // Frame entries as first-order jets: value dF, gradient from the chain
  // rule through the input jets.  Second-order slots stay zero; no consumer
  // differentiates a stage field twice.
  FrameJets fj;
  fj.frame = JetMat(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      Jet2 e(mj.jacobian(i, j), seeds);
      for (std::size_t sdx = 0; sdx < seeds; ++sdx) {
        double acc = 0.0;
        for (std::size_t b = 0; b < k; ++b)
          acc += mj.hessian[i](j, b) * u[b].grad(sdx);
        e.g[sdx] = acc;
      }
      fj.frame(i, j) = e;
    }

  fj.image = f.map(u);
  const JetMat gm = s.metric(fj.image);
  const JetMat js = s.structure(fj.image);
  const JetMat et = transpose(fj.frame);
  fj.gram = mat_mul(et, mat_mul(gm, fj.frame));
  const JetMat a = mat_mul(et, mat_mul(gm, mat_mul(js, fj.frame)));
  const std::string what = "stage frame at " + format_point(u0);
  fj.tangent = solve_spd(fj.gram, a, what);
  const JetMat m =
      mat_mul(transpose(fj.tangent), mat_mul(fj.gram, fj.tangent));
  const JetMat gm_inv_m = solve_spd(fj.gram, m, what);
  Jet2 tr(0.0);
  for (std::size_t i = 0; i < k; ++i) tr = tr + gm_inv_m(i, i);
  fj.lambda_mean = tr / static_cast<double>(k);
  return fj;
}

void require_proper(const Space& s, const Immersion& f, const Vec& u0,
                    double tol) {
  const SlantReport r = slant_in_space(s, f, u0, tol);
  if (r.classification == SlantClass::NotSlant)
    throw SlantHypothesisError("not pointwise slant at " + format_point(u0));
  if (r.classification == SlantClass::Invariant)
    throw SlantHypothesisError("invariant (theta = 0) at " +
                               format_point(u0));
  if (std::sqrt(clamp01(r.lambda_mean)) < tol)
    throw SlantHypothesisError(
        "anti-invariant within tolerance (cos theta below " +
        std::to_string(tol) + ") at " + format_point(u0));
}

}  // namespace

Space ambient_space(const MetricSpec& g, const TensorField11& j) {
  if (g.dim != j.dim)
    throw DimensionError("metric and structure dimensions differ");
  const Mat gram = g.gram;
  return Space{g.dim, [gram](const JetVec&) { return lift(gram); }, j.coeff};
}

Space induced_space(const Space& s, const Immersion& f, double spectral_tol) {
  if (s.dim != f.ambient_dim)
    throw DimensionError("immersion ambient does not match the space");
  Space out;
  out.dim = f.domain_dim;
  out.metric = [s, f](const JetVec& u) { return frame_jets(s, f, u).gram; };
  out.structure = [s, f, spectral_tol](const JetVec& u) {
    require_proper(s, f, value_part(u), spectral_tol);
    FrameJets fj = frame_jets(s, f, u);
    return mat_scale(1.0 / sqrt(fj.lambda_mean), fj.tangent);
  };
  return out;
}

SlantReport slant_in_space(const Space& s, const Immersion& f, const Vec& u,
                           double spectral_tol) {
  const JetVec uj = seed_point(u);
  const JetVec img = f.map(uj);
  PointFrame fr;
  fr.param = u;
  fr.ambient_point = value_part(img);
  fr.frame = eval_map_jet(f.map, u).jacobian;
  fr.ambient_gram = value_part(s.metric(img));
  fr.gram =
      mat_mul(transpose(fr.frame), mat_mul(fr.ambient_gram, fr.frame));
  fr.chol = cholesky(fr.gram, "frame at " + format_point(u));
  return slant_at(fr, value_part(s.structure(img)), spectral_tol);
}

TensorField11 induced_structure(const Immersion& f, const TensorField11& j,
                                const MetricSpec& g, double spectral_tol) {
  const Space s = induced_space(ambient_space(g, j), f, spectral_tol);
  return TensorField11{f.domain_dim, s.structure};
}

KahlerReport kahler_condition_check(const Immersion& f, const TensorField11& j,
                                    const MetricSpec& g, const Vec& u,
                                    const VectorField& x_field,
                                    const VectorField& y_field,
                                    const Tolerances& tols) {
  const Space s0 = ambient_space(g, j);
  require_proper(s0, f, u, tols.spectral);

  const MatrixField t1f = [s0, f](const JetVec& p) {
    return frame_jets(s0, f, p).tangent;
  };
  const Space ind = induced_space(s0, f, tols.spectral);
  const MatrixField j2f = ind.structure;

  const PointFrame fr = frame_at(f, u, g);
  const JetVec up = seed_point(u);
  const Mat t1v = value_part(t1f(up));
  const Mat j2v = value_part(j2f(up));
  const Vec yv = eval_values(y_field, u);
  const Vec xv = eval_values(x_field, u);

  // theta as a function on the parameter domain, differentiated along X.
  const Jet2 lam = [&] {
    FrameJets fj = frame_jets(s0, f, seed_coords(u));
    return fj.lambda_mean;
  }();
  const Jet2 theta_jet = arccos(sqrt(lam));
  if (!is_finite(theta_jet))
    throw EvaluationDomainError(
        "slant function not differentiable at " + format_point(u));
  double x_theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    x_theta += theta_jet.grad(i) * xv[i];
  const double theta1 = theta_jet.v;
  const double sec1 = 1.0 / std::cos(theta1);
  const double tan1 = std::tan(theta1);

  const Vec dxy = induced_covariant_derivative(f, u, x_field, y_field, g);
  const Vec dx_j2y = induced_covariant_derivative(
      f, u, x_field, matrix_apply_field(j2f, y_field), g);
  const Vec dx_t1y = induced_covariant_derivative(
      f, u, x_field, matrix_apply_field(t1f, y_field), g);

  const Vec nabla_j2 = vec_sub(dx_j2y, mat_vec(j2v, dxy));
  Vec cond = vec_sub(dx_t1y, mat_vec(t1v, dxy));
  const Vec t1y = mat_vec(t1v, yv);
  for (std::size_t i = 0; i < cond.size(); ++i)
    cond[i] += tan1 * x_theta * t1y[i];

  KahlerReport rep;
  rep.param = u;
  rep.theta1 = theta1;
  rep.structure_residual = gram_norm(nabla_j2, fr.gram);
  rep.condition_residual = gram_norm(cond, fr.gram);
  Vec diff(nabla_j2.size());
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff[i] = nabla_j2[i] - sec1 * cond[i];
  rep.consistency_residual = gram_norm(diff, fr.gram);
  rep.kahler = rep.structure_residual <= tols.fd;
  return rep;
}

TransitivityOutcome transitivity_chain_check(const std::vector<Immersion>& fs,
                                             const TensorField11& j,
                                             const MetricSpec& g,
                                             const std::vector<Vec>& grid,
                                             const Tolerances& tols) {
  if (fs.size() < 2)
    throw DimensionError("chain needs at least two immersions");
  const std::size_t m = fs.size();
  for (std::size_t i = 0; i + 1 < m; ++i)
    if (fs[i].domain_dim != fs[i + 1].ambient_dim)
      throw DimensionError("chain dimensions do not match");

  std::vector<Space> sp;
  sp.push_back(ambient_space(g, j));
  for (std::size_t i = 0; i + 1 < m; ++i)
    sp.push_back(induced_space(sp[i], fs[i], tols.spectral));

  Immersion comp = fs[0];
  for (std::size_t i = 1; i < m; ++i) comp = compose(comp, fs[i]);

  TransitivityOutcome out;
  bool composite_ok = true;
  for (const Vec& u : grid) {
    try {
      std::vector<Vec> pts(m);
      pts[m - 1] = u;
      for (std::size_t i = m - 1; i > 0; --i)
        pts[i - 1] = eval_values(fs[i].map, pts[i]);

      TransitivityPointRecord rec;
      rec.param = u;
      for (std::size_t i = 0; i < m; ++i)
        rec.stages.push_back(
            slant_in_space(sp[i], fs[i], pts[i], tols.spectral));
      rec.composite = slant_in_space(sp[0], comp, u, tols.spectral);

      bool stages_slant = true;
      double prod = 1.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (rec.stages[i].classification == SlantClass::NotSlant) {
          out.exclusions.push_back(
              {u, "stage " + std::to_string(i + 1) +
                      " not pointwise slant at " + format_point(pts[i])});
          stages_slant = false;
          break;
        }
        prod *= std::sqrt(clamp01(rec.stages[i].lambda_mean));
      }
      if (!stages_slant) continue;
      if (rec.composite.classification == SlantClass::NotSlant) {
        // Stages slant but the composite is not: the identity itself fails.
        composite_ok = false;
        out.exclusions.push_back(
            {u, "composite not pointwise slant at " + format_point(u)});
        continue;
      }

      rec.predicted_cos = prod;
      const double cos_comp = std::sqrt(clamp01(rec.composite.lambda_mean));
      rec.identity_residual = std::fabs(cos_comp - prod);
      out.max_identity_residual =
          std::max(out.max_identity_residual, rec.identity_residual);

      double min_stage_cos = 1.0;
      for (const SlantReport& st : rec.stages)
        min_stage_cos =
            std::min(min_stage_cos, std::sqrt(clamp01(st.lambda_mean)));
      rec.bound_ok = cos_comp <= min_stage_cos + tols.spectral;
      if (!rec.bound_ok) out.bounds_pass = false;

      out.records.push_back(std::move(rec));
    } catch (const SlantHypothesisError& e) {
      out.exclusions.push_back({u, e.what()});
    } catch (const DegenerateFrameError& e) {
      out.exclusions.push_back({u, e.what()});
    }
  }
  out.pass = !out.records.empty() && composite_ok &&
             out.max_identity_residual <= tols.spectral && out.bounds_pass;
  return out;
}

TransitivityOutcome transitivity_check(const Immersion& f1,
                                       const Immersion& f2,
                                       const TensorField11& j,
                                       const MetricSpec& g,
                                       const std::vector<Vec>& grid,
                                       const Tolerances& tols) {
  return transitivity_chain_check({f1, f2}, j, g, grid, tols);
}

ProductOutcome product_check(const std::vector<ProductFactor>& parts,
                             const Tolerances& tols) {
  if (parts.size() < 2)
    throw DimensionError("product needs at least two factors");
  std::size_t total_n = 0, total_k = 0;
  std::vector<std::size_t> noff, koff;
  for (const ProductFactor& p : parts) {
    noff.push_back(total_n);
    koff.push_back(total_k);
    total_n += p.immersion.ambient_dim;
    total_k += p.immersion.domain_dim;
    if (p.grid.empty())
      throw DimensionError("every product factor needs at least one point");
  }

  Mat gram(total_n, total_n);
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (std::size_t i = 0; i < parts[p].metric.dim; ++i)
      for (std::size_t j = 0; j < parts[p].metric.dim; ++j)
        gram(noff[p] + i, noff[p] + j) = parts[p].metric.gram(i, j);
  const MetricSpec prod_g{total_n, gram};

  std::vector<MatrixField> coeffs;
  std::vector<std::size_t> ndims;
  for (const ProductFactor& p : parts) {
    coeffs.push_back(p.structure.coeff);
    ndims.push_back(p.structure.dim);
  }
  TensorField11 prod_j{
      total_n, [coeffs, ndims, noff, total_n](const JetVec& z) {
        JetMat out(total_n, total_n);
        for (std::size_t p = 0; p < coeffs.size(); ++p) {
          JetVec zi(z.begin() + noff[p], z.begin() + noff[p] + ndims[p]);
          const JetMat m = coeffs[p](zi);
          for (std::size_t i = 0; i < ndims[p]; ++i)
            for (std::size_t j = 0; j < ndims[p]; ++j)
              out(noff[p] + i, noff[p] + j) = m(i, j);
        }
        return out;
      }};

  std::vector<VectorField> maps;
  std::vector<std::size_t> kdims;
  for (const ProductFactor& p : parts) {
    maps.push_back(p.immersion.map);
    kdims.push_back(p.immersion.domain_dim);
  }
  Immersion prod_f{total_k, total_n,
                   [maps, kdims, koff](const JetVec& u) {
                     JetVec out;
                     for (std::size_t p = 0; p < maps.size(); ++p) {
                       JetVec ui(u.begin() + koff[p],
                                 u.begin() + koff[p] + kdims[p]);
                       JetVec yi = maps[p](ui);
                       out.insert(out.end(), yi.begin(), yi.end());
                     }
                     return out;
                   }};

  // Per-factor reports, each on its own grid.
  ProductOutcome out;
  std::vector<std::vector<SlantReport>> freps(parts.size());
  bool have_ref = false;
  double ref_cos = 0.0;
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (const Vec& up : parts[p].grid) {
      SlantReport r = slant_at(parts[p].immersion, up, parts[p].structure,
                               parts[p].metric, tols.spectral);
      if (r.classification == SlantClass::NotSlant) {
        out.factors_constant_equal = false;
        out.exclusions.push_back(
            {up, "factor " + std::to_string(p + 1) +
                     " not pointwise slant at " + format_point(up)});
      } else {
        const double c = std::sqrt(clamp01(r.lambda_mean));
        if (!have_ref) {
          ref_cos = c;
          have_ref = true;
        } else if (std::fabs(c - ref_cos) > tols.spectral) {
          out.factors_constant_equal = false;
        }
      }
      freps[p].push_back(std::move(r));
    }
  out.common_cos = have_ref ? ref_cos : 0.0;

  // Cartesian product, last factor fastest.
  std::vector<std::size_t> idx(parts.size(), 0);
  bool done = false;
  while (!done) {
    Vec param;
    for (std::size_t p = 0; p < parts.size(); ++p)
      param.insert(param.end(), parts[p].grid[idx[p]].begin(),
                   parts[p].grid[idx[p]].end());
    ProductPointRecord rec;
    rec.param = param;
    for (std::size_t p = 0; p < parts.size(); ++p)
      rec.factors.push_back(freps[p][idx[p]]);
    rec.product = slant_at(prod_f, param, prod_j, prod_g, tols.spectral);
    out.max_product_spread =
        std::max(out.max_product_spread, rec.product.spread);
    if (rec.product.classification == SlantClass::NotSlant)
      out.product_slant_everywhere = false;
    out.records.push_back(std::move(rec));

    done = true;
    for (std::size_t p = parts.size(); p-- > 0;) {
      if (++idx[p] < parts[p].grid.size()) {
        done = false;
        break;
      }
      idx[p] = 0;
    }
  }

  out.biconditional_ok =
      (out.product_slant_everywhere == out.factors_constant_equal);
  out.pass = out.biconditional_ok;
  return out;
}

}  // namespace slantcheck
