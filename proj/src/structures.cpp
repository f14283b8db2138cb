#include "slantcheck/structures.hpp"

#include <cmath>
#include <string>

namespace slantcheck {

namespace {

// J acting on a vector field: z -> J(z) W(z).
VectorField apply(const TensorField11& j, const VectorField& w) {
  return matrix_apply_field(j.coeff, w);
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

}  // namespace

TensorField11 TensorField11::constant(const Mat& j) {
  if (j.rows != j.cols)
    throw DimensionError("structure matrix must be square");
  return TensorField11{j.rows, [j](const JetVec&) { return lift(j); }};
}

TensorField11 TensorField11::conjugated_rotation(const Mat& j, std::size_t i,
                                                 std::size_t jx,
                                                 const ScalarField& angle) {
  if (j.rows != j.cols)
    throw DimensionError("structure matrix must be square");
  const std::size_t n = j.rows;
  if (i >= n || jx >= n || i == jx)
    throw DimensionError("rotation plane indices out of range");
  return TensorField11{
      n, [j, i, jx, n, angle](const JetVec& z) {
        const Jet2 t = angle(z);
        JetMat q = lift(Mat::identity(n));
        q(i, i) = cos(t);
        q(i, jx) = -sin(t);
        q(jx, i) = sin(t);
        q(jx, jx) = cos(t);
        return mat_mul(mat_mul(q, lift(j)), transpose(q));
      }};
}

Mat TensorField11::value_at(const Vec& x) const {
  return value_part(coeff(seed_point(x)));
}

CoefficientFunctions CoefficientFunctions::constants(const Vec& values) {
  CoefficientFunctions c;
  for (double v : values)
    c.a.push_back([v](const JetVec&) { return Jet2(v); });
  return c;
}

HermitianReport verify_almost_hermitian(const TensorField11& j,
                                        const MetricSpec& g,
                                        const std::vector<Vec>& points,
                                        double tol) {
  if (j.dim != g.dim)
    throw DimensionError("structure and metric dimensions differ");
  HermitianReport rep;
  rep.tol = tol;
  const Mat id = Mat::identity(j.dim);
  for (const Vec& x : points) {
    const Mat jv = j.value_at(x);
    const double cres =
        value_frobenius(mat_add(mat_mul(jv, jv), id));
    // Skew-adjointness g(JX, Y) = -g(X, JY) in matrix form: GJ + J^T G = 0.
    const double sres = value_frobenius(
        mat_add(mat_mul(g.gram, jv), mat_mul(transpose(jv), g.gram)));
    rep.rows.push_back({x, cres, sres});
    rep.max_complex_residual = std::max(rep.max_complex_residual, cres);
    rep.max_skew_residual = std::max(rep.max_skew_residual, sres);
  }
  rep.pass = rep.max_complex_residual <= tol && rep.max_skew_residual <= tol;
  return rep;
}

AnticommuteReport verify_anticommute(const TensorField11& j1,
                                     const TensorField11& j2,
                                     const std::vector<Vec>& points,
                                     double tol) {
  if (j1.dim != j2.dim)
    throw DimensionError("structure dimensions differ");
  AnticommuteReport rep;
  rep.tol = tol;
  for (const Vec& x : points) {
    const Mat a = j1.value_at(x);
    const Mat b = j2.value_at(x);
    const double res =
        value_frobenius(mat_add(mat_mul(a, b), mat_mul(b, a)));
    rep.rows.push_back({x, res});
    rep.max_residual = std::max(rep.max_residual, res);
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

TensorField11 build_family(const TensorField11& j1, const TensorField11& j2,
                           const CoefficientFunctions& coeffs,
                           double structural_tol) {
  if (coeffs.a.size() != 2)
    throw DimensionError("binary family needs exactly two coefficients");
  return build_family_k({j1, j2}, coeffs, structural_tol);
}

TensorField11 build_family_k(const std::vector<TensorField11>& js,
                             const CoefficientFunctions& coeffs,
                             double structural_tol) {
  if (js.size() < 2)
    throw DimensionError("family needs at least two structures");
  if (js.size() != coeffs.a.size())
    throw DimensionError("family needs one coefficient per structure");
  const std::size_t n = js.front().dim;
  for (const TensorField11& j : js)
    if (j.dim != n) throw DimensionError("family structure dimensions differ");

  return TensorField11{
      n, [js, coeffs, structural_tol, n](const JetVec& z) {
        std::vector<Jet2> a;
        double norm2 = 0.0;
        for (const ScalarField& f : coeffs.a) {
          a.push_back(f(z));
          norm2 += a.back().v * a.back().v;
        }
        if (std::fabs(norm2 - 1.0) > kCoeffNormTol)
          throw NormalizationError(
              "family coefficients violate normalization (a^2 sum = 1) at " +
              format_point(value_part(z)));
        std::vector<JetMat> jv;
        jv.reserve(js.size());
        for (const TensorField11& j : js) jv.push_back(j.coeff(z));
        for (std::size_t i = 0; i < jv.size(); ++i)
          for (std::size_t k = i + 1; k < jv.size(); ++k) {
            const Mat vi = value_part(jv[i]);
            const Mat vk = value_part(jv[k]);
            if (value_frobenius(mat_add(mat_mul(vi, vk), mat_mul(vk, vi))) >
                structural_tol)
              throw StructureError(
                  "family structures do not anti-commute at " +
                  format_point(value_part(z)));
          }
        JetMat out(n, n);
        for (std::size_t i = 0; i < jv.size(); ++i)
          out = mat_add(out, mat_scale(a[i], jv[i]));
        return out;
      }};
}

Vec nijenhuis(const TensorField11& j, const VectorField& x_field,
              const VectorField& y_field, const Vec& x) {
  const VectorField jx = apply(j, x_field);
  const VectorField jy = apply(j, y_field);
  const Mat jv = j.value_at(x);
  const Vec t1 = lie_bracket(jx, jy, x);
  const Vec t2 = mat_vec(jv, lie_bracket(jx, y_field, x));
  const Vec t3 = mat_vec(jv, lie_bracket(x_field, jy, x));
  const Vec t4 = mat_vec(jv, mat_vec(jv, lie_bracket(x_field, y_field, x)));
  Vec r(t1.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = t1[i] - t2[i] - t3[i] + t4[i];
  return r;
}

Vec fn_bracket(const TensorField11& j1, const TensorField11& j2,
               const VectorField& x_field, const VectorField& y_field,
               const Vec& x, FnForm form) {
  const VectorField j1x = apply(j1, x_field);
  const VectorField j1y = apply(j1, y_field);
  const VectorField j2x = apply(j2, x_field);
  const VectorField j2y = apply(j2, y_field);
  const Mat v1 = j1.value_at(x);
  const Mat v2 = j2.value_at(x);

  Vec r = lie_bracket(j1x, j2y, x);
  const Vec t2 = lie_bracket(j2x, j1y, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += t2[i];

  const Vec j2x_y = lie_bracket(j2x, y_field, x);
  const Vec x_j2y = lie_bracket(x_field, j2y, x);
  Vec s1(j2x_y.size());
  for (std::size_t i = 0; i < s1.size(); ++i) s1[i] = j2x_y[i] + x_j2y[i];
  const Vec t3 = mat_vec(v1, s1);

  const Vec j1x_y = lie_bracket(j1x, y_field, x);
  const Vec x_j1y = lie_bracket(x_field, j1y, x);
  Vec s2(j1x_y.size());
  for (std::size_t i = 0; i < s2.size(); ++i) s2[i] = j1x_y[i] + x_j1y[i];
  const Vec t4 = mat_vec(v2, s2);

  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= t3[i] + t4[i];

  if (form == FnForm::Full) {
    // + (J1 J2 + J2 J1)[X, Y]; vanishes when the pair anti-commutes.
    const Vec xy = lie_bracket(x_field, y_field, x);
    const Vec t5 = mat_vec(mat_add(mat_mul(v1, v2), mat_mul(v2, v1)), xy);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += t5[i];
  }
  return r;
}

DecompositionReport decomposition_check(const TensorField11& j1,
                                        const TensorField11& j2, double a,
                                        double b, const VectorField& x_field,
                                        const VectorField& y_field,
                                        const std::vector<Vec>& points,
                                        double tol) {
  const TensorField11 jab =
      build_family(j1, j2, CoefficientFunctions::constants({a, b}));
  DecompositionReport rep;
  rep.tol = tol;
  for (const Vec& x : points) {
    const Vec lhs = nijenhuis(jab, x_field, y_field, x);
    const Vec n1 = nijenhuis(j1, x_field, y_field, x);
    const Vec n2 = nijenhuis(j2, x_field, y_field, x);
    const Vec fn = fn_bracket(j1, j2, x_field, y_field, x, FnForm::Full);
    double res = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const double d = lhs[i] - (a * a * n1[i] + b * b * n2[i] + a * b * fn[i]);
      res += d * d;
    }
    res = std::sqrt(res);
    rep.rows.push_back({x, res});
    rep.max_residual = std::max(rep.max_residual, res);
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

Vec nabla_j(const TensorField11& j, const VectorField& x_field,
            const VectorField& y_field, const Vec& x) {
  const VectorField jy = apply(j, y_field);
  const Vec xv = eval_values(x_field, x);
  const Vec djy = mat_vec(jacobian(jy, x), xv);
  const Vec dy = mat_vec(jacobian(y_field, x), xv);
  const Vec jdy = mat_vec(j.value_at(x), dy);
  return sub(djy, jdy);
}

}  // namespace slantcheck
