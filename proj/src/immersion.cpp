#include "slantcheck/immersion.hpp"

#include <cmath>

namespace slantcheck {

Immersion compose(const Immersion& outer, const Immersion& inner) {
  if (outer.domain_dim != inner.ambient_dim)
    throw DimensionError("composition dimensions do not chain");
  const VectorField om = outer.map;
  const VectorField im = inner.map;
  return Immersion{inner.domain_dim, outer.ambient_dim,
                   [om, im](const JetVec& u) { return om(im(u)); }};
}

PointFrame frame_at_gram(const Immersion& f, const Vec& u,
                         const Mat& ambient_gram) {
  if (u.size() != f.domain_dim)
    throw DimensionError("parameter point has wrong dimension");
  const MapJet mj = eval_map_jet(f.map, u);
  if (mj.value.size() != f.ambient_dim)
    throw DimensionError("immersion output has wrong dimension");

  PointFrame fr;
  fr.param = u;
  fr.ambient_point = mj.value;
  fr.frame = mj.jacobian;
  fr.ambient_gram = ambient_gram;
  fr.gram = mat_mul(transpose(fr.frame), mat_mul(ambient_gram, fr.frame));
  fr.chol = cholesky(fr.gram, "frame at " + format_point(u));
  return fr;
}

PointFrame frame_at(const Immersion& f, const Vec& u, const MetricSpec& g) {
  if (g.dim != f.ambient_dim)
    throw DimensionError("metric dimension does not match ambient");
  return frame_at_gram(f, u, g.gram);
}

namespace {

// G^{-1} B via the cached Cholesky factor.
Mat gram_solve(const PointFrame& fr, const Mat& b) {
  return backward_solve(fr.chol, forward_solve(fr.chol, b));
}

}  // namespace

TangentOperator tangential_operator(const PointFrame& fr, const Mat& j_value) {
  const Mat a = mat_mul(transpose(fr.frame),
                        mat_mul(fr.ambient_gram, mat_mul(j_value, fr.frame)));
  return TangentOperator{gram_solve(fr, a)};
}

TangentOperator tangential_operator(const PointFrame& fr,
                                    const TensorField11& j) {
  return tangential_operator(fr, j.value_at(fr.ambient_point));
}

double normal_residual(const PointFrame& fr, const TensorField11& j,
                       const Vec& v) {
  if (v.size() != fr.frame.cols)
    throw DimensionError("tangent coordinates have wrong dimension");
  const Mat jv = j.value_at(fr.ambient_point);
  const Vec w = mat_vec(jv, mat_vec(fr.frame, v));  // J applied to Ev
  // Tangential coordinates of w, then the ambient remainder.
  Mat wcol(w.size(), 1);
  for (std::size_t i = 0; i < w.size(); ++i) wcol(i, 0) = w[i];
  const Mat proj = gram_solve(
      fr, mat_mul(transpose(fr.frame), mat_mul(fr.ambient_gram, wcol)));
  Vec c(proj.rows);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = proj(i, 0);
  const Vec tangential = mat_vec(fr.frame, c);
  Vec normal(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) normal[i] = w[i] - tangential[i];
  double s = 0.0;
  for (std::size_t i = 0; i < normal.size(); ++i)
    for (std::size_t k = 0; k < normal.size(); ++k)
      s += normal[i] * fr.ambient_gram(i, k) * normal[k];
  return std::sqrt(std::max(0.0, s));
}

Vec induced_covariant_derivative(const Immersion& f, const Vec& u,
                                 const VectorField& x_field,
                                 const VectorField& y_field,
                                 const MetricSpec& g) {
  const PointFrame fr = frame_at(f, u, g);
  const MapJet fj = eval_map_jet(f.map, u);
  const MapJet yj = eval_map_jet(y_field, u);
  const Vec xv = eval_values(x_field, u);
  if (yj.value.size() != f.domain_dim || xv.size() != f.domain_dim)
    throw DimensionError(
        "induced_covariant_derivative needs fields on the parameter domain");

  // Ambient directional derivative of z(t) = E(u(t)) Y(u(t)) with
  // u'(0) = X(u): second-derivative term plus frame times DY X.
  const Vec dyx = mat_vec(yj.jacobian, xv);
  Vec w(f.ambient_dim, 0.0);
  for (std::size_t i = 0; i < f.ambient_dim; ++i) {
    double s = 0.0;
    for (std::size_t jcol = 0; jcol < f.domain_dim; ++jcol) {
      double hx = 0.0;
      for (std::size_t l = 0; l < f.domain_dim; ++l)
        hx += fj.hessian[i](jcol, l) * xv[l];
      s += hx * yj.value[jcol] + fr.frame(i, jcol) * dyx[jcol];
    }
    w[i] = s;
  }

  // Tangential projection in frame coordinates.
  Mat wcol(w.size(), 1);
  for (std::size_t i = 0; i < w.size(); ++i) wcol(i, 0) = w[i];
  const Mat c = backward_solve(
      fr.chol,
      forward_solve(fr.chol, mat_mul(transpose(fr.frame),
                                     mat_mul(fr.ambient_gram, wcol))));
  Vec out(f.domain_dim);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c(i, 0);
  return out;
}

}  // namespace slantcheck
