#include "slantcheck/fields.hpp"

#include <cmath>
#include <cstdio>

namespace slantcheck {

JetVec seed_point(const Vec& x) {
  JetVec j;
  j.reserve(x.size());
  for (double v : x) j.emplace_back(v);
  return j;
}

JetVec seed_coords(const Vec& x) {
  JetVec j;
  j.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    j.push_back(Jet2::variable(x[i], i, x.size()));
  return j;
}

std::string format_point(const Vec& x) {
  std::string s = "(";
  char buf[64];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%g", x[i]);
    if (i) s += ", ";
    s += buf;
  }
  s += ")";
  return s;
}

Vec eval_values(const VectorField& f, const Vec& x) {
  const JetVec out = f(seed_point(x));
  Vec v(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    v[i] = out[i].v;
    if (!std::isfinite(v[i]))
      throw EvaluationDomainError("map produced a non-finite value at " +
                                  format_point(x));
  }
  return v;
}

MapJet eval_map_jet(const VectorField& f, const Vec& x) {
  const std::size_t d = x.size();
  const JetVec out = f(seed_coords(x));
  MapJet mj;
  mj.value.resize(out.size());
  mj.jacobian = Mat(out.size(), d);
  mj.hessian.assign(out.size(), Mat(d, d));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!is_finite(out[i]))
      throw EvaluationDomainError(
          "map produced a non-finite value or derivative at " +
          format_point(x));
    mj.value[i] = out[i].v;
    for (std::size_t j = 0; j < d; ++j) {
      mj.jacobian(i, j) = out[i].grad(j);
      for (std::size_t k = 0; k < d; ++k)
        mj.hessian[i](j, k) = out[i].hess(j, k);
    }
  }
  return mj;
}

Mat jacobian(const VectorField& f, const Vec& x) {
  return eval_map_jet(f, x).jacobian;
}

Vec lie_bracket(const VectorField& x_field, const VectorField& y_field,
                const Vec& x) {
  const MapJet xj = eval_map_jet(x_field, x);
  const MapJet yj = eval_map_jet(y_field, x);
  if (xj.value.size() != x.size() || yj.value.size() != x.size())
    throw DimensionError("lie_bracket needs vector fields on the same space");
  const Vec a = mat_vec(yj.jacobian, xj.value);
  const Vec b = mat_vec(xj.jacobian, yj.value);
  Vec r(x.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

VectorField constant_vector_field(const Vec& v) {
  return [v](const JetVec&) { return lift(v); };
}

VectorField matrix_apply_field(const MatrixField& m, const VectorField& w) {
  return [m, w](const JetVec& z) { return mat_vec(m(z), w(z)); };
}

}  // namespace slantcheck
