#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "slantcheck/errors.hpp"

namespace slantcheck {

// Second-order forward-mode jet: value, gradient, and dense Hessian with
// respect to a fixed set of seed directions.  A jet with zero seeds acts as
// a constant and broadcasts against any seed count; combining jets with two
// different nonzero seed counts is a dimension error.
struct Jet2 {
  double v = 0.0;
  std::vector<double> g;  // dim() first derivatives
  std::vector<double> h;  // dim()*dim() second derivatives, row-major

  Jet2() = default;
  explicit Jet2(double value) : v(value) {}
  Jet2(double value, std::size_t seeds)
      : v(value), g(seeds, 0.0), h(seeds * seeds, 0.0) {}

  // Jet of the index-th seed coordinate: unit gradient, zero Hessian.
  static Jet2 variable(double value, std::size_t index, std::size_t seeds) {
    Jet2 j(value, seeds);
    j.g[index] = 1.0;
    return j;
  }

  std::size_t dim() const { return g.size(); }
  double grad(std::size_t i) const { return g.empty() ? 0.0 : g[i]; }
  double hess(std::size_t i, std::size_t j) const {
    return h.empty() ? 0.0 : h[i * dim() + j];
  }
};

namespace jet_detail {

inline std::size_t joint_dim(const Jet2& a, const Jet2& b) {
  if (a.dim() == b.dim()) return a.dim();
  if (a.dim() == 0) return b.dim();
  if (b.dim() == 0) return a.dim();
  throw DimensionError("jet seed counts differ: " + std::to_string(a.dim()) +
                       " vs " + std::to_string(b.dim()));
}

}  // namespace jet_detail

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  const std::size_t d = jet_detail::joint_dim(a, b);
  Jet2 r(a.v + b.v, d);
  for (std::size_t i = 0; i < d; ++i) r.g[i] = a.grad(i) + b.grad(i);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      r.h[i * d + j] = a.hess(i, j) + b.hess(i, j);
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  const std::size_t d = jet_detail::joint_dim(a, b);
  Jet2 r(a.v - b.v, d);
  for (std::size_t i = 0; i < d; ++i) r.g[i] = a.grad(i) - b.grad(i);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      r.h[i * d + j] = a.hess(i, j) - b.hess(i, j);
  return r;
}

inline Jet2 operator-(const Jet2& a) {
  Jet2 r = a;
  r.v = -r.v;
  for (double& x : r.g) x = -x;
  for (double& x : r.h) x = -x;
  return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  const std::size_t d = jet_detail::joint_dim(a, b);
  Jet2 r(a.v * b.v, d);
  for (std::size_t i = 0; i < d; ++i)
    r.g[i] = a.grad(i) * b.v + a.v * b.grad(i);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      r.h[i * d + j] = a.hess(i, j) * b.v + a.grad(i) * b.grad(j) +
                       a.grad(j) * b.grad(i) + a.v * b.hess(i, j);
  return r;
}

// Unary chain rule: lifts f with derivatives df, ddf at x.v to the jet.
inline Jet2 jet_chain(const Jet2& x, double f, double df, double ddf) {
  const std::size_t d = x.dim();
  Jet2 r(f, d);
  for (std::size_t i = 0; i < d; ++i) r.g[i] = df * x.g[i];
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      r.h[i * d + j] = df * x.hess(i, j) + ddf * x.g[i] * x.g[j];
  return r;
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double u = b.v;
  return a * jet_chain(b, 1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u));
}

inline Jet2 operator+(const Jet2& a, double c) { return a + Jet2(c); }
inline Jet2 operator+(double c, const Jet2& a) { return Jet2(c) + a; }
inline Jet2 operator-(const Jet2& a, double c) { return a - Jet2(c); }
inline Jet2 operator-(double c, const Jet2& a) { return Jet2(c) - a; }
inline Jet2 operator*(const Jet2& a, double c) { return a * Jet2(c); }
inline Jet2 operator*(double c, const Jet2& a) { return Jet2(c) * a; }
inline Jet2 operator/(const Jet2& a, double c) { return a / Jet2(c); }
inline Jet2 operator/(double c, const Jet2& a) { return Jet2(c) / a; }

inline Jet2 sin(const Jet2& x) {
  const double s = std::sin(x.v), c = std::cos(x.v);
  return jet_chain(x, s, c, -s);
}

inline Jet2 cos(const Jet2& x) {
  const double s = std::sin(x.v), c = std::cos(x.v);
  return jet_chain(x, c, -s, -c);
}

inline Jet2 sqrt(const Jet2& x) {
  const double s = std::sqrt(x.v);
  return jet_chain(x, s, 0.5 / s, -0.25 / (s * s * s));
}

// |x| is treated as piecewise linear; second derivative 0 away from x = 0,
// and the kink itself yields non-finite downstream only through division.
inline Jet2 abs(const Jet2& x) {
  const double sign = x.v < 0.0 ? -1.0 : 1.0;
  return jet_chain(x, std::fabs(x.v), sign, 0.0);
}

inline Jet2 arccos(const Jet2& x) {
  const double u = x.v;
  const double w = 1.0 - u * u;
  const double r = std::sqrt(w);
  return jet_chain(x, std::acos(u), -1.0 / r, -u / (r * w));
}

inline Jet2 sec(const Jet2& x) { return 1.0 / cos(x); }

// Integer power by repeated multiplication; exact for polynomial use.
inline Jet2 pow_int(const Jet2& x, long n) {
  if (n < 0) return 1.0 / pow_int(x, -n);
  Jet2 r(1.0, x.dim());
  for (long i = 0; i < n; ++i) r = r * x;
  return r;
}

inline double pow_int(double x, long n) {
  if (n < 0) return 1.0 / pow_int(x, -n);
  double r = 1.0;
  for (long i = 0; i < n; ++i) r *= x;
  return r;
}

inline double sec(double x) { return 1.0 / std::cos(x); }
inline double arccos(double x) { return std::acos(x); }

inline bool is_finite(const Jet2& x) {
  if (!std::isfinite(x.v)) return false;
  for (double t : x.g)
    if (!std::isfinite(t)) return false;
  for (double t : x.h)
    if (!std::isfinite(t)) return false;
  return true;
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.v; }

}  // namespace slantcheck
