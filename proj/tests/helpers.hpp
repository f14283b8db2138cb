#pragma once

// Shared oracles for the test binaries.  Everything here is deliberately
// independent of the engine's differentiation and eigenvalue paths: plain
// finite differences and direction search, so the two sides of every
// comparison fail independently.

#include <cmath>
#include <cstddef>
#include <vector>

#include "slantcheck/fields.hpp"
#include "slantcheck/linalg.hpp"
#include "slantcheck/structures.hpp"

namespace oracle {

using slantcheck::JetVec;
using slantcheck::Mat;
using slantcheck::Vec;
using slantcheck::VectorField;

inline Vec values_at(const VectorField& f, const Vec& x) {
  JetVec in(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) in[i] = slantcheck::Jet2(x[i]);
  const JetVec out = f(in);
  Vec v(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) v[i] = out[i].v;
  return v;
}

// Central-difference Jacobian, step 1e-5.
inline Mat fd_jacobian(const VectorField& f, const Vec& x,
                       double step = 1e-5) {
  const Vec f0 = values_at(f, x);
  Mat j(f0.size(), x.size());
  for (std::size_t c = 0; c < x.size(); ++c) {
    Vec xp = x, xm = x;
    xp[c] += step;
    xm[c] -= step;
    const Vec fp = values_at(f, xp);
    const Vec fm = values_at(f, xm);
    for (std::size_t r = 0; r < f0.size(); ++r)
      j(r, c) = (fp[r] - fm[r]) / (2.0 * step);
  }
  return j;
}

// Lie bracket through finite-difference Jacobians.
inline Vec fd_lie_bracket(const VectorField& xf, const VectorField& yf,
                          const Vec& x) {
  const Mat dx = fd_jacobian(xf, x);
  const Mat dy = fd_jacobian(yf, x);
  const Vec xv = values_at(xf, x);
  const Vec yv = values_at(yf, x);
  Vec out(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      out[i] += dy(i, j) * xv[j] - dx(i, j) * yv[j];
  return out;
}

// Nijenhuis torsion with every bracket taken by finite differences.
inline Vec fd_nijenhuis(const slantcheck::TensorField11& j,
                        const VectorField& xf, const VectorField& yf,
                        const Vec& x) {
  const VectorField jx = slantcheck::matrix_apply_field(j.coeff, xf);
  const VectorField jy = slantcheck::matrix_apply_field(j.coeff, yf);
  const Mat jv = j.value_at(x);
  const Vec t1 = fd_lie_bracket(jx, jy, x);
  const Vec t2 = fd_lie_bracket(jx, yf, x);
  const Vec t3 = fd_lie_bracket(xf, jy, x);
  const Vec t4 = fd_lie_bracket(xf, yf, x);
  Vec out(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double jt2 = 0.0, jt3 = 0.0, jjt4 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      jt2 += jv(i, k) * t2[k];
      jt3 += jv(i, k) * t3[k];
      double inner = 0.0;
      for (std::size_t l = 0; l < x.size(); ++l) inner += jv(k, l) * t4[l];
      jjt4 += jv(i, k) * inner;
    }
    out[i] = t1[i] - jt2 - jt3 + jjt4;
  }
  return out;
}

// Frolicher-Nijenhuis bracket of two structures, finite-difference brackets,
// eight-term form.
inline Vec fd_fn_bracket(const slantcheck::TensorField11& j1,
                         const slantcheck::TensorField11& j2,
                         const VectorField& xf, const VectorField& yf,
                         const Vec& x) {
  const VectorField j1x = slantcheck::matrix_apply_field(j1.coeff, xf);
  const VectorField j1y = slantcheck::matrix_apply_field(j1.coeff, yf);
  const VectorField j2x = slantcheck::matrix_apply_field(j2.coeff, xf);
  const VectorField j2y = slantcheck::matrix_apply_field(j2.coeff, yf);
  const Mat m1 = j1.value_at(x);
  const Mat m2 = j2.value_at(x);
  const std::size_t n = x.size();
  auto apply = [n](const Mat& m, const Vec& v) {
    Vec out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) out[i] += m(i, k) * v[k];
    return out;
  };
  Vec out = fd_lie_bracket(j1x, j2y, x);
  const Vec b2 = fd_lie_bracket(j2x, j1y, x);
  const Vec bxy = fd_lie_bracket(xf, yf, x);
  const Vec b5 = fd_lie_bracket(j2x, yf, x);
  const Vec b6 = fd_lie_bracket(xf, j2y, x);
  const Vec b7 = fd_lie_bracket(j1x, yf, x);
  const Vec b8 = fd_lie_bracket(xf, j1y, x);
  const Vec j1j2 = apply(m1, apply(m2, bxy));
  const Vec j2j1 = apply(m2, apply(m1, bxy));
  const Vec j1b5 = apply(m1, b5);
  const Vec j1b6 = apply(m1, b6);
  const Vec j2b7 = apply(m2, b7);
  const Vec j2b8 = apply(m2, b8);
  for (std::size_t i = 0; i < n; ++i)
    out[i] += b2[i] + j1j2[i] + j2j1[i] - j1b5[i] - j1b6[i] - j2b7[i] -
              j2b8[i];
  return out;
}

inline double norm2(const Vec& v) {
  double s = 0.0;
  for (double t : v) s += t * t;
  return std::sqrt(s);
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// Halton low-discrepancy sequence entry, 1-based index.
inline double halton(std::size_t index, std::size_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

// `count` unit directions in dimension d: Halton points pushed through
// Box-Muller, then normalized — deterministic and roughly uniform.
inline std::vector<Vec> unit_directions(std::size_t d, std::size_t count) {
  static const std::size_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  std::vector<Vec> dirs;
  const std::size_t pairs = (d + 1) / 2;
  for (std::size_t n = 1; dirs.size() < count; ++n) {
    Vec v(d);
    bool ok = true;
    for (std::size_t p = 0; p < pairs; ++p) {
      const double u1 = halton(n, primes[2 * p]);
      const double u2 = halton(n, primes[2 * p + 1]);
      if (u1 <= 1e-12) {
        ok = false;
        break;
      }
      const double rad = std::sqrt(-2.0 * std::log(u1));
      if (2 * p < d) v[2 * p] = rad * std::cos(2.0 * M_PI * u2);
      if (2 * p + 1 < d) v[2 * p + 1] = rad * std::sin(2.0 * M_PI * u2);
    }
    if (!ok) continue;
    const double nn = norm2(v);
    if (nn < 1e-9) continue;
    for (double& t : v) t /= nn;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

// Min and max of the ratio ||C u||^2_G / ||u||^2_G over directions: 64
// low-discrepancy starts, then deterministic ascent on the sphere (power
// iteration on the shifted symmetric reduction).  Independent of the
// engine's Jacobi path.
struct DirectionExtremes {
  double min = 0.0;
  double max = 0.0;
};

inline DirectionExtremes rayleigh_extremes(const Mat& c, const Mat& g) {
  using slantcheck::mat_mul;
  using slantcheck::transpose;
  const std::size_t k = g.rows;
  const Mat m = mat_mul(transpose(c), mat_mul(g, c));
  auto ratio = [&](const Vec& u) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        num += u[i] * m(i, j) * u[j];
        den += u[i] * g(i, j) * u[j];
      }
    return num / den;
  };
  const std::vector<Vec> dirs = unit_directions(k, 64);
  Vec best_max = dirs[0], best_min = dirs[0];
  double rmax = ratio(dirs[0]), rmin = rmax;
  for (const Vec& u : dirs) {
    const double r = ratio(u);
    if (r > rmax) {
      rmax = r;
      best_max = u;
    }
    if (r < rmin) {
      rmin = r;
      best_min = u;
    }
  }
  // Reduce to an ordinary symmetric problem B = L^{-1} M L^{-T}; ascent on
  // the unit sphere in w-coordinates is plain shifted power iteration.
  const Mat l = slantcheck::cholesky(g, "direction oracle metric");
  const Mat lt = transpose(l);
  auto to_w = [&](const Vec& u) {
    Vec w(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) w[i] += lt(i, j) * u[j];
    return w;
  };
  const Mat linv_m = slantcheck::forward_solve(l, m);
  const Mat b = transpose(slantcheck::forward_solve(l, transpose(linv_m)));
  double shift = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) shift += b(i, j) * b(i, j);
  shift = std::sqrt(shift) + 1.0;
  auto iterate = [&](Vec w, bool maximize) {
    for (int it = 0; it < 400; ++it) {
      Vec next(k, 0.0);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
          next[i] += (maximize ? b(i, j) : -b(i, j)) * w[j];
        next[i] += shift * w[i];
      }
      const double nn = norm2(next);
      if (nn < 1e-300) break;
      for (double& t : next) t /= nn;
      w = next;
    }
    double r = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) r += w[i] * b(i, j) * w[j];
    return r;
  };
  DirectionExtremes out;
  out.max = std::max(rmax, iterate(to_w(best_max), true));
  out.min = std::min(rmin, iterate(to_w(best_min), false));
  return out;
}

}  // namespace oracle
