#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "slantcheck/errors.hpp"
#include "slantcheck/jet.hpp"
#include "slantcheck/tolerances.hpp"

namespace slantcheck {

// Dense row-major matrix over double or Jet2.  Dimensions in this engine
// never exceed the ambient dimension (8), so everything is direct and
// allocation cost is irrelevant.
template <class S>
struct MatT {
  std::size_t rows = 0, cols = 0;
  std::vector<S> a;

  MatT() = default;
  MatT(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  S& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const S& operator()(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }

  static MatT identity(std::size_t n) {
    MatT m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1.0);
    return m;
  }
};

using Mat = MatT<double>;
using JetMat = MatT<Jet2>;
using Vec = std::vector<double>;
using JetVec = std::vector<Jet2>;

template <class S>
MatT<S> transpose(const MatT<S>& m) {
  MatT<S> t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

template <class S>
MatT<S> mat_mul(const MatT<S>& a, const MatT<S>& b) {
  if (a.cols != b.rows)
    throw DimensionError("matrix product shape mismatch: " +
                         std::to_string(a.cols) + " vs " +
                         std::to_string(b.rows));
  MatT<S> c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const S& aik = a(i, k);
      for (std::size_t j = 0; j < b.cols; ++j)
        c(i, j) = c(i, j) + aik * b(k, j);
    }
  return c;
}

template <class S>
std::vector<S> mat_vec(const MatT<S>& a, const std::vector<S>& x) {
  if (a.cols != x.size())
    throw DimensionError("matrix-vector shape mismatch: " +
                         std::to_string(a.cols) + " vs " +
                         std::to_string(x.size()));
  std::vector<S> y(a.rows, S(0.0));
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      y[i] = y[i] + a(i, j) * x[j];
  return y;
}

template <class S>
MatT<S> mat_add(const MatT<S>& a, const MatT<S>& b) {
  MatT<S> c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.a.size(); ++i) c.a[i] = a.a[i] + b.a[i];
  return c;
}

template <class S>
MatT<S> mat_sub(const MatT<S>& a, const MatT<S>& b) {
  MatT<S> c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.a.size(); ++i) c.a[i] = a.a[i] - b.a[i];
  return c;
}

template <class S, class T>
MatT<S> mat_scale(const T& s, const MatT<S>& a) {
  MatT<S> c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.a.size(); ++i) c.a[i] = s * a.a[i];
  return c;
}

// Frobenius norm of the value part; the usual residual measure everywhere.
template <class S>
double value_frobenius(const MatT<S>& m) {
  double s = 0.0;
  for (const S& x : m.a) {
    const double v = value_of(x);
    s += v * v;
  }
  return std::sqrt(s);
}

template <class S>
double max_abs_value(const MatT<S>& m) {
  double s = 0.0;
  for (const S& x : m.a) s = std::max(s, std::fabs(value_of(x)));
  return s;
}

inline Mat value_part(const JetMat& m) {
  Mat r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].v;
  return r;
}

inline JetMat lift(const Mat& m) {
  JetMat r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = Jet2(m.a[i]);
  return r;
}

inline Vec value_part(const JetVec& v) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].v;
  return r;
}

inline JetVec lift(const Vec& v) {
  JetVec r;
  r.reserve(v.size());
  for (double x : v) r.emplace_back(x);
  return r;
}

inline double sqrt_scalar(double x) { return std::sqrt(x); }
inline Jet2 sqrt_scalar(const Jet2& x) { return sqrt(x); }

// Lower Cholesky factor of a symmetric positive-definite matrix.  Pivots are
// tested on value parts against rel * ||A||_F; failure throws
// DegenerateFrameError tagged with `what`.
template <class S>
MatT<S> cholesky(const MatT<S>& m, const std::string& what,
                 double rel = kCholPivotRel) {
  if (m.rows != m.cols) throw DimensionError("cholesky needs a square matrix");
  const std::size_t n = m.rows;
  const double floor_sq = rel * value_frobenius(m);
  MatT<S> l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    S d = m(j, j);
    for (std::size_t k = 0; k < n; ++k) {
      if (k < j) d = d - l(j, k) * l(j, k);
    }
    if (!(value_of(d) > floor_sq))
      throw DegenerateFrameError(what + ": matrix not positive definite");
    l(j, j) = sqrt_scalar(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      S s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s = s - l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// Solves L X = B for lower-triangular L.
template <class S>
MatT<S> forward_solve(const MatT<S>& l, const MatT<S>& b) {
  MatT<S> x(b.rows, b.cols);
  for (std::size_t c = 0; c < b.cols; ++c)
    for (std::size_t i = 0; i < b.rows; ++i) {
      S s = b(i, c);
      for (std::size_t k = 0; k < i; ++k) s = s - l(i, k) * x(k, c);
      x(i, c) = s / l(i, i);
    }
  return x;
}

// Solves L^T X = B for lower-triangular L.
template <class S>
MatT<S> backward_solve(const MatT<S>& l, const MatT<S>& b) {
  MatT<S> x(b.rows, b.cols);
  const std::size_t n = b.rows;
  for (std::size_t c = 0; c < b.cols; ++c)
    for (std::size_t ii = 0; ii < n; ++ii) {
      const std::size_t i = n - 1 - ii;
      S s = b(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s = s - l(k, i) * x(k, c);
      x(i, c) = s / l(i, i);
    }
  return x;
}

// Solves A X = B with A symmetric positive definite.
template <class S>
MatT<S> solve_spd(const MatT<S>& a, const MatT<S>& b, const std::string& what) {
  const MatT<S> l = cholesky(a, what);
  return backward_solve(l, forward_solve(l, b));
}

struct SymEig {
  Vec eigenvalues;  // ascending
  Mat eigenvectors; // column i pairs with eigenvalues[i]
};

// Cyclic Jacobi for symmetric matrices.  Sweeps until
// off(A) < 1e-13 * ||input||_F, at most 100 sweeps, then ConvergenceError.
// Input asymmetry beyond kSymmetryRel * ||A||_F is a StructureError;
// smaller asymmetry is symmetrized away.
SymEig sym_eig(const Mat& a);

// Generalized symmetric eigenproblem A v = lambda G v with G positive
// definite, reduced via Cholesky of G.  Eigenvectors are G-orthonormal.
SymEig gen_sym_eig(const Mat& a, const Mat& g, const std::string& what);

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

}  // namespace slantcheck
