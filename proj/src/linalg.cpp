#include "slantcheck/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slantcheck {

namespace {

double off_diagonal_norm(const Mat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

Mat require_symmetric(const Mat& a, const char* who) {
  if (a.rows != a.cols)
    throw DimensionError(std::string(who) + " needs a square matrix");
  double asym = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = i + 1; j < a.cols; ++j)
      asym = std::max(asym, std::fabs(a(i, j) - a(j, i)));
  if (asym > kSymmetryRel * std::max(1.0, value_frobenius(a)))
    throw StructureError(std::string(who) + ": input matrix not symmetric");
  Mat s = a;
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j)
      s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

}  // namespace

SymEig sym_eig(const Mat& input) {
  Mat a = require_symmetric(input, "sym_eig");
  const std::size_t n = a.rows;
  Mat v = Mat::identity(n);
  const double scale = value_frobenius(a);
  const double target = kJacobiOffRel * scale;

  if (scale > 0.0) {
    bool converged = off_diagonal_norm(a) < target;
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
      for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          if (std::fabs(apq) == 0.0) continue;
          const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
          const double t = (tau >= 0.0)
                               ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                               : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          for (std::size_t k = 0; k < n; ++k) {
            const double akp = a(k, p), akq = a(k, q);
            a(k, p) = c * akp - s * akq;
            a(k, q) = s * akp + c * akq;
          }
          for (std::size_t k = 0; k < n; ++k) {
            const double apk = a(p, k), aqk = a(q, k);
            a(p, k) = c * apk - s * aqk;
            a(q, k) = s * apk + c * aqk;
          }
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v(k, p), vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      converged = off_diagonal_norm(a) < target;
    }
    if (!converged)
      throw ConvergenceError("sym_eig: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) {
                     return a(i, i) < a(j, j);
                   });

  SymEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Mat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i)
      out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

SymEig gen_sym_eig(const Mat& a, const Mat& g, const std::string& what) {
  const Mat as = require_symmetric(a, "gen_sym_eig");
  const Mat gs = require_symmetric(g, "gen_sym_eig");
  if (as.rows != gs.rows)
    throw DimensionError("gen_sym_eig: pencil dimensions differ");

  const Mat l = cholesky(gs, what);
  // B = L^{-1} A L^{-T}; symmetric since A is.
  const Mat s1 = forward_solve(l, as);
  const Mat b = forward_solve(l, transpose(s1));
  SymEig eig = sym_eig(b);
  // Map eigenvectors back: v = L^{-T} w.  They come out G-orthonormal.
  eig.eigenvectors = backward_solve(l, eig.eigenvectors);
  return eig;
}

}  // namespace slantcheck
