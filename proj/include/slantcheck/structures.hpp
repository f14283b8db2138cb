#pragma once

#include <cstddef>
#include <vector>

#include "slantcheck/fields.hpp"
#include "slantcheck/linalg.hpp"
#include "slantcheck/tolerances.hpp"

namespace slantcheck {

// Constant-coefficient Riemannian metric on R^n.
struct MetricSpec {
  std::size_t dim = 0;
  Mat gram;  // n x n symmetric positive definite

  static MetricSpec euclidean(std::size_t n) {
    return MetricSpec{n, Mat::identity(n)};
  }
};

// (1,1)-tensor field on R^n: a matrix-valued map of the ambient point.
struct TensorField11 {
  std::size_t dim = 0;
  MatrixField coeff;

  static TensorField11 constant(const Mat& j);

  // Q(z) J Q(z)^T with Q(z) the rotation by angle(z) in the (i, j)
  // coordinate plane; keeps algebraic identities while making the
  // coefficients genuinely point-dependent.
  static TensorField11 conjugated_rotation(const Mat& j, std::size_t i,
                                           std::size_t jx,
                                           const ScalarField& angle);

  Mat value_at(const Vec& x) const;
};

// Pointwise weights a_1..a_k for combining structures.
struct CoefficientFunctions {
  std::vector<ScalarField> a;

  static CoefficientFunctions constants(const Vec& values);
};

struct HermitianPointRow {
  Vec point;
  double complex_residual;  // ||J(x)^2 + I||_F
  double skew_residual;     // ||G J(x) + J(x)^T G||_F
};

struct HermitianReport {
  bool pass = false;
  double max_complex_residual = 0.0;
  double max_skew_residual = 0.0;
  double tol = 0.0;
  std::vector<HermitianPointRow> rows;
};

// Checks J(x)^2 = -I and skew-adjointness of J with respect to g at each
// sample point.
HermitianReport verify_almost_hermitian(const TensorField11& j,
                                        const MetricSpec& g,
                                        const std::vector<Vec>& points,
                                        double tol = Tolerances{}.structural);

struct ResidualPointRow {
  Vec point;
  double residual;
};

struct AnticommuteReport {
  bool pass = false;
  double max_residual = 0.0;  // max ||J1 J2 + J2 J1||_F over points
  double tol = 0.0;
  std::vector<ResidualPointRow> rows;
};

AnticommuteReport verify_anticommute(const TensorField11& j1,
                                     const TensorField11& j2,
                                     const std::vector<Vec>& points,
                                     double tol = Tolerances{}.structural);

// Pointwise combination sum_i a_i(z) J_i(z).  Every evaluation checks the
// weights' unit-norm constraint and pairwise anti-commutation of the inputs
// at the evaluation point; violations throw NormalizationError or
// StructureError naming the point.
TensorField11 build_family(const TensorField11& j1, const TensorField11& j2,
                           const CoefficientFunctions& coeffs,
                           double structural_tol = Tolerances{}.structural);

TensorField11 build_family_k(const std::vector<TensorField11>& js,
                             const CoefficientFunctions& coeffs,
                             double structural_tol = Tolerances{}.structural);

// Nijenhuis torsion of a (1,1)-tensor field applied to two vector fields,
// evaluated at x:
//   [JX, JY] - J[JX, Y] - J[X, JY] + J^2 [X, Y].
Vec nijenhuis(const TensorField11& j, const VectorField& x_field,
              const VectorField& y_field, const Vec& x);

enum class FnForm {
  Full,        // all eight terms
  AntiCommuting // six terms; valid when J1 J2 = -J2 J1
};

// Frolicher-Nijenhuis bracket [J1, J2](X, Y) at x.
Vec fn_bracket(const TensorField11& j1, const TensorField11& j2,
               const VectorField& x_field, const VectorField& y_field,
               const Vec& x, FnForm form = FnForm::Full);

struct DecompositionReport {
  bool pass = false;
  double max_residual = 0.0;
  double tol = 0.0;
  std::vector<ResidualPointRow> rows;
};

// Verifies, for constant weights (a, b) with a^2 + b^2 = 1,
//   N_{aJ1+bJ2} = a^2 N_{J1} + b^2 N_{J2} + ab [J1, J2]
// on the given vector-field pair at each sample point.
DecompositionReport decomposition_check(const TensorField11& j1,
                                        const TensorField11& j2, double a,
                                        double b, const VectorField& x_field,
                                        const VectorField& y_field,
                                        const std::vector<Vec>& points,
                                        double tol = Tolerances{}.fd);

// Covariant derivative (nabla_X J)Y at x in flat R^n:
//   D_X (J Y) - J (D_X Y), with D the coordinate directional derivative.
Vec nabla_j(const TensorField11& j, const VectorField& x_field,
            const VectorField& y_field, const Vec& x);

}  // namespace slantcheck
