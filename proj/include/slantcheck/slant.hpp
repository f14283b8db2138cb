#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slantcheck/immersion.hpp"

namespace slantcheck {

enum class SlantClass { Proper, AntiInvariant, Invariant, NotSlant };

// Stable strings used in reports.
const char* to_string(SlantClass c);

// Spectral slant data at one point.  The tangential operator C satisfies
// ||Tv||^2 = v^T (C^T G C) v; the point is pointwise slant exactly when the
// pencil (C^T G C, G) is a multiple of the identity, i.e. when its
// eigenvalue spread vanishes.  Eigenvalues equal cos^2(theta) then.
struct SlantReport {
  Vec param;
  Vec eigenvalues;  // pencil eigenvalues, ascending
  double spread = 0.0;
  double lambda_mean = 0.0;
  std::optional<double> theta;  // radians; set when spread <= tol
  SlantClass classification = SlantClass::NotSlant;
  double tangential_form_max = 0.0;  // max |(E^T g J E)_ij|
  Mat tangent_coords;                // C
};

SlantReport slant_at(const PointFrame& fr, const Mat& j_value,
                     double spectral_tol = Tolerances{}.spectral);

SlantReport slant_at(const Immersion& f, const Vec& u, const TensorField11& j,
                     const MetricSpec& g,
                     double spectral_tol = Tolerances{}.spectral);

struct Exclusion {
  Vec param;
  std::string reason;
};

struct ScanOutcome {
  std::vector<SlantReport> reports;   // every evaluable grid point
  std::vector<Exclusion> exclusions;  // invariant points, degenerate frames
  double theta_min = 0.0;             // over slant, non-invariant points
  double theta_max = 0.0;
  bool all_slant = true;   // no not-slant point outside the exclusions
  bool all_proper = true;  // additionally no anti-invariant point
};

ScanOutcome slant_function_scan(const Immersion& f, const TensorField11& j,
                                const MetricSpec& g,
                                const std::vector<Vec>& grid,
                                const Tolerances& tols = {});

// Cross form of two structures on the same frame: the symmetric part of
// C1^T G C2, as a pencil against G.  Zero spread means g(T1 u, T2 u) is the
// same for every unit tangent u; `value` is then that number.
struct CrossTermReport {
  Vec param;
  Mat sym_form;
  Vec eigenvalues;
  double spread = 0.0;
  bool independent = false;
  double value = 0.0;
};

CrossTermReport cross_term(const PointFrame& fr, const Mat& j1_value,
                           const Mat& j2_value,
                           double spectral_tol = Tolerances{}.spectral);

CrossTermReport cross_term(const Immersion& f, const Vec& u,
                           const TensorField11& j1, const TensorField11& j2,
                           const MetricSpec& g,
                           double spectral_tol = Tolerances{}.spectral);

struct FamilyPointRecord {
  Vec param;
  Vec coeff_values;                  // a_i at the ambient point
  SlantReport combined;              // under sum a_i J_i
  std::vector<SlantReport> factors;  // under each J_i
  std::vector<CrossTermReport> crosses;  // pairs (i, j), i < j, row-major
  double cos2_formula = 0.0;  // sum a_i^2 cos^2 t_i + 2 sum a_i a_j c_ij
  double mismatch = 0.0;      // |lambda_mean(combined) - cos2_formula|
  bool biconditional_ok = true;
  bool bound_ok = true;  // min/max envelope when all crosses vanish
};

struct FamilyOutcome {
  std::vector<FamilyPointRecord> records;
  std::vector<Exclusion> exclusions;
  double max_mismatch = 0.0;
  bool formula_pass = true;
  bool biconditional_pass = true;
  bool bounds_pass = true;
  bool pass = false;
};

// Verifies, pointwise on the grid, the slant function of the combined
// structure against the factor angles and cross terms, the equivalence
// "combined slant <=> weighted cross form independent of the direction",
// and the min/max envelope when the cross terms vanish.
FamilyOutcome family_slant_check(const Immersion& f, const TensorField11& j1,
                                 const TensorField11& j2,
                                 const CoefficientFunctions& coeffs,
                                 const MetricSpec& g,
                                 const std::vector<Vec>& grid,
                                 const Tolerances& tols = {});

FamilyOutcome family_slant_check_k(const Immersion& f,
                                   const std::vector<TensorField11>& js,
                                   const CoefficientFunctions& coeffs,
                                   const MetricSpec& g,
                                   const std::vector<Vec>& grid,
                                   const Tolerances& tols = {});

// A Riemannian space with a compatible almost complex structure, both given
// as fields over the space's own coordinates.  Stage geometries (submanifold
// with induced metric and induced structure) are spaces again, enabling
// chains.
struct Space {
  std::size_t dim = 0;
  MatrixField metric;
  MatrixField structure;
};

Space ambient_space(const MetricSpec& g, const TensorField11& j);

// The induced geometry of an immersion into `s`: the pullback metric and
// the normalized tangential structure sec(theta) * T.  Structure evaluation
// requires the image point to be proper pointwise slant; violations throw
// SlantHypothesisError naming the parameter point.
Space induced_space(const Space& s, const Immersion& f,
                    double spectral_tol = Tolerances{}.spectral);

// Slant data of an immersion into a (possibly induced) space.
SlantReport slant_in_space(const Space& s, const Immersion& f, const Vec& u,
                           double spectral_tol = Tolerances{}.spectral);

// Normalized tangential structure of an immersion into a flat ambient, as a
// tensor field on the parameter domain.
TensorField11 induced_structure(const Immersion& f, const TensorField11& j,
                                const MetricSpec& g,
                                double spectral_tol = Tolerances{}.spectral);

struct KahlerReport {
  Vec param;
  double theta1 = 0.0;
  double structure_residual = 0.0;  // ||(nabla_X J2) Y||_G
  double condition_residual = 0.0;  // ||(nabla_X T1) Y + tan * X(theta) * T1 Y||_G
  double consistency_residual = 0.0;  // the two, related by sec(theta1)
  bool kahler = false;
};

// Evaluates, at u, whether the induced structure is parallel for the induced
// connection, together with the equivalent condition on the tangential
// operator and the slant function's derivative.
KahlerReport kahler_condition_check(const Immersion& f,
                                    const TensorField11& j,
                                    const MetricSpec& g, const Vec& u,
                                    const VectorField& x_field,
                                    const VectorField& y_field,
                                    const Tolerances& tols = {});

struct TransitivityPointRecord {
  Vec param;
  std::vector<SlantReport> stages;  // innermost-last ordering: stage i is
                                    // immersion i inside space i
  SlantReport composite;            // innermost domain inside the base space
  double predicted_cos = 0.0;       // product of stage cosines
  double identity_residual = 0.0;   // |cos(composite) - predicted|
  bool bound_ok = true;             // composite angle >= each stage angle
};

struct TransitivityOutcome {
  std::vector<TransitivityPointRecord> records;
  std::vector<Exclusion> exclusions;
  double max_identity_residual = 0.0;
  bool bounds_pass = true;
  bool pass = false;
};

// Chain of immersions fs[0]: D1 -> ambient, fs[i]: D_{i+1} -> D_i.  Grid
// points live in the innermost domain.  Verifies the product formula for
// the composite cosine at each point.
TransitivityOutcome transitivity_chain_check(const std::vector<Immersion>& fs,
                                             const TensorField11& j,
                                             const MetricSpec& g,
                                             const std::vector<Vec>& grid,
                                             const Tolerances& tols = {});

TransitivityOutcome transitivity_check(const Immersion& f1,
                                       const Immersion& f2,
                                       const TensorField11& j,
                                       const MetricSpec& g,
                                       const std::vector<Vec>& grid,
                                       const Tolerances& tols = {});

struct ProductFactor {
  Immersion immersion;
  TensorField11 structure;
  MetricSpec metric;
  std::vector<Vec> grid;  // parameter samples for this factor
};

struct ProductPointRecord {
  Vec param;  // concatenated factor parameters
  std::vector<SlantReport> factors;
  SlantReport product;
};

struct ProductOutcome {
  std::vector<ProductPointRecord> records;
  std::vector<Exclusion> exclusions;
  double max_product_spread = 0.0;
  bool product_slant_everywhere = true;
  bool factors_constant_equal = true;
  bool biconditional_ok = true;
  double common_cos = 0.0;  // meaningful when factors_constant_equal
  bool pass = false;
};

// Product immersion into the product ambient, sampled on the cartesian
// product of the factor grids.  The product is pointwise slant at every
// combination exactly when all factor angles are constant and equal; both
// sides of that equivalence are evaluated independently.
ProductOutcome product_check(const std::vector<ProductFactor>& parts,
                             const Tolerances& tols = {});

}  // namespace slantcheck
