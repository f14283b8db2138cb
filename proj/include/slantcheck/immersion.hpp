#pragma once

#include <cstddef>
#include <vector>

#include "slantcheck/fields.hpp"
#include "slantcheck/linalg.hpp"
#include "slantcheck/structures.hpp"

namespace slantcheck {

// Smooth map F: R^k -> R^n, k <= n, assumed an immersion where evaluated.
struct Immersion {
  std::size_t domain_dim = 0;
  std::size_t ambient_dim = 0;
  VectorField map;
};

// outer after inner; domains must chain.
Immersion compose(const Immersion& outer, const Immersion& inner);

// Tangent-frame data of an immersion at a parameter point: the coordinate
// frame E = dF (columns = partial derivatives), its Gram matrix in the
// ambient metric, and the metric itself at the image point.
struct PointFrame {
  Vec param;         // k
  Vec ambient_point; // n
  Mat frame;         // n x k
  Mat gram;          // k x k, E^T g E
  Mat chol;          // cached lower Cholesky factor of gram
  Mat ambient_gram;  // n x n, metric at the image point
};

// Frame under a constant ambient metric; DegenerateFrameError names the
// parameter point if dF is rank-deficient there.
PointFrame frame_at(const Immersion& f, const Vec& u, const MetricSpec& g);

// Frame under an explicit ambient Gram matrix at the image point (used for
// stage geometries whose metric varies).
PointFrame frame_at_gram(const Immersion& f, const Vec& u,
                         const Mat& ambient_gram);

// Tangential part of an ambient operator in frame coordinates:
// C = G^{-1} E^T g J E, so that tangential component of J(Ev) is E(Cv).
struct TangentOperator {
  Mat coords;  // k x k
};

TangentOperator tangential_operator(const PointFrame& fr, const Mat& j_value);
TangentOperator tangential_operator(const PointFrame& fr,
                                    const TensorField11& j);

// g-norm of the normal component of J applied to the tangent vector with
// frame coordinates v.
double normal_residual(const PointFrame& fr, const TensorField11& j,
                       const Vec& v);

// Levi-Civita connection of the induced metric, through the ambient
// projection: coordinates of nabla_X Y at u, where X and Y are vector
// fields on the parameter domain.  The ambient metric must be constant
// (its Levi-Civita derivative is then the coordinate derivative).
Vec induced_covariant_derivative(const Immersion& f, const Vec& u,
                                 const VectorField& x_field,
                                 const VectorField& y_field,
                                 const MetricSpec& g);

}  // namespace slantcheck
