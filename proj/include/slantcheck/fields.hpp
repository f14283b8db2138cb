#pragma once

#include <functional>
#include <string>

#include "slantcheck/linalg.hpp"

namespace slantcheck {

// Fields are closures over jet coordinates.  Evaluating one on seeded
// coordinates yields values plus as many derivatives as the seeds carry.
using ScalarField = std::function<Jet2(const JetVec&)>;
using VectorField = std::function<JetVec(const JetVec&)>;
using MatrixField = std::function<JetMat(const JetVec&)>;

// Point as zero-seed jets: plain evaluation.
JetVec seed_point(const Vec& x);

// Point as coordinate jets: evaluation carries full gradient and Hessian.
JetVec seed_coords(const Vec& x);

std::string format_point(const Vec& x);

// Value-only evaluation with finiteness check.
Vec eval_values(const VectorField& f, const Vec& x);

// Full second-order data of a map at a point.
struct MapJet {
  Vec value;               // m
  Mat jacobian;            // m x d
  std::vector<Mat> hessian; // m matrices, each d x d
};

MapJet eval_map_jet(const VectorField& f, const Vec& x);

// Jacobian matrix of f at x (m x d); non-finite entries raise
// EvaluationDomainError naming the point.
Mat jacobian(const VectorField& f, const Vec& x);

// Lie bracket [X, Y] = (DY) X - (DX) Y of two vector fields on the same
// space, evaluated at x.
Vec lie_bracket(const VectorField& x_field, const VectorField& y_field,
                const Vec& x);

VectorField constant_vector_field(const Vec& v);

// Applies a matrix field to a vector field pointwise: z -> M(z) W(z).
VectorField matrix_apply_field(const MatrixField& m, const VectorField& w);

}  // namespace slantcheck
