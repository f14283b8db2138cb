#pragma once

namespace slantcheck {

// Default thresholds used across the engine.  All overridable per call or,
// for the three named ones, via scenario files and the CLI's --tol flag.
struct Tolerances {
  double structural = 1e-9;  // algebraic identities on structures and metrics
  double spectral = 1e-7;    // eigenvalue spread / angle comparisons
  double fd = 1e-6;          // finite-difference cross-validation
};

// Fixed internal thresholds, not user-tunable.
inline constexpr double kCoeffNormTol = 1e-12;   // |sum a_i^2 - 1| at evaluation
inline constexpr double kCholPivotRel = 1e-12;   // pivot >= rel * ||A||_F
inline constexpr double kJacobiOffRel = 1e-13;   // off(A) < rel * ||A||_F
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kSymmetryRel = 1e-9;     // accepted input asymmetry

}  // namespace slantcheck
