#pragma once

// Numerical tolerances used by validation and the acceptance checks.
// They are part of the library contract: loosening one is an interface
// change, not a tweak.

namespace convo::tol {

// Max absolute asymmetry |M - M^T| accepted when a matrix claims to be a
// symmetric form.
inline constexpr double kSymmetry = 1e-12;

// ||covariance * precision - I||_max accepted when deriving one from the
// other inside a Gaussian measure.
inline constexpr double kInverseResidual = 1e-10;

// Normalization slack for a discrete probability law in floating point.
// Exact (rational) mode tolerates nothing.
inline constexpr double kLawSum = 1e-12;

// Normalization slack for a reweighted (pointwise interacting) law, where
// the weights come from user input rather than from our own arithmetic.
inline constexpr double kPointwiseSum = 1e-9;

// Max |trace T_a| for a generator to count as traceless.
inline constexpr double kTraceless = 1e-12;

// Max |det zeta(A) - 1| for volume-preserving interaction maps.
inline constexpr double kDetUnit = 1e-10;

// Max ||zeta(A) * zeta(A)^{-1} - I||_max when the two are computed
// independently.
inline constexpr double kInverseConsistency = 1e-9;

// Relative spread of det Xi(A) across probe draws, and max deviation of the
// partition identity from one. The determinant must not depend on A.
inline constexpr double kXiDetSpread = 1e-8;

// Admissibility bound on ||sum_a A_a T^a||_inf. Draws beyond it would push
// the matrix exponential into overflow territory and are rejected.
inline constexpr double kCoordNormBound = 50.0;

// Hard caps for the deterministic engines.
inline constexpr int kQuadratureMaxDim = 3;
inline constexpr int kQuadratureMinNodes = 10;
inline constexpr int kQuadratureMaxNodes = 200;
inline constexpr int kPerturbativeMaxOrder = 16;

// Redraw budget per sample index before the sampler gives up.
inline constexpr int kMaxRedraws = 64;

}  // namespace convo::tol
