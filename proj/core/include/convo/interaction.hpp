#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "convo/generators.hpp"
#include "convo/quadratic_form.hpp"

namespace convo {

// The coordinate-dependent linear map zeta(A) on field space that couples
// the field to the coupling coordinates A in R^r. Three kinds:
//
//  exponential  zeta(A) = exp(sum_a A_a T^a), the volume-preserving family
//               generated by a traceless GeneratorSet. Normalization 1.
//  frozen       zeta(A) = tau for a fixed invertible tau; the coupling
//               coordinates are ignored. Normalization |det tau|.
//  custom       any user map A -> matrix; escape hatch for negative tests
//               and experiments. Normalization unknown a priori.
class InteractionMap {
 public:
  enum class Kind { exponential, frozen, custom };

  static InteractionMap exponential(GeneratorSet gens);
  static InteractionMap frozen(Eigen::MatrixXd tau, int r);
  static InteractionMap custom(
      int dim_f, int r,
      std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> eval,
      std::string label = "custom");

  Kind kind() const { return kind_; }
  int dim_f() const { return dim_f_; }
  int r() const { return r_; }
  const std::string& label() const { return label_; }

  // zeta(A). For the exponential kind, throws std::domain_error when
  // coords are inadmissible (see admissible()).
  Eigen::MatrixXd apply(const Eigen::VectorXd& coords) const;

  // zeta(A)^{-1}. For the exponential kind this is exp(-sum A_a T^a),
  // computed directly rather than by inverting apply().
  Eigen::MatrixXd inverse_apply(const Eigen::VectorXd& coords) const;

  // For the exponential kind: ||sum_a A_a T^a||_inf <= bound. Other kinds
  // accept all coordinates.
  bool admissible(const Eigen::VectorXd& coords) const;

  // True when the map is identically the identity: exponential with all
  // zero generators, or frozen identity. The construction then reproduces
  // the free measure exactly.
  bool trivial() const;

  // N(zeta) when known in closed form: 1 for exponential, |det tau| for
  // frozen, nullopt for custom (the builder then measures it).
  std::optional<double> normalization() const;

  // Exponential kind only.
  const GeneratorSet& generators() const;

 private:
  InteractionMap() = default;

  Kind kind_ = Kind::custom;
  int dim_f_ = 0;
  int r_ = 0;
  std::string label_;
  std::optional<GeneratorSet> gens_;
  Eigen::MatrixXd tau_;
  Eigen::MatrixXd tau_inverse_;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> eval_;
};

// The self-adjoint positive operator Xi(A) = zeta(A)* zeta(A), where * is
// the adjoint with respect to the field form b_m. Kept in two frames:
//
//  matrix       B_m^{-1} zeta^T B_m zeta, the operator in field
//               coordinates. Self-adjoint for b_m but not symmetric as an
//               array unless b_m is a multiple of the identity.
//  symmetrized  W^T W with W = L^T zeta L^{-T}, L the Cholesky factor of
//               b_m: the same operator written in a b_m-orthonormal frame,
//               so it is a symmetric positive-definite array. Determinant
//               and spectrum agree with `matrix`.
struct XiOperator {
  Eigen::MatrixXd matrix;
  Eigen::MatrixXd symmetrized;
  double det = 0.0;
};

XiOperator xi_at(const InteractionMap& zeta, const QuadraticForm& b_m,
                 const Eigen::VectorXd& coords);

// Evidence that A -> Xi(A) is not linear: returns the pair
// (Xi(z*A), z * Xi(A)) in the symmetrized frame, which differ for any
// non-trivial exponential map at generic A and z. Callers assert on the
// difference.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> xi_nonlinearity_witness(
    const InteractionMap& zeta, const QuadraticForm& b_m,
    const Eigen::VectorXd& coords, double z);

}  // namespace convo
