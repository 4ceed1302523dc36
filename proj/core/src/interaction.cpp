#include "convo/interaction.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "convo/matrix_exp.hpp"
#include "convo/tolerances.hpp"

namespace convo {

namespace {

Eigen::MatrixXd generator_combination(const GeneratorSet& gens,
                                      const Eigen::VectorXd& coords) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(gens.dim_f, gens.dim_f);
  for (int a = 0; a < gens.r(); ++a) {
    m += coords[a] * gens.generators[static_cast<std::size_t>(a)];
  }
  return m;
}

double inf_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

InteractionMap InteractionMap::exponential(GeneratorSet gens) {
  InteractionMap map;
  map.kind_ = Kind::exponential;
  map.dim_f_ = gens.dim_f;
  map.r_ = gens.r();
  map.label_ = "exponential";
  map.gens_ = std::move(gens);
  return map;
}

InteractionMap InteractionMap::frozen(Eigen::MatrixXd tau, int r) {
  if (tau.rows() != tau.cols() || tau.rows() == 0) {
    throw std::invalid_argument(
        "In convo::InteractionMap::frozen: tau must be square and nonempty");
  }
  if (r < 1) {
    throw std::invalid_argument(
        "In convo::InteractionMap::frozen: r must be >= 1");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(tau);
  const double det = lu.determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
    throw std::invalid_argument(
        "In convo::InteractionMap::frozen: tau is singular");
  }
  InteractionMap map;
  map.kind_ = Kind::frozen;
  map.dim_f_ = static_cast<int>(tau.rows());
  map.r_ = r;
  map.label_ = "frozen";
  map.tau_inverse_ = lu.solve(
      Eigen::MatrixXd::Identity(tau.rows(), tau.cols()));
  map.tau_ = std::move(tau);
  return map;
}

InteractionMap InteractionMap::custom(
    int dim_f, int r,
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> eval,
    std::string label) {
  if (dim_f < 1 || r < 1) {
    throw std::invalid_argument(
        "In convo::InteractionMap::custom: dim_f and r must be >= 1");
  }
  if (!eval) {
    throw std::invalid_argument(
        "In convo::InteractionMap::custom: eval must be callable");
  }
  InteractionMap map;
  map.kind_ = Kind::custom;
  map.dim_f_ = dim_f;
  map.r_ = r;
  map.label_ = std::move(label);
  map.eval_ = std::move(eval);
  return map;
}

bool InteractionMap::admissible(const Eigen::VectorXd& coords) const {
  if (coords.size() != r_) {
    throw std::invalid_argument(
        "In convo::InteractionMap: coordinate dimension mismatch");
  }
  if (!coords.allFinite()) return false;
  if (kind_ != Kind::exponential) return true;
  return inf_norm(generator_combination(*gens_, coords)) <=
         tol::kCoordNormBound;
}

Eigen::MatrixXd InteractionMap::apply(const Eigen::VectorXd& coords) const {
  if (coords.size() != r_) {
    throw std::invalid_argument(
        "In convo::InteractionMap: coordinate dimension mismatch");
  }
  switch (kind_) {
    case Kind::exponential: {
      const Eigen::MatrixXd m = generator_combination(*gens_, coords);
      const double norm = inf_norm(m);
      if (!(norm <= tol::kCoordNormBound)) {
        std::ostringstream msg;
        msg << "In convo::InteractionMap::apply: coordinates inadmissible, "
            << "||sum A_a T^a||_inf = " << norm << " exceeds "
            << tol::kCoordNormBound;
        throw std::domain_error(msg.str());
      }
      return matrix_exponential(m);
    }
    case Kind::frozen:
      return tau_;
    case Kind::custom:
      return eval_(coords);
  }
  throw std::logic_error("unreachable");
}

Eigen::MatrixXd InteractionMap::inverse_apply(
    const Eigen::VectorXd& coords) const {
  if (coords.size() != r_) {
    throw std::invalid_argument(
        "In convo::InteractionMap: coordinate dimension mismatch");
  }
  switch (kind_) {
    case Kind::exponential: {
      const Eigen::MatrixXd m = generator_combination(*gens_, coords);
      const double norm = inf_norm(m);
      if (!(norm <= tol::kCoordNormBound)) {
        std::ostringstream msg;
        msg << "In convo::InteractionMap::inverse_apply: coordinates "
            << "inadmissible, ||sum A_a T^a||_inf = " << norm << " exceeds "
            << tol::kCoordNormBound;
        throw std::domain_error(msg.str());
      }
      return matrix_exponential((-m).eval());
    }
    case Kind::frozen:
      return tau_inverse_;
    case Kind::custom: {
      const Eigen::MatrixXd z = eval_(coords);
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(z);
      const double det = lu.determinant();
      if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
        throw std::domain_error(
            "In convo::InteractionMap::inverse_apply: custom map is "
            "singular at these coordinates");
      }
      return lu.solve(Eigen::MatrixXd::Identity(dim_f_, dim_f_));
    }
  }
  throw std::logic_error("unreachable");
}

bool InteractionMap::trivial() const {
  switch (kind_) {
    case Kind::exponential: {
      for (const auto& g : gens_->generators) {
        if (g.cwiseAbs().maxCoeff() != 0.0) return false;
      }
      return true;
    }
    case Kind::frozen:
      return (tau_ - Eigen::MatrixXd::Identity(dim_f_, dim_f_))
                 .cwiseAbs()
                 .maxCoeff() == 0.0;
    case Kind::custom:
      return false;
  }
  return false;
}

std::optional<double> InteractionMap::normalization() const {
  switch (kind_) {
    case Kind::exponential:
      return 1.0;
    case Kind::frozen:
      return std::abs(tau_.partialPivLu().determinant());
    case Kind::custom:
      return std::nullopt;
  }
  return std::nullopt;
}

const GeneratorSet& InteractionMap::generators() const {
  if (kind_ != Kind::exponential) {
    throw std::logic_error(
        "In convo::InteractionMap::generators: only the exponential kind "
        "has generators");
  }
  return *gens_;
}

XiOperator xi_at(const InteractionMap& zeta, const QuadraticForm& b_m,
                 const Eigen::VectorXd& coords) {
  if (b_m.dim() != zeta.dim_f()) {
    throw std::invalid_argument(
        "In convo::xi_at: field form dimension mismatch");
  }
  const Eigen::MatrixXd z = zeta.apply(coords);
  const Eigen::MatrixXd& l = b_m.cholesky();

  // Operator frame: B_m^{-1} zeta^T B_m zeta.
  const Eigen::MatrixXd bz = b_m.matrix() * z;
  Eigen::MatrixXd op = z.transpose() * bz;
  op = l.transpose().triangularView<Eigen::Upper>().solve(
      l.triangularView<Eigen::Lower>().solve(op.eval()));

  // Orthonormal frame: W = L^T zeta L^{-T}, Xi = W^T W, symmetric by
  // construction.
  Eigen::MatrixXd w = l.transpose() * z;
  w = l.triangularView<Eigen::Lower>()
          .solve(w.transpose().eval())
          .transpose();
  Eigen::MatrixXd sym = w.transpose() * w;
  sym = ((sym + sym.transpose()) / 2.0).eval();

  XiOperator xi;
  xi.matrix = std::move(op);
  xi.det = sym.partialPivLu().determinant();
  xi.symmetrized = std::move(sym);
  return xi;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> xi_nonlinearity_witness(
    const InteractionMap& zeta, const QuadraticForm& b_m,
    const Eigen::VectorXd& coords, double z) {
  if (zeta.trivial()) {
    throw std::invalid_argument(
        "In convo::xi_nonlinearity_witness: the trivial interaction has no "
        "nonlinearity to witness");
  }
  if (coords.size() == 0 || coords.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument(
        "In convo::xi_nonlinearity_witness: coordinates must be nonzero");
  }
  if (z == 0.0 || z == 1.0) {
    throw std::invalid_argument(
        "In convo::xi_nonlinearity_witness: scale z must differ from 0 and "
        "1");
  }
  const XiOperator at_scaled = xi_at(zeta, b_m, (z * coords).eval());
  const XiOperator at_coords = xi_at(zeta, b_m, coords);
  return {at_scaled.symmetrized, z * at_coords.symmetrized};
}

}  // namespace convo
