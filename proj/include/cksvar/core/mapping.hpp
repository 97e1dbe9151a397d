// Structural <-> reduced-form mapping and the regime-dependent impact
// multipliers of a shock to the constrained variable's equation.
#pragma once
#include "cksvar/core/types.hpp"

namespace cksvar {

inline double kappa_factor(double xi, double alpha, double gb) {
  double mxi = 1.0 - xi * gb;
  if (std::fabs(mxi) < 1e-8)
    throw std::domain_error("kappa_factor: 1 - xi*gamma*beta near zero");
  return (1.0 + alpha) * (1.0 - gb) / mxi;
}

inline std::pair<Eigen::VectorXd, Eigen::VectorXd> impact_multipliers(
    const Eigen::VectorXd& beta, const Eigen::RowVectorXd& gamma, double xi) {
  double gb = (gamma * beta)(0);
  double m = 1.0 - gb, mxi = 1.0 - xi * gb;
  if (std::fabs(m) < 1e-8 || std::fabs(mxi) < 1e-8)
    throw std::domain_error("impact_multipliers: singular denominator");
  return {beta / m, (xi / mxi) * beta};
}

// Recover gamma from Omega and beta (identification equation of the reduced
// form: gamma' is the coefficient of a regression of u2 - gamma*u1... solved
// directly as gamma = (Omega12' - Omega22 beta')(Omega11 - Omega12 beta')^{-1}).
inline Eigen::RowVectorXd gamma_from_beta(const Eigen::MatrixXd& Omega,
                                          const Eigen::VectorXd& beta) {
  const int k1 = static_cast<int>(beta.size());
  Eigen::MatrixXd O11 = Omega.topLeftCorner(k1, k1);
  Eigen::VectorXd O12 = Omega.topRightCorner(k1, 1);
  double O22 = Omega(k1, k1);
  Eigen::MatrixXd A = O11 - O12 * beta.transpose();
  Eigen::RowVectorXd num = (O12 - O22 * beta).transpose();
  return A.transpose().partialPivLu().solve(num.transpose()).transpose();
}

inline ReducedFormParams reduced_from_structural(const StructuralParams& s,
                                                 const Layout& lay) {
  s.validate();
  const int k1 = lay.k - 1;
  if (s.beta.size() != k1 || s.gamma.cols() != k1 ||
      s.B1.rows() != k1 || s.B1.cols() != lay.n1 + lay.p ||
      s.B2.cols() != lay.n1 + lay.p || s.B12star.cols() != lay.p ||
      s.B22star.cols() != lay.p)
    throw std::invalid_argument("reduced_from_structural: shape mismatch");

  const double xi = s.xi();
  const double gb = (s.gamma * s.beta)(0);
  const double m = 1.0 - gb, mxi = 1.0 - xi * gb;
  if (std::fabs(m) < 1e-8 || std::fabs(mxi) < 1e-8)
    throw std::domain_error("reduced_from_structural: singular system");
  const double kap = kappa_factor(xi, s.alpha, gb);

  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(k1, k1) - s.beta * s.gamma;
  Eigen::PartialPivLU<Eigen::MatrixXd> Mlu(M);

  auto B11 = s.B1.leftCols(lay.n1);
  auto B12 = s.B1.rightCols(lay.p);
  auto B21 = s.B2.leftCols(lay.n1);
  auto B22 = s.B2.rightCols(lay.p);

  ReducedFormParams rf = ReducedFormParams::zeros(lay);
  rf.betatilde = ((1.0 - xi) / mxi) * s.beta;

  // Y1 block: solve the simultaneous system in the non-ELB regime.
  rf.C11 = Mlu.solve(B11 + s.beta * B21);
  rf.C12 = Mlu.solve((B12 + s.B12star) + s.beta * (B22 + s.B22star));
  rf.C12star = kap * Mlu.solve(s.B12star + s.beta * s.B22star);

  // Shadow-rate block.
  rf.C21 = s.gamma * Mlu.solve(B11) + B21 / m;
  rf.C22 = s.gamma * Mlu.solve(B12 + s.B12star) + (B22 + s.B22star) / m;
  rf.C22star = kap * (s.gamma * Mlu.solve(s.B12star) + s.B22star / m);

  // Innovation loading: u = P * eps with eps ~ N(0, I_k).
  double a22 = s.A22starinv;
  Eigen::MatrixXd P(lay.k, lay.k);
  Eigen::MatrixXd MA = Mlu.solve(s.A11inv);
  P.topLeftCorner(k1, k1) = MA;
  P.topRightCorner(k1, 1) = (a22 / m) * s.beta;
  P.bottomLeftCorner(1, k1) = s.gamma * MA;
  P(k1, k1) = a22 / m;
  Eigen::MatrixXd Omega = P * P.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(Omega);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("reduced_from_structural: Omega not PD");
  rf.L = llt.matrixL();
  return rf;
}

// Innovation loading P such that u = P eps, eps ~ N(0, I). Shared by the
// simulator so a given seed produces the same path as the linear VAR when the
// bound never binds.
inline Eigen::MatrixXd innovation_loading(const StructuralParams& s, int k) {
  const int k1 = k - 1;
  const double gb = (s.gamma * s.beta)(0);
  const double m = 1.0 - gb;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(k1, k1) - s.beta * s.gamma;
  Eigen::PartialPivLU<Eigen::MatrixXd> Mlu(M);
  Eigen::MatrixXd P(k, k);
  Eigen::MatrixXd MA = Mlu.solve(s.A11inv);
  P.topLeftCorner(k1, k1) = MA;
  P.topRightCorner(k1, 1) = (s.A22starinv / m) * s.beta;
  P.bottomLeftCorner(1, k1) = s.gamma * MA;
  P(k1, k1) = s.A22starinv / m;
  return P;
}

}  // namespace cksvar
