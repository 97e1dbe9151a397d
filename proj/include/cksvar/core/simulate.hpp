// Forward simulation of the piecewise reduced form, with the latent shadow
// path retained for oracle tests.
#pragma once
#include "cksvar/core/mapping.hpp"
#include "cksvar/core/types.hpp"
#include "cksvar/math/rng.hpp"

namespace cksvar {

// Per-lag coefficient matrices of the linear (never censored) dynamics for the
// stacked vector [Y1; Ybar2], plus intercept and exog loadings.
struct LinearDynamics {
  std::vector<Eigen::MatrixXd> Aj;  // p matrices, k x k
  Eigen::VectorXd c0;               // k intercept
  Eigen::MatrixXd Cex;              // k x m
};

inline LinearDynamics linear_dynamics(const ReducedFormParams& rf,
                                      const Layout& lay) {
  LinearDynamics ld;
  const int k = lay.k, k1 = k - 1;
  ld.c0 = Eigen::VectorXd::Zero(k);
  ld.Cex = Eigen::MatrixXd::Zero(k, lay.m);
  int c = 0;
  if (lay.intercept) {
    ld.c0.head(k1) = rf.C11.col(0);
    ld.c0[k1] = rf.C21[0];
    c = 1;
  }
  for (int j = 0; j < lay.p; ++j) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
    A.topLeftCorner(k1, k1) = rf.C11.middleCols(c + j * k1, k1);
    A.block(0, k1, k1, 1) = rf.C12.col(j);
    A.block(k1, 0, 1, k1) = rf.C21.segment(c + j * k1, k1);
    A(k1, k1) = rf.C22[j];
    ld.Aj.push_back(std::move(A));
  }
  for (int e = 0; e < lay.m; ++e) {
    ld.Cex.block(0, e, k1, 1) = rf.C11.col(c + lay.p * k1 + e);
    ld.Cex(k1, e) = rf.C21[c + lay.p * k1 + e];
  }
  return ld;
}

inline Eigen::MatrixXd companion_matrix(const LinearDynamics& ld) {
  const int k = static_cast<int>(ld.Aj[0].rows());
  const int p = static_cast<int>(ld.Aj.size());
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(k * p, k * p);
  for (int j = 0; j < p; ++j) F.block(0, j * k, k, k) = ld.Aj[j];
  if (p > 1)
    F.block(k, 0, k * (p - 1), k * (p - 1)) =
        Eigen::MatrixXd::Identity(k * (p - 1), k * (p - 1));
  return F;
}

inline double spectral_radius(const Eigen::MatrixXd& F) {
  return F.eigenvalues().cwiseAbs().maxCoeff();
}

struct SimConfig {
  int T = 200;
  std::uint64_t seed = 1;
  Eigen::VectorXd bound;      // length T, or length 1 for a constant bound
  Eigen::MatrixXd exog;       // T x m or empty
  Eigen::MatrixXd init;       // p x k initial Ybar-levels (default zeros)
  bool allow_unstable = false;
  double overflow_limit = 1e8;
};

struct SimOutput {
  Dataset data;
  Eigen::VectorXd ybar;    // reduced-form shadow path
  Eigen::VectorXd ystar;   // structural shadow path (kappa-scaled kink)
};

namespace detail {

inline SimOutput simulate_reduced(const ReducedFormParams& rf, const Layout& lay,
                                  double kap, const Eigen::MatrixXd& P,
                                  const SimConfig& cfg) {
  const int k = lay.k, k1 = k - 1, p = lay.p, T = cfg.T;
  LinearDynamics ld = linear_dynamics(rf, lay);
  if (!cfg.allow_unstable && spectral_radius(companion_matrix(ld)) >= 1.0)
    throw std::domain_error("simulate: explosive above-bound dynamics");

  Eigen::VectorXd b(T);
  if (cfg.bound.size() == T) b = cfg.bound;
  else if (cfg.bound.size() == 1) b.setConstant(cfg.bound[0]);
  else if (cfg.bound.size() == 0) b.setZero();
  else throw std::invalid_argument("simulate: bound length");

  SimOutput out;
  out.data.values.resize(T, k);
  out.data.bound = b;
  out.data.exog = cfg.exog;
  out.data.est_start = p;
  out.ybar.resize(T);
  out.ystar.resize(T);

  // History rows: Ybar levels and kink values for the p presample periods.
  Eigen::MatrixXd hist = cfg.init.size() ? cfg.init : Eigen::MatrixXd::Zero(p, k);
  if (hist.rows() != p || hist.cols() != k)
    throw std::invalid_argument("simulate: init shape");
  std::vector<Eigen::VectorXd> ylag(p);   // observed Y rows, ylag[0] newest
  std::vector<double> wlag(p, 0.0);       // kink values, wlag[0] newest
  for (int j = 0; j < p; ++j) {
    Eigen::VectorXd row = hist.row(p - 1 - j);
    double b0 = b[0];
    double kink = std::min(row[k1] - b0, 0.0);
    row[k1] = std::max(row[k1], b0);
    ylag[j] = row;
    wlag[j] = kink;
  }
  // Presample rows recorded as-is so downstream lag construction matches.
  for (int t = 0; t < std::min(p, T); ++t) {
    Eigen::VectorXd row = hist.row(t);
    out.ybar[t] = row[k1];
    out.ystar[t] = row[k1];
    row[k1] = std::max(row[k1], b[t]);
    out.data.values.row(t) = row;
  }

  auto rng = make_rng(cfg.seed, 0x51a7eULL);
  std::normal_distribution<double> N01(0.0, 1.0);

  for (int t = p; t < T; ++t) {
    // Regressors from history.
    Eigen::VectorXd x1(lay.n1);
    int c = 0;
    if (lay.intercept) x1[c++] = 1.0;
    for (int j = 0; j < p; ++j)
      for (int v = 0; v < k1; ++v) x1[c++] = ylag[j][v];
    for (int e = 0; e < lay.m; ++e) x1[c++] = cfg.exog(t, e);
    Eigen::VectorXd x2(p), w(p);
    for (int j = 0; j < p; ++j) {
      x2[j] = ylag[j][k1];
      w[j] = wlag[j];
    }
    Eigen::VectorXd eps(k);
    for (int i = 0; i < k; ++i) eps[i] = N01(rng);
    Eigen::VectorXd u = P * eps;

    Eigen::VectorXd m1 = rf.C11 * x1 + rf.C12 * x2 + rf.C12star * w;
    double m2 = (rf.C21 * x1)(0) + (rf.C22 * x2)(0) + (rf.C22star * w)(0);
    double ybar = m2 + u[k1];
    double kink = std::min(ybar - b[t], 0.0);
    Eigen::VectorXd y1 = m1 + u.head(k1) - rf.betatilde * kink;
    double y2 = std::max(ybar, b[t]);

    if (std::fabs(ybar) > cfg.overflow_limit || y1.cwiseAbs().maxCoeff() > cfg.overflow_limit)
      throw std::overflow_error("simulate: path overflow at t=" + std::to_string(t));

    out.ybar[t] = ybar;
    out.ystar[t] = kap * kink + b[t] + std::max(ybar - b[t], 0.0);
    Eigen::VectorXd row(k);
    row.head(k1) = y1;
    row[k1] = y2;
    out.data.values.row(t) = row;

    for (int j = p - 1; j > 0; --j) {
      ylag[j] = ylag[j - 1];
      wlag[j] = wlag[j - 1];
    }
    ylag[0] = row;
    wlag[0] = kink;
  }
  for (int i = 0; i < k; ++i) out.data.names.push_back("y" + std::to_string(i));
  for (int e = 0; e < lay.m; ++e) out.data.names.push_back("x" + std::to_string(e));
  return out;
}

}  // namespace detail

inline SimOutput simulate(const StructuralParams& s, const ModelSpec& spec,
                          const SimConfig& cfg) {
  Layout lay;
  lay.k = static_cast<int>(s.beta.size()) + 1;
  lay.p = spec.p;
  lay.m = static_cast<int>(cfg.exog.cols());
  lay.intercept = spec.include_intercept;
  lay.y2 = lay.k - 1;
  for (int j = 0; j < lay.k - 1; ++j) lay.y1_cols.push_back(j);
  lay.n1 = (lay.intercept ? 1 : 0) + lay.p * (lay.k - 1) + lay.m;

  ReducedFormParams rf = reduced_from_structural(s, lay);
  double gb = (s.gamma * s.beta)(0);
  double kap = kappa_factor(s.xi(), s.alpha, gb);
  Eigen::MatrixXd P = innovation_loading(s, lay.k);
  return detail::simulate_reduced(rf, lay, kap, P, cfg);
}

// Simulation directly from a reduced form (used by estimation-stage Monte
// Carlo designs where no structural point is fixed).
inline SimOutput simulate_rf(const ReducedFormParams& rf, const Layout& lay,
                             const SimConfig& cfg) {
  return detail::simulate_reduced(rf, lay, 1.0, rf.L, cfg);
}

}  // namespace cksvar
