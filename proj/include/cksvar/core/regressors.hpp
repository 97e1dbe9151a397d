// Regressor construction: X1 (intercept, Y1 lags, exogenous), X2 (observed Y2
// lags), and the latent kink slots min(Ybar2,t-j - b_{t-j}, 0).
#pragma once
#include "cksvar/core/types.hpp"

namespace cksvar {

struct RegressorSet {
  Layout lay;
  int t0 = 0;                // first usable row of the dataset
  Eigen::MatrixXd X1;        // (T - t0) x n1
  Eigen::MatrixXd X2;        // (T - t0) x p
  Eigen::MatrixXd Wstar;     // (T - t0) x p, kink lags; NaN where latent
  Eigen::MatrixXi Wknown;    // 1 if the slot is known (lag not at ELB)
  Eigen::VectorXd y2;        // observed constrained variable at t
  Eigen::MatrixXd y1;        // (T - t0) x (k-1)
  Eigen::VectorXd b;         // bound at t
  Eigen::VectorXi D;         // regime at t

  int rows() const { return static_cast<int>(X1.rows()); }
};

inline RegressorSet build_regressors(const Dataset& data, const ModelSpec& spec,
                                     int t0_override = -1, double tol = 1e-6) {
  data.validate();
  spec.validate(data.k());
  RegressorSet R;
  R.lay = Layout::make(data, spec);
  const auto& lay = R.lay;
  const int T = data.T();
  R.t0 = t0_override >= 0 ? t0_override : std::max(spec.p, data.est_start);
  if (R.t0 < spec.p)
    throw std::invalid_argument("build_regressors: t0 smaller than lag order");
  const int n = T - R.t0;
  if (n <= lay.n1 + 2 * lay.p)
    throw std::invalid_argument("build_regressors: insufficient sample length");

  RegimePath rp = detect_regimes(data, spec, tol);
  R.X1.resize(n, lay.n1);
  R.X2.resize(n, lay.p);
  R.Wstar.resize(n, lay.p);
  R.Wknown.resize(n, lay.p);
  R.y2.resize(n);
  R.y1.resize(n, lay.k - 1);
  R.b.resize(n);
  R.D.resize(n);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < n; ++i) {
    const int t = R.t0 + i;
    int c = 0;
    if (lay.intercept) R.X1(i, c++) = 1.0;
    for (int j = 1; j <= lay.p; ++j)
      for (int v : lay.y1_cols) R.X1(i, c++) = data.values(t - j, v);
    for (int e = 0; e < lay.m; ++e) R.X1(i, c++) = data.exog(t, e);
    for (int j = 1; j <= lay.p; ++j) {
      R.X2(i, j - 1) = data.values(t - j, lay.y2);
      bool elb = rp.D[t - j] != 0;
      R.Wknown(i, j - 1) = elb ? 0 : 1;
      R.Wstar(i, j - 1) = elb ? nan : 0.0;
    }
    for (int v = 0; v < lay.k - 1; ++v)
      R.y1(i, v) = data.values(t, lay.y1_cols[v]);
    R.y2[i] = data.values(t, lay.y2);
    R.b[i] = data.bound[t];
    R.D[i] = rp.D[t];
  }
  return R;
}

// Fill the latent slots from a known shadow-rate path (simulation oracle use).
inline void fill_latent_slots(RegressorSet& R, const Dataset& data,
                              const Eigen::VectorXd& ybar) {
  for (int i = 0; i < R.rows(); ++i) {
    const int t = R.t0 + i;
    for (int j = 1; j <= R.lay.p; ++j)
      if (!R.Wknown(i, j - 1))
        R.Wstar(i, j - 1) = std::min(ybar[t - j] - data.bound[t - j], 0.0);
  }
}

}  // namespace cksvar
