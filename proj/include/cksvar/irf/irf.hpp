// Generalized impulse responses under the occasionally binding constraint.
// Responses are Monte Carlo averages of paired shocked/baseline paths driven
// by common random numbers, so the linear case is recovered exactly.
#pragma once
#include "cksvar/core/mapping.hpp"
#include "cksvar/core/simulate.hpp"
#include "cksvar/math/rng.hpp"

namespace cksvar {

struct GirfConfig {
  int horizon = 20;
  int n_rep = 1000;
  std::uint64_t seed = 0;
  double shock = 1.0;          // size of the structural monetary shock
  bool antithetic = true;
  Eigen::MatrixXd init;        // p x k Ybar-level history (default zeros)
  Eigen::VectorXd bound;       // length horizon+1, or 1, or empty for zero
  Eigen::MatrixXd exog;        // (horizon+1) x m or empty
};

struct GirfResult {
  Eigen::MatrixXd mean;   // (horizon+1) x k observed-variable responses
  Eigen::MatrixXd se;     // Monte Carlo standard errors
  Eigen::VectorXd shadow; // mean response of the shadow rate
};

namespace detail {

// Propagates the kinked reduced form over a fixed innovation sequence.
// Returns observed rows; shadow receives the Ybar path.
inline Eigen::MatrixXd propagate_path(const ReducedFormParams& rf,
                                      const Layout& lay,
                                      const Eigen::MatrixXd& hist,
                                      const Eigen::VectorXd& b,
                                      const Eigen::MatrixXd& exog,
                                      const Eigen::MatrixXd& U,
                                      const Eigen::VectorXd& du0,
                                      Eigen::VectorXd* shadow) {
  const int k = lay.k, k1 = k - 1, p = lay.p;
  const int H = static_cast<int>(U.rows());
  std::vector<Eigen::VectorXd> ylag(p);
  std::vector<double> wlag(p, 0.0);
  for (int j = 0; j < p; ++j) {
    Eigen::VectorXd row = hist.row(p - 1 - j);
    double kink = std::min(row[k1] - b[0], 0.0);
    row[k1] = std::max(row[k1], b[0]);
    ylag[j] = row;
    wlag[j] = kink;
  }
  Eigen::MatrixXd out(H, k);
  if (shadow) shadow->resize(H);
  for (int t = 0; t < H; ++t) {
    Eigen::VectorXd x1(lay.n1);
    int c = 0;
    if (lay.intercept) x1[c++] = 1.0;
    for (int j = 0; j < p; ++j)
      for (int v = 0; v < k1; ++v) x1[c++] = ylag[j][v];
    for (int e = 0; e < lay.m; ++e) x1[c++] = exog(t, e);
    Eigen::VectorXd x2(p), w(p);
    for (int j = 0; j < p; ++j) {
      x2[j] = ylag[j][k1];
      w[j] = wlag[j];
    }
    Eigen::VectorXd u = U.row(t);
    if (t == 0) u += du0;
    Eigen::VectorXd m1 = rf.C11 * x1 + rf.C12 * x2 + rf.C12star * w;
    double m2 = (rf.C21 * x1)(0) + (rf.C22 * x2)(0) + (rf.C22star * w)(0);
    double ybar = m2 + u[k1];
    double kink = std::min(ybar - b[t], 0.0);
    Eigen::VectorXd y1 = m1 + u.head(k1) - rf.betatilde * kink;
    out.row(t).head(k1) = y1;
    out(t, k1) = std::max(ybar, b[t]);
    if (shadow) (*shadow)[t] = ybar;
    for (int j = p - 1; j > 0; --j) {
      ylag[j] = ylag[j - 1];
      wlag[j] = wlag[j - 1];
    }
    ylag[0] = out.row(t);
    wlag[0] = kink;
  }
  return out;
}

inline void girf_expand_config(const Layout& lay, const GirfConfig& cfg,
                               Eigen::MatrixXd& hist, Eigen::VectorXd& b,
                               Eigen::MatrixXd& exog) {
  const int H = cfg.horizon + 1;
  hist = cfg.init.size() ? cfg.init
                         : Eigen::MatrixXd::Zero(lay.p, lay.k);
  if (hist.rows() != lay.p || hist.cols() != lay.k)
    throw std::invalid_argument("girf: init shape");
  b.resize(H);
  if (cfg.bound.size() == H) b = cfg.bound;
  else if (cfg.bound.size() == 1) b.setConstant(cfg.bound[0]);
  else if (cfg.bound.size() == 0) b.setZero();
  else throw std::invalid_argument("girf: bound length");
  if (lay.m > 0 && (cfg.exog.rows() != H || cfg.exog.cols() != lay.m))
    throw std::invalid_argument("girf: exog shape");
  exog = cfg.exog;
}

}  // namespace detail

// Monetary-shock impact on the reduced-form innovations: [beta/m; 1/m] with
// m = 1 - gamma*beta, valid in both regimes.
inline Eigen::VectorXd monetary_impact(const Eigen::VectorXd& beta,
                                       const Eigen::RowVectorXd& gamma,
                                       double shock) {
  const int k = static_cast<int>(beta.size()) + 1;
  double m = 1.0 - (gamma * beta)(0);
  if (std::fabs(m) < 1e-12)
    throw std::domain_error("monetary_impact: gamma*beta at unity");
  Eigen::VectorXd du0(k);
  du0.head(k - 1) = beta / m * shock;
  du0[k - 1] = shock / m;
  return du0;
}

// GIRF of the reduced form to an impact du0 on the innovations, with the
// innovation loading P (any factor of Omega).
inline GirfResult girf_impulse(const ReducedFormParams& rf, const Layout& lay,
                               const Eigen::MatrixXd& P,
                               const Eigen::VectorXd& du0,
                               const GirfConfig& cfg) {
  Eigen::MatrixXd hist, exog;
  Eigen::VectorXd b;
  detail::girf_expand_config(lay, cfg, hist, b, exog);
  const int H = cfg.horizon + 1, k = lay.k;

  auto rng = make_rng(cfg.seed, 0x91f4fULL);
  std::normal_distribution<double> N01(0.0, 1.0);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(H, k);
  Eigen::MatrixXd sum2 = Eigen::MatrixXd::Zero(H, k);
  Eigen::VectorXd sh_sum = Eigen::VectorXd::Zero(H);
  const int R = std::max(1, cfg.n_rep);
  Eigen::MatrixXd E(H, k), U(H, k);
  for (int r = 0; r < R; ++r) {
    if (!cfg.antithetic || r % 2 == 0)
      for (int t = 0; t < H; ++t)
        for (int i = 0; i < k; ++i) E(t, i) = N01(rng);
    else
      E = -E;
    U = E * P.transpose();
    Eigen::VectorXd sh0, sh1;
    Eigen::MatrixXd base = detail::propagate_path(
        rf, lay, hist, b, exog, U, Eigen::VectorXd::Zero(k), &sh0);
    Eigen::MatrixXd shocked =
        detail::propagate_path(rf, lay, hist, b, exog, U, du0, &sh1);
    Eigen::MatrixXd d = shocked - base;
    sum += d;
    sum2 += d.cwiseProduct(d);
    sh_sum += sh1 - sh0;
  }
  GirfResult res;
  res.mean = sum / R;
  res.se = ((sum2 / R - res.mean.cwiseProduct(res.mean)).cwiseMax(0.0) / R)
               .cwiseSqrt();
  res.shadow = sh_sum / R;
  return res;
}

// GIRF to a monetary policy shock of size cfg.shock at a structural point.
inline GirfResult girf(const StructuralParams& s, const ModelSpec& spec,
                       const GirfConfig& cfg) {
  Layout lay;
  lay.k = static_cast<int>(s.beta.size()) + 1;
  lay.p = spec.p;
  lay.m = static_cast<int>(cfg.exog.cols());
  lay.intercept = spec.include_intercept;
  lay.y2 = lay.k - 1;
  for (int j = 0; j < lay.k - 1; ++j) lay.y1_cols.push_back(j);
  lay.n1 = (lay.intercept ? 1 : 0) + lay.p * (lay.k - 1) + lay.m;

  ReducedFormParams rf = reduced_from_structural(s, lay);
  Eigen::MatrixXd P = innovation_loading(s, lay.k);
  Eigen::VectorXd du0 = monetary_impact(s.beta, s.gamma, cfg.shock);
  return girf_impulse(rf, lay, P, du0, cfg);
}

// Pointwise envelope of GIRFs across a set of structural points, computed
// with a shared seed so differences reflect the parameters only.
struct GirfEnvelope {
  Eigen::MatrixXd lo, hi;   // (horizon+1) x k
};

inline GirfEnvelope girf_envelope(const std::vector<StructuralParams>& pts,
                                  const ModelSpec& spec,
                                  const GirfConfig& cfg) {
  if (pts.empty()) throw std::invalid_argument("girf_envelope: no points");
  GirfEnvelope env;
  for (size_t i = 0; i < pts.size(); ++i) {
    GirfResult r = girf(pts[i], spec, cfg);
    if (i == 0) {
      env.lo = r.mean;
      env.hi = r.mean;
    } else {
      env.lo = env.lo.cwiseMin(r.mean);
      env.hi = env.hi.cwiseMax(r.mean);
    }
  }
  return env;
}

// Summary rows at fixed horizons: cumulative sums for flow variables,
// levels for the rest.
inline Eigen::MatrixXd irf_timeline(const Eigen::MatrixXd& irf,
                                    const std::vector<int>& horizons,
                                    const std::vector<bool>& cumulate) {
  const int k = static_cast<int>(irf.cols());
  if (static_cast<int>(cumulate.size()) != k)
    throw std::invalid_argument("irf_timeline: cumulate length");
  Eigen::MatrixXd out(horizons.size(), k);
  for (size_t r = 0; r < horizons.size(); ++r) {
    int h = horizons[r];
    if (h < 0 || h >= irf.rows())
      throw std::invalid_argument("irf_timeline: horizon out of range");
    for (int j = 0; j < k; ++j)
      out(r, j) = cumulate[j] ? irf.col(j).head(h + 1).sum() : irf(h, j);
  }
  return out;
}

}  // namespace cksvar
