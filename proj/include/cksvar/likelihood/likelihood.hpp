// Exact and simulated log-likelihoods for the piecewise-linear reduced form.
//
// Censored periods integrate the shadow-rate innovation over (-inf, b - m2].
// Completing the square gives a closed form: with Sigma the conditional
// variance of u1 given u2, omega = Omega12/Omega22, d = betatilde - omega,
// c2 = b - m2 and r0 = Y1 - m1 - betatilde*c2,
//   p(Y1, Y2 = b) = N(r0; 0, V) * Phi((c2 - mu_z)/sd_z),
//   V = Sigma + d Omega22 d',  mu_z = -Omega22 d'V^{-1} r0,
//   sd_z^2 = Omega22 - Omega22^2 d'V^{-1} d,
// and the exact posterior of u2 is N(mu_z, sd_z^2) truncated above at c2.
// The particle filter proposes from that posterior, so the incremental weight
// is the closed-form predictive itself and periods whose regressors carry no
// latent slot need no per-particle work at all.
#pragma once
#include "cksvar/core/regressors.hpp"
#include "cksvar/core/types.hpp"
#include "cksvar/math/rng.hpp"
#include "cksvar/math/stats.hpp"

#include <algorithm>
#include <numeric>

namespace cksvar {

struct LikelihoodConfig {
  int n_particles = 4096;
  double resampling_threshold = 0.5;
  std::uint64_t seed = 0;
  bool antithetic = true;
  bool track_latent = true;
  double regime_tol = 1e-6;
};

struct LatentEstimate {
  Eigen::VectorXd ybar;           // smoothed shadow path, observed off the bound
  Eigen::VectorXd filtered_mean;
  Eigen::VectorXd smoothed_mean;
  Eigen::VectorXd smoothed_sd;    // zero off the bound
  Eigen::VectorXd smoothed_lo;    // 5% quantile
  Eigen::VectorXd smoothed_hi;    // 95% quantile
  Eigen::VectorXi D;
};

namespace detail {

struct LikPre {
  int k = 0, k1 = 0;
  Eigen::MatrixXd L;  // Cholesky factor of Omega
  double logdetOmega = 0.0;
  Eigen::VectorXd omega;
  double O22 = 1.0;
  Eigen::VectorXd d;
  Eigen::LLT<Eigen::MatrixXd> Vllt;
  double logdetV = 0.0;
  Eigen::VectorXd q;
  double sdz = 1.0;
  Eigen::VectorXd betatilde;

  static LikPre make(const ReducedFormParams& rf, int k) {
    LikPre pre;
    pre.k = k;
    pre.k1 = k - 1;
    pre.L = rf.L;
    pre.logdetOmega = 0.0;
    for (int i = 0; i < k; ++i) {
      if (!(rf.L(i, i) > 0.0))
        throw std::domain_error("likelihood: Omega factor not PD");
      pre.logdetOmega += 2.0 * std::log(rf.L(i, i));
    }
    Eigen::MatrixXd Omega = rf.Omega();
    Eigen::MatrixXd O11 = Omega.topLeftCorner(pre.k1, pre.k1);
    Eigen::VectorXd O12 = Omega.topRightCorner(pre.k1, 1);
    pre.O22 = Omega(pre.k1, pre.k1);
    pre.omega = O12 / pre.O22;
    pre.betatilde = rf.betatilde;
    pre.d = rf.betatilde - pre.omega;
    Eigen::MatrixXd Sigma = O11 - O12 * O12.transpose() / pre.O22;
    Eigen::MatrixXd V = Sigma + pre.d * pre.O22 * pre.d.transpose();
    pre.Vllt.compute(V);
    if (pre.Vllt.info() != Eigen::Success)
      throw std::domain_error("likelihood: conditional variance not PD");
    pre.logdetV = 0.0;
    Eigen::MatrixXd Lv = pre.Vllt.matrixL();
    for (int i = 0; i < pre.k1; ++i) pre.logdetV += 2.0 * std::log(Lv(i, i));
    pre.q = pre.Vllt.solve(pre.d) * pre.O22;
    double s2z = pre.O22 - pre.O22 * pre.d.dot(pre.q);
    pre.sdz = std::sqrt(std::max(s2z, 1e-300));
    return pre;
  }

  // log density of an uncensored observation with residual u = (u1, u2).
  double log_gauss(const Eigen::VectorXd& u) const {
    Eigen::VectorXd z = L.triangularView<Eigen::Lower>().solve(u);
    return -0.5 * (k * log2pi + logdetOmega + z.squaredNorm());
  }

  // Censored-period contribution plus the posterior (mu_z, sd_z, c2).
  double log_censored(const Eigen::VectorXd& y1, const Eigen::VectorXd& m1,
                      double m2, double b, double* mu_z = nullptr,
                      double* c2_out = nullptr) const {
    double c2 = b - m2;
    Eigen::VectorXd r0 = y1 - m1 - betatilde * c2;
    Eigen::VectorXd a = Vllt.solve(r0);
    double quad = r0.dot(a);
    double muz = -q.dot(r0);
    double zarg = (c2 - muz) / sdz;
    if (mu_z) *mu_z = muz;
    if (c2_out) *c2_out = c2;
    return -0.5 * (k1 * log2pi + logdetV + quad) + log_norm_cdf(zarg);
  }
};

// Inverse CDF of N(mu, sd) truncated above at `upper`, at probability u.
inline double trunc_norm_upper_draw(double mu, double sd, double upper,
                                    double u) {
  double z = (upper - mu) / sd;
  if (z > -8.0) {
    double p = u * norm_cdf(z);
    if (p <= 0.0) p = std::numeric_limits<double>::min();
    return mu + sd * inv_norm_cdf(std::min(p, 1.0 - 1e-16));
  }
  // Deep tail: Newton on log Phi(x) = log u + log Phi(z), started from the
  // exponential tail approximation.
  double target = std::log(u) + log_norm_cdf(z);
  double x = z - (-std::log(u)) / std::max(-z, 1.0);
  for (int it = 0; it < 8; ++it) {
    double f = log_norm_cdf(x) - target;
    double fp = std::exp(log_norm_pdf(x) - log_norm_cdf(x));
    double step = f / fp;
    x -= step;
    if (std::fabs(step) < 1e-12) break;
  }
  return mu + sd * std::min(x, z);
}

}  // namespace detail

// Exact likelihood over a regressor set whose latent slots are all filled
// with numeric values (zeros for KSVAR, smoothed estimates for plug-in fits).
inline double exact_loglik_filled(const ReducedFormParams& rf,
                                  const RegressorSet& R) {
  const auto& lay = R.lay;
  auto pre = detail::LikPre::make(rf, lay.k);
  double ll = 0.0;
  Eigen::VectorXd u(lay.k);
  for (int i = 0; i < R.rows(); ++i) {
    Eigen::VectorXd m1 = rf.C11 * R.X1.row(i).transpose() +
                         rf.C12 * R.X2.row(i).transpose() +
                         rf.C12star * R.Wstar.row(i).transpose();
    double m2 = (rf.C21 * R.X1.row(i).transpose())(0) +
                (rf.C22 * R.X2.row(i).transpose())(0) +
                (rf.C22star * R.Wstar.row(i).transpose())(0);
    if (R.D[i]) {
      ll += pre.log_censored(R.y1.row(i).transpose(), m1, m2, R.b[i]);
    } else {
      u.head(lay.k - 1) = R.y1.row(i).transpose() - m1;
      u[lay.k - 1] = R.y2[i] - m2;
      ll += pre.log_gauss(u);
    }
  }
  if (!std::isfinite(ll)) return -std::numeric_limits<double>::infinity();
  return ll;
}

// Exact likelihood when no regressor slot is latent (KSVAR, or CKSVAR data
// that never visits the bound).
inline double loglik_ksvar(const ReducedFormParams& rf, const Dataset& data,
                           const ModelSpec& spec, double regime_tol = 1e-6,
                           const RegressorSet* Rpre = nullptr) {
  RegressorSet Rbuilt;
  if (!Rpre) Rbuilt = build_regressors(data, spec, -1, regime_tol);
  RegressorSet R = Rpre ? *Rpre : Rbuilt;
  rf.validate(R.lay);
  if ((rf.C12star.cwiseAbs().maxCoeff() > 0.0 ||
       rf.C22star.cwiseAbs().maxCoeff() > 0.0) &&
      !R.Wknown.minCoeff())
    throw std::invalid_argument(
        "loglik_ksvar: latent regressor slots present; use loglik_cksvar");
  for (int i = 0; i < R.rows(); ++i)
    for (int j = 0; j < R.lay.p; ++j)
      if (!R.Wknown(i, j)) R.Wstar(i, j) = 0.0;
  return exact_loglik_filled(rf, R);
}

// Sequential Monte Carlo likelihood with latent kink lags.
inline std::pair<double, LatentEstimate> loglik_cksvar(
    const ReducedFormParams& rf, const Dataset& data, const ModelSpec& spec,
    const LikelihoodConfig& cfg, const RegressorSet* Rpre = nullptr) {
  if (cfg.n_particles < 2)
    throw std::invalid_argument("loglik_cksvar: n_particles must be >= 2");
  RegressorSet Rbuilt;
  if (!Rpre) Rbuilt = build_regressors(data, spec, -1, cfg.regime_tol);
  const RegressorSet& R = Rpre ? *Rpre : Rbuilt;
  const auto& lay = R.lay;
  rf.validate(lay);
  auto pre = detail::LikPre::make(rf, lay.k);
  const int N = cfg.n_particles;
  const int p = lay.p;
  const int n = R.rows();
  const int k1 = lay.k - 1;

  // Base means with all latent slots at zero.
  Eigen::MatrixXd M1 = (rf.C11 * R.X1.transpose() + rf.C12 * R.X2.transpose())
                           .transpose();                       // n x k1
  Eigen::VectorXd M2 = (rf.C21 * R.X1.transpose() + rf.C22 * R.X2.transpose())
                           .transpose();                       // n

  // Particle state: the p most recent kink values (newest first).
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, p);
  Eigen::VectorXd lw = Eigen::VectorXd::Zero(N);
  double ll = 0.0;

  auto rng = make_rng(cfg.seed, 0xf117e2ULL);
  std::uniform_real_distribution<double> U01(0.0, 1.0);

  // ELB periods in the estimation window, for latent tracking.
  std::vector<int> elb_rows;
  std::vector<int> elb_row_of(n, -1);
  for (int i = 0; i < n; ++i)
    if (R.D[i]) {
      elb_row_of[i] = static_cast<int>(elb_rows.size());
      elb_rows.push_back(i);
    }
  const int nelb = static_cast<int>(elb_rows.size());
  // traj(i, j): kink drawn by particle i at the j-th ELB period.
  Eigen::MatrixXd traj;
  if (cfg.track_latent && nelb > 0) traj.setZero(N, nelb);
  Eigen::VectorXd filt_mean = Eigen::VectorXd::Zero(nelb);

  Eigen::VectorXd u(lay.k);
  Eigen::VectorXd logw(N);
  bool mixed = false;  // particles have diverged

  for (int i = 0; i < n; ++i) {
    bool has_latent = !R.Wknown.row(i).all();
    bool active = (has_latent && mixed) || R.D[i];

    if (!active) {
      // Common contribution: all particles share the zero-slot means.
      u.head(k1) = R.y1.row(i).transpose() - M1.row(i).transpose();
      u[k1] = R.y2[i] - M2[i];
      ll += pre.log_gauss(u);
      for (int j = p - 1; j > 0; --j) W.col(j) = W.col(j - 1);
      W.col(0).setZero();
      continue;
    }

    // Which of the p slots are latent at this period.
    std::vector<int> slots;
    for (int j = 0; j < p; ++j)
      if (!R.Wknown(i, j)) slots.push_back(j);

    // Uniforms for the truncated draws, antithetic in mirrored pairs.
    Eigen::VectorXd uni;
    if (R.D[i]) {
      uni.resize(N);
      if (cfg.antithetic) {
        const int half = N / 2;
        for (int ip = 0; ip < half; ++ip) {
          double uu = U01(rng);
          uni[ip] = uu;
          uni[ip + half] = 1.0 - uu;
        }
        if (N % 2) uni[N - 1] = U01(rng);
      } else {
        for (int ip = 0; ip < N; ++ip) uni[ip] = U01(rng);
      }
      // keep draws away from the endpoints
      uni = uni.cwiseMax(1e-15).cwiseMin(1.0 - 1e-15);
    }

    for (int ip = 0; ip < N; ++ip) {
      Eigen::VectorXd m1 = M1.row(i).transpose();
      double m2 = M2[i];
      for (int j : slots) {
        m1 += rf.C12star.col(j) * W(ip, j);
        m2 += rf.C22star[j] * W(ip, j);
      }
      double kink = 0.0;
      if (R.D[i]) {
        double muz, c2;
        logw[ip] = pre.log_censored(R.y1.row(i).transpose(), m1, m2, R.b[i],
                                    &muz, &c2);
        kink = detail::trunc_norm_upper_draw(muz, pre.sdz, c2, uni[ip]) - c2;
      } else {
        u.head(k1) = R.y1.row(i).transpose() - m1;
        u[k1] = R.y2[i] - m2;
        logw[ip] = pre.log_gauss(u);
      }
      // shift state
      for (int j = p - 1; j > 0; --j) W(ip, j) = W(ip, j - 1);
      W(ip, 0) = kink;
      if (cfg.track_latent && R.D[i]) traj(ip, elb_row_of[i]) = kink;
    }

    // Weight update and period contribution.
    double Lprev = logsumexp(std::vector<double>(lw.data(), lw.data() + N));
    lw += logw;
    double Lnew = logsumexp(std::vector<double>(lw.data(), lw.data() + N));
    if (!std::isfinite(Lnew))
      throw std::runtime_error("loglik_cksvar: particle degeneracy at row " +
                               std::to_string(i));
    ll += Lnew - Lprev;
    mixed = true;

    // Filtered mean of the shadow rate at ELB periods.
    if (R.D[i]) {
      double num = 0.0, den = 0.0;
      for (int ip = 0; ip < N; ++ip) {
        double wgt = std::exp(lw[ip] - Lnew);
        num += wgt * (R.b[i] + W(ip, 0));
        den += wgt;
      }
      filt_mean[elb_row_of[i]] = num / den;
    }

    // ESS-based systematic resampling.
    double sumw2 = 0.0;
    for (int ip = 0; ip < N; ++ip) {
      double wgt = std::exp(lw[ip] - Lnew);
      sumw2 += wgt * wgt;
    }
    if (1.0 / sumw2 < cfg.resampling_threshold * N) {
      Eigen::VectorXd cum(N);
      double acc = 0.0;
      for (int ip = 0; ip < N; ++ip) {
        acc += std::exp(lw[ip] - Lnew);
        cum[ip] = acc;
      }
      double u0 = U01(rng) / N;
      Eigen::MatrixXd Wnew(N, p);
      Eigen::MatrixXd trajnew;
      if (cfg.track_latent && nelb > 0) trajnew.resize(N, nelb);
      int src = 0;
      for (int ip = 0; ip < N; ++ip) {
        double target = u0 + static_cast<double>(ip) / N;
        while (src < N - 1 && cum[src] < target) ++src;
        Wnew.row(ip) = W.row(src);
        if (cfg.track_latent && nelb > 0) trajnew.row(ip) = traj.row(src);
      }
      W = std::move(Wnew);
      if (cfg.track_latent && nelb > 0) traj = std::move(trajnew);
      lw.setZero();
    }
  }

  LatentEstimate est;
  const int T = data.T();
  est.ybar = data.values.col(lay.y2);
  est.filtered_mean = est.ybar;
  est.smoothed_mean = est.ybar;
  est.smoothed_sd = Eigen::VectorXd::Zero(T);
  est.smoothed_lo = est.ybar;
  est.smoothed_hi = est.ybar;
  RegimePath rp = detect_regimes(data, spec, cfg.regime_tol);
  est.D = rp.D;

  if (cfg.track_latent && nelb > 0) {
    double Lfin = logsumexp(std::vector<double>(lw.data(), lw.data() + N));
    Eigen::VectorXd wgt(N);
    for (int ip = 0; ip < N; ++ip) wgt[ip] = std::exp(lw[ip] - Lfin);
    std::vector<int> order(N);
    for (int j = 0; j < nelb; ++j) {
      int row = elb_rows[j];
      int t = R.t0 + row;
      double mean = 0.0, m2s = 0.0;
      for (int ip = 0; ip < N; ++ip) {
        double v = R.b[row] + traj(ip, j);
        mean += wgt[ip] * v;
        m2s += wgt[ip] * v * v;
      }
      est.smoothed_mean[t] = mean;
      est.smoothed_sd[t] = std::sqrt(std::max(m2s - mean * mean, 0.0));
      est.filtered_mean[t] = filt_mean[j];
      est.ybar[t] = mean;
      // Weighted quantiles.
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b2) {
        return traj(a, j) < traj(b2, j);
      });
      double accq = 0.0;
      double lo = R.b[row] + traj(order[0], j);
      double hi = R.b[row] + traj(order[N - 1], j);
      bool lo_set = false;
      for (int oi = 0; oi < N; ++oi) {
        accq += wgt[order[oi]];
        if (!lo_set && accq >= 0.05) {
          lo = R.b[row] + traj(order[oi], j);
          lo_set = true;
        }
        if (accq >= 0.95) {
          hi = R.b[row] + traj(order[oi], j);
          break;
        }
      }
      est.smoothed_lo[t] = lo;
      est.smoothed_hi[t] = hi;
    }
  }
  return {ll, est};
}

inline LatentEstimate smooth_latent(const ReducedFormParams& rf,
                                    const Dataset& data, const ModelSpec& spec,
                                    const LikelihoodConfig& cfg) {
  LikelihoodConfig c = cfg;
  c.track_latent = true;
  return loglik_cksvar(rf, data, spec, c).second;
}

}  // namespace cksvar
