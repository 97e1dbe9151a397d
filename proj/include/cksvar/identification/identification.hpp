// Partial identification of (xi, beta, gamma) from the reduced form, sign
// restrictions on the implied impulse responses, and shadow-rate bands.
//
// For a candidate attenuation xi, beta is proportional to the reduced-form
// kink coefficient: beta = c*betatilde with the scalar c solving
//   c*(1 - xi) = 1 - xi*h(c),   h(c) = gamma(c*betatilde) * (c*betatilde),
// where gamma(beta) = (Omega12' - Omega22*beta')(Omega11 - Omega12*beta')^-1
// is pinned down by the covariance restriction.
#pragma once
#include "cksvar/irf/irf.hpp"
#include "cksvar/likelihood/likelihood.hpp"

namespace cksvar {

struct IdentifiedPoint {
  double xi = 0.0;
  double c = 1.0;
  Eigen::VectorXd beta;
  Eigen::RowVectorXd gamma;
  bool converged = false;
};

struct IdentifiedSet {
  std::vector<IdentifiedPoint> points;   // solved grid points only
  double xi_min = 0.0, xi_max = 0.0;
  Eigen::VectorXd beta_min, beta_max;    // componentwise over the set
};

// Solves for one grid point. Fixed point with damping, then a bracketed
// bisection fallback over c if the iteration fails to settle.
inline IdentifiedPoint solve_identified_point(const Eigen::MatrixXd& Omega,
                                              const Eigen::VectorXd& betatilde,
                                              double xi) {
  IdentifiedPoint pt;
  pt.xi = xi;
  const int k1 = static_cast<int>(betatilde.size());
  const double bt_norm = betatilde.lpNorm<Eigen::Infinity>();

  if (bt_norm < 1e-12) {
    // No kink in the reduced form: beta = 0 at every xi.
    pt.c = 0.0;
    pt.beta = Eigen::VectorXd::Zero(k1);
    pt.gamma = gamma_from_beta(Omega, pt.beta);
    pt.converged = true;
    return pt;
  }

  auto h = [&](double c) {
    Eigen::VectorXd beta = c * betatilde;
    return (gamma_from_beta(Omega, beta) * beta)(0);
  };
  auto f = [&](double c) { return c * (1.0 - xi) - 1.0 + xi * h(c); };

  double c = 1.0;
  bool ok = false;
  if (xi < 1.0) {
    for (int it = 0; it < 500; ++it) {
      double cn = (1.0 - xi * h(c)) / (1.0 - xi);
      if (!std::isfinite(cn)) break;
      cn = 0.5 * c + 0.5 * cn;
      if (std::fabs(cn - c) < 1e-12 * (1.0 + std::fabs(cn))) {
        c = cn;
        ok = std::fabs(f(c)) < 1e-8;
        break;
      }
      c = cn;
    }
  }
  if (!ok) {
    // Scan for a sign change and bisect. c = 1 solves xi = 0 exactly, and
    // the solution grows with xi, so scan upward from zero.
    double lo = 0.0, flo = f(lo), hi = lo;
    bool bracket = false;
    for (double step = 0.05; hi < 1e4; step *= 1.25) {
      hi += step;
      double fhi = f(hi);
      if (std::isfinite(fhi) && flo * fhi <= 0.0) {
        bracket = true;
        break;
      }
      if (std::isfinite(fhi)) {
        lo = hi;
        flo = fhi;
      }
    }
    if (bracket) {
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (flo * fm <= 0.0) hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      c = 0.5 * (lo + hi);
      ok = std::fabs(f(c)) < 1e-8;
    }
  }
  pt.c = c;
  pt.beta = c * betatilde;
  pt.gamma = gamma_from_beta(Omega, pt.beta);
  pt.converged = ok;
  return pt;
}

inline IdentifiedSet solve_identified_set(const ReducedFormParams& rf,
                                          double xi_step = 0.005) {
  Eigen::MatrixXd Omega = rf.Omega();
  IdentifiedSet set;
  const int n = static_cast<int>(std::lround(1.0 / xi_step));
  for (int i = 0; i <= n; ++i) {
    double xi = std::min(1.0, i * xi_step);
    IdentifiedPoint pt = solve_identified_point(Omega, rf.betatilde, xi);
    if (pt.converged) set.points.push_back(pt);
  }
  if (set.points.empty()) return set;
  set.xi_min = set.points.front().xi;
  set.xi_max = set.points.back().xi;
  set.beta_min = set.points.front().beta;
  set.beta_max = set.points.front().beta;
  for (const auto& pt : set.points) {
    set.beta_min = set.beta_min.cwiseMin(pt.beta);
    set.beta_max = set.beta_max.cwiseMax(pt.beta);
  }
  return set;
}

// Sign restriction on the GIRF of one variable over a horizon range.
struct SignRestriction {
  int var = 0;       // column in the observed-variable ordering
  int h_min = 0;
  int h_max = 0;
  int sign = 1;      // +1 nonnegative, -1 nonpositive
  double slack = 0.0;
};

struct SignRestrictionResult {
  std::vector<IdentifiedPoint> kept;
  std::vector<int> n_violations;   // per restriction, over all points checked
  int n_checked = 0;
};

// Keeps the identified-set points whose monetary-shock GIRFs satisfy every
// restriction. The reduced form is common to all points; only the impact
// vector varies, so a shared seed makes the comparison exact in the draws.
inline SignRestrictionResult apply_sign_restrictions(
    const IdentifiedSet& set, const ReducedFormParams& rf, const Layout& lay,
    const std::vector<SignRestriction>& restrictions, const GirfConfig& cfg) {
  SignRestrictionResult res;
  res.n_violations.assign(restrictions.size(), 0);
  for (const auto& pt : set.points) {
    Eigen::VectorXd du0 = monetary_impact(pt.beta, pt.gamma, cfg.shock);
    GirfResult g = girf_impulse(rf, lay, rf.L, du0, cfg);
    ++res.n_checked;
    bool pass = true;
    for (size_t r = 0; r < restrictions.size(); ++r) {
      const auto& sr = restrictions[r];
      if (sr.var < 0 || sr.var >= lay.k)
        throw std::invalid_argument("sign restriction: variable index");
      if (sr.h_min < 0 || sr.h_max > cfg.horizon || sr.h_min > sr.h_max)
        throw std::invalid_argument("sign restriction: horizon range");
      for (int hh = sr.h_min; hh <= sr.h_max; ++hh) {
        double v = sr.sign * g.mean(hh, sr.var);
        if (v < -sr.slack) {
          pass = false;
          ++res.n_violations[r];
          break;
        }
      }
    }
    if (pass) res.kept.push_back(pt);
  }
  return res;
}

// Structural shadow rate implied by a smoothed latent path: at the bound
// Y2* = kappa*(Ybar - b) + b with kappa = (1 - gamma*beta)/(1 - xi*gamma*beta)
// (alpha normalized to zero), elsewhere the observed rate.
inline Eigen::VectorXd structural_shadow(const LatentEstimate& est,
                                         const Eigen::VectorXd& bound,
                                         const IdentifiedPoint& pt) {
  double gb = (pt.gamma * pt.beta)(0);
  double kap = kappa_factor(pt.xi, 0.0, gb);
  Eigen::VectorXd out = est.ybar;
  for (int t = 0; t < out.size(); ++t)
    if (est.D[t]) out[t] = kap * (est.ybar[t] - bound[t]) + bound[t];
  return out;
}

struct ShadowEnvelope {
  Eigen::VectorXd lo, hi;
};

inline ShadowEnvelope shadow_envelope(const LatentEstimate& est,
                                      const Eigen::VectorXd& bound,
                                      const std::vector<IdentifiedPoint>& pts) {
  if (pts.empty()) throw std::invalid_argument("shadow_envelope: no points");
  ShadowEnvelope env;
  env.lo = structural_shadow(est, bound, pts[0]);
  env.hi = env.lo;
  for (size_t i = 1; i < pts.size(); ++i) {
    Eigen::VectorXd s = structural_shadow(est, bound, pts[i]);
    env.lo = env.lo.cwiseMin(s);
    env.hi = env.hi.cwiseMax(s);
  }
  return env;
}

}  // namespace cksvar
