// Log-linear New Keynesian model with an occasionally binding lower bound,
// QE and forward guidance. Provides the linear rational-expectations solution
// (undetermined coefficients on the one-state/three-shock structure), the
// piecewise solution with full-effectiveness expectations, an OccBin-style
// guess-and-verify solver, and the exact export to the CKSVAR form.
//
// Model, in deviations from steady state:
//   y  = E y' - (1/sigma)(e - E pi') - chi_b zb
//   pi = delta E pi' + kappa y - chi_a za
//   i* = -alpha i + (1+alpha) iT
//   iT = rho_i e(-1) + (1-rho_i)(r_pi pi + r_y y) + eps_i
//   i  = max(i*, b)
// with e = (1-lambda*) i + lambda* i* the effective rate. Everything except
// the reported shadow rate depends on (lambda*, alpha) only through
// xi* = lambda*(1+alpha).
#pragma once
#include "cksvar/core/types.hpp"

namespace cksvar {

struct DSGEParams {
  double sigma = 2.0;
  double delta = 0.997;
  double kappa = 0.336;
  double rho_i = 0.7;
  double r_pi = 1.5;
  double r_y = 0.5;
  double rho_a = 0.9;
  double rho_b = 0.9;
  double chi_a = 0.25225;
  double chi_b = 0.45;
  double lambda_star = 1.0;
  double alpha = 0.0;
  double b = -0.005;   // ELB in deviation units, b = -i/(1+i)

  double xi_star() const { return lambda_star * (1.0 + alpha); }

  void validate() const {
    if (r_pi <= 1.0) throw std::invalid_argument("dsge: Taylor principle");
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("dsge: delta");
    if (rho_a < 0.0 || rho_a >= 1.0 || rho_b < 0.0 || rho_b >= 1.0)
      throw std::invalid_argument("dsge: shock persistence");
    if (b > 0.0) throw std::invalid_argument("dsge: bound must be <= 0");
    if (lambda_star < 0.0 || lambda_star > 1.0 || alpha < 0.0)
      throw std::invalid_argument("dsge: UMP parameters");
    if (xi_star() > 1.0 + 1e-12)
      throw std::invalid_argument("dsge: xi* exceeds one");
  }
};

struct DeepParams {
  double calvo = 0.75;
  double nu = 0.5;          // Frisch elasticity
  double theta = 1.0;       // production curvature
  double lambda_p = 6.0;    // CES exponent parameter in the Phillips block
  double nu_p = 1.0;        // no indexation
  double omega_u = 0.5;
  double cu_y = 0.5;
  double cr_y = 0.5;
  double zeta = 1.0;
  double rho_zeta = 1.0;
  double gamma_qe = 1.0;
  double mu = 0.975;        // coupon decay
  double RL_bar = 1.01;     // steady-state gross long yield
};

struct ReducedFromDeep {
  double lambda_star, kappa, chi_a, chi_b;
};

inline ReducedFromDeep derive_reduced_params(const DeepParams& dp, double sigma,
                                             double delta, double rho_b) {
  if (dp.calvo <= 0.0 || dp.calvo >= 1.0)
    throw std::invalid_argument("derive_reduced_params: Calvo probability");
  ReducedFromDeep r;
  double slope = (1.0 - dp.calvo * delta) * (1.0 - dp.calvo) / dp.calvo;
  r.kappa = slope * (sigma + 1.0 / dp.nu);
  r.chi_a = slope * (1.0 + dp.nu) / dp.nu;
  r.chi_b = rho_b / sigma;
  r.lambda_star = (1.0 - dp.omega_u) * dp.cr_y * (dp.zeta / (1.0 + dp.zeta)) *
                  dp.rho_zeta * dp.gamma_qe;
  return r;
}

struct DecisionRules {
  double rho_hat = 0.0;   // d_i*i*
  double d_yistar = 0.0, d_yi = 0.0, d_ya = 0.0, d_yb = 0.0;
  double d_pistar = 0.0, d_pii = 0.0, d_pia = 0.0, d_pib = 0.0;
  double d_ii = 0.0, d_ia = 0.0, d_ib = 0.0;   // shadow-rate row
  Eigen::Matrix3d A, B, C, D, G;
  double residual = 0.0;   // ||A - B D^-1 C||_inf
};

// Linear RE solution under xi* = 1. The shadow-rate persistence rho_hat
// solves a scalar equation; the z-blocks are 3x3 linear systems.
inline DecisionRules solve_linear_re(const DSGEParams& p) {
  p.validate();
  // q_y, q_pi: loadings of (y, pi) on the current shadow rate.
  auto q_y_of = [&](double r) {
    return -(1.0 - p.delta * r) /
           (p.sigma * (1.0 - r) * (1.0 - p.delta * r) - p.kappa * r);
  };
  auto theta_of = [&](double r) {
    double qy = q_y_of(r);
    double qpi = p.kappa * qy / (1.0 - p.delta * r);
    return (1.0 - p.rho_i) * (p.r_pi * qpi + p.r_y * qy);
  };
  auto F = [&](double r) { return r * (1.0 - theta_of(r)) - p.rho_i; };

  // Scan for sign changes of F on (-1, 1), skipping poles of q_y.
  std::vector<double> roots;
  const int ngrid = 4000;
  double prev_x = -0.9995, prev_f = F(prev_x);
  for (int i = 1; i <= ngrid; ++i) {
    double x = -0.9995 + 1.999 * i / ngrid;
    double den = p.sigma * (1.0 - x) * (1.0 - p.delta * x) - p.kappa * x;
    double fx = F(x);
    if (std::isfinite(prev_f) && std::isfinite(fx) && std::fabs(den) > 1e-8 &&
        prev_f * fx <= 0.0) {
      double lo = prev_x, hi = x, flo = prev_f;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi), fm = F(mid);
        if (flo * fm <= 0.0) hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      double r = 0.5 * (lo + hi);
      bool dup = false;
      for (double q : roots)
        if (std::fabs(q - r) < 1e-6) dup = true;
      if (!dup && std::fabs(F(r)) < 1e-9) roots.push_back(r);
    }
    prev_x = x;
    prev_f = fx;
  }
  if (roots.empty())
    throw std::domain_error("solve_linear_re: no stable solution (explosive)");
  if (roots.size() > 1)
    throw std::domain_error("solve_linear_re: indeterminacy (multiple roots)");

  DecisionRules dr;
  double r = roots[0];
  dr.rho_hat = r;
  double qy = q_y_of(r);
  double qpi = p.kappa * qy / (1.0 - p.delta * r);
  double theta = theta_of(r);
  dr.d_ii = 1.0 / (1.0 - theta);
  dr.d_yistar = qy * r;
  dr.d_yi = qy * dr.d_ii;
  dr.d_pistar = qpi * r;
  dr.d_pii = qpi * dr.d_ii;

  // z-blocks: unknowns (d_y., d_pi., d_i.) per shock.
  auto solve_z = [&](double rho, double rhs_euler, double rhs_phillips) {
    Eigen::Matrix3d M;
    M << 1.0 - rho, -rho / p.sigma,
        (1.0 - dr.d_pistar) / p.sigma - dr.d_yistar,
        -p.kappa, 1.0 - p.delta * rho, -p.delta * dr.d_pistar,
        -(1.0 - p.rho_i) * p.r_y, -(1.0 - p.rho_i) * p.r_pi, 1.0;
    Eigen::Vector3d rhs(rhs_euler, rhs_phillips, 0.0);
    return Eigen::Vector3d(M.partialPivLu().solve(rhs));
  };
  Eigen::Vector3d za = solve_z(p.rho_a, 0.0, -p.chi_a);
  Eigen::Vector3d zb = solve_z(p.rho_b, -p.chi_b, 0.0);
  dr.d_ya = za[0];
  dr.d_pia = za[1];
  dr.d_ia = za[2];
  dr.d_yb = zb[0];
  dr.d_pib = zb[1];
  dr.d_ib = zb[2];

  dr.C << dr.d_yistar, p.rho_a * dr.d_ya, p.rho_b * dr.d_yb,
      dr.d_pistar, p.rho_a * dr.d_pia, p.rho_b * dr.d_pib,
      dr.rho_hat, p.rho_a * dr.d_ia, p.rho_b * dr.d_ib;
  dr.D << dr.d_yi, dr.d_ya, dr.d_yb,
      dr.d_pii, dr.d_pia, dr.d_pib,
      dr.d_ii, dr.d_ia, dr.d_ib;
  dr.A << dr.rho_hat, p.rho_a * dr.d_ia, p.rho_b * dr.d_ib,
      0.0, p.rho_a, 0.0,
      0.0, 0.0, p.rho_b;
  dr.B << dr.d_ii, dr.d_ia, dr.d_ib,
      0.0, 1.0, 0.0,
      0.0, 0.0, 1.0;
  if (std::fabs(dr.D.determinant()) < 1e-12)
    throw std::domain_error("solve_linear_re: singular shock loading");
  Eigen::Matrix3d Dinv = dr.D.inverse();
  dr.G = dr.C * dr.B * Dinv;
  dr.residual =
      (dr.A - dr.B * Dinv * dr.C).cwiseAbs().rowwise().sum().maxCoeff();
  return dr;
}

struct LongRateRules {
  double f_istar = 1.0, f_a = 0.0, f_b = 0.0;
  Eigen::Matrix3d Ctilde, Dtilde;
  double residual = 0.0;
};

inline LongRateRules long_rate_rules(const DecisionRules& dr,
                                     const DSGEParams& p, double mu,
                                     double RL_bar) {
  if (mu / RL_bar >= 1.0)
    throw std::domain_error("long_rate_rules: spectral condition");
  double thL = (RL_bar - mu) / RL_bar;
  // f' = thL * e1' (I - (mu/RL) A)^-1 over the state (i*, za, zb).
  Eigen::Matrix3d M = Eigen::Matrix3d::Identity() - (mu / RL_bar) * dr.A;
  Eigen::RowVector3d f =
      thL * Eigen::RowVector3d(1.0, 0.0, 0.0) * M.inverse();
  LongRateRules lr;
  lr.f_istar = f[0];
  lr.f_a = f[1];
  lr.f_b = f[2];

  double ga = lr.f_istar * dr.d_ia + lr.f_a;
  double gb = lr.f_istar * dr.d_ib + lr.f_b;
  lr.Ctilde << dr.d_yistar, p.rho_a * dr.d_ya, p.rho_b * dr.d_yb,
      dr.d_pistar, p.rho_a * dr.d_pia, p.rho_b * dr.d_pib,
      lr.f_istar * dr.rho_hat, p.rho_a * ga, p.rho_b * gb;
  lr.Dtilde << dr.d_yi, dr.d_ya, dr.d_yb,
      dr.d_pii, dr.d_pia, dr.d_pib,
      lr.f_istar * dr.d_ii, ga, gb;
  lr.residual = (dr.A - dr.B * lr.Dtilde.inverse() * lr.Ctilde)
                    .cwiseAbs()
                    .rowwise()
                    .sum()
                    .maxCoeff();
  return lr;
}

struct ShockPaths {
  Eigen::VectorXd eps_i, eps_a, eps_b;
  int T() const { return static_cast<int>(eps_i.size()); }
};

struct DSGEInit {
  double e_lag = 0.0;    // lagged effective rate
  double za_lag = 0.0;
  double zb_lag = 0.0;
};

struct SimPath {
  Eigen::VectorXd y, pi, i, istar, itaylor, za, zb;
  Eigen::VectorXi regime;   // 1 while the ELB binds
  std::string method;
};

namespace detail {

// H-matrices of the stacked current-period system under expectations formed
// with the xi* = 1 rules: H1 [y; pi] = H2 e + (z terms).
struct StackedSystem {
  Eigen::Matrix2d H1;
  Eigen::Vector2d H2;
  Eigen::Matrix<double, 2, 3> R;   // (za, zb) recovery from (y, pi, e)
};

inline StackedSystem stacked_system(const DecisionRules& dr,
                                    const DSGEParams& p) {
  const Eigen::Matrix3d& G = dr.G;
  StackedSystem s;
  s.H1 << 1.0 - G(0, 0) - G(1, 0) / p.sigma, -(G(0, 1) + G(1, 1) / p.sigma),
      -(p.kappa + p.delta * G(1, 0)), 1.0 - p.delta * G(1, 1);
  s.H2 << G(0, 2) + G(1, 2) / p.sigma - 1.0 / p.sigma, p.delta * G(1, 2);
  s.R.row(0) << (p.delta * G(1, 0) + p.kappa) / p.chi_a,
      (p.delta * G(1, 1) - 1.0) / p.chi_a, p.delta * G(1, 2) / p.chi_a;
  s.R.row(1) << (G(0, 0) + G(1, 0) / p.sigma - 1.0) / p.chi_b,
      (G(0, 1) + G(1, 1) / p.sigma) / p.chi_b,
      (G(0, 2) + G(1, 2) / p.sigma - 1.0 / p.sigma) / p.chi_b;
  return s;
}

}  // namespace detail

// Piecewise solution with expectations formed under full future UMP
// effectiveness (Proposition-2 convention). Each period solves a 3x3 linear
// system per regime; binding iff the implied Taylor rate is below the bound.
inline SimPath simulate_prop2(const DSGEParams& p, const ShockPaths& shocks,
                              const DSGEInit& init = {}) {
  p.validate();
  DSGEParams p1 = p;
  p1.lambda_star = 1.0;
  p1.alpha = 0.0;
  DecisionRules dr = solve_linear_re(p1);
  detail::StackedSystem st = detail::stacked_system(dr, p);

  const int T = shocks.T();
  const double xs = p.xi_star();
  SimPath out;
  out.method = "prop2";
  out.y.resize(T);
  out.pi.resize(T);
  out.i.resize(T);
  out.istar.resize(T);
  out.itaylor.resize(T);
  out.za.resize(T);
  out.zb.resize(T);
  out.regime.resize(T);

  double e_lag = init.e_lag, za = init.za_lag, zb = init.zb_lag;
  for (int t = 0; t < T; ++t) {
    za = p.rho_a * za + shocks.eps_a[t];
    zb = p.rho_b * zb + shocks.eps_b[t];
    double taylor_rhs = p.rho_i * e_lag + shocks.eps_i[t];

    auto solve_regime = [&](bool binding) {
      // Unknowns (y, pi, iT); e = iT when slack, (1-xi*)b + xi*iT when bound.
      double e_load = binding ? xs : 1.0;
      double e_const = binding ? (1.0 - xs) * p.b : 0.0;
      Eigen::Matrix3d M;
      M << st.H1(0, 0), st.H1(0, 1), -st.H2(0) * e_load,
          st.H1(1, 0), st.H1(1, 1), -st.H2(1) * e_load,
          -(1.0 - p.rho_i) * p.r_y, -(1.0 - p.rho_i) * p.r_pi, 1.0;
      Eigen::Vector3d rhs(-p.chi_b * zb + st.H2(0) * e_const,
                          -p.chi_a * za + st.H2(1) * e_const, taylor_rhs);
      return Eigen::Vector3d(M.partialPivLu().solve(rhs));
    };

    Eigen::Vector3d v = solve_regime(false);
    bool binding = v[2] < p.b;
    if (binding) v = solve_regime(true);
    out.y[t] = v[0];
    out.pi[t] = v[1];
    out.itaylor[t] = v[2];
    if (binding) {
      out.i[t] = p.b;
      out.istar[t] = -p.alpha * p.b + (1.0 + p.alpha) * v[2];
      e_lag = (1.0 - xs) * p.b + xs * v[2];
    } else {
      out.istar[t] = v[2];
      out.i[t] = v[2];
      e_lag = v[2];
    }
    out.regime[t] = binding ? 1 : 0;
    out.za[t] = za;
    out.zb[t] = zb;
  }
  return out;
}

namespace detail {

// One OccBin step: a guess-and-verify perfect-foresight solve over a window
// with no shocks after the current period, returning the first-period
// outcome (y, pi, e, iTaylor). The terminal regime is the slack linear rule,
// so a window with no binding spell reproduces the linear decision rules.
struct OccbinStep {
  double y, pi, e, itaylor;
  bool binding;
};

inline OccbinStep occbin_step(const DSGEParams& p, const DecisionRules& dr,
                              double e_lag, double za0, double zb0,
                              double eps_i, int horizon, int max_iter) {
  const double xs = p.xi_star();
  Eigen::VectorXd za(horizon), zb(horizon);
  za[0] = za0;
  zb[0] = zb0;
  for (int t = 1; t < horizon; ++t) {
    za[t] = p.rho_a * za[t - 1];
    zb[t] = p.rho_b * zb[t - 1];
  }

  std::vector<int> regime(horizon, 0), prev;
  for (int iter = 0; iter < max_iter; ++iter) {
    // Backward pass: w_t = k_t + K_t * e_{t-1}, w = (y, pi, e).
    std::vector<Eigen::Vector3d> kvec(horizon), Kvec(horizon);
    Eigen::Vector3d k_next(
        dr.d_ya * p.rho_a * za[horizon - 1] +
            dr.d_yb * p.rho_b * zb[horizon - 1],
        dr.d_pia * p.rho_a * za[horizon - 1] +
            dr.d_pib * p.rho_b * zb[horizon - 1],
        dr.d_ia * p.rho_a * za[horizon - 1] +
            dr.d_ib * p.rho_b * zb[horizon - 1]);
    Eigen::Vector3d K_next(dr.d_yistar, dr.d_pistar, dr.rho_hat);
    for (int t = horizon - 1; t >= 0; --t) {
      bool bind = regime[t] != 0;
      double e_load = bind ? xs : 1.0;
      double e_const = bind ? (1.0 - xs) * p.b : 0.0;
      double eps = t == 0 ? eps_i : 0.0;
      // y  - (k1 + K1 e) + (1/s)(e - k2 - K2 e) + chi_b zb = 0
      // pi - d (k2 + K2 e) - kappa y + chi_a za = 0
      // e - e_load [(1-ri)(ry y + rpi pi) + eps] - e_const = e_load ri e(-1)
      Eigen::Matrix3d M;
      M << 1.0, 0.0, -K_next[0] + (1.0 - K_next[1]) / p.sigma,
          -p.kappa, 1.0, -p.delta * K_next[1],
          -e_load * (1.0 - p.rho_i) * p.r_y,
          -e_load * (1.0 - p.rho_i) * p.r_pi, 1.0;
      Eigen::Vector3d c(k_next[0] + k_next[1] / p.sigma - p.chi_b * zb[t],
                        p.delta * k_next[1] - p.chi_a * za[t],
                        e_load * eps + e_const);
      Eigen::Vector3d d(0.0, 0.0, e_load * p.rho_i);
      Eigen::PartialPivLU<Eigen::Matrix3d> lu(M);
      kvec[t] = lu.solve(c);
      Kvec[t] = lu.solve(d);
      k_next = kvec[t];
      K_next = Kvec[t];
    }
    // Forward pass over the window.
    Eigen::VectorXd itv(horizon);
    double el = e_lag;
    Eigen::Vector3d w0;
    for (int t = 0; t < horizon; ++t) {
      Eigen::Vector3d w = kvec[t] + Kvec[t] * el;
      if (t == 0) w0 = w;
      itv[t] = p.rho_i * el +
               (1.0 - p.rho_i) * (p.r_pi * w[1] + p.r_y * w[0]) +
               (t == 0 ? eps_i : 0.0);
      el = w[2];
    }
    prev = regime;
    for (int t = 0; t < horizon; ++t) regime[t] = itv[t] < p.b ? 1 : 0;
    if (regime == prev) {
      if (regime[horizon - 1])
        throw std::runtime_error("solve_occbin: spell reaches the horizon");
      OccbinStep out;
      out.y = w0[0];
      out.pi = w0[1];
      out.e = w0[2];
      out.itaylor = itv[0];
      out.binding = regime[0] != 0;
      return out;
    }
  }
  throw std::runtime_error("solve_occbin: regime iteration did not converge");
}

}  // namespace detail

// Piecewise-linear (OccBin) stochastic simulation: each period re-solves a
// perfect-foresight path with no future shocks and keeps its first period.
inline SimPath solve_occbin(const DSGEParams& p, const ShockPaths& shocks,
                            const DSGEInit& init = {}, int max_iter = 100,
                            int horizon = 200) {
  p.validate();
  DSGEParams p1 = p;
  p1.lambda_star = 1.0;
  p1.alpha = 0.0;
  DecisionRules dr = solve_linear_re(p1);   // slack-regime solution

  const int T = shocks.T();
  SimPath out;
  out.method = "occbin";
  out.y.resize(T);
  out.pi.resize(T);
  out.i.resize(T);
  out.istar.resize(T);
  out.itaylor.resize(T);
  out.za.resize(T);
  out.zb.resize(T);
  out.regime.resize(T);

  double e_lag = init.e_lag, za = init.za_lag, zb = init.zb_lag;
  for (int t = 0; t < T; ++t) {
    za = p.rho_a * za + shocks.eps_a[t];
    zb = p.rho_b * zb + shocks.eps_b[t];
    detail::OccbinStep st = detail::occbin_step(
        p, dr, e_lag, za, zb, shocks.eps_i[t], horizon, max_iter);
    out.y[t] = st.y;
    out.pi[t] = st.pi;
    out.itaylor[t] = st.itaylor;
    out.za[t] = za;
    out.zb[t] = zb;
    out.regime[t] = st.binding ? 1 : 0;
    if (st.binding) {
      out.i[t] = p.b;
      out.istar[t] = -p.alpha * p.b + (1.0 + p.alpha) * st.itaylor;
    } else {
      out.i[t] = st.itaylor;
      out.istar[t] = st.itaylor;
    }
    e_lag = st.e;
  }
  return out;
}

// Paired-difference impulse response to a monetary shock added at one period.
struct DSGEGirf {
  Eigen::VectorXd y, pi, i, istar;
};

inline DSGEGirf dsge_girf(const DSGEParams& p, const std::string& method,
                          const ShockPaths& base, int shock_period,
                          double mp_shock = -0.25,
                          const DSGEInit& init = {}) {
  ShockPaths alt = base;
  alt.eps_i[shock_period] += mp_shock;
  auto run = [&](const ShockPaths& s) {
    if (method == "prop2") return simulate_prop2(p, s, init);
    if (method == "occbin") return solve_occbin(p, s, init);
    throw std::invalid_argument("dsge_girf: unknown method " + method);
  };
  SimPath b0 = run(base), b1 = run(alt);
  DSGEGirf g;
  g.y = b1.y - b0.y;
  g.pi = b1.pi - b0.pi;
  g.i = b1.i - b0.i;
  g.istar = b1.istar - b0.istar;
  return g;
}

// Exact CKSVAR representation of the Proposition-2 dynamics.
// Observables (y, pi, i) with the shadow rate as the censored variable.
struct CKSVARExport {
  StructuralParams params;
  ModelSpec spec;
  Eigen::Vector2d beta;
};

inline CKSVARExport export_as_cksvar(const DSGEParams& p, double sd_i = 1.0,
                                     double sd_a = 1.0, double sd_b = 1.0) {
  p.validate();
  DSGEParams p1 = p;
  p1.lambda_star = 1.0;
  p1.alpha = 0.0;
  DecisionRules dr = solve_linear_re(p1);
  detail::StackedSystem st = detail::stacked_system(dr, p);

  Eigen::Matrix2d H1inv = st.H1.inverse();
  // z coefficients in the Y1 block: rows ordered (y, pi), shocks (za, zb).
  Eigen::Matrix2d Hz;
  Hz << 0.0, -p.chi_b, -p.chi_a, 0.0;
  Eigen::Matrix2d H3 = Hz * Eigen::DiagonalMatrix<double, 2>(p.rho_a, p.rho_b);
  // Lag loadings on (y(-1), pi(-1), e(-1)).
  Eigen::Matrix<double, 2, 3> P = H1inv * H3 * st.R;

  CKSVARExport ex;
  ex.spec.variant = p.xi_star() == 0.0 ? Variant::KSVAR : Variant::CKSVAR;
  ex.spec.p = 1;
  ex.spec.include_intercept = false;
  ex.spec.constrained_index = 2;   // the policy rate is the censored column

  StructuralParams& s = ex.params;
  s.lambda = p.lambda_star;
  s.alpha = p.alpha;
  s.beta = H1inv * st.H2;
  ex.beta = s.beta;
  s.gamma.resize(2);
  s.gamma << (1.0 - p.rho_i) * p.r_y, (1.0 - p.rho_i) * p.r_pi;
  // X1 = (y(-1), pi(-1)); then the observed i lag, then the latent i* lag.
  s.B1.resize(2, 3);
  s.B1.col(0) = P.col(0);
  s.B1.col(1) = P.col(1);
  s.B1.col(2) = (1.0 - p.lambda_star) * P.col(2);
  s.B12star = p.lambda_star * P.col(2);
  s.B2.resize(3);
  s.B2 << 0.0, 0.0, p.rho_i * (1.0 - p.lambda_star);
  s.B22star.resize(1);
  s.B22star << p.rho_i * p.lambda_star;
  s.A11inv = H1inv * Hz * Eigen::DiagonalMatrix<double, 2>(sd_a, sd_b);
  s.A22starinv = sd_i;
  return ex;
}

// Figure-1 style scenario: demand shocks at two adjacent periods sized so
// that the no-UMP economy stays at the bound for at least min_spell periods.
inline ShockPaths figure1_shocks(const DSGEParams& p, int T = 40,
                                 int t_shock = 6, int min_spell = 4) {
  ShockPaths sp;
  sp.eps_i = Eigen::VectorXd::Zero(T);
  sp.eps_a = Eigen::VectorXd::Zero(T);
  sp.eps_b = Eigen::VectorXd::Zero(T);
  DSGEParams p0 = p;
  p0.lambda_star = 0.0;
  p0.alpha = 0.0;
  auto spell_at = [&](double m) {
    ShockPaths s = sp;
    s.eps_b[t_shock] = m;
    s.eps_b[t_shock + 1] = m;
    SimPath path = simulate_prop2(p0, s);
    int best = 0, run = 0;
    for (int t = 0; t < T; ++t) {
      run = path.regime[t] ? run + 1 : 0;
      best = std::max(best, run);
    }
    return best;
  };
  double lo = 0.0, hi = 1e-4;
  int guard = 0;
  while (spell_at(hi) < min_spell) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 60)
      throw std::runtime_error("figure1_shocks: cannot trigger the bound");
  }
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (spell_at(mid) >= min_spell) hi = mid;
    else lo = mid;
  }
  sp.eps_b[t_shock] = hi;
  sp.eps_b[t_shock + 1] = hi;
  return sp;
}

}  // namespace cksvar
