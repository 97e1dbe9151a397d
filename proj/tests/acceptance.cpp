// Acceptance harness: one numbered criterion per invocation, a single
// PASS/FAIL/SKIP line each, exit 0 on PASS or SKIP. Tolerances are pinned
// here and are not configurable.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "cksvar/core/mapping.hpp"
#include "cksvar/core/simulate.hpp"
#include "cksvar/dsge/dsge.hpp"
#include "cksvar/estimation/estimation.hpp"
#include "cksvar/identification/identification.hpp"
#include "cksvar/ingest/ingest.hpp"
#include "cksvar/irf/irf.hpp"
#include "cksvar/math/stats.hpp"

using namespace cksvar;

namespace {

struct Outcome {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

Layout layout_k2p1() {
  Layout lay;
  lay.k = 2;
  lay.p = 1;
  lay.m = 0;
  lay.intercept = true;
  lay.y2 = 1;
  lay.y1_cols = {0};
  lay.n1 = 2;
  return lay;
}

ModelSpec spec_of(Variant v, int p) {
  ModelSpec s;
  s.variant = v;
  s.p = p;
  return s;
}

double mvn2_logpdf(const Eigen::Vector2d& u, const Eigen::Matrix2d& S) {
  double det = S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
  double quad = (u[0] * u[0] * S(1, 1) - 2.0 * u[0] * u[1] * S(0, 1) +
                 u[1] * u[1] * S(0, 0)) /
                det;
  return -0.5 * (2.0 * log2pi + std::log(det) + quad);
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p0 / pp;
      if (std::fabs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

// --- 1: chi-squared inference on the published LR statistics ---------------
Outcome criterion1() {
  struct Case { double lr; int df; double lo, hi; };
  const Case cases[] = {{25.63, 15, 0.041, 0.043},
                        {4.671, 6, 0.585, 0.590},
                        {8.981, 4, 0.061, 0.063}};
  Outcome o;
  o.pass = true;
  char buf[96];
  for (const auto& c : cases) {
    double p = chi2_pvalue(c.lr, c.df);
    std::snprintf(buf, sizeof(buf), "p(%.3f,%d)=%.5f ", c.lr, c.df, p);
    o.detail += buf;
    if (!(p >= c.lo && p <= c.hi)) o.pass = false;
  }
  return o;
}

// --- 2: fully effective unconventional policy makes the bound irrelevant ---
Outcome criterion2() {
  DSGEParams p;           // baseline calibration
  p.lambda_star = 1.0;
  p.alpha = 0.0;
  ShockPaths s = figure1_shocks(p, 40);
  s.eps_b *= 2.0;         // a material spell, not a grazing one
  DSGEParams free_p = p;
  free_p.b = -1e6;

  double worst = 0.0;
  int spell = 0;
  for (int method = 0; method < 2; ++method) {
    SimPath elb = method == 0 ? simulate_prop2(p, s) : solve_occbin(p, s);
    SimPath noelb =
        method == 0 ? simulate_prop2(free_p, s) : solve_occbin(free_p, s);
    worst = std::max(worst, (elb.y - noelb.y).cwiseAbs().maxCoeff());
    worst = std::max(worst, (elb.pi - noelb.pi).cwiseAbs().maxCoeff());
    spell += elb.regime.sum();
  }
  Outcome o;
  o.pass = worst < 1e-10 && spell >= 2;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max|(y,pi)_ELB-(y,pi)_noELB|=%.3e, %d bound periods",
                worst, spell);
  o.detail = buf;
  return o;
}

// --- 3: VAR(1) representation solves the model at many calibrations --------
Outcome criterion3() {
  auto check = [](const DSGEParams& p) {
    DecisionRules dr = solve_linear_re(p);
    LongRateRules lr = long_rate_rules(dr, p, 0.975, 1.01);
    return std::max(dr.residual, lr.residual);
  };
  double worst = check(DSGEParams{});
  auto rng = make_rng(42, 0xacc3ULL);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int solved = 0, tried = 0;
  while (solved < 100 && tried < 2000) {
    ++tried;
    DSGEParams p;
    p.sigma = 0.5 + 4.5 * U(rng);
    p.delta = 0.9 + 0.099 * U(rng);
    p.kappa = 0.05 + 0.95 * U(rng);
    p.rho_i = 0.9 * U(rng);
    p.r_pi = 1.1 + 1.9 * U(rng);
    p.r_y = U(rng);
    p.rho_a = 0.95 * U(rng);
    p.rho_b = 0.95 * U(rng);
    p.chi_a = 0.1 + U(rng);
    p.chi_b = p.rho_b / p.sigma;
    try {
      worst = std::max(worst, check(p));
    } catch (const std::domain_error&) {
      continue;   // indeterminate or explosive draw; not a determinate case
    }
    ++solved;
  }
  Outcome o;
  o.pass = solved == 100 && worst < 1e-8;
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "max residual %.3e over baseline + %d random calibrations",
                worst, solved);
  o.detail = buf;
  return o;
}

// --- 4: (lambda*, alpha) matter only through xi* ----------------------------
Outcome criterion4() {
  DSGEParams pa;
  pa.lambda_star = 1.0;
  pa.alpha = 0.0;
  DSGEParams pb = pa;
  pb.lambda_star = 0.5;
  pb.alpha = 1.0;

  const int T = 200;
  double worst = 0.0;
  int spell = 0;
  for (int seed = 0; seed < 10; ++seed) {
    ShockPaths s = figure1_shocks(pa, T);
    s.eps_b *= 2.0;
    auto rng = make_rng(seed, 0x1e44aULL);
    std::normal_distribution<double> N01(0.0, 1.0);
    for (int t = 0; t < T; ++t) {
      s.eps_i[t] += 0.001 * N01(rng);
      s.eps_a[t] += 0.002 * N01(rng);
      s.eps_b[t] += 0.002 * N01(rng);
    }
    SimPath a = simulate_prop2(pa, s);
    SimPath b = simulate_prop2(pb, s);
    worst = std::max(worst, (a.y - b.y).cwiseAbs().maxCoeff());
    worst = std::max(worst, (a.pi - b.pi).cwiseAbs().maxCoeff());
    worst = std::max(worst, (a.i - b.i).cwiseAbs().maxCoeff());
    worst = std::max(worst, (a.itaylor - b.itaylor).cwiseAbs().maxCoeff());
    if ((a.regime - b.regime).cwiseAbs().sum() != 0) worst = 1.0;
    spell += a.regime.sum();
  }
  Outcome o;
  o.pass = worst < 1e-10 && spell > 0;
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "max|(1,0)-(0.5,1)| = %.3e over 10 seeds, %d bound periods",
                worst, spell);
  o.detail = buf;
  return o;
}

// --- 5: SMC likelihood against deterministic quadrature --------------------
Outcome criterion5() {
  StructuralParams st;
  st.beta = Eigen::VectorXd::Constant(1, 0.5);
  st.gamma = Eigen::RowVectorXd::Constant(1, 0.2);
  st.lambda = 0.5;
  st.alpha = 0.4;
  st.B1.resize(1, 3);
  st.B1 << 0.3, 0.5, -0.1;
  st.B12star.resize(1, 1);
  st.B12star << 0.1;
  st.B2.resize(3);
  st.B2 << 0.4, 0.1, 0.3;
  st.B22star.resize(1);
  st.B22star << 0.1;
  st.A11inv.resize(1, 1);
  st.A11inv << 0.8;
  st.A22starinv = 0.9;

  Layout lay = layout_k2p1();
  ReducedFormParams rf = reduced_from_structural(st, lay);
  ModelSpec spec = spec_of(Variant::CKSVAR, 1);
  SimConfig scfg;
  scfg.T = 60;
  scfg.seed = 8;
  scfg.bound = Eigen::VectorXd::Constant(1, -1e9);
  SimOutput out = simulate(st, spec, scfg);

  // Impose a single length-1 spell in the middle of the sample.
  const int ts = 30;
  Dataset d = out.data;
  d.bound.setConstant(-1e9);
  d.bound[ts] = d.values(ts, 1) + 0.4;
  d.values(ts, 1) = d.bound[ts];

  LikelihoodConfig lcfg;
  lcfg.n_particles = 100000;
  lcfg.seed = 2;
  double ll = loglik_cksvar(rf, d, spec, lcfg).first;

  Eigen::Matrix2d Om = rf.Omega();
  auto mean_at = [&](int t, double wlag, Eigen::Vector2d& m) {
    Eigen::Vector3d x(1.0, d.values(t - 1, 0), d.values(t - 1, 1));
    m[0] = rf.C11(0, 0) * x[0] + rf.C11(0, 1) * x[1] + rf.C12(0, 0) * x[2] +
           rf.C12star(0, 0) * wlag;
    m[1] = rf.C21[0] * x[0] + rf.C21[1] * x[1] + rf.C22[0] * x[2] +
           rf.C22star[0] * wlag;
  };
  double ll_ref = 0.0;
  for (int t = 1; t < scfg.T; ++t) {
    if (t == ts || t == ts + 1) continue;
    Eigen::Vector2d m, u;
    mean_at(t, 0.0, m);
    u << d.values(t, 0) - m[0], d.values(t, 1) - m[1];
    ll_ref += mvn2_logpdf(u, Om);
  }
  Eigen::Vector2d ms;
  mean_at(ts, 0.0, ms);
  double c2 = d.bound[ts] - ms[1];
  std::vector<double> xs, ws;
  gauss_legendre(2000, xs, ws);
  double lo = c2 - 12.0 * std::sqrt(Om(1, 1));
  double integral = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double u2 = 0.5 * (c2 - lo) * xs[i] + 0.5 * (c2 + lo);
    Eigen::Vector2d u;
    u[0] = d.values(ts, 0) - ms[0] + rf.betatilde[0] * (u2 - c2);
    u[1] = u2;
    double f1 = std::exp(mvn2_logpdf(u, Om));
    Eigen::Vector2d m2, u2v;
    mean_at(ts + 1, u2 - c2, m2);
    u2v << d.values(ts + 1, 0) - m2[0], d.values(ts + 1, 1) - m2[1];
    integral += ws[i] * 0.5 * (c2 - lo) * f1 * std::exp(mvn2_logpdf(u2v, Om));
  }
  ll_ref += std::log(integral);

  double rel = std::fabs(ll - ll_ref) / std::fabs(ll_ref);
  Outcome o;
  o.pass = rel < 1e-3;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "SMC %.8f vs quadrature %.8f, rel err %.2e",
                ll, ll_ref, rel);
  o.detail = buf;
  return o;
}

// --- 6: parameter recovery and IH2 size control -----------------------------
Outcome criterion6() {
  Layout lay = layout_k2p1();

  ReducedFormParams truth = ReducedFormParams::zeros(lay);
  truth.C11 << 0.2, 0.4;
  truth.C12 << 0.15;
  truth.C21 << 0.1, 0.3;
  truth.C22 << 0.7;
  truth.betatilde << 0.4;
  truth.L << 0.5, 0.0, 0.1, 0.4;

  ModelSpec kspec = spec_of(Variant::KSVAR, 1);
  ParamPacker kp = ParamPacker::make(lay, kspec);
  Eigen::VectorXd theta0 = kp.pack(truth);

  FitOptions opt;
  opt.n_starts = 1;
  opt.n_particles = 128;
  opt.n_particles_final = 512;

  int within = 0, total = 0;
  for (int rep = 0; rep < 50; ++rep) {
    SimConfig cfg;
    cfg.T = 500;
    cfg.seed = 1000 + rep;
    cfg.bound = Eigen::VectorXd::Constant(1, 0.3);
    SimOutput out = simulate_rf(truth, lay, cfg);
    opt.seed = rep;
    EstimationResult er = fit(kspec, out.data, opt);
    if (!er.cov_ok) continue;
    for (int i = 0; i < er.theta.size(); ++i) {
      ++total;
      if (std::fabs(er.theta[i] - theta0[i]) <= 3.0 * er.se[i]) ++within;
    }
  }
  double share = total > 0 ? double(within) / total : 0.0;

  // CSVAR null: dynamics identical across regimes; IH2 should rarely reject.
  ReducedFormParams cs = ReducedFormParams::zeros(lay);
  cs.C11 << 0.2, 0.4;
  cs.C12star << 0.15;
  cs.C21 << 0.1, 0.3;
  cs.C22star << 0.7;
  cs.L << 0.5, 0.0, 0.1, 0.4;
  opt.compute_cov = false;
  // The restricted (CSVAR) fit needs a few starts; a single one occasionally
  // stalls short of the optimum and inflates the LR statistic.
  opt.n_starts = 3;
  int reject = 0;
  for (int rep = 0; rep < 50; ++rep) {
    SimConfig cfg;
    cfg.T = 500;
    cfg.seed = 7000 + rep;
    // The latent level process is centered near 0.33; a lower bound keeps
    // the binding share moderate (~13%) instead of dominant.
    cfg.bound = Eigen::VectorXd::Constant(1, -0.35);
    SimOutput out = simulate_rf(cs, lay, cfg);
    opt.seed = rep;
    TestResult tr = test_ih2(out.data, 1, opt);
    if (tr.pvalue < 0.05) ++reject;
  }

  Outcome o;
  o.pass = share >= 0.90 && reject <= 4;
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "%.1f%% of params within 3 SE (need >=90%%); IH2 size %d/50 "
                "rejections at 5%% (need <=4)",
                100.0 * share, reject);
  o.detail = buf;
  return o;
}

// --- 7: end-to-end xi* recovery through the full pipeline -------------------
Outcome criterion7() {
  const double grid = 0.005;
  int hits = 0;
  int by_xi[3] = {0, 0, 0};
  for (int rep = 0; rep < 50; ++rep) {
    double xi_true = (rep % 3) * 0.5;   // cycles 0, 0.5, 1
    DSGEParams p;
    p.lambda_star = xi_true;
    p.alpha = 0.0;
    p.b = -0.002;
    CKSVARExport ex = export_as_cksvar(p, 0.001, 0.004, 0.004);
    ModelSpec spec = ex.spec;
    spec.variant = Variant::CKSVAR;   // agnostic estimation at every xi*

    SimConfig cfg;
    cfg.T = 2000;
    cfg.seed = 500 + rep;
    cfg.bound = Eigen::VectorXd::Constant(1, p.b);
    SimOutput out = simulate(ex.params, spec, cfg);

    // Two-stage fit: an exact KSVAR solution seeds the simulated-ML CKSVAR
    // optimization, which is far more reliable than a cold start here.
    ModelSpec kspec = spec;
    kspec.variant = Variant::KSVAR;
    FitOptions kopt;
    kopt.n_starts = 2;
    kopt.seed = rep;
    kopt.compute_cov = false;
    EstimationResult ks = fit(kspec, out.data, kopt);

    Layout lay = Layout::make(out.data, spec);
    FitOptions opt;
    opt.n_starts = 1;
    opt.seed = rep;
    opt.n_particles = 96;
    opt.n_particles_final = 256;
    opt.compute_cov = false;
    opt.theta0 = ParamPacker::make(lay, spec).pack(ks.params);
    EstimationResult er = fit(spec, out.data, opt);
    IdentifiedSet set = solve_identified_set(er.params, grid);
    double dist = 1e9;
    for (const auto& pt : set.points)
      dist = std::min(dist, std::fabs(pt.xi - xi_true));
    if (dist <= grid + 1e-12) {
      ++hits;
      ++by_xi[rep % 3];
    }
  }
  Outcome o;
  o.pass = hits >= 45;
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "true xi* within one grid step of the set in %d/50 (need >=45);"
                " by xi* 0/0.5/1: %d/17 %d/17 %d/16",
                hits, by_xi[0], by_xi[1], by_xi[2]);
  o.detail = buf;
  return o;
}

// --- 8: GIRF equals the companion-form IRF when the bound never binds ------
Outcome criterion8() {
  StructuralParams st;
  st.beta = Eigen::VectorXd::Constant(1, 0.5);
  st.gamma = Eigen::RowVectorXd::Constant(1, 0.2);
  st.lambda = 0.5;
  st.alpha = 0.0;
  st.B1.resize(1, 3);
  st.B1 << 0.3, 0.5, -0.1;
  st.B12star.resize(1, 1);
  st.B12star << 0.1;
  st.B2.resize(3);
  st.B2 << 0.4, 0.1, 0.3;
  st.B22star.resize(1);
  st.B22star << 0.1;
  st.A11inv.resize(1, 1);
  st.A11inv << 0.8;
  st.A22starinv = 0.9;

  Layout lay = layout_k2p1();
  ReducedFormParams rf = reduced_from_structural(st, lay);
  GirfConfig cfg;
  cfg.horizon = 12;
  cfg.n_rep = 1000;
  cfg.shock = -0.25;
  cfg.seed = 7;
  cfg.bound = Eigen::VectorXd::Constant(1, -1e9);
  cfg.init = Eigen::MatrixXd::Constant(1, 2, 0.4);   // interior state
  GirfResult r = girf(st, spec_of(Variant::CKSVAR, 1), cfg);

  double m = 1.0 - (st.gamma * st.beta)(0);
  Eigen::VectorXd state(2);
  state << st.beta(0) / m * cfg.shock, cfg.shock / m;
  Eigen::MatrixXd F = companion_matrix(linear_dynamics(rf, lay));
  double worst = 0.0;
  bool pass = true;
  for (int h = 0; h <= 12; ++h) {
    for (int j = 0; j < 2; ++j) {
      double gap = std::fabs(r.mean(h, j) - state[j]);
      worst = std::max(worst, gap);
      if (gap > 3.0 * r.se(h, j) + 1e-8) pass = false;
    }
    state = F * state;
  }
  Outcome o;
  o.pass = pass;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max |GIRF - companion IRF| = %.3e, h 0..12",
                worst);
  o.detail = buf;
  return o;
}

// --- 9: real-data reproduction (best effort, data-vintage caveat) ----------
Outcome criterion9() {
  const char* us = std::getenv("CKSVAR_US_DATA");
  const char* jp = std::getenv("CKSVAR_JP_DATA");
  Outcome o;
  if (!us || !jp) {
    o.pass = true;
    o.skipped = true;
    o.detail =
        "set CKSVAR_US_DATA and CKSVAR_JP_DATA to dataset CSVs to enable; "
        "results depend on the data vintage";
    return o;
  }
  std::printf("note: real-data comparisons depend on the data vintage; "
              "divergence here does not by itself indicate an implementation "
              "error.\n");
  Dataset dus = read_dataset_csv(us, 0);
  FitOptions opt;
  opt.n_starts = 4;
  opt.seed = 1;
  EstimationResult er = fit(spec_of(Variant::KSVAR, 3), dus, opt);
  double rel = std::fabs(er.loglik - (-232.9)) / 232.9;
  TestResult ih1 = test_ih1(dus, 3, Variant::KSVAR, opt);

  const char* nexog_env = std::getenv("CKSVAR_JP_NEXOG");
  int nexog = nexog_env ? std::atoi(nexog_env) : 1;
  Dataset djp = read_dataset_csv(jp, nexog);
  TestResult ih2 = test_ih2(djp, 2, opt);

  o.pass = rel <= 0.02 && ih1.pvalue < 0.01 && ih2.pvalue < 0.01;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "US KSVAR(3) loglik %.2f (target -232.9 +/-2%%), IH1 p=%.4f, "
                "Japan IH2 p=%.4f",
                er.loglik, ih1.pvalue, ih2.pvalue);
  o.detail = buf;
  return o;
}

// --- 10: sign restrictions never widen the xi-projection -------------------
Outcome criterion10() {
  Layout lay = layout_k2p1();
  auto rng = make_rng(3, 0x51e7ULL);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int ok = 0, runs = 0;
  while (runs < 50) {
    StructuralParams st;
    st.beta = Eigen::VectorXd::Constant(1, 0.2 + 0.6 * U(rng));
    st.gamma = Eigen::RowVectorXd::Constant(1, 0.1 + 0.3 * U(rng));
    st.lambda = U(rng);
    st.alpha = 0.0;
    st.B1.resize(1, 3);
    st.B1 << 0.2 * U(rng), 0.8 * U(rng), 0.4 * (U(rng) - 0.5);
    st.B12star.resize(1, 1);
    st.B12star << 0.2 * (U(rng) - 0.5);
    st.B2.resize(3);
    st.B2 << 0.4 * U(rng), 0.4 * (U(rng) - 0.5), 0.8 * U(rng);
    st.B22star.resize(1);
    st.B22star << 0.2 * (U(rng) - 0.5);
    st.A11inv.resize(1, 1);
    st.A11inv << 0.5 + U(rng);
    st.A22starinv = 0.5 + U(rng);

    ReducedFormParams rf;
    try {
      rf = reduced_from_structural(st, lay);
    } catch (const std::exception&) {
      continue;
    }
    if (spectral_radius(companion_matrix(linear_dynamics(rf, lay))) > 0.95)
      continue;
    ++runs;

    IdentifiedSet set = solve_identified_set(rf, 0.01);
    if (set.points.empty()) continue;

    GirfConfig cfg;
    cfg.horizon = 4;
    cfg.n_rep = 50;
    cfg.shock = -0.25;
    cfg.seed = runs;
    cfg.bound = Eigen::VectorXd::Constant(1, -0.1);
    // Expansionary shock: rate down on impact, activity up over h=0..2.
    std::vector<SignRestriction> restr = {{1, 0, 0, -1, 0.0},
                                          {0, 0, 2, +1, 0.0}};
    SignRestrictionResult res =
        apply_sign_restrictions(set, rf, lay, restr, cfg);
    double lo0 = set.xi_min, hi0 = set.xi_max;
    if (res.kept.empty()) {
      ++ok;   // empty set: shrinkage holds trivially
      continue;
    }
    double lo1 = res.kept.front().xi, hi1 = res.kept.front().xi;
    for (const auto& pt : res.kept) {
      lo1 = std::min(lo1, pt.xi);
      hi1 = std::max(hi1, pt.xi);
    }
    if (lo1 >= lo0 - 1e-12 && hi1 <= hi0 + 1e-12) ++ok;
  }
  Outcome o;
  o.pass = ok == 50;
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "xi-projection shrank or was preserved in %d/50 runs", ok);
  o.detail = buf;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion 1-10>\n", argv[0]);
    return 2;
  }
  int n = std::atoi(argv[1]);
  Outcome o;
  switch (n) {
    case 1: o = criterion1(); break;
    case 2: o = criterion2(); break;
    case 3: o = criterion3(); break;
    case 4: o = criterion4(); break;
    case 5: o = criterion5(); break;
    case 6: o = criterion6(); break;
    case 7: o = criterion7(); break;
    case 8: o = criterion8(); break;
    case 9: o = criterion9(); break;
    case 10: o = criterion10(); break;
    default:
      std::fprintf(stderr, "usage: %s <criterion 1-10>\n", argv[0]);
      return 2;
  }
  const char* tag = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
  std::printf("%s criterion %d: %s\n", tag, n, o.detail.c_str());
  return o.pass ? 0 : 1;
}
