#include <catch2/catch_amalgamated.hpp>

#include "cksvar/core/mapping.hpp"
#include "cksvar/core/simulate.hpp"
#include "cksvar/estimation/estimation.hpp"

using namespace cksvar;
using Catch::Approx;

namespace {

Layout layout_kp(int k, int p) {
  Layout lay;
  lay.k = k;
  lay.p = p;
  lay.m = 0;
  lay.intercept = true;
  lay.y2 = k - 1;
  lay.y1_cols.clear();
  for (int v = 0; v < k - 1; ++v) lay.y1_cols.push_back(v);
  lay.n1 = 1 + p * (k - 1);
  return lay;
}

// Stable k=2, p=1 reduced form with the latent blocks zeroed (KSVAR DGP).
ReducedFormParams ksvar_point() {
  Layout lay = layout_kp(2, 1);
  ReducedFormParams rf = ReducedFormParams::zeros(lay);
  rf.C11 << 0.2, 0.4;
  rf.C12 << 0.15;
  rf.C21 << 0.1, 0.3;
  rf.C22 << 0.7;
  rf.betatilde << 0.4;
  rf.L << 0.5, 0.0, 0.1, 0.4;
  return rf;
}

StructuralParams cksvar_point() {
  StructuralParams s;
  s.beta = Eigen::VectorXd::Constant(1, 0.5);
  s.gamma = Eigen::RowVectorXd::Constant(1, 0.2);
  s.lambda = 0.5;
  s.alpha = 0.0;
  s.B1.resize(1, 3);
  s.B1 << 0.3, 0.5, -0.1;
  s.B12star.resize(1, 1);
  s.B12star << 0.1;
  s.B2.resize(3);
  s.B2 << 0.4, 0.1, 0.3;
  s.B22star.resize(1);
  s.B22star << 0.1;
  s.A11inv.resize(1, 1);
  s.A11inv << 0.8;
  s.A22starinv = 0.9;
  return s;
}

ModelSpec make_spec(Variant v, int p) {
  ModelSpec spec;
  spec.variant = v;
  spec.p = p;
  return spec;
}

}  // namespace

TEST_CASE("packer roundtrip and free-parameter counts") {
  for (int k : {2, 3}) {
    for (int p : {1, 2}) {
      Layout lay = layout_kp(k, p);
      for (Variant v : {Variant::CKSVAR, Variant::KSVAR, Variant::CSVAR}) {
        ModelSpec spec = make_spec(v, p);
        ParamPacker P = ParamPacker::make(lay, spec);
        // n_free: full CKSVAR count minus the variant zeros.
        int full = (k - 1) * (lay.n1 + 2 * p) + lay.n1 + 2 * p + (k - 1) +
                   k * (k + 1) / 2;
        int expect = full;
        if (v == Variant::KSVAR) expect -= (k - 1) * p + p;
        if (v == Variant::CSVAR) expect -= (k - 1) * p + p + (k - 1);
        REQUIRE(P.n_free() == expect);
        REQUIRE(static_cast<int>(P.names.size()) == P.n_free());

        ReducedFormParams rf = ReducedFormParams::zeros(lay);
        std::mt19937_64 rng = make_rng(7, 11);
        std::normal_distribution<double> N01(0.0, 0.3);
        Eigen::VectorXd th0(P.n_free());
        for (int i = 0; i < th0.size(); ++i) th0[i] = N01(rng);
        rf = P.unpack(th0);
        Eigen::VectorXd th1 = P.pack(rf);
        REQUIRE((th1 - th0).lpNorm<Eigen::Infinity>() < 1e-12);
        // Masked cells stay zero after unpacking.
        if (v == Variant::KSVAR) {
          REQUIRE(rf.C12star.cwiseAbs().maxCoeff() == 0.0);
          REQUIRE(rf.C22star.cwiseAbs().maxCoeff() == 0.0);
        }
        if (v == Variant::CSVAR) {
          REQUIRE(rf.C12.cwiseAbs().maxCoeff() == 0.0);
          REQUIRE(rf.betatilde.cwiseAbs().maxCoeff() == 0.0);
        }
      }
    }
  }
}

TEST_CASE("test degrees of freedom match the closed forms") {
  for (int k : {2, 3}) {
    for (int p : {1, 2, 3}) {
      Layout lay = layout_kp(k, p);
      // IH1: short-rate lags and the kink drop out of the Y1 equations.
      for (Variant v : {Variant::CKSVAR, Variant::KSVAR}) {
        ModelSpec un = make_spec(v, p);
        ModelSpec re = un;
        re.restrictions = ih1_restrictions(lay, v);
        int df = ParamPacker::make(lay, un).n_free() -
                 ParamPacker::make(lay, re).n_free();
        int expect = v == Variant::CKSVAR ? (2 * p + 1) * (k - 1)
                                          : (p + 1) * (k - 1);
        REQUIRE(df == expect);
      }
      // IH2: CKSVAR vs CSVAR.
      int df2 = ParamPacker::make(lay, make_spec(Variant::CKSVAR, p)).n_free() -
                ParamPacker::make(lay, make_spec(Variant::CSVAR, p)).n_free();
      REQUIRE(df2 == p * (k - 1) + p + (k - 1));
      // Lag reduction p -> p-1 under the common conditioning window.
      if (p > 1) {
        Layout lay1 = layout_kp(k, p - 1);
        int dk = ParamPacker::make(lay, make_spec(Variant::KSVAR, p)).n_free() -
                 ParamPacker::make(lay1, make_spec(Variant::KSVAR, p - 1)).n_free();
        REQUIRE(dk == k * k);
        int dc = ParamPacker::make(lay, make_spec(Variant::CKSVAR, p)).n_free() -
                 ParamPacker::make(lay1, make_spec(Variant::CKSVAR, p - 1)).n_free();
        REQUIRE(dc == k * k + k);
      }
    }
  }
}

TEST_CASE("warm start recovers an uncensored VAR") {
  Layout lay = layout_kp(2, 1);
  ReducedFormParams rf = ksvar_point();
  SimConfig cfg;
  cfg.T = 3000;
  cfg.seed = 42;
  cfg.bound = Eigen::VectorXd::Constant(1, -100.0);  // never binds
  SimOutput out = simulate_rf(rf, lay, cfg);
  ModelSpec spec = make_spec(Variant::KSVAR, 1);
  RegressorSet R = build_regressors(out.data, spec);
  ParamPacker P = ParamPacker::make(lay, spec);
  ReducedFormParams w = detail::warm_start(R, P);
  REQUIRE((w.C11 - rf.C11).cwiseAbs().maxCoeff() < 0.1);
  REQUIRE((w.C21 - rf.C21).cwiseAbs().maxCoeff() < 0.1);
  REQUIRE(std::fabs(w.C22(0) - rf.C22(0)) < 0.05);
  Eigen::MatrixXd Om = w.Omega(), Om0 = rf.Omega();
  REQUIRE((Om - Om0).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("KSVAR fit recovers the DGP and beats the truth in sample") {
  Layout lay = layout_kp(2, 1);
  ReducedFormParams rf = ksvar_point();
  SimConfig cfg;
  cfg.T = 600;
  cfg.seed = 3;
  cfg.bound = Eigen::VectorXd::Constant(1, 0.25);
  SimOutput out = simulate_rf(rf, lay, cfg);
  ModelSpec spec = make_spec(Variant::KSVAR, 1);
  RegimePath rp = detect_regimes(out.data, spec);
  REQUIRE(rp.share() > 0.05);
  REQUIRE(rp.share() < 0.6);

  FitOptions opt;
  opt.n_starts = 2;
  opt.seed = 9;
  EstimationResult er = fit(spec, out.data, opt);
  REQUIRE(er.converged);
  REQUIRE(er.T_eff == 599);
  REQUIRE(er.npar == 10);

  double ll_true = loglik_ksvar(rf, out.data, spec);
  REQUIRE(er.loglik >= ll_true - 1e-6);
  REQUIRE(er.aic_per_obs ==
          Approx((2.0 * er.npar - 2.0 * er.loglik) / er.T_eff));

  REQUIRE((er.params.C11 - rf.C11).cwiseAbs().maxCoeff() < 0.2);
  REQUIRE((er.params.Omega() - rf.Omega()).cwiseAbs().maxCoeff() < 0.06);
  REQUIRE(er.cov_ok);
  REQUIRE(er.se.size() == er.theta.size());
  REQUIRE(er.se.minCoeff() > 0.0);
  // betatilde is identified from the ELB rows only, so judge it by its SE.
  int ibt = -1;
  for (size_t i = 0; i < er.param_names.size(); ++i)
    if (er.param_names[i] == "betatilde(0)") ibt = static_cast<int>(i);
  REQUIRE(ibt >= 0);
  REQUIRE(std::fabs(er.theta[ibt] - rf.betatilde(0)) < 4.0 * er.se[ibt]);

  // Determinism: same options give the same estimate.
  EstimationResult er2 = fit(spec, out.data, opt);
  REQUIRE((er2.theta - er.theta).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("lr_test validates nesting and clips at zero") {
  EstimationResult a, b;
  a.npar = 10;
  b.npar = 10;
  a.T_eff = b.T_eff = 100;
  REQUIRE_THROWS_AS(lr_test(a, b), std::invalid_argument);
  a.npar = 8;
  b.T_eff = 99;
  REQUIRE_THROWS_AS(lr_test(a, b), std::invalid_argument);
  b.T_eff = 100;
  a.loglik = -50.0;
  b.loglik = -49.0;
  TestResult tr = lr_test(a, b);
  REQUIRE(tr.df == 2);
  REQUIRE(tr.lr == Approx(2.0));
  REQUIRE(tr.pvalue == Approx(chi2_pvalue(2.0, 2)));
  // Restricted above unrestricted: LR clips to zero.
  a.loglik = -48.9;
  tr = lr_test(a, b);
  REQUIRE(tr.lr == 0.0);
  REQUIRE(tr.pvalue == 1.0);
}

TEST_CASE("IH1 test on a KSVAR null has a moderate p-value") {
  // DGP with no short-rate feedback into Y1: C12 = 0, betatilde = 0.
  Layout lay = layout_kp(2, 1);
  ReducedFormParams rf = ksvar_point();
  rf.C12.setZero();
  rf.betatilde.setZero();
  SimConfig cfg;
  cfg.T = 500;
  cfg.seed = 17;
  cfg.bound = Eigen::VectorXd::Constant(1, 0.25);
  SimOutput out = simulate_rf(rf, lay, cfg);

  FitOptions opt;
  opt.n_starts = 1;
  opt.seed = 5;
  opt.compute_cov = false;
  TestResult tr = test_ih1(out.data, 1, Variant::KSVAR, opt);
  REQUIRE(tr.df == 2);
  REQUIRE(tr.lr >= 0.0);
  REQUIRE(tr.pvalue > 0.01);  // the null is true
  REQUIRE(tr.unrestricted.loglik >= tr.restricted.loglik - 1e-6);
}

TEST_CASE("exclusion test restricts the intended cells") {
  Layout lay = layout_kp(3, 2);
  ModelSpec un = make_spec(Variant::KSVAR, 2);
  ModelSpec re = un;
  // Exclude Y1 variable 1 from equation 0 and the shadow-rate equation.
  int c0 = 1;
  for (int j = 0; j < 2; ++j) {
    int col = c0 + j * 2 + 1;
    re.restrictions.push_back({"C11", 0, col});
    re.restrictions.push_back({"C21", 0, col});
  }
  int df = ParamPacker::make(lay, un).n_free() -
           ParamPacker::make(lay, re).n_free();
  REQUIRE(df == 4);  // p * |targets|
}

TEST_CASE("CKSVAR fit improves on the warm start (smoke)") {
  StructuralParams s = cksvar_point();
  ModelSpec spec = make_spec(Variant::CKSVAR, 1);
  SimConfig cfg;
  cfg.T = 250;
  cfg.seed = 11;
  cfg.bound = Eigen::VectorXd::Constant(1, 0.45);
  SimOutput out = simulate(s, spec, cfg);
  RegimePath rp = detect_regimes(out.data, spec);
  REQUIRE(rp.share() > 0.05);

  FitOptions opt;
  opt.n_starts = 1;
  opt.seed = 2;
  opt.n_particles = 128;
  opt.n_particles_final = 1024;
  opt.plugin_iters = 1;
  opt.nm_max_iter = 60;
  opt.bfgs_max_iter = 40;
  opt.compute_cov = false;
  EstimationResult er = fit(spec, out.data, opt);
  REQUIRE(std::isfinite(er.loglik));

  Layout lay = layout_kp(2, 1);
  ReducedFormParams rf_true = reduced_from_structural(s, lay);
  LikelihoodConfig lc;
  lc.n_particles = 1024;
  lc.seed = 2;
  lc.track_latent = false;
  double ll_true = loglik_cksvar(rf_true, out.data, spec, lc).first;
  REQUIRE(er.loglik >= ll_true - 1.0);
}

TEST_CASE("select_lag prefers the true order") {
  Layout lay = layout_kp(2, 1);
  ReducedFormParams rf = ksvar_point();
  SimConfig cfg;
  cfg.T = 500;
  cfg.seed = 23;
  cfg.bound = Eigen::VectorXd::Constant(1, 0.25);
  SimOutput out = simulate_rf(rf, lay, cfg);

  FitOptions opt;
  opt.n_starts = 1;
  opt.seed = 4;
  LagSelection sel = select_lag(out.data, 3, Variant::KSVAR, opt);
  REQUIRE(sel.table.size() == 3);
  // All fits share the conditioning window.
  for (const auto& row : sel.table) REQUIRE(std::isfinite(row.loglik));
  REQUIRE(std::isfinite(sel.table[0].seq_pvalue));
  REQUIRE(std::isfinite(sel.table[1].seq_pvalue));
  // Higher orders nest lower ones on the common window.
  REQUIRE(sel.table[1].loglik >= sel.table[0].loglik - 1e-6);
  REQUIRE(sel.table[2].loglik >= sel.table[1].loglik - 1e-6);
  REQUIRE(sel.p_aic == 1);
  REQUIRE(sel.p_seq == 1);
}
