// Maximum-likelihood fitting, LR tests, and lag selection.
#pragma once
#include "cksvar/estimation/packer.hpp"
#include "cksvar/likelihood/likelihood.hpp"
#include "cksvar/math/optim.hpp"
#include "cksvar/math/rng.hpp"

namespace cksvar {

struct FitOptions {
  int n_starts = 10;
  std::uint64_t seed = 0;
  int n_particles = 512;         // SMC size during optimization
  int n_particles_final = 4096;  // SMC size for the reported loglik
  int plugin_iters = 2;          // plug-in exact-ML refinement rounds
  int nm_max_iter = 150;
  int bfgs_max_iter = 120;
  bool compute_cov = true;
  double regime_tol = 1e-6;
  int t0 = -1;                   // conditioning row override (lag sweeps)
  double start_scale = 0.2;      // random-start perturbation size
  Eigen::VectorXd theta0;        // optional packed warm start override
};

struct EstimationResult {
  ModelSpec spec;
  ReducedFormParams params;
  double loglik = 0.0;
  int npar = 0;
  int T_eff = 0;
  double aic_per_obs = 0.0;
  Eigen::VectorXd theta;
  std::vector<std::string> param_names;
  Eigen::MatrixXd cov;
  Eigen::VectorXd se;
  bool cov_ok = false;
  bool converged = false;
  int best_start = -1;
  int n_evals = 0;
};

struct TestResult {
  double lr = 0.0;
  int df = 0;
  double pvalue = 1.0;
  double loglik_restricted = 0.0;
  double loglik_unrestricted = 0.0;
  bool clipped = false;
  EstimationResult restricted, unrestricted;
};

namespace detail {

// Regime-split least squares warm start: the shadow-rate equation is fitted on
// the above-bound rows (where Ybar is observed), the Y1 equations on all rows.
inline ReducedFormParams warm_start(const RegressorSet& R,
                                    const ParamPacker& P) {
  const auto& lay = R.lay;
  const int k1 = lay.k - 1;
  const int n = R.rows();
  const int nx = lay.n1 + lay.p;
  Eigen::MatrixXd X(n, nx);
  X << R.X1, R.X2;
  ReducedFormParams rf = ReducedFormParams::zeros(lay);

  // Y1 equations on all rows.
  Eigen::MatrixXd XtX = X.transpose() * X +
                        1e-8 * Eigen::MatrixXd::Identity(nx, nx);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(XtX);
  Eigen::MatrixXd coef1 = ldlt.solve(X.transpose() * R.y1);  // nx x k1
  rf.C11 = coef1.topRows(lay.n1).transpose();
  rf.C12 = coef1.bottomRows(lay.p).transpose();

  // Shadow-rate equation on the above-bound rows.
  std::vector<int> rows0;
  for (int i = 0; i < n; ++i)
    if (!R.D[i]) rows0.push_back(i);
  if (static_cast<int>(rows0.size()) > nx + 2) {
    Eigen::MatrixXd X0(rows0.size(), nx);
    Eigen::VectorXd y0(rows0.size());
    for (size_t r = 0; r < rows0.size(); ++r) {
      X0.row(r) = X.row(rows0[r]);
      y0[r] = R.y2[rows0[r]];
    }
    Eigen::MatrixXd XtX0 = X0.transpose() * X0 +
                           1e-8 * Eigen::MatrixXd::Identity(nx, nx);
    Eigen::VectorXd coef2 = XtX0.ldlt().solve(X0.transpose() * y0);
    rf.C21 = coef2.head(lay.n1).transpose();
    rf.C22 = coef2.tail(lay.p).transpose();

    // Residual covariance from the above-bound rows.
    Eigen::MatrixXd U(rows0.size(), lay.k);
    for (size_t r = 0; r < rows0.size(); ++r) {
      int i = rows0[r];
      U.row(r).head(k1) =
          R.y1.row(i) - (rf.C11 * R.X1.row(i).transpose() +
                         rf.C12 * R.X2.row(i).transpose()).transpose();
      U(r, k1) = R.y2[i] - (rf.C21 * R.X1.row(i).transpose())(0) -
                 (rf.C22 * R.X2.row(i).transpose())(0);
    }
    Eigen::MatrixXd Om = U.transpose() * U / static_cast<double>(rows0.size());
    Om += 1e-6 * Eigen::MatrixXd::Identity(lay.k, lay.k);
    rf.L = Eigen::LLT<Eigen::MatrixXd>(Om).matrixL();
  }

  // Respect the masks: zero out the fixed cells.
  Eigen::VectorXd th = P.pack(rf);
  return P.unpack(th);
}

}  // namespace detail

inline EstimationResult fit(const ModelSpec& spec, const Dataset& data,
                            const FitOptions& opt = {}) {
  data.validate();
  spec.validate(data.k());
  int t0 = opt.t0 >= 0 ? opt.t0 : std::max(spec.p, data.est_start);
  RegressorSet R = build_regressors(data, spec, t0, opt.regime_tol);
  const Layout lay = R.lay;
  ParamPacker P = ParamPacker::make(lay, spec);

  bool has_latent = R.Wknown.minCoeff() == 0;
  bool star_free = P.f_C12star.sum() > 0 || P.f_C22star.sum() > 0;
  bool needs_smc = has_latent && star_free;

  LikelihoodConfig lcfg;
  lcfg.n_particles = opt.n_particles;
  lcfg.seed = opt.seed;  // common random numbers across evaluations
  lcfg.track_latent = false;
  lcfg.regime_tol = opt.regime_tol;

  int evals = 0;
  auto neg_exact = [&](const Eigen::VectorXd& th) {
    ++evals;
    ReducedFormParams rf = P.unpack(th);
    double ll;
    try {
      ll = loglik_ksvar(rf, data, spec, opt.regime_tol, &R);
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
    return -ll;
  };
  auto neg_smc = [&](const Eigen::VectorXd& th) {
    ++evals;
    ReducedFormParams rf = P.unpack(th);
    double ll;
    try {
      ll = loglik_cksvar(rf, data, spec, lcfg, &R).first;
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
    return -ll;
  };
  ObjFn objective = needs_smc ? ObjFn(neg_smc) : ObjFn(neg_exact);

  Eigen::VectorXd th_warm;
  if (opt.theta0.size() == P.n_free()) {
    th_warm = opt.theta0;
  } else if (opt.theta0.size() > 0) {
    throw std::invalid_argument("fit: theta0 has the wrong length");
  } else {
    th_warm = P.pack(detail::warm_start(R, P));
  }

  // Plug-in refinement: alternate smoothing the latent slots and maximizing
  // the exact filled likelihood. Cheap and lands close to the SMC optimum.
  auto plugin_polish = [&](Eigen::VectorXd th) {
    RegressorSet Rfill = R;
    for (int it = 0; it < opt.plugin_iters; ++it) {
      ReducedFormParams rf = P.unpack(th);
      LikelihoodConfig scfg = lcfg;
      scfg.n_particles = std::min(opt.n_particles, 512);
      scfg.track_latent = true;
      Eigen::VectorXd ybar;
      try {
        ybar = loglik_cksvar(rf, data, spec, scfg, &R).second.ybar;
      } catch (const std::exception&) {
        return th;
      }
      Rfill.Wstar = R.Wstar;
      fill_latent_slots(Rfill, data, ybar);
      auto neg_fill = [&](const Eigen::VectorXd& t) {
        ++evals;
        try {
          return -exact_loglik_filled(P.unpack(t), Rfill);
        } catch (const std::exception&) {
          return std::numeric_limits<double>::infinity();
        }
      };
      auto res = bfgs(neg_fill, th, opt.bfgs_max_iter);
      if (std::isfinite(res.f)) th = res.x;
    }
    return th;
  };

  auto run_start = [&](Eigen::VectorXd th0) {
    if (needs_smc) th0 = plugin_polish(th0);
    auto nm = nelder_mead(objective, th0, 0.02, opt.nm_max_iter);
    auto qb = bfgs(objective, nm.x, opt.bfgs_max_iter);
    return qb.f <= nm.f ? qb : nm;
  };

  OptimResult best;
  int best_start = -1;
  auto rng = make_rng(opt.seed, 0x57a27ULL);
  std::normal_distribution<double> N01(0.0, 1.0);
  for (int s = 0; s < std::max(1, opt.n_starts); ++s) {
    Eigen::VectorXd th0 = th_warm;
    if (s > 0)
      for (int i = 0; i < th0.size(); ++i)
        th0[i] += opt.start_scale * N01(rng);
    auto res = run_start(th0);
    if (res.f < best.f || best_start < 0) {
      best = res;
      best_start = s;
    }
  }
  if (!std::isfinite(best.f))
    throw std::runtime_error("fit: all optimization starts failed");

  EstimationResult er;
  er.spec = spec;
  er.theta = best.x;
  er.params = P.unpack(best.x);
  er.param_names = P.names;
  er.npar = P.n_free();
  er.T_eff = data.T() - t0;
  er.converged = best.converged;
  er.best_start = best_start;
  er.n_evals = evals;

  if (needs_smc) {
    LikelihoodConfig fcfg = lcfg;
    fcfg.n_particles = opt.n_particles_final;
    er.loglik = loglik_cksvar(er.params, data, spec, fcfg, &R).first;
  } else {
    er.loglik = -best.f;
  }
  er.aic_per_obs = (2.0 * er.npar - 2.0 * er.loglik) / er.T_eff;

  if (opt.compute_cov) {
    Eigen::MatrixXd H = numerical_hessian(objective, best.x);
    Eigen::LDLT<Eigen::MatrixXd> hd(H);
    if (hd.info() == Eigen::Success && hd.isPositive()) {
      er.cov = hd.solve(Eigen::MatrixXd::Identity(H.rows(), H.cols()));
      er.se = er.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
      er.cov_ok = true;
    }
  }
  return er;
}

inline TestResult lr_test(const EstimationResult& restricted,
                          const EstimationResult& unrestricted) {
  if (restricted.npar >= unrestricted.npar)
    throw std::invalid_argument("lr_test: restricted model not smaller");
  if (restricted.T_eff != unrestricted.T_eff)
    throw std::invalid_argument("lr_test: different estimation windows");
  TestResult tr;
  tr.restricted = restricted;
  tr.unrestricted = unrestricted;
  tr.loglik_restricted = restricted.loglik;
  tr.loglik_unrestricted = unrestricted.loglik;
  tr.df = unrestricted.npar - restricted.npar;
  double lr = 2.0 * (unrestricted.loglik - restricted.loglik);
  if (lr < 0.0) {
    tr.clipped = lr < -1e-4;
    lr = 0.0;
  }
  tr.lr = lr;
  tr.pvalue = chi2_pvalue(lr, tr.df);
  return tr;
}

// Restrictions for the first irrelevance hypothesis: lags of the short rate
// (observed and latent) and the kink drop out of the Y1 equations.
inline std::vector<ZeroRestriction> ih1_restrictions(const Layout& lay,
                                                     Variant variant) {
  std::vector<ZeroRestriction> rs;
  for (int i = 0; i < lay.k - 1; ++i) {
    for (int j = 0; j < lay.p; ++j) {
      rs.push_back({"C12", i, j});
      if (variant == Variant::CKSVAR) rs.push_back({"C12star", i, j});
    }
    rs.push_back({"betatilde", i, 0});
  }
  return rs;
}

inline TestResult test_ih1(const Dataset& data, int p, Variant variant,
                           const FitOptions& opt = {}) {
  ModelSpec un;
  un.variant = variant;
  un.p = p;
  auto eru = fit(un, data, opt);
  ModelSpec re = un;
  re.restrictions = ih1_restrictions(Layout::make(data, un), variant);
  auto err = fit(re, data, opt);
  return lr_test(err, eru);
}

inline TestResult test_ih2(const Dataset& data, int p,
                           const FitOptions& opt = {}) {
  ModelSpec un;
  un.variant = Variant::CKSVAR;
  un.p = p;
  auto eru = fit(un, data, opt);
  ModelSpec re = un;
  re.variant = Variant::CSVAR;
  auto err = fit(re, data, opt);
  return lr_test(err, eru);
}

// Zero restrictions on all lags of one Y1 variable in the given equations.
// Equations are indexed 0..k-2 for the Y1 block, k-1 for the shadow rate.
inline TestResult test_exclusion(const Dataset& data, int p, Variant variant,
                                 int excluded_y1_index,
                                 const std::vector<int>& target_equations,
                                 const FitOptions& opt = {}) {
  ModelSpec un;
  un.variant = variant;
  un.p = p;
  Layout lay = Layout::make(data, un);
  if (excluded_y1_index < 0 || excluded_y1_index >= lay.k - 1)
    throw std::invalid_argument("test_exclusion: excluded variable not in Y1");
  auto eru = fit(un, data, opt);
  ModelSpec re = un;
  int c0 = lay.intercept ? 1 : 0;
  for (int eq : target_equations) {
    for (int j = 0; j < p; ++j) {
      int col = c0 + j * (lay.k - 1) + excluded_y1_index;
      if (eq == lay.k - 1) re.restrictions.push_back({"C21", 0, col});
      else re.restrictions.push_back({"C11", eq, col});
    }
  }
  auto err = fit(re, data, opt);
  return lr_test(err, eru);
}

struct LagSelectionRow {
  int p = 0;
  double loglik = 0.0;
  int npar = 0;
  double aic_per_obs = 0.0;
  double seq_pvalue = std::numeric_limits<double>::quiet_NaN();  // p vs p+1
};

struct LagSelection {
  int p_aic = 0;
  int p_seq = 0;
  std::vector<LagSelectionRow> table;
};

inline LagSelection select_lag(const Dataset& data, int pmax, Variant variant,
                               const FitOptions& opt = {}) {
  if (pmax < 1) throw std::invalid_argument("select_lag: pmax must be >= 1");
  int t0 = std::max(pmax, data.est_start);
  std::vector<EstimationResult> fits;
  for (int p = 1; p <= pmax; ++p) {
    ModelSpec spec;
    spec.variant = variant;
    spec.p = p;
    FitOptions o = opt;
    o.t0 = t0;
    o.compute_cov = false;
    fits.push_back(fit(spec, data, o));
  }
  LagSelection sel;
  for (int p = 1; p <= pmax; ++p) {
    LagSelectionRow row;
    row.p = p;
    row.loglik = fits[p - 1].loglik;
    row.npar = fits[p - 1].npar;
    row.aic_per_obs = fits[p - 1].aic_per_obs;
    if (p < pmax) {
      auto tr = lr_test(fits[p - 1], fits[p]);
      row.seq_pvalue = tr.pvalue;
    }
    sel.table.push_back(row);
  }
  sel.p_aic = 1;
  for (int p = 2; p <= pmax; ++p)
    if (sel.table[p - 1].aic_per_obs < sel.table[sel.p_aic - 1].aic_per_obs)
      sel.p_aic = p;
  sel.p_seq = pmax;
  for (int p = 1; p < pmax; ++p)
    if (sel.table[p - 1].seq_pvalue > 0.05) {
      sel.p_seq = p;
      break;
    }
  return sel;
}

}  // namespace cksvar
