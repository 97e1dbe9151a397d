// Batch front end: ingestion, estimation, LR tests, identified sets, GIRFs,
// shadow rates and model scenarios. Every command writes a machine-readable
// JSON artifact plus a human-readable text table, named
//   <command>_<dataset>_<spec>_<seed>.{json,csv,txt}
// and embeds the resolved configuration and input hashes for reproducibility.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>

#include "cksvar/dsge/dsge.hpp"
#include "cksvar/estimation/estimation.hpp"
#include "cksvar/identification/identification.hpp"
#include "cksvar/ingest/ingest.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string file_stem(const std::string& path) {
  return fs::path(path).stem().string();
}

cksvar::Variant parse_variant(const std::string& s) {
  if (s == "cksvar") return cksvar::Variant::CKSVAR;
  if (s == "ksvar") return cksvar::Variant::KSVAR;
  if (s == "csvar") return cksvar::Variant::CSVAR;
  throw CLI::ValidationError("--variant", "unknown variant '" + s + "'");
}

struct ArtifactWriter {
  std::string base;   // <out>/<command>_<dataset>_<spec>_<seed>
  json meta;          // resolved config + input hashes

  std::string path(const char* ext) const { return base + "." + ext; }
  void write_json(const json& results) const {
    json out;
    out["config"] = meta;
    out["results"] = results;
    cksvar::write_file(path("json"), out.dump(2) + "\n");
  }
};

ArtifactWriter make_writer(const std::string& outdir, const std::string& cmd,
                           const std::string& dataset, const std::string& spec,
                           std::uint64_t seed) {
  fs::create_directories(outdir);
  ArtifactWriter w;
  w.base = (fs::path(outdir) /
            (cmd + "_" + dataset + "_" + spec + "_" + std::to_string(seed)))
               .string();
  return w;
}

std::string fmt(double v, int width = 12, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%*.*f", width, prec, v);
  return buf;
}

json estimation_json(const cksvar::EstimationResult& er) {
  json j;
  j["loglik"] = er.loglik;
  j["npar"] = er.npar;
  j["T_eff"] = er.T_eff;
  j["aic_per_obs"] = er.aic_per_obs;
  j["converged"] = er.converged;
  j["cov_ok"] = er.cov_ok;
  for (int i = 0; i < er.theta.size(); ++i) {
    json row;
    row["name"] = er.param_names[i];
    row["estimate"] = er.theta[i];
    if (er.cov_ok) row["se"] = er.se[i];
    j["params"].push_back(row);
  }
  return j;
}

std::string estimation_table(const cksvar::EstimationResult& er) {
  std::ostringstream out;
  out << "parameter                     estimate           se\n";
  for (int i = 0; i < er.theta.size(); ++i) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-24s %12.5f %12.5f\n",
                  er.param_names[i].c_str(), er.theta[i],
                  er.cov_ok ? er.se[i] : std::nan(""));
    out << line;
  }
  out << "\nloglik " << cksvar::format_double(er.loglik) << "  npar "
      << er.npar << "  T_eff " << er.T_eff << "  AIC/T "
      << cksvar::format_double(er.aic_per_obs) << "\n";
  return out.str();
}

json test_json(const cksvar::TestResult& tr) {
  json j;
  j["lr"] = tr.lr;
  j["df"] = tr.df;
  j["pvalue"] = tr.pvalue;
  j["loglik_restricted"] = tr.loglik_restricted;
  j["loglik_unrestricted"] = tr.loglik_unrestricted;
  j["clipped"] = tr.clipped;
  return j;
}

std::string test_table(const std::string& label, const cksvar::TestResult& tr) {
  std::ostringstream out;
  out << "test          LR        df    p-value\n";
  char line[128];
  std::snprintf(line, sizeof(line), "%-10s %9.3f %5d %10.4f\n", label.c_str(),
                tr.lr, tr.df, tr.pvalue);
  out << line;
  return out.str();
}

// Shared estimation-facing options.
struct SpecOpts {
  std::string data_path;
  int n_exog = 0;
  std::string variant = "cksvar";
  int p = 1;
  std::uint64_t seed = 0;
  std::string outdir = ".";
  std::string name;           // dataset label; defaults to the file stem
  int n_starts = 10;
  int particles = 512;
  int final_particles = 4096;

  void add_to(CLI::App* cmd, bool with_variant = true) {
    cmd->add_option("--data", data_path, "dataset CSV (ingest output)")
        ->required();
    cmd->add_option("--n-exog", n_exog, "trailing exogenous columns");
    if (with_variant)
      cmd->add_option("--variant", variant, "cksvar | ksvar | csvar");
    cmd->add_option("--p", p, "lag order");
    cmd->add_option("--seed", seed, "RNG seed (artifacts are reproducible)");
    cmd->add_option("--out", outdir, "output directory");
    cmd->add_option("--name", name, "dataset label for artifact names");
    cmd->add_option("--n-starts", n_starts, "optimizer multistarts");
    cmd->add_option("--particles", particles, "SMC particles (optimization)");
    cmd->add_option("--final-particles", final_particles,
                    "SMC particles (reported loglik)");
  }

  std::string label() const {
    return name.empty() ? file_stem(data_path) : name;
  }
  cksvar::ModelSpec spec() const {
    cksvar::ModelSpec s;
    s.variant = parse_variant(variant);
    s.p = p;
    return s;
  }
  cksvar::FitOptions fit_options() const {
    cksvar::FitOptions o;
    o.seed = seed;
    o.n_starts = n_starts;
    o.n_particles = particles;
    o.n_particles_final = final_particles;
    return o;
  }
  json to_json() const {
    return json{{"data", data_path},
                {"data_hash", cksvar::fnv1a_hex(cksvar::read_file(data_path))},
                {"n_exog", n_exog},
                {"variant", variant},
                {"p", p},
                {"seed", seed},
                {"n_starts", n_starts},
                {"particles", particles},
                {"final_particles", final_particles}};
  }
};

int cmd_ingest(const std::string& preset, const std::vector<std::string>& inputs,
               const std::string& config_path, const std::string& outdir,
               const std::string& name, std::uint64_t seed) {
  cksvar::IngestConfig cfg;
  if (preset == "us") cfg = cksvar::us_preset();
  else if (preset == "jp") cfg = cksvar::jp_preset();
  else if (preset == "custom") {
    if (config_path.empty())
      throw std::runtime_error("ingest: custom preset needs --config");
    json j = json::parse(cksvar::read_file(config_path));
    auto recipe = [](const json& r) {
      cksvar::Recipe out;
      out.output = r.at("output");
      out.source = r.at("source");
      out.source2 = r.value("source2", "");
      out.kind = r.value("kind", "level");
      return out;
    };
    for (const auto& r : j.at("vars")) cfg.vars.push_back(recipe(r));
    if (j.contains("exog"))
      for (const auto& r : j["exog"]) cfg.exog.push_back(recipe(r));
    const json& b = j.at("bound");
    cfg.bound.is_constant = b.value("constant", true);
    cfg.bound.constant = b.value("value", 0.0);
    cfg.bound.series = b.value("series", "");
    cfg.bound.offset = b.value("offset", 0.0);
    cfg.start = cksvar::Quarter::from_index(
        cksvar::detail::parse_quarter(j.at("window")[0]));
    cfg.end = cksvar::Quarter::from_index(
        cksvar::detail::parse_quarter(j.at("window")[1]));
  } else {
    throw std::runtime_error("ingest: unknown preset '" + preset + "'");
  }

  std::map<std::string, cksvar::RawSeries> raws;
  json hashes;
  for (const auto& path : inputs) {
    hashes[fs::path(path).filename().string()] =
        cksvar::fnv1a_hex(cksvar::read_file(path));
    for (auto& s : cksvar::load_raw_csv(path)) raws[s.name] = std::move(s);
  }
  cksvar::IngestResult res = cksvar::assemble(cfg, raws);

  std::string label = name.empty() ? preset : name;
  ArtifactWriter w = make_writer(outdir, "ingest", label, preset, seed);
  w.meta = {{"preset", preset}, {"inputs", hashes}, {"n_exog", res.data.m()}};
  cksvar::write_file(w.path("csv"), cksvar::dataset_to_csv(res.data));
  json out = res.manifest;
  out["n_exog"] = res.data.m();
  out["T"] = res.data.T();
  w.write_json(out);
  for (const auto& msg : res.warnings)
    std::fprintf(stderr, "warning: %s\n", msg.c_str());
  std::printf("wrote %s (T=%d, k=%d, m=%d)\n", w.path("csv").c_str(),
              res.data.T(), res.data.k(), res.data.m());
  return 0;
}

int cmd_estimate(const SpecOpts& o) {
  cksvar::Dataset d = cksvar::read_dataset_csv(o.data_path, o.n_exog);
  cksvar::EstimationResult er = cksvar::fit(o.spec(), d, o.fit_options());
  ArtifactWriter w = make_writer(o.outdir, "estimate", o.label(),
                                 o.variant + "_p" + std::to_string(o.p),
                                 o.seed);
  w.meta = o.to_json();
  w.write_json(estimation_json(er));
  cksvar::write_file(w.path("txt"), estimation_table(er));
  std::printf("%s: loglik %.4f AIC/T %.4f (%s)\n", w.base.c_str(), er.loglik,
              er.aic_per_obs, er.converged ? "converged" : "NOT converged");
  return er.converged ? 0 : 1;
}

int cmd_test(const std::string& which, const SpecOpts& o, int exclude_col,
             std::vector<int> targets, int pmax) {
  cksvar::Dataset d = cksvar::read_dataset_csv(o.data_path, o.n_exog);
  ArtifactWriter w = make_writer(
      o.outdir, "test-" + which, o.label(),
      o.variant + "_p" + std::to_string(which == "lag-select" ? pmax : o.p),
      o.seed);
  w.meta = o.to_json();
  w.meta["test"] = which;

  if (which == "lag-select") {
    cksvar::LagSelection sel =
        cksvar::select_lag(d, pmax, parse_variant(o.variant), o.fit_options());
    json rows = json::array();
    std::ostringstream tab;
    tab << "  p       loglik   npar      AIC/T   p-value(p vs p+1)\n";
    for (const auto& r : sel.table) {
      rows.push_back({{"p", r.p},
                      {"loglik", r.loglik},
                      {"npar", r.npar},
                      {"aic_per_obs", r.aic_per_obs},
                      {"seq_pvalue", r.seq_pvalue}});
      char line[160];
      std::snprintf(line, sizeof(line), "%3d %12.4f %6d %10.4f %12.4f\n", r.p,
                    r.loglik, r.npar, r.aic_per_obs, r.seq_pvalue);
      tab << line;
    }
    tab << "\nselected: AIC p=" << sel.p_aic << ", sequential p=" << sel.p_seq
        << "\n";
    w.write_json(json{{"table", rows}, {"p_aic", sel.p_aic},
                      {"p_seq", sel.p_seq}});
    cksvar::write_file(w.path("txt"), tab.str());
    std::printf("%s\n", tab.str().c_str());
    return 0;
  }

  cksvar::TestResult tr;
  if (which == "ih1") {
    tr = cksvar::test_ih1(d, o.p, parse_variant(o.variant), o.fit_options());
  } else if (which == "ih2") {
    tr = cksvar::test_ih2(d, o.p, o.fit_options());
  } else if (which == "excl-long") {
    if (targets.empty()) targets = {0, 1};
    w.meta["exclude_col"] = exclude_col;
    w.meta["targets"] = targets;
    tr = cksvar::test_exclusion(d, o.p, parse_variant(o.variant), exclude_col,
                                targets, o.fit_options());
  } else {
    throw std::runtime_error("unknown test '" + which + "'");
  }
  json j = test_json(tr);
  j["restricted"] = estimation_json(tr.restricted);
  j["unrestricted"] = estimation_json(tr.unrestricted);
  w.write_json(j);
  cksvar::write_file(w.path("txt"), test_table(which, tr));
  std::printf("%s", test_table(which, tr).c_str());
  return tr.restricted.converged && tr.unrestricted.converged ? 0 : 1;
}

int cmd_idset(const SpecOpts& o, double xi_step) {
  cksvar::Dataset d = cksvar::read_dataset_csv(o.data_path, o.n_exog);
  cksvar::EstimationResult er = cksvar::fit(o.spec(), d, o.fit_options());
  cksvar::IdentifiedSet set = cksvar::solve_identified_set(er.params, xi_step);
  ArtifactWriter w = make_writer(o.outdir, "idset", o.label(),
                                 o.variant + "_p" + std::to_string(o.p),
                                 o.seed);
  w.meta = o.to_json();
  w.meta["xi_step"] = xi_step;

  std::ostringstream csv;
  const int k1 = d.k() - 1;
  csv << "xi,c";
  for (int i = 0; i < k1; ++i) csv << ",beta" << i;
  for (int i = 0; i < k1; ++i) csv << ",gamma" << i;
  csv << "\n";
  for (const auto& pt : set.points) {
    csv << cksvar::format_double(pt.xi) << "," << cksvar::format_double(pt.c);
    for (int i = 0; i < k1; ++i)
      csv << "," << cksvar::format_double(pt.beta[i]);
    for (int i = 0; i < k1; ++i)
      csv << "," << cksvar::format_double(pt.gamma[i]);
    csv << "\n";
  }
  cksvar::write_file(w.path("csv"), csv.str());
  json j;
  j["n_points"] = set.points.size();
  j["xi_min"] = set.xi_min;
  j["xi_max"] = set.xi_max;
  for (int i = 0; i < k1; ++i) {
    j["beta_min"].push_back(set.beta_min[i]);
    j["beta_max"].push_back(set.beta_max[i]);
  }
  j["estimation"] = estimation_json(er);
  w.write_json(j);
  std::printf("identified set: xi in [%.3f, %.3f], %zu grid points\n",
              set.xi_min, set.xi_max, set.points.size());
  return er.converged ? 0 : 1;
}

int cmd_irf(const SpecOpts& o, double xi, int horizon, int n_rep,
            double shock) {
  cksvar::Dataset d = cksvar::read_dataset_csv(o.data_path, o.n_exog);
  cksvar::EstimationResult er = cksvar::fit(o.spec(), d, o.fit_options());
  cksvar::IdentifiedPoint pt = cksvar::solve_identified_point(
      er.params.Omega(), er.params.betatilde, xi);
  if (!pt.converged)
    throw std::runtime_error("irf: no identified point at xi=" +
                             std::to_string(xi));
  cksvar::Layout lay = cksvar::Layout::make(d, o.spec());
  cksvar::GirfConfig gc;
  gc.horizon = horizon;
  gc.n_rep = n_rep;
  gc.seed = o.seed;
  gc.shock = shock;
  gc.bound = Eigen::VectorXd::Constant(1, d.bound[d.T() - 1]);
  if (lay.m > 0)
    gc.exog = d.exog.bottomRows(1).replicate(horizon + 1, 1);
  Eigen::VectorXd du0 = cksvar::monetary_impact(pt.beta, pt.gamma, shock);
  cksvar::GirfResult g =
      cksvar::girf_impulse(er.params, lay, er.params.L, du0, gc);

  ArtifactWriter w = make_writer(
      o.outdir, "irf", o.label(),
      o.variant + "_p" + std::to_string(o.p) + "_xi" + std::to_string(xi),
      o.seed);
  w.meta = o.to_json();
  w.meta["xi"] = xi;
  w.meta["horizon"] = horizon;
  w.meta["n_rep"] = n_rep;
  w.meta["shock"] = shock;
  std::ostringstream csv;
  csv << "h";
  for (int j = 0; j < d.k(); ++j)
    csv << ",mean_" << d.names[j] << ",se_" << d.names[j];
  csv << ",shadow\n";
  for (int h = 0; h <= horizon; ++h) {
    csv << h;
    for (int j = 0; j < d.k(); ++j)
      csv << "," << cksvar::format_double(g.mean(h, j)) << ","
          << cksvar::format_double(g.se(h, j));
    csv << "," << cksvar::format_double(g.shadow[h]) << "\n";
  }
  cksvar::write_file(w.path("csv"), csv.str());
  json j;
  j["impact"] = std::vector<double>(g.mean.row(0).begin(), g.mean.row(0).end());
  j["estimation"] = estimation_json(er);
  w.write_json(j);
  std::printf("wrote %s\n", w.path("csv").c_str());
  return er.converged ? 0 : 1;
}

int cmd_shadow(const SpecOpts& o, double xi) {
  cksvar::Dataset d = cksvar::read_dataset_csv(o.data_path, o.n_exog);
  cksvar::EstimationResult er = cksvar::fit(o.spec(), d, o.fit_options());
  cksvar::LikelihoodConfig lc;
  lc.seed = o.seed;
  lc.n_particles = o.final_particles;
  cksvar::LatentEstimate est =
      cksvar::smooth_latent(er.params, d, o.spec(), lc);
  cksvar::IdentifiedPoint pt = cksvar::solve_identified_point(
      er.params.Omega(), er.params.betatilde, xi);
  if (!pt.converged)
    throw std::runtime_error("shadow: no identified point at xi=" +
                             std::to_string(xi));
  Eigen::VectorXd sh = cksvar::structural_shadow(est, d.bound, pt);

  ArtifactWriter w = make_writer(
      o.outdir, "shadow", o.label(),
      o.variant + "_p" + std::to_string(o.p) + "_xi" + std::to_string(xi),
      o.seed);
  w.meta = o.to_json();
  w.meta["xi"] = xi;
  std::ostringstream csv;
  csv << "date,observed,smoothed_ybar,shadow,lo,hi,at_bound\n";
  const int y2 = d.k() - 1;
  for (int t = 0; t < d.T(); ++t) {
    csv << d.dates[t].str() << "," << cksvar::format_double(d.values(t, y2))
        << "," << cksvar::format_double(est.ybar[t]) << ","
        << cksvar::format_double(sh[t]) << ","
        << cksvar::format_double(est.smoothed_lo[t]) << ","
        << cksvar::format_double(est.smoothed_hi[t]) << "," << est.D[t]
        << "\n";
  }
  cksvar::write_file(w.path("csv"), csv.str());
  json j;
  j["share_at_bound"] = est.D.cast<double>().mean();
  j["estimation"] = estimation_json(er);
  w.write_json(j);
  std::printf("wrote %s\n", w.path("csv").c_str());
  return er.converged ? 0 : 1;
}

int cmd_dsge(const std::string& scenario, double xi, const std::string& method,
             double bound, int T, const std::string& outdir,
             std::uint64_t seed) {
  if (scenario != "figure1")
    throw std::runtime_error("dsge: unknown scenario '" + scenario + "'");
  cksvar::DSGEParams p;
  p.lambda_star = xi;   // alpha = 0, so xi* = lambda*
  p.alpha = 0.0;
  // The scenario's shocks are calibrated against the baseline bound; --b
  // then only moves the constraint (e.g. -100 gives the unconstrained run).
  cksvar::ShockPaths s = cksvar::figure1_shocks(p, T);
  p.b = bound;
  cksvar::SimPath path;
  if (method == "prop2") path = cksvar::simulate_prop2(p, s);
  else if (method == "occbin") path = cksvar::solve_occbin(p, s);
  else throw std::runtime_error("dsge: unknown method '" + method + "'");

  char spec_label[64];
  std::snprintf(spec_label, sizeof(spec_label), "%s-xi%g", scenario.c_str(), xi);
  ArtifactWriter w = make_writer(outdir, "dsge", method, spec_label, seed);
  w.meta = {{"scenario", scenario}, {"xi_star", xi}, {"method", method},
            {"bound", bound}, {"T", T}};
  std::ostringstream csv;
  csv << "t,y,pi,i,istar,itaylor,za,zb,regime\n";
  for (int t = 0; t < T; ++t) {
    csv << t << "," << cksvar::format_double(path.y[t]) << ","
        << cksvar::format_double(path.pi[t]) << ","
        << cksvar::format_double(path.i[t]) << ","
        << cksvar::format_double(path.istar[t]) << ","
        << cksvar::format_double(path.itaylor[t]) << ","
        << cksvar::format_double(path.za[t]) << ","
        << cksvar::format_double(path.zb[t]) << "," << path.regime[t] << "\n";
  }
  cksvar::write_file(w.path("csv"), csv.str());
  json j;
  j["spell_periods"] = path.regime.sum();
  j["shock_size"] = s.eps_b.maxCoeff();
  w.write_json(j);
  std::printf("wrote %s (ELB periods: %d)\n", w.path("csv").c_str(),
              static_cast<int>(path.regime.sum()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CKSVAR toolkit: censored and kinked structural VARs"};
  app.require_subcommand(1);

  // ingest
  auto* ing = app.add_subcommand("ingest", "build a dataset from raw CSVs");
  std::string preset = "custom", config_path, ing_out = ".", ing_name;
  std::vector<std::string> inputs;
  std::uint64_t ing_seed = 0;
  ing->add_option("--preset", preset, "us | jp | custom");
  ing->add_option("--inputs", inputs, "raw CSV files")->required();
  ing->add_option("--config", config_path, "recipe JSON (custom preset)");
  ing->add_option("--out", ing_out, "output directory");
  ing->add_option("--name", ing_name, "dataset label");
  ing->add_option("--seed", ing_seed, "artifact-name seed");

  // estimate
  auto* est = app.add_subcommand("estimate", "simulated-ML fit");
  SpecOpts est_o;
  est_o.add_to(est);

  // test <which>
  auto* tst = app.add_subcommand("test", "likelihood-ratio tests");
  std::string which;
  tst->add_option("which", which, "ih1 | ih2 | excl-long | lag-select")
      ->required();
  SpecOpts tst_o;
  tst_o.add_to(tst);
  int exclude_col = 2, pmax = 4;
  std::vector<int> targets;
  tst->add_option("--exclude-col", exclude_col,
                  "Y1 column excluded (excl-long)");
  tst->add_option("--targets", targets, "equations restricted (excl-long)");
  tst->add_option("--pmax", pmax, "maximum lag (lag-select)");

  // idset
  auto* ids = app.add_subcommand("idset", "identified set for (xi, beta)");
  SpecOpts ids_o;
  ids_o.add_to(ids);
  double xi_step = 0.01;
  ids->add_option("--xi-step", xi_step, "grid step over xi");

  // irf
  auto* irf = app.add_subcommand("irf", "generalized impulse responses");
  SpecOpts irf_o;
  irf_o.add_to(irf);
  double irf_xi = 0.5, irf_shock = -0.25;
  int horizon = 20, n_rep = 1000;
  irf->add_option("--xi", irf_xi, "structural point on the identified set");
  irf->add_option("--horizon", horizon, "IRF horizon");
  irf->add_option("--n-rep", n_rep, "Monte Carlo replications");
  irf->add_option("--shock", irf_shock, "monetary shock size");

  // shadow
  auto* sha = app.add_subcommand("shadow", "smoothed structural shadow rate");
  SpecOpts sha_o;
  sha_o.add_to(sha);
  double sha_xi = 0.5;
  sha->add_option("--xi", sha_xi, "structural point on the identified set");

  // dsge
  auto* dsg = app.add_subcommand("dsge", "model scenarios");
  std::string scenario = "figure1", method = "prop2";
  double dsge_xi = 1.0, dsge_b = -0.005;
  int dsge_T = 40;
  std::string dsge_out = ".";
  std::uint64_t dsge_seed = 0;
  dsg->add_option("scenario", scenario, "scenario name (figure1)");
  dsg->add_option("--xi", dsge_xi, "UMP effectiveness xi*");
  dsg->add_option("--method", method, "prop2 | occbin");
  dsg->add_option("--b", dsge_b, "lower bound");
  dsg->add_option("--T", dsge_T, "periods");
  dsg->add_option("--out", dsge_out, "output directory");
  dsg->add_option("--seed", dsge_seed, "artifact-name seed");

  CLI11_PARSE(app, argc, argv);

  // Cross-field validation, reported exhaustively before exit.
  std::vector<std::string> errors;
  if (*tst) {
    if (which != "ih1" && which != "ih2" && which != "excl-long" &&
        which != "lag-select")
      errors.push_back("test: unknown selection '" + which + "'");
    if (which == "ih2" && tst_o.variant != "cksvar")
      errors.push_back("test ih2: the unrestricted model must be cksvar");
    if (which == "lag-select" && pmax < 1)
      errors.push_back("test lag-select: pmax must be >= 1");
  }
  if (*irf && (irf_xi < 0.0 || irf_xi > 1.0))
    errors.push_back("irf: xi must lie in [0, 1]");
  if (*sha && (sha_xi < 0.0 || sha_xi > 1.0))
    errors.push_back("shadow: xi must lie in [0, 1]");
  if (*dsg && (dsge_xi < 0.0 || dsge_xi > 1.0))
    errors.push_back("dsge: xi must lie in [0, 1]");
  if (!errors.empty()) {
    for (const auto& e : errors) std::fprintf(stderr, "error: %s\n", e.c_str());
    return 2;
  }

  try {
    if (*ing)
      return cmd_ingest(preset, inputs, config_path, ing_out, ing_name,
                        ing_seed);
    if (*est) return cmd_estimate(est_o);
    if (*tst) return cmd_test(which, tst_o, exclude_col, targets, pmax);
    if (*ids) return cmd_idset(ids_o, xi_step);
    if (*irf) return cmd_irf(irf_o, irf_xi, horizon, n_rep, irf_shock);
    if (*sha) return cmd_shadow(sha_o, sha_xi);
    if (*dsg)
      return cmd_dsge(scenario, dsge_xi, method, dsge_b, dsge_T, dsge_out,
                      dsge_seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
