// End-to-end exercises of the command line tool: each subcommand is run
// against synthetic inputs in a scratch directory, and artifacts are checked
// for existence, content and bit-reproducibility under a fixed seed.
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include "cksvar/core/simulate.hpp"
#include "cksvar/io/io.hpp"

using namespace cksvar;
using Catch::Approx;
namespace fs = std::filesystem;

#ifndef CKSVAR_CLI_PATH
#error "CKSVAR_CLI_PATH must point at the built binary"
#endif

namespace {

const std::string kDir = "/tmp/cksvar_cli_test";

int run(const std::string& args) {
  std::string cmd = std::string(CKSVAR_CLI_PATH) + " " + args +
                    " >" + kDir + "/stdout.log 2>" + kDir + "/stderr.log";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

// Simulated KSVAR(1), k=2, long enough for a quick but stable fit.
std::string write_sim_dataset() {
  Layout lay;
  lay.k = 2;
  lay.p = 1;
  lay.m = 0;
  lay.intercept = true;
  lay.y2 = 1;
  lay.y1_cols = {0};
  lay.n1 = 2;
  ReducedFormParams rf = ReducedFormParams::zeros(lay);
  rf.C11 << 0.2, 0.4;
  rf.C12 << 0.15;
  rf.C21 << 0.1, 0.3;
  rf.C22 << 0.7;
  rf.betatilde << 0.4;
  rf.L << 0.5, 0.0, 0.1, 0.4;

  SimConfig cfg;
  cfg.T = 250;
  cfg.seed = 11;
  cfg.bound = Eigen::VectorXd::Constant(1, 0.35);
  SimOutput out = simulate_rf(rf, lay, cfg);
  out.data.names = {"y1", "rate"};
  out.data.dates.clear();
  for (int t = 0; t < out.data.T(); ++t)
    out.data.dates.push_back(Quarter::from_index(Quarter{1950, 1}.index() + t));
  std::string path = kDir + "/sim.csv";
  write_file(path, dataset_to_csv(out.data));
  return path;
}

const char* kFastFit =
    " --n-starts 1 --particles 96 --final-particles 256 --seed 5 ";

}  // namespace

TEST_CASE("cli: ingest builds a dataset from raw csvs") {
  fs::create_directories(kDir);
  write_file(kDir + "/prices.csv",
             "date,P\n1999q3,1.00\n1999q4,1.01\n2000q1,1.02\n2000q2,1.03\n"
             "2000q3,1.04\n2000q4,1.05\n2001q1,1.06\n");
  write_file(kDir + "/rates.csv",
             "date,R\n1999-10,3.0\n1999-11,3.0\n1999-12,3.0\n2000-01,2.5\n"
             "2000-02,2.5\n2000-03,2.5\n2000-04,2.0\n2000-05,2.0\n"
             "2000-06,2.0\n2000-07,1.5\n2000-08,1.5\n2000-09,1.5\n"
             "2000-10,1.0\n2000-11,1.0\n2000-12,1.0\n");
  write_file(kDir + "/config.json", R"({
    "vars": [
      {"output": "infl", "source": "P", "kind": "log_diff_annualized"},
      {"output": "rate", "source": "R", "kind": "level"}
    ],
    "bound": {"constant": true, "value": 0.2},
    "window": ["2000q1", "2000q4"]
  })");

  int rc = run("ingest --preset custom --config " + kDir + "/config.json" +
               " --inputs " + kDir + "/prices.csv " + kDir + "/rates.csv" +
               " --out " + kDir + " --name demo");
  REQUIRE(rc == 0);
  std::string csv = read_file(kDir + "/ingest_demo_custom_0.csv");
  CsvTable t = parse_csv(csv);
  REQUIRE(t.header == std::vector<std::string>{"date", "infl", "rate", "bound"});
  REQUIRE(t.rows.size() == 4);
  REQUIRE(std::stod(t.rows[0][2]) == Approx(2.5));
  REQUIRE(std::stod(t.rows[0][3]) == Approx(0.2));
  std::string manifest = read_file(kDir + "/ingest_demo_custom_0.json");
  REQUIRE(manifest.find("dataset_hash") != std::string::npos);
  REQUIRE(manifest.find("input_hashes") != std::string::npos);
}

TEST_CASE("cli: estimate is reproducible byte for byte") {
  fs::create_directories(kDir);
  std::string data = write_sim_dataset();
  std::string common = "estimate --data " + data +
                       " --variant ksvar --p 1 --out " + kDir + kFastFit;
  int rc = run(common);
  REQUIRE((rc == 0 || rc == 1));
  std::string j1 = read_file(kDir + "/estimate_sim_ksvar_p1_5.json");
  std::string t1 = read_file(kDir + "/estimate_sim_ksvar_p1_5.txt");
  REQUIRE(j1.find("loglik") != std::string::npos);
  REQUIRE(j1.find("data_hash") != std::string::npos);
  REQUIRE(t1.find("betatilde") != std::string::npos);

  REQUIRE(run(common) == rc);
  REQUIRE(read_file(kDir + "/estimate_sim_ksvar_p1_5.json") == j1);
  REQUIRE(read_file(kDir + "/estimate_sim_ksvar_p1_5.txt") == t1);
}

TEST_CASE("cli: idset, irf and shadow produce usable artifacts") {
  fs::create_directories(kDir);
  std::string data = write_sim_dataset();
  std::string base = " --data " + data + " --variant ksvar --p 1 --out " +
                     kDir + kFastFit;

  int rc = run("idset" + base + "--xi-step 0.05");
  REQUIRE((rc == 0 || rc == 1));
  CsvTable set = parse_csv(read_file(kDir + "/idset_sim_ksvar_p1_5.csv"));
  REQUIRE(set.header[0] == "xi");
  REQUIRE(!set.rows.empty());
  for (const auto& row : set.rows) {
    double xi = std::stod(row[0]);
    REQUIRE(xi >= 0.0);
    REQUIRE(xi <= 1.0);
  }

  rc = run("irf" + base + "--xi 0.5 --horizon 5 --n-rep 40");
  REQUIRE((rc == 0 || rc == 1));
  CsvTable g =
      parse_csv(read_file(kDir + "/irf_sim_ksvar_p1_xi0.500000_5.csv"));
  REQUIRE(g.rows.size() == 6);
  REQUIRE(g.header.back() == "shadow");
  // Expansionary shock (negative rate shock) raises y1 on impact here.
  REQUIRE(std::stod(g.rows[0][3]) < 0.0);   // mean_rate at h=0

  rc = run("shadow" + base + "--xi 0.5");
  REQUIRE((rc == 0 || rc == 1));
  CsvTable s =
      parse_csv(read_file(kDir + "/shadow_sim_ksvar_p1_xi0.500000_5.csv"));
  REQUIRE(s.rows.size() == 250);
  int at_bound = 0;
  for (const auto& row : s.rows) {
    double shadow = std::stod(row[3]);
    int bound_flag = std::stoi(row[6]);
    at_bound += bound_flag;
    if (bound_flag) REQUIRE(shadow <= 0.35 + 1e-9);
  }
  REQUIRE(at_bound > 0);
}

TEST_CASE("cli: dsge figure1 with xi=1 matches the unconstrained economy") {
  fs::create_directories(kDir);
  REQUIRE(run("dsge figure1 --xi 1 --out " + kDir) == 0);
  REQUIRE(run("dsge figure1 --xi 1 --b -100 --out " + kDir + " --seed 1") == 0);
  CsvTable elb = parse_csv(read_file(kDir + "/dsge_prop2_figure1-xi1_0.csv"));
  CsvTable freed = parse_csv(read_file(kDir + "/dsge_prop2_figure1-xi1_1.csv"));
  REQUIRE(elb.rows.size() == freed.rows.size());
  bool bound_hit = false;
  for (size_t t = 0; t < elb.rows.size(); ++t) {
    // Output and inflation are unaffected by the bound when UMP is perfect.
    REQUIRE(std::stod(elb.rows[t][1]) ==
            Approx(std::stod(freed.rows[t][1])).margin(1e-10));
    REQUIRE(std::stod(elb.rows[t][2]) ==
            Approx(std::stod(freed.rows[t][2])).margin(1e-10));
    if (elb.rows[t][8] == "1") bound_hit = true;
  }
  REQUIRE(bound_hit);

  REQUIRE(run("dsge figure1 --xi 0 --method occbin --out " + kDir) == 0);
  CsvTable occ = parse_csv(read_file(kDir + "/dsge_occbin_figure1-xi0_0.csv"));
  REQUIRE(occ.rows.size() == 40);
}

TEST_CASE("cli: invalid configurations fail with exhaustive diagnostics") {
  fs::create_directories(kDir);
  std::string data = write_sim_dataset();
  REQUIRE(run("irf --data " + data + " --xi 2 --out " + kDir) == 2);
  REQUIRE(run("test ih2 --data " + data + " --variant ksvar --out " + kDir) ==
          2);
  REQUIRE(run("estimate --data /nonexistent.csv --out " + kDir) == 2);
  std::string err = read_file(kDir + "/stderr.log");
  REQUIRE(err.find("error:") != std::string::npos);
}

TEST_CASE("cli: ih1 test reports LR, df and p-value") {
  fs::create_directories(kDir);
  std::string data = write_sim_dataset();
  int rc = run("test ih1 --data " + data + " --variant ksvar --p 1 --out " +
               kDir + kFastFit);
  REQUIRE((rc == 0 || rc == 1));
  std::string j = read_file(kDir + "/test-ih1_sim_ksvar_p1_5.json");
  REQUIRE(j.find("\"lr\"") != std::string::npos);
  REQUIRE(j.find("\"df\"") != std::string::npos);
  std::string txt = read_file(kDir + "/test-ih1_sim_ksvar_p1_5.txt");
  REQUIRE(txt.find("ih1") != std::string::npos);
}
