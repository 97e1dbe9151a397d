// Turns raw monthly/quarterly CSV series into estimation-ready Datasets:
// quarterly averaging, inflation/gap transforms, bound construction, and an
// assembly step that records a provenance manifest.
#pragma once
#include <json.hpp>
#include <map>

#include "cksvar/io/io.hpp"

namespace cksvar {

enum class Frequency { Monthly, Quarterly };

// Dates are stored as integer indices: months since year 0 for monthly data,
// quarters since year 0 for quarterly data (matching Quarter::index()).
struct RawSeries {
  Frequency freq = Frequency::Quarterly;
  std::vector<int> dates;
  Eigen::VectorXd values;
  std::string name;
  std::string units;

  void validate() const {
    if (dates.size() != static_cast<size_t>(values.size()))
      throw std::invalid_argument("RawSeries: date/value length mismatch");
    if (dates.empty()) throw std::invalid_argument("RawSeries: empty");
    for (size_t i = 1; i < dates.size(); ++i)
      if (dates[i] != dates[i - 1] + 1)
        throw std::invalid_argument("RawSeries: dates must be contiguous");
    if (!values.allFinite())
      throw std::invalid_argument("RawSeries: non-finite value in " + name);
  }
};

namespace detail {

// "1960-01" or "1960-01-15" -> months since year 0.
inline int parse_month(const std::string& s) {
  if (s.size() < 7 || s[4] != '-')
    throw std::invalid_argument("bad monthly date '" + s + "'");
  int y = std::stoi(s.substr(0, 4));
  int m = std::stoi(s.substr(5, 2));
  if (m < 1 || m > 12) throw std::invalid_argument("bad month in '" + s + "'");
  return y * 12 + (m - 1);
}

// "1960q1", "1960-Q1" -> Quarter index.
inline int parse_quarter(const std::string& s) {
  size_t qpos = s.find_first_of("qQ");
  if (qpos == std::string::npos || qpos < 4)
    throw std::invalid_argument("bad quarterly date '" + s + "'");
  int y = std::stoi(s.substr(0, 4));
  int q = std::stoi(s.substr(qpos + 1));
  if (q < 1 || q > 4) throw std::invalid_argument("bad quarter in '" + s + "'");
  Quarter d{y, q};
  return d.index();
}

inline bool looks_quarterly(const std::string& s) {
  return s.find_first_of("qQ") != std::string::npos;
}

}  // namespace detail

// Reads one CSV into one series per value column. The first column must hold
// the dates; frequency is inferred from their format.
inline std::vector<RawSeries> load_raw_csv(const std::string& path) {
  CsvTable t = read_csv(path);
  if (t.header.size() < 2)
    throw std::runtime_error(path + ": need a date column and a value column");
  if (t.rows.empty()) throw std::runtime_error(path + ": no data rows");
  bool quarterly = detail::looks_quarterly(t.rows[0][0]);
  std::vector<RawSeries> out(t.header.size() - 1);
  for (size_t j = 1; j < t.header.size(); ++j) {
    out[j - 1].freq = quarterly ? Frequency::Quarterly : Frequency::Monthly;
    out[j - 1].name = t.header[j];
    out[j - 1].values.resize(static_cast<int>(t.rows.size()));
  }
  for (size_t r = 0; r < t.rows.size(); ++r) {
    int d = quarterly ? detail::parse_quarter(t.rows[r][0])
                      : detail::parse_month(t.rows[r][0]);
    for (size_t j = 1; j < t.header.size(); ++j) {
      out[j - 1].dates.push_back(d);
      out[j - 1].values[static_cast<int>(r)] = std::stod(t.rows[r][j]);
    }
  }
  for (auto& s : out) s.validate();
  return out;
}

// Within-quarter arithmetic means; partial quarters at either end are
// dropped and reported through `warnings`.
inline RawSeries monthly_to_quarterly_mean(
    const RawSeries& s, std::vector<std::string>* warnings = nullptr) {
  if (s.freq != Frequency::Monthly)
    throw std::invalid_argument("monthly_to_quarterly_mean: not monthly");
  s.validate();
  RawSeries out;
  out.freq = Frequency::Quarterly;
  out.name = s.name;
  out.units = s.units;
  std::vector<double> vals;
  const int n = static_cast<int>(s.dates.size());
  int i = 0;
  while (i < n) {
    int q = s.dates[i] / 3;            // quarter index of this month
    int first = q * 3;                 // first month of that quarter
    if (s.dates[i] != first || i + 2 >= n || s.dates[i + 2] != first + 2) {
      if (warnings)
        warnings->push_back(s.name + ": dropped partial quarter " +
                            Quarter::from_index(q).str());
      while (i < n && s.dates[i] / 3 == q) ++i;
      continue;
    }
    out.dates.push_back(q);
    vals.push_back((s.values[i] + s.values[i + 1] + s.values[i + 2]) / 3.0);
    i += 3;
  }
  if (vals.empty())
    throw std::runtime_error("monthly_to_quarterly_mean: no complete quarter");
  out.values = Eigen::Map<Eigen::VectorXd>(vals.data(),
                                           static_cast<int>(vals.size()));
  return out;
}

enum class TransformKind { Level, LogDiffAnnualized, PctDiffAnnualized,
                           GapPercent };

inline TransformKind transform_kind(const std::string& s) {
  if (s == "level") return TransformKind::Level;
  if (s == "log_diff_annualized") return TransformKind::LogDiffAnnualized;
  if (s == "pct_diff_annualized") return TransformKind::PctDiffAnnualized;
  if (s == "gap_percent") return TransformKind::GapPercent;
  throw std::invalid_argument("unknown transform '" + s + "'");
}

// One-series transforms; the first observation is lost to differencing.
inline RawSeries transform(const RawSeries& s, TransformKind kind) {
  s.validate();
  RawSeries out = s;
  const int n = static_cast<int>(s.values.size());
  switch (kind) {
    case TransformKind::Level:
      return out;
    case TransformKind::LogDiffAnnualized: {
      if ((s.values.array() <= 0.0).any())
        throw std::domain_error("transform: nonpositive level under log in " +
                                s.name);
      out.values.resize(n - 1);
      out.dates.assign(s.dates.begin() + 1, s.dates.end());
      for (int t = 1; t < n; ++t)
        out.values[t - 1] = 400.0 * std::log(s.values[t] / s.values[t - 1]);
      return out;
    }
    case TransformKind::PctDiffAnnualized: {
      out.values.resize(n - 1);
      out.dates.assign(s.dates.begin() + 1, s.dates.end());
      for (int t = 1; t < n; ++t)
        out.values[t - 1] =
            400.0 * (s.values[t] - s.values[t - 1]) / s.values[t - 1];
      return out;
    }
    case TransformKind::GapPercent:
      throw std::invalid_argument("transform: gap_percent needs two series");
  }
  throw std::invalid_argument("transform: unknown kind");
}

// 100 * (actual - potential) / potential on the overlapping dates.
inline RawSeries gap_percent(const RawSeries& actual,
                             const RawSeries& potential) {
  actual.validate();
  potential.validate();
  if (actual.freq != potential.freq)
    throw std::invalid_argument("gap_percent: frequency mismatch");
  int lo = std::max(actual.dates.front(), potential.dates.front());
  int hi = std::min(actual.dates.back(), potential.dates.back());
  if (lo > hi) throw std::invalid_argument("gap_percent: no overlap");
  RawSeries out;
  out.freq = actual.freq;
  out.name = actual.name + "_gap";
  const int n = hi - lo + 1;
  out.values.resize(n);
  for (int d = lo; d <= hi; ++d) {
    double a = actual.values[d - actual.dates.front()];
    double p = potential.values[d - potential.dates.front()];
    if (p == 0.0) throw std::domain_error("gap_percent: zero potential");
    out.dates.push_back(d);
    out.values[d - lo] = 100.0 * (a - p) / p;
  }
  return out;
}

// Bound recipe: a constant, or a quarterly series plus a fixed offset.
struct BoundSpec {
  bool is_constant = true;
  double constant = 0.0;
  std::string series;    // raw input name when not constant
  double offset = 0.0;
};

struct Recipe {
  std::string output;    // column name in the Dataset
  std::string source;    // raw input name
  std::string source2;   // second input (gap_percent only)
  std::string kind = "level";
};

struct IngestConfig {
  std::string preset = "custom";
  std::vector<Recipe> vars;     // observed columns, constrained column last
  std::vector<Recipe> exog;     // exogenous controls
  BoundSpec bound;
  Quarter start{0, 1}, end{0, 1};   // inclusive window
};

// Appendix-B style presets. Source names are the expected CSV column names.
inline IngestConfig us_preset() {
  IngestConfig c;
  c.preset = "us";
  c.vars = {{"infl", "GDPDEF", "", "log_diff_annualized"},
            {"gap", "GDPC1", "GDPPOT", "gap_percent"},
            {"gs10", "GS10", "", "level"},
            {"ffr", "FEDFUNDS", "", "level"}};
  c.bound.is_constant = true;
  c.bound.constant = 0.2;
  c.start = {1960, 1};
  c.end = {2019, 1};
  return c;
}

inline IngestConfig jp_preset() {
  IngestConfig c;
  c.preset = "jp";
  c.vars = {{"infl", "CPI", "", "pct_diff_annualized"},
            {"gap", "GAP", "", "level"},
            {"jgb9y", "JGB9Y", "", "level"},
            {"call", "CALL", "", "level"}};
  c.exog = {{"trend_growth", "TREND", "", "level"}};
  c.bound.is_constant = false;
  c.bound.series = "IOR";
  c.bound.offset = 0.07;
  c.start = {1985, 3};
  c.end = {2019, 1};
  return c;
}

struct IngestResult {
  Dataset data;
  nlohmann::json manifest;
  std::vector<std::string> warnings;
};

namespace detail {

inline RawSeries to_quarterly(const RawSeries& s,
                              std::vector<std::string>* warnings) {
  return s.freq == Frequency::Monthly ? monthly_to_quarterly_mean(s, warnings)
                                      : s;
}

inline const RawSeries& find_raw(const std::map<std::string, RawSeries>& raws,
                                 const std::string& name) {
  auto it = raws.find(name);
  if (it == raws.end())
    throw std::runtime_error("ingest: missing input series '" + name + "'");
  return it->second;
}

inline RawSeries apply_recipe(const Recipe& r,
                              const std::map<std::string, RawSeries>& raws,
                              std::vector<std::string>* warnings) {
  TransformKind kind = transform_kind(r.kind);
  RawSeries out;
  if (kind == TransformKind::GapPercent) {
    if (r.source2.empty())
      throw std::runtime_error("ingest: gap_percent needs source2 for " +
                               r.output);
    out = gap_percent(to_quarterly(find_raw(raws, r.source), warnings),
                      to_quarterly(find_raw(raws, r.source2), warnings));
  } else {
    out = transform(to_quarterly(find_raw(raws, r.source), warnings), kind);
  }
  out.name = r.output;
  return out;
}

inline std::string series_fingerprint(const RawSeries& s) {
  std::ostringstream ss;
  ss << s.name << ":" << (s.freq == Frequency::Monthly ? "m" : "q");
  for (size_t i = 0; i < s.dates.size(); ++i)
    ss << "," << s.dates[i] << "=" << format_double(s.values[i]);
  return fnv1a_hex(ss.str());
}

}  // namespace detail

inline Eigen::VectorXd build_bound(const BoundSpec& spec,
                                   const std::vector<Quarter>& dates,
                                   const std::map<std::string, RawSeries>& raws,
                                   std::vector<std::string>* warnings = nullptr) {
  Eigen::VectorXd b(static_cast<int>(dates.size()));
  if (spec.is_constant) {
    b.setConstant(spec.constant);
    return b;
  }
  RawSeries s = detail::to_quarterly(detail::find_raw(raws, spec.series),
                                     warnings);
  for (size_t t = 0; t < dates.size(); ++t) {
    int d = dates[t].index();
    if (d < s.dates.front() || d > s.dates.back())
      throw std::runtime_error("ingest: bound series does not cover " +
                               dates[t].str());
    b[static_cast<int>(t)] = s.values[d - s.dates.front()] + spec.offset;
  }
  return b;
}

inline IngestResult assemble(const IngestConfig& config,
                             const std::map<std::string, RawSeries>& raws) {
  if (config.vars.size() < 2)
    throw std::runtime_error("ingest: need at least two observed variables");
  IngestResult res;

  std::vector<RawSeries> cols;
  for (const auto& r : config.vars)
    cols.push_back(detail::apply_recipe(r, raws, &res.warnings));
  for (const auto& r : config.exog)
    cols.push_back(detail::apply_recipe(r, raws, &res.warnings));

  // Common coverage, intersected with the requested window.
  int lo = config.start.index(), hi = config.end.index();
  if (lo > hi) throw std::runtime_error("ingest: empty window");
  for (const auto& s : cols) {
    if (s.dates.front() > lo || s.dates.back() < hi)
      throw std::runtime_error("ingest: '" + s.name +
                               "' does not cover the window");
  }
  const int T = hi - lo + 1;
  const int k = static_cast<int>(config.vars.size());
  const int m = static_cast<int>(config.exog.size());

  Dataset d;
  d.values.resize(T, k);
  d.exog.resize(T, m);
  for (int t = 0; t < T; ++t) d.dates.push_back(Quarter::from_index(lo + t));
  for (int j = 0; j < k + m; ++j) {
    const RawSeries& s = cols[j];
    for (int t = 0; t < T; ++t) {
      double v = s.values[lo + t - s.dates.front()];
      if (j < k) d.values(t, j) = v;
      else d.exog(t, j - k) = v;
    }
    d.names.push_back(s.name);
  }
  d.bound = build_bound(config.bound, d.dates, raws, &res.warnings);
  d.est_start = 0;
  d.validate();
  res.data = d;

  nlohmann::json man;
  man["preset"] = config.preset;
  man["window"] = {config.start.str(), config.end.str()};
  auto recipe_json = [](const Recipe& r) {
    return nlohmann::json{{"output", r.output},
                          {"source", r.source},
                          {"source2", r.source2},
                          {"kind", r.kind}};
  };
  for (const auto& r : config.vars) man["vars"].push_back(recipe_json(r));
  man["exog"] = nlohmann::json::array();
  for (const auto& r : config.exog) man["exog"].push_back(recipe_json(r));
  man["bound"] = {{"constant", config.bound.is_constant},
                  {"value", config.bound.constant},
                  {"series", config.bound.series},
                  {"offset", config.bound.offset}};
  for (const auto& [name, s] : raws)
    man["input_hashes"][name] = detail::series_fingerprint(s);
  man["dataset_hash"] = fnv1a_hex(dataset_to_csv(d));
  man["warnings"] = res.warnings;
  res.manifest = man;
  return res;
}

// Reads a Dataset back from the CSV layout written by dataset_to_csv. The
// layout does not record the split between observed and exogenous columns,
// so the caller supplies the number of trailing exogenous columns.
inline Dataset read_dataset_csv(const std::string& path, int n_exog = 0) {
  CsvTable t = read_csv(path);
  const int ncol = static_cast<int>(t.header.size());
  if (ncol < 4 || t.header.front() != "date" || t.header.back() != "bound")
    throw std::runtime_error(path + ": expected date,<series...>,bound header");
  const int k = ncol - 2 - n_exog;
  if (k < 2)
    throw std::runtime_error(path + ": fewer than two observed columns");
  const int T = static_cast<int>(t.rows.size());
  Dataset d;
  d.values.resize(T, k);
  d.exog.resize(T, n_exog);
  d.bound.resize(T);
  for (int j = 1; j < ncol - 1; ++j) d.names.push_back(t.header[j]);
  for (int r = 0; r < T; ++r) {
    d.dates.push_back(Quarter::from_index(detail::parse_quarter(t.rows[r][0])));
    for (int j = 0; j < k; ++j) d.values(r, j) = std::stod(t.rows[r][j + 1]);
    for (int e = 0; e < n_exog; ++e)
      d.exog(r, e) = std::stod(t.rows[r][k + 1 + e]);
    d.bound[r] = std::stod(t.rows[r][ncol - 1]);
  }
  d.validate();
  return d;
}

}  // namespace cksvar
