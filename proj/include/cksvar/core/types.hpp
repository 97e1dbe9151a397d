// Domain types shared by every module: datasets, model specifications,
// structural and reduced-form parameter sets, regime paths.
#pragma once
#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cksvar {

struct Quarter {
  int year = 0;
  int q = 1;  // 1..4
  int index() const { return year * 4 + (q - 1); }
  static Quarter from_index(int idx) {
    Quarter d;
    d.year = idx >= 0 ? idx / 4 : -((-idx + 3) / 4);
    d.q = idx - d.year * 4 + 1;
    return d;
  }
  Quarter next() const { return from_index(index() + 1); }
  std::string str() const {
    return std::to_string(year) + "q" + std::to_string(q);
  }
  bool operator==(const Quarter&) const = default;
};

struct Dataset {
  std::vector<Quarter> dates;       // length T (may be empty for synthetic data)
  Eigen::MatrixXd values;           // T x k
  Eigen::VectorXd bound;            // length T
  Eigen::MatrixXd exog;             // T x m (0 columns if none)
  std::vector<std::string> names;   // k + m labels
  int est_start = 0;                // first row inside the estimation window

  int T() const { return static_cast<int>(values.rows()); }
  int k() const { return static_cast<int>(values.cols()); }
  int m() const { return static_cast<int>(exog.cols()); }

  void validate() const {
    if (values.rows() == 0 || values.cols() < 2)
      throw std::invalid_argument("Dataset: need T > 0 and k >= 2");
    if (bound.size() != values.rows())
      throw std::invalid_argument("Dataset: bound length mismatch");
    if (exog.rows() != 0 && exog.rows() != values.rows())
      throw std::invalid_argument("Dataset: exog length mismatch");
    if (!values.allFinite() || !bound.allFinite() ||
        (exog.size() > 0 && !exog.allFinite()))
      throw std::invalid_argument("Dataset: non-finite values");
  }
};

enum class Variant { CKSVAR, KSVAR, CSVAR };

inline std::string variant_name(Variant v) {
  switch (v) {
    case Variant::CKSVAR: return "cksvar";
    case Variant::KSVAR: return "ksvar";
    case Variant::CSVAR: return "csvar";
  }
  return "?";
}

// A zero restriction on one reduced-form coefficient cell.
// block: "C11" | "C12" | "C12star" | "C21" | "C22" | "C22star" | "betatilde"
struct ZeroRestriction {
  std::string block;
  int row = 0;
  int col = 0;
};

struct ModelSpec {
  Variant variant = Variant::CKSVAR;
  int p = 1;
  int constrained_index = -1;  // -1 means last column
  bool include_intercept = true;
  std::vector<int> exog_equations;  // empty: exog enters every equation
  std::vector<ZeroRestriction> restrictions;

  int y2_col(int k) const {
    return constrained_index < 0 ? k - 1 : constrained_index;
  }
  void validate(int k) const {
    if (p < 1) throw std::invalid_argument("ModelSpec: p must be >= 1");
    if (y2_col(k) < 0 || y2_col(k) >= k)
      throw std::invalid_argument("ModelSpec: constrained_index out of range");
  }
};

// Dimensions of the regressor blocks for a (data, spec) pair.
struct Layout {
  int k = 0, p = 0, m = 0;
  bool intercept = true;
  int y2 = 0;                 // constrained column
  std::vector<int> y1_cols;   // remaining columns, original order
  int n1 = 0;                 // intercept + p*(k-1) Y1 lags + m exog

  static Layout make(const Dataset& data, const ModelSpec& spec) {
    Layout L;
    L.k = data.k();
    L.p = spec.p;
    L.m = data.m();
    L.intercept = spec.include_intercept;
    L.y2 = spec.y2_col(L.k);
    for (int j = 0; j < L.k; ++j)
      if (j != L.y2) L.y1_cols.push_back(j);
    L.n1 = (L.intercept ? 1 : 0) + L.p * (L.k - 1) + L.m;
    return L;
  }
};

struct StructuralParams {
  Eigen::VectorXd beta;        // (k-1)
  double lambda = 0.0;         // in [0,1]
  double alpha = 0.0;          // >= 0
  Eigen::RowVectorXd gamma;    // (k-1)
  Eigen::MatrixXd B1;          // (k-1) x (n1 + p): coefficients on [X1, Y2 lags]
  Eigen::MatrixXd B12star;     // (k-1) x p: coefficients on latent Y2* lags
  Eigen::RowVectorXd B2;       // 1 x (n1 + p)
  Eigen::RowVectorXd B22star;  // 1 x p
  Eigen::MatrixXd A11inv;      // (k-1) x (k-1)
  double A22starinv = 1.0;

  double xi() const { return lambda * (1.0 + alpha); }

  void validate() const {
    if (lambda < 0.0 || lambda > 1.0)
      throw std::invalid_argument("StructuralParams: lambda outside [0,1]");
    if (alpha < 0.0) throw std::invalid_argument("StructuralParams: alpha < 0");
    if (A22starinv == 0.0)
      throw std::invalid_argument("StructuralParams: A22starinv is zero");
    double gb = (gamma * beta)(0);
    if (std::fabs(1.0 - xi() * gb) < 1e-8)
      throw std::invalid_argument("StructuralParams: 1 - xi*gamma*beta near zero");
    if (std::fabs(A11inv.determinant()) < 1e-12)
      throw std::invalid_argument("StructuralParams: A11inv singular");
  }
};

struct ReducedFormParams {
  Eigen::MatrixXd C11;          // (k-1) x n1
  Eigen::MatrixXd C12;          // (k-1) x p, observed Y2 lags
  Eigen::MatrixXd C12star;      // (k-1) x p, kink lags min(Ybar2 - b, 0)
  Eigen::RowVectorXd C21;       // 1 x n1
  Eigen::RowVectorXd C22;       // 1 x p
  Eigen::RowVectorXd C22star;   // 1 x p
  Eigen::VectorXd betatilde;    // (k-1)
  Eigen::MatrixXd L;            // k x k lower-triangular factor, Omega = L L'

  Eigen::MatrixXd Omega() const { return L * L.transpose(); }

  static ReducedFormParams zeros(const Layout& lay) {
    ReducedFormParams rf;
    rf.C11 = Eigen::MatrixXd::Zero(lay.k - 1, lay.n1);
    rf.C12 = Eigen::MatrixXd::Zero(lay.k - 1, lay.p);
    rf.C12star = Eigen::MatrixXd::Zero(lay.k - 1, lay.p);
    rf.C21 = Eigen::RowVectorXd::Zero(lay.n1);
    rf.C22 = Eigen::RowVectorXd::Zero(lay.p);
    rf.C22star = Eigen::RowVectorXd::Zero(lay.p);
    rf.betatilde = Eigen::VectorXd::Zero(lay.k - 1);
    rf.L = Eigen::MatrixXd::Identity(lay.k, lay.k);
    return rf;
  }

  void validate(const Layout& lay) const {
    auto chk = [](bool ok, const char* msg) {
      if (!ok) throw std::invalid_argument(std::string("ReducedFormParams: ") + msg);
    };
    chk(C11.rows() == lay.k - 1 && C11.cols() == lay.n1, "C11 shape");
    chk(C12.rows() == lay.k - 1 && C12.cols() == lay.p, "C12 shape");
    chk(C12star.rows() == lay.k - 1 && C12star.cols() == lay.p, "C12star shape");
    chk(C21.cols() == lay.n1 && C22.cols() == lay.p && C22star.cols() == lay.p,
        "Y2 row shapes");
    chk(betatilde.size() == lay.k - 1, "betatilde shape");
    chk(L.rows() == lay.k && L.cols() == lay.k, "L shape");
    for (int i = 0; i < lay.k; ++i)
      chk(L(i, i) > 0.0, "Omega factor diagonal must be positive");
  }
};

struct RegimePath {
  Eigen::VectorXi D;                          // length T, 1 at ELB
  std::vector<std::pair<int, int>> spells;    // maximal runs [start, end]
  double share() const {
    return D.size() ? D.cast<double>().mean() : 0.0;
  }
};

inline RegimePath detect_regimes(const Dataset& data, const ModelSpec& spec,
                                 double tol = 1e-6) {
  data.validate();
  const int T = data.T();
  const int y2 = spec.y2_col(data.k());
  RegimePath rp;
  rp.D.resize(T);
  for (int t = 0; t < T; ++t)
    rp.D[t] = data.values(t, y2) <= data.bound[t] + tol ? 1 : 0;
  for (int t = 0; t < T;) {
    if (rp.D[t]) {
      int s = t;
      while (t + 1 < T && rp.D[t + 1]) ++t;
      rp.spells.emplace_back(s, t);
    }
    ++t;
  }
  return rp;
}

inline RegimePath detect_regimes(const Dataset& data, double tol = 1e-6) {
  return detect_regimes(data, ModelSpec{}, tol);
}

}  // namespace cksvar
