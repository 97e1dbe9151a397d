// Derivative-free simplex and quasi-Newton minimizers for the likelihood fits.
#pragma once
#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace cksvar {

using ObjFn = std::function<double(const Eigen::VectorXd&)>;

struct OptimResult {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::infinity();
  int evals = 0;
  bool converged = false;
};

inline OptimResult nelder_mead(const ObjFn& fn, const Eigen::VectorXd& x0,
                               double step = 0.1, int max_iter = 2000,
                               double ftol = 1e-9) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  OptimResult res;
  for (int i = 1; i <= n; ++i) {
    double h = step * std::max(1.0, std::fabs(x0[i - 1]));
    pts[i][i - 1] += h;
  }
  for (int i = 0; i <= n; ++i) fv[i] = fn(pts[i]);
  res.evals = n + 1;

  std::vector<int> ord(n + 1);
  for (int it = 0; it < max_iter; ++it) {
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    int best = ord[0], worst = ord[n], second = ord[n - 1];
    if (std::fabs(fv[worst] - fv[best]) <
        ftol * (1.0 + std::fabs(fv[best]))) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    double fr = fn(xr);
    ++res.evals;
    if (fr < fv[ord[0]]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      double fe = fn(xe);
      ++res.evals;
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
    } else {
      bool outside = fr < fv[worst];
      Eigen::VectorXd xc =
          outside ? (centroid + 0.5 * (xr - centroid)).eval()
                  : (centroid + 0.5 * (pts[worst] - centroid)).eval();
      double fc = fn(xc);
      ++res.evals;
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {  // shrink toward best
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          fv[i] = fn(pts[i]);
          ++res.evals;
        }
      }
    }
  }
  int bi = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  res.x = pts[bi];
  res.f = fv[bi];
  return res;
}

inline Eigen::VectorXd numerical_gradient(const ObjFn& fn, const Eigen::VectorXd& x,
                                          double f0, double h0 = 1e-6) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (int i = 0; i < x.size(); ++i) {
    double h = h0 * std::max(1.0, std::fabs(x[i]));
    xp[i] = x[i] + h;
    g[i] = (fn(xp) - f0) / h;
    xp[i] = x[i];
  }
  return g;
}

// BFGS with numerical forward-difference gradients and backtracking line search.
inline OptimResult bfgs(const ObjFn& fn, const Eigen::VectorXd& x0,
                        int max_iter = 200, double gtol = 1e-6,
                        double ftol = 1e-10) {
  const int n = static_cast<int>(x0.size());
  OptimResult res;
  Eigen::VectorXd x = x0;
  double f = fn(x);
  res.evals = 1;
  Eigen::VectorXd g = numerical_gradient(fn, x, f);
  res.evals += n;
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);

  for (int it = 0; it < max_iter; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < gtol) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd p = -H * g;
    if (p.dot(g) >= 0.0) {
      H.setIdentity();
      p = -g;
    }
    double alpha = 1.0, fnew = f;
    Eigen::VectorXd xnew = x;
    const double c1 = 1e-4;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      xnew = x + alpha * p;
      fnew = fn(xnew);
      ++res.evals;
      if (std::isfinite(fnew) && fnew <= f + c1 * alpha * g.dot(p)) {
        ok = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!ok) break;
    Eigen::VectorXd gnew = numerical_gradient(fn, xnew, fnew);
    res.evals += n;
    Eigen::VectorXd s = xnew - x, y = gnew - g;
    double sy = s.dot(y);
    if (sy > 1e-12) {
      Eigen::VectorXd Hy = H * y;
      double yHy = y.dot(Hy);
      H += ((sy + yHy) / (sy * sy)) * (s * s.transpose()) -
           (Hy * s.transpose() + s * Hy.transpose()) / sy;
    }
    bool fdone = std::fabs(f - fnew) < ftol * (1.0 + std::fabs(f));
    x = xnew;
    f = fnew;
    g = gnew;
    if (fdone) {
      res.converged = true;
      break;
    }
  }
  res.x = x;
  res.f = f;
  return res;
}

// Symmetric central-difference Hessian, used for standard errors.
inline Eigen::MatrixXd numerical_hessian(const ObjFn& fn, const Eigen::VectorXd& x,
                                         double h0 = 1e-4) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd Hm(n, n);
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) h[i] = h0 * std::max(1.0, std::fabs(x[i]));
  double f0 = fn(x);
  Eigen::VectorXd fp(n), fm(n);
  Eigen::VectorXd xp = x;
  for (int i = 0; i < n; ++i) {
    xp[i] = x[i] + h[i];
    fp[i] = fn(xp);
    xp[i] = x[i] - h[i];
    fm[i] = fn(xp);
    xp[i] = x[i];
  }
  for (int i = 0; i < n; ++i) {
    Hm(i, i) = (fp[i] - 2.0 * f0 + fm[i]) / (h[i] * h[i]);
    for (int j = i + 1; j < n; ++j) {
      xp[i] = x[i] + h[i];
      xp[j] = x[j] + h[j];
      double fpp = fn(xp);
      xp[j] = x[j] - h[j];
      double fpm = fn(xp);
      xp[i] = x[i] - h[i];
      double fmm = fn(xp);
      xp[j] = x[j] + h[j];
      double fmp = fn(xp);
      xp[i] = x[i];
      xp[j] = x[j];
      Hm(i, j) = Hm(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
    }
  }
  return Hm;
}

}  // namespace cksvar
