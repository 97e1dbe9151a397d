// Maps between ReducedFormParams and the unconstrained optimizer vector.
// Covariance uses a log-Cholesky parameterization; zero restrictions are
// boolean masks over the coefficient blocks.
#pragma once
#include "cksvar/core/types.hpp"

#include <string>
#include <vector>

namespace cksvar {

struct ParamPacker {
  Layout lay;
  Eigen::ArrayXXi f_C11, f_C12, f_C12star;   // 1 = free
  Eigen::ArrayXi f_C21, f_C22, f_C22star, f_betatilde;
  std::vector<std::string> names;
  int n_coef = 0;   // free coefficient cells
  int n_chol = 0;   // k(k+1)/2

  static ParamPacker make(const Layout& lay, const ModelSpec& spec) {
    ParamPacker P;
    P.lay = lay;
    const int k1 = lay.k - 1;
    P.f_C11 = Eigen::ArrayXXi::Ones(k1, lay.n1);
    P.f_C12 = Eigen::ArrayXXi::Ones(k1, lay.p);
    P.f_C12star = Eigen::ArrayXXi::Ones(k1, lay.p);
    P.f_C21 = Eigen::ArrayXi::Ones(lay.n1);
    P.f_C22 = Eigen::ArrayXi::Ones(lay.p);
    P.f_C22star = Eigen::ArrayXi::Ones(lay.p);
    P.f_betatilde = Eigen::ArrayXi::Ones(k1);

    if (spec.variant == Variant::KSVAR) {
      P.f_C12star.setZero();
      P.f_C22star.setZero();
    } else if (spec.variant == Variant::CSVAR) {
      P.f_C12.setZero();
      P.f_C22.setZero();
      P.f_betatilde.setZero();
    }
    for (const auto& r : spec.restrictions) {
      if (r.block == "C11") P.f_C11(r.row, r.col) = 0;
      else if (r.block == "C12") P.f_C12(r.row, r.col) = 0;
      else if (r.block == "C12star") P.f_C12star(r.row, r.col) = 0;
      else if (r.block == "C21") P.f_C21(r.col) = 0;
      else if (r.block == "C22") P.f_C22(r.col) = 0;
      else if (r.block == "C22star") P.f_C22star(r.col) = 0;
      else if (r.block == "betatilde") P.f_betatilde(r.row) = 0;
      else throw std::invalid_argument("unknown restriction block " + r.block);
    }

    auto add2 = [&](const char* nm, const Eigen::ArrayXXi& f) {
      for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j)
          if (f(i, j)) {
            P.names.push_back(std::string(nm) + "(" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
            ++P.n_coef;
          }
    };
    auto add1 = [&](const char* nm, const Eigen::ArrayXi& f) {
      for (int j = 0; j < f.size(); ++j)
        if (f(j)) {
          P.names.push_back(std::string(nm) + "(" + std::to_string(j) + ")");
          ++P.n_coef;
        }
    };
    add2("C11", P.f_C11);
    add2("C12", P.f_C12);
    add2("C12star", P.f_C12star);
    add1("C21", P.f_C21);
    add1("C22", P.f_C22);
    add1("C22star", P.f_C22star);
    add1("betatilde", P.f_betatilde);
    P.n_chol = lay.k * (lay.k + 1) / 2;
    for (int j = 0; j < lay.k; ++j)
      for (int i = j; i < lay.k; ++i)
        P.names.push_back(i == j ? "logL(" + std::to_string(i) + "," +
                                       std::to_string(j) + ")"
                                 : "L(" + std::to_string(i) + "," +
                                       std::to_string(j) + ")");
    return P;
  }

  int n_free() const { return n_coef + n_chol; }

  Eigen::VectorXd pack(const ReducedFormParams& rf) const {
    Eigen::VectorXd th(n_free());
    int c = 0;
    auto put2 = [&](const Eigen::MatrixXd& M, const Eigen::ArrayXXi& f) {
      for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j)
          if (f(i, j)) th[c++] = M(i, j);
    };
    auto put1 = [&](const Eigen::RowVectorXd& v, const Eigen::ArrayXi& f) {
      for (int j = 0; j < f.size(); ++j)
        if (f(j)) th[c++] = v(j);
    };
    put2(rf.C11, f_C11);
    put2(rf.C12, f_C12);
    put2(rf.C12star, f_C12star);
    put1(rf.C21, f_C21);
    put1(rf.C22, f_C22);
    put1(rf.C22star, f_C22star);
    put1(rf.betatilde.transpose(), f_betatilde);
    for (int j = 0; j < lay.k; ++j)
      for (int i = j; i < lay.k; ++i)
        th[c++] = i == j ? std::log(rf.L(i, j)) : rf.L(i, j);
    return th;
  }

  ReducedFormParams unpack(const Eigen::VectorXd& th) const {
    ReducedFormParams rf = ReducedFormParams::zeros(lay);
    int c = 0;
    auto get2 = [&](Eigen::MatrixXd& M, const Eigen::ArrayXXi& f) {
      for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j)
          if (f(i, j)) M(i, j) = th[c++];
    };
    auto get1r = [&](Eigen::RowVectorXd& v, const Eigen::ArrayXi& f) {
      for (int j = 0; j < f.size(); ++j)
        if (f(j)) v(j) = th[c++];
    };
    get2(rf.C11, f_C11);
    get2(rf.C12, f_C12);
    get2(rf.C12star, f_C12star);
    get1r(rf.C21, f_C21);
    get1r(rf.C22, f_C22);
    get1r(rf.C22star, f_C22star);
    for (int j = 0; j < f_betatilde.size(); ++j)
      if (f_betatilde(j)) rf.betatilde(j) = th[c++];
    rf.L.setZero();
    for (int j = 0; j < lay.k; ++j)
      for (int i = j; i < lay.k; ++i)
        rf.L(i, j) = i == j ? std::exp(std::min(th[c++], 40.0)) : th[c++];
    return rf;
  }
};

}  // namespace cksvar
