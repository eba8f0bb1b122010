#pragma once

// Independent reference computations for the tests. None of these call the
// routine they are used to check.

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "local_regret/rng.hpp"

namespace testing_support {

/// log det through a Cholesky factor (the library uses an eigendecomposition).
inline double logdet_cholesky(const Eigen::MatrixXd& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) return std::nan("");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

inline double log_det_regularizer(const Eigen::MatrixXd& m, int L) {
  return logdet_cholesky(Eigen::MatrixXd::Identity(m.rows(), m.cols()) + L * m);
}

/// Central differences along E_wx + E_xw, halved off the diagonal.
inline Eigen::MatrixXd central_gradient(const std::function<double(const Eigen::MatrixXd&)>& f,
                                        const Eigen::MatrixXd& m, double h) {
  const auto N = m.rows();
  Eigen::MatrixXd g(N, N);
  for (Eigen::Index w = 0; w < N; ++w)
    for (Eigen::Index x = w; x < N; ++x) {
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(N, N);
      d(w, x) += h;
      if (x != w) d(x, w) += h;
      double v = (f(m + d) - f(m - d)) / (2.0 * h);
      if (x != w) v /= 2.0;
      g(w, x) = g(x, w) = v;
    }
  return g;
}

/// -(1/L^2) sum_{a,b,c,d} P_ab P_cd X_cb X_ad by explicit summation.
inline double quadform_by_summation(const Eigen::MatrixXd& x, const Eigen::MatrixXd& p, int L) {
  double s = 0.0;
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b)
      for (int c = 0; c < L; ++c)
        for (int d = 0; d < L; ++d) s += p(a, b) * p(c, d) * x(c, b) * x(a, d);
  return -s / (static_cast<double>(L) * L);
}

inline Eigen::MatrixXd random_block(int L, local_regret::Rng& rng, double lo = -1.0, double hi = 1.0) {
  Eigen::MatrixXd p(L, L);
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b) p(a, b) = local_regret::uniform(rng, lo, hi);
  return p;
}

inline Eigen::MatrixXd random_symmetric(int N, local_regret::Rng& rng, double lo, double hi) {
  Eigen::MatrixXd m(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = a; b < N; ++b) m(a, b) = m(b, a) = local_regret::uniform(rng, lo, hi);
  return m;
}

inline double binomial2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace testing_support
