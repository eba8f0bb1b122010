#include "local_regret/regularizer.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace local_regret {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> shifted_eig(const Eigen::MatrixXd& m, int n_labels) {
  if (m.rows() != m.cols()) throw std::invalid_argument("regularizer: matrix must be square");
  if (n_labels < 1) throw std::invalid_argument("regularizer: n_labels must be >= 1");
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(m.rows(), m.cols()) + n_labels * m;
  b = (0.5 * (b + b.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw std::runtime_error("regularizer: eigendecomposition failed");
  const double min_eig = eig.eigenvalues().minCoeff();
  if (!(min_eig > 0.0)) {
    std::ostringstream os;
    os << "regularizer: I + L*M is not positive definite (min eigenvalue " << min_eig << ")";
    throw std::domain_error(os.str());
  }
  return eig;
}

}  // namespace

RegularizerEval eval_regularizer(const Eigen::MatrixXd& m, int n_labels) {
  auto eig = shifted_eig(m, n_labels);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const Eigen::MatrixXd& v = eig.eigenvectors();
  RegularizerEval out;
  out.value = lam.array().log().sum();
  Eigen::MatrixXd inv = v * lam.cwiseInverse().asDiagonal() * v.transpose();
  out.gradient = n_labels * 0.5 * (inv + inv.transpose());
  return out;
}

Eigen::MatrixXd shifted_inverse(const Eigen::MatrixXd& m, int n_labels) {
  auto eig = shifted_eig(m, n_labels);
  const Eigen::MatrixXd& v = eig.eigenvectors();
  Eigen::MatrixXd inv = v * eig.eigenvalues().cwiseInverse().asDiagonal() * v.transpose();
  return 0.5 * (inv + inv.transpose());
}

double diameter_bound(ProblemDims dims) {
  return static_cast<double>(dims.n_items) * dims.n_labels;
}

QuadFormResult inv_hessian_quadform(const PseudoMomentMatrix& m, int i, int j,
                                    const Eigen::MatrixXd& payoff) {
  const int L = m.dims.n_labels;
  const int n = m.dims.n_items;
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("inv_hessian_quadform: item out of range");
  if (payoff.rows() != L || payoff.cols() != L) {
    throw std::invalid_argument("inv_hessian_quadform: payoff block must be L x L");
  }
  Eigen::MatrixXd x = L * m.block(i, j);
  if (i == j) x += Eigen::MatrixXd::Identity(L, L);
  QuadFormResult out;
  out.block_sum = x.sum();
  const Eigen::MatrixXd xpt = x * payoff.transpose();
  out.value = -(xpt * xpt).trace() / (static_cast<double>(L) * L);
  return out;
}

Eigen::MatrixXd dense_hessian(const PseudoMomentMatrix& m) {
  const int N = m.dims.side();
  if (N > kMaxDenseHessianSide) throw std::invalid_argument("dense_hessian: nL > 8 refused");
  const double L = m.dims.n_labels;
  const Eigen::MatrixXd binv = shifted_inverse(m.entries, m.dims.n_labels);
  Eigen::MatrixXd h(N * N, N * N);
  for (int w = 0; w < N; ++w)
    for (int x = 0; x < N; ++x)
      for (int y = 0; y < N; ++y)
        for (int z = 0; z < N; ++z) h(w * N + x, y * N + z) = -L * L * binv(x, y) * binv(z, w);
  return h;
}

Eigen::MatrixXd dense_inverse_hessian(const PseudoMomentMatrix& m) {
  const int N = m.dims.side();
  if (N > kMaxDenseHessianSide) throw std::invalid_argument("dense_inverse_hessian: nL > 8 refused");
  const double L = m.dims.n_labels;
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(N, N) + L * m.entries;
  Eigen::MatrixXd h(N * N, N * N);
  for (int w = 0; w < N; ++w)
    for (int x = 0; x < N; ++x)
      for (int y = 0; y < N; ++y)
        for (int z = 0; z < N; ++z) h(w * N + x, y * N + z) = -b(x, y) * b(w, z) / (L * L);
  return h;
}

HessianCheck hessian_inverse_identity_check(const PseudoMomentMatrix& m, double fd_step) {
  const int N = m.dims.side();
  if (N > kMaxDenseHessianSide) {
    throw std::invalid_argument("hessian_inverse_identity_check: nL = " + std::to_string(N) +
                                " exceeds " + std::to_string(kMaxDenseHessianSide));
  }
  const int L = m.dims.n_labels;
  const Eigen::MatrixXd h = dense_hessian(m);
  const Eigen::MatrixXd ht = dense_inverse_hessian(m);
  HessianCheck out;
  out.identity_deviation =
      (h * ht - Eigen::MatrixXd::Identity(N * N, N * N)).cwiseAbs().maxCoeff();
  Eigen::MatrixXd hs = 0.5 * (h + h.transpose());
  out.max_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hs, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();

  // Symmetric coordinate directions E_wx + E_xw (E_ww on the diagonal).
  std::vector<Eigen::MatrixXd> dirs;
  for (int w = 0; w < N; ++w) {
    for (int x = w; x < N; ++x) {
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(N, N);
      d(w, x) = 1.0;
      d(x, w) = 1.0;
      dirs.push_back(std::move(d));
    }
  }
  const auto K = static_cast<Eigen::Index>(dirs.size());
  Eigen::MatrixXd closed(K, K), fd(K, K);
  auto f = [&](const Eigen::MatrixXd& x) { return eval_regularizer(x, L).value; };
  const double h2 = fd_step * fd_step;
  for (Eigen::Index u = 0; u < K; ++u) {
    Eigen::Map<const Eigen::VectorXd> du(dirs[u].data(), N * N);
    for (Eigen::Index v = u; v < K; ++v) {
      Eigen::Map<const Eigen::VectorXd> dv(dirs[v].data(), N * N);
      // Column-major vec of a symmetric direction equals its row-major vec.
      closed(u, v) = closed(v, u) = du.dot(h * dv);
      const Eigen::MatrixXd a = fd_step * dirs[u];
      const Eigen::MatrixXd b = fd_step * dirs[v];
      const double val = (f(m.entries + a + b) - f(m.entries + a - b) - f(m.entries - a + b) +
                          f(m.entries - a - b)) / (4.0 * h2);
      fd(u, v) = fd(v, u) = val;
    }
  }
  out.fd_relative_error = (closed - fd).norm() / closed.norm();
  return out;
}

}  // namespace local_regret
