#pragma once

#include <Eigen/Dense>

#include "local_regret/polytope.hpp"

namespace local_regret {

/// Value and gradient of R(M) = log det(I + L M).
struct RegularizerEval {
  double value = 0.0;
  Eigen::MatrixXd gradient;  // L (I + L M)^{-1}, symmetric
};

/// Evaluates the log-determinant regularizer through one symmetric
/// eigendecomposition of I + L M. Throws std::domain_error naming the
/// smallest eigenvalue when I + L M is not positive definite.
RegularizerEval eval_regularizer(const Eigen::MatrixXd& m, int n_labels);
inline RegularizerEval eval_regularizer(const PseudoMomentMatrix& m) {
  return eval_regularizer(m.entries, m.dims.n_labels);
}

/// (I + L M)^{-1} via the same eigendecomposition.
Eigen::MatrixXd shifted_inverse(const Eigen::MatrixXd& m, int n_labels);

/// Upper bound n L on |R| over the polytope.
double diameter_bound(ProblemDims dims);

struct QuadFormResult {
  double value = 0.0;      // P^T [Hessian of R]^{-1} P
  double block_sum = 0.0;  // sum of the (i, j) block of I + L M
};

/// Quadratic form of the inverse Hessian in a payoff direction supported on
/// the (i, j) block. With X the (i, j) block of I + L M,
///   value = -(1/L^2) sum_{a,b,c,d} P_ab P_cd X_cb X_ad = -(1/L^2) tr(X P^T X P^T),
/// so the (nL)^2 x (nL)^2 Hessian is never formed.
QuadFormResult inv_hessian_quadform(const PseudoMomentMatrix& m, int i, int j,
                                    const Eigen::MatrixXd& payoff);

/// Dense Hessian H_{(w,x),(y,z)} = -L^2 B^{-1}_{x,y} B^{-1}_{z,w}, B = I + L M.
/// Row/column index of the pair (w, x) is w * nL + x. Test-scale only.
Eigen::MatrixXd dense_hessian(const PseudoMomentMatrix& m);

/// Dense closed-form inverse Hessian -(1/L^2) B_{x,y} B_{w,z}.
Eigen::MatrixXd dense_inverse_hessian(const PseudoMomentMatrix& m);

struct HessianCheck {
  double identity_deviation = 0.0;  // max |H Htilde - I|
  double fd_relative_error = 0.0;   // ||H_sym - FD||_F / ||H_sym||_F over symmetric directions
  double max_eigenvalue = 0.0;      // of the symmetrized dense Hessian; <= 0 for concavity
};

inline constexpr int kMaxDenseHessianSide = 8;

/// Multiplies the closed-form Hessian by its claimed inverse and compares
/// the Hessian with central second differences of eval_regularizer along
/// symmetric coordinate directions (step fd_step). Refuses nL > 8.
HessianCheck hessian_inverse_identity_check(const PseudoMomentMatrix& m, double fd_step = 1e-4);

}  // namespace local_regret
