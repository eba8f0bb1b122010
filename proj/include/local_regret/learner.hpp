#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "local_regret/environments.hpp"
#include "local_regret/polytope.hpp"
#include "local_regret/rng.hpp"

namespace local_regret {

struct InnerSolverConfig {
  double step_size = 0.05;
  int max_iters = 500;
  double grad_tol = 1e-6;

  /// step 0.1 / L, 500 iterations, gradient tolerance 1e-6.
  static InnerSolverConfig defaults(int n_labels);
  void validate() const;
};

struct InnerSolveResult {
  PseudoMomentMatrix matrix;
  double objective = 0.0;
  int iterations = 0;
  double residual = 0.0;  // projected-gradient norm at the returned iterate
  bool converged = false;
};

/// F(M) = <C, M> + log det(I + L M), Frobenius inner product.
double ftrl_objective(const Eigen::MatrixXd& linear, const Eigen::MatrixXd& m, int n_labels);

/// Maximizes F over the polytope by projected gradient ascent from
/// warm_start, M <- project(M + eta * (C + L (I + L M)^{-1})), with
/// Armijo backtracking on eta. Stops when the projected-gradient norm
/// drops below cfg.grad_tol or after cfg.max_iters steps, returning the
/// best iterate either way.
InnerSolveResult inner_solve(const Eigen::MatrixXd& linear, const PseudoMomentMatrix& warm_start,
                             const InnerSolverConfig& cfg);

/// sqrt(D / (gamma T)) with D = nL and gamma = 4.
double choose_nu(ProblemDims dims, std::size_t rounds);

/// Expected payoff of the fractional point: sum_{a,b} P(a, b) M_{(i,a),(j,b)}.
double expected_payoff(const PseudoMomentMatrix& m, const PayoffFunction& p);

/// Sum of payoff blocks, one L x L block per unordered item pair (stored
/// with the smaller item first).
class CumulativePayoff {
 public:
  explicit CumulativePayoff(ProblemDims dims) : dims_(dims) {}

  void add(const PayoffFunction& p);
  /// Dense symmetric matrix C with <C, M> = sum over stored pairs of
  /// <block, M_ij>: each block contributes half to (i, j) and half,
  /// transposed, to (j, i).
  Eigen::MatrixXd dense() const;
  bool empty() const { return blocks_.empty(); }
  double max_abs_entry() const;

 private:
  ProblemDims dims_;
  std::map<std::pair<int, int>, Eigen::MatrixXd> blocks_;
};

struct Prediction {
  int a = 0;
  int b = 0;
  bool fell_back = false;
};

/// A player of the online local learning game.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;
  virtual Prediction predict(int i, int j, Rng& rng) = 0;
  virtual void update(const PayoffFunction& payoff) = 0;
  /// Payoff of the learner's current randomized strategy on p.
  virtual double expected_payoff(const PayoffFunction& p) const = 0;
  virtual int last_inner_iterations() const { return 0; }
  virtual double last_inner_residual() const { return 0.0; }
};

/// Follow-the-regularized-leader over the pseudo-moment polytope with the
/// log-determinant regularizer. Rounds must be fed in order.
class FtrlLearner final : public OnlineLearner {
 public:
  FtrlLearner(ProblemDims dims, double nu, InnerSolverConfig cfg);

  Prediction predict(int i, int j, Rng& rng) override;
  void update(const PayoffFunction& payoff) override;
  double expected_payoff(const PayoffFunction& p) const override;
  int last_inner_iterations() const override { return last_.iterations; }
  double last_inner_residual() const override { return last_.residual; }

  const PseudoMomentMatrix& current() const { return current_; }
  const InnerSolveResult& last_solve() const { return last_; }
  double nu() const { return nu_; }
  ProblemDims dims() const { return dims_; }

 private:
  ProblemDims dims_;
  double nu_;
  InnerSolverConfig cfg_;
  CumulativePayoff cumulative_;
  PseudoMomentMatrix current_;
  InnerSolveResult last_;
};

/// Plays uniformly random labels; ignores payoffs.
class UniformLearner final : public OnlineLearner {
 public:
  explicit UniformLearner(int n_labels) : n_labels_(n_labels) {}
  Prediction predict(int i, int j, Rng& rng) override;
  void update(const PayoffFunction&) override {}
  double expected_payoff(const PayoffFunction& p) const override { return p.block.mean(); }

 private:
  int n_labels_;
};

struct RoundRecord {
  std::size_t t = 0;
  int i = 0;
  int j = 0;
  int a = 0;
  int b = 0;
  double payoff = 0.0;
  double expected_payoff = 0.0;
  int inner_iters = 0;
  double inner_residual = 0.0;
};

struct GameTrace {
  std::vector<RoundRecord> rounds;
  double total_payoff = 0.0;
  double total_expected_payoff = 0.0;
};

/// Runs the learner against the environment to completion. Inner-solver
/// statistics in each record describe the update that produced the
/// strategy used in that round.
GameTrace play(Environment& env, OnlineLearner& learner, Rng& rng);

}  // namespace local_regret
