#include "local_regret/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "local_regret/regularizer.hpp"

namespace local_regret {

InnerSolverConfig InnerSolverConfig::defaults(int n_labels) {
  InnerSolverConfig cfg;
  cfg.step_size = 0.1 / n_labels;
  return cfg;
}

void InnerSolverConfig::validate() const {
  if (!(step_size > 0) || max_iters < 1 || !(grad_tol > 0)) {
    throw std::invalid_argument("InnerSolverConfig: step_size, max_iters and grad_tol must be positive");
  }
}

double ftrl_objective(const Eigen::MatrixXd& linear, const Eigen::MatrixXd& m, int n_labels) {
  return linear.cwiseProduct(m).sum() + eval_regularizer(m, n_labels).value;
}

InnerSolveResult inner_solve(const Eigen::MatrixXd& linear, const PseudoMomentMatrix& warm_start,
                             const InnerSolverConfig& cfg) {
  cfg.validate();
  const ProblemDims dims = warm_start.dims;
  const int L = dims.n_labels;
  if (linear.rows() != dims.side() || linear.cols() != dims.side()) {
    throw std::invalid_argument("inner_solve: linear term does not match dims");
  }

  InnerSolveResult out;
  out.matrix = warm_start;
  out.objective = ftrl_objective(linear, warm_start.entries, L);
  out.residual = std::numeric_limits<double>::infinity();

  Eigen::MatrixXd m = warm_start.entries;
  double f = out.objective;
  Eigen::MatrixXd grad = linear + eval_regularizer(m, L).gradient;
  constexpr double kMinStep = 1e-14;
  constexpr double kMaxGrowth = 64.0;

  double eta = cfg.step_size;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    bool accepted = false;
    Eigen::MatrixXd next;
    double f_next = 0.0;
    double step_norm = 0.0;
    while (eta >= kMinStep) {
      next = project(m + eta * grad, dims).matrix.entries;
      const Eigen::MatrixXd d = next - m;
      step_norm = d.norm();
      f_next = ftrl_objective(linear, next, L);
      // Sufficient ascent for an eta-smooth concave model.
      if (f_next >= f + grad.cwiseProduct(d).sum() - step_norm * step_norm / (2.0 * eta) - 1e-12) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    out.iterations = it;
    if (!accepted) break;

    const double residual = step_norm / eta;
    m = std::move(next);
    f = f_next;
    grad = linear + eval_regularizer(m, L).gradient;
    if (f >= out.objective - 1e-12) {
      out.matrix = PseudoMomentMatrix(dims, m);
      out.objective = f;
    }
    out.residual = residual;
    if (residual < cfg.grad_tol) {
      out.converged = true;
      break;
    }
    eta = std::min(2.0 * eta, kMaxGrowth * cfg.step_size);
  }
  return out;
}

double choose_nu(ProblemDims dims, std::size_t rounds) {
  if (rounds < 1) throw std::invalid_argument("choose_nu: need T >= 1");
  return std::sqrt(static_cast<double>(dims.side()) / (4.0 * static_cast<double>(rounds)));
}

double expected_payoff(const PseudoMomentMatrix& m, const PayoffFunction& p) {
  return p.block.cwiseProduct(m.block(p.i, p.j)).sum();
}

void CumulativePayoff::add(const PayoffFunction& p) {
  const int L = dims_.n_labels;
  if (p.block.rows() != L) throw std::invalid_argument("CumulativePayoff: block is not L x L");
  if (p.i >= dims_.n_items || p.j >= dims_.n_items) throw std::out_of_range("CumulativePayoff: item out of range");
  const bool swap = p.i > p.j;
  const auto key = swap ? std::make_pair(p.j, p.i) : std::make_pair(p.i, p.j);
  auto [it, inserted] = blocks_.try_emplace(key, Eigen::MatrixXd::Zero(L, L));
  if (swap) it->second += p.block.transpose();
  else it->second += p.block;
}

Eigen::MatrixXd CumulativePayoff::dense() const {
  const int L = dims_.n_labels;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dims_.side(), dims_.side());
  for (const auto& [key, block] : blocks_) {
    c.block(key.first * L, key.second * L, L, L) += 0.5 * block;
    c.block(key.second * L, key.first * L, L, L) += 0.5 * block.transpose();
  }
  return c;
}

double CumulativePayoff::max_abs_entry() const {
  double out = 0.0;
  for (const auto& kv : blocks_) out = std::max(out, kv.second.cwiseAbs().maxCoeff());
  return out;
}

FtrlLearner::FtrlLearner(ProblemDims dims, double nu, InnerSolverConfig cfg)
    : dims_(dims), nu_(nu), cfg_(cfg), cumulative_(dims) {
  if (!(nu > 0)) throw std::invalid_argument("FtrlLearner: nu must be positive");
  cfg_.validate();
  // x_1 maximizes the regularizer alone.
  last_ = inner_solve(Eigen::MatrixXd::Zero(dims.side(), dims.side()), uniform_matrix(dims), cfg_);
  current_ = last_.matrix;
}

Prediction FtrlLearner::predict(int i, int j, Rng& rng) {
  LabelPair s = sample_block(current_, i, j, rng);
  return {s.a, s.b, s.fell_back};
}

void FtrlLearner::update(const PayoffFunction& payoff) {
  if (payoff.block.rows() != dims_.n_labels) throw std::invalid_argument("FtrlLearner: wrong block size");
  cumulative_.add(payoff);
  last_ = inner_solve(nu_ * cumulative_.dense(), current_, cfg_);
  current_ = last_.matrix;
}

double FtrlLearner::expected_payoff(const PayoffFunction& p) const {
  return local_regret::expected_payoff(current_, p);
}

Prediction UniformLearner::predict(int, int, Rng& rng) {
  Prediction p;
  p.a = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n_labels_)));
  p.b = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n_labels_)));
  return p;
}

GameTrace play(Environment& env, OnlineLearner& learner, Rng& rng) {
  GameTrace trace;
  trace.rounds.reserve(env.total_rounds());
  std::size_t t = 0;
  while (!env.done()) {
    auto [i, j] = env.next_pair();
    RoundRecord rec;
    rec.t = ++t;
    rec.i = i;
    rec.j = j;
    rec.inner_iters = learner.last_inner_iterations();
    rec.inner_residual = learner.last_inner_residual();
    const Prediction pred = learner.predict(i, j, rng);
    rec.a = pred.a;
    rec.b = pred.b;
    const PayoffFunction& payoff = env.reveal(pred.a, pred.b);
    rec.payoff = payoff.at(pred.a, pred.b);
    rec.expected_payoff = learner.expected_payoff(payoff);
    learner.update(payoff);
    trace.total_payoff += rec.payoff;
    trace.total_expected_payoff += rec.expected_payoff;
    trace.rounds.push_back(rec);
  }
  return trace;
}

}  // namespace local_regret
