#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "local_regret/environments.hpp"
#include "local_regret/polytope.hpp"
#include "local_regret/rng.hpp"

namespace local_regret {

/// A fixed labeling of every item.
struct Labeling {
  std::vector<int> labels;
};

struct OptResult {
  double opt_value = 0.0;
  Labeling argmax;         // lexicographically smallest maximizer
  std::size_t ties = 0;    // number of maximizers
};

inline constexpr std::uint64_t kMaxLabelings = 1'000'000;

/// Exact total payoff of a fixed labeling, summed in round order.
double labeling_payoff(const std::vector<PayoffFunction>& seq, const Labeling& labeling, int n_labels);

/// Best fixed labeling in hindsight by exhaustive enumeration of all
/// L^n labelings. Throws std::length_error above kMaxLabelings.
OptResult brute_force_opt(const std::vector<PayoffFunction>& seq, ProblemDims dims);

using MatrixField = std::function<double(const Eigen::MatrixXd&)>;

/// Central differences along symmetric coordinate directions: entry (w, x)
/// is the derivative along E_wx + E_xw, halved off the diagonal, so for a
/// field defined on symmetric matrices the result is its symmetric gradient.
Eigen::MatrixXd fd_gradient(const MatrixField& f, const Eigen::MatrixXd& m, double step);

/// Random member of the polytope: a convex combination of outer products
/// p p^T where p stacks one label distribution per item.
PseudoMomentMatrix random_feasible(ProblemDims dims, Rng& rng);

struct BarrierResult {
  PseudoMomentMatrix matrix;
  double objective = 0.0;
  double duality_gap_bound = 0.0;
  int newton_steps = 0;
};

/// Euclidean projection onto the polytope by a primal log-barrier
/// interior-point method in coordinates of the subspace that contains the
/// polytope. Independent of the alternating-projection route; small sizes only.
BarrierResult qp_projection_oracle(const Eigen::MatrixXd& target, ProblemDims dims);

/// Maximizer of <C, M> + log det(I + L M) over the polytope by the same
/// interior-point method.
BarrierResult concave_max_oracle(const Eigen::MatrixXd& linear, ProblemDims dims);

struct GridResult {
  PseudoMomentMatrix matrix;
  double objective = 0.0;
};

/// Exhaustive grid search (step 1e-2, then repeated local refinement) of
/// <C, M> + log det(I + 2M) over the polytope for one item and two labels,
/// parameterized by M = [[p, y], [y, 1 - p - 2y]].
GridResult grid_search_single_item(const Eigen::MatrixXd& linear);

}  // namespace local_regret
