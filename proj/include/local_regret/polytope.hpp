#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "local_regret/rng.hpp"

namespace local_regret {

/// Number of items n and labels L. Matrices over (item, label) pairs have
/// side n * L; the pair (i, a) maps to row i * L + a. Items and labels are
/// 0-based throughout the library.
struct ProblemDims {
  int n_items = 1;
  int n_labels = 1;

  ProblemDims() = default;
  ProblemDims(int n, int L);

  int side() const { return n_items * n_labels; }
  int index(int item, int label) const { return item * n_labels + label; }
  bool operator==(const ProblemDims&) const = default;
};

inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kProjectionTol = 1e-9;

/// Symmetric (nL) x (nL) matrix of pseudo-moments M_{(i,a),(j,b)}: the
/// learner's decision variable. Members of the polytope K are PSD, have
/// entries in [0, 1], and every L x L block sums to 1.
struct PseudoMomentMatrix {
  ProblemDims dims;
  Eigen::MatrixXd entries;

  PseudoMomentMatrix() = default;
  PseudoMomentMatrix(ProblemDims d, Eigen::MatrixXd m);

  /// L x L block for the item pair (i, j): rows are labels of i, columns labels of j.
  Eigen::MatrixXd block(int i, int j) const {
    const int L = dims.n_labels;
    return entries.block(i * L, j * L, L, L);
  }
};

/// Worst violation per constraint class; each value is >= 0.
struct FeasibilityReport {
  bool feasible = false;
  double asymmetry = 0.0;        // max |M - M^T|
  double box_violation = 0.0;    // max distance of an entry outside [0, 1]
  double block_sum_violation = 0.0;
  double psd_violation = 0.0;    // max(0, -lambda_min)
  double min_eigenvalue = 0.0;
  int worst_block_i = -1;
  int worst_block_j = -1;

  std::string describe() const;
};

/// The canonical feasible point: every entry 1 / L^2 (rank one).
PseudoMomentMatrix uniform_matrix(ProblemDims dims);

/// Checks symmetry, the entry box, block marginalization and PSD-ness
/// within tol. Throws std::invalid_argument if the matrix side does not
/// match dims.
FeasibilityReport check_feasibility(const PseudoMomentMatrix& m, double tol = kFeasibilityTol);
bool is_feasible(const PseudoMomentMatrix& m, double tol = kFeasibilityTol);

struct ProjectionResult {
  PseudoMomentMatrix matrix;
  int iterations = 0;
  double residual = 0.0;  // last change between successive iterates (Frobenius)
  bool converged = false;
};

/// Euclidean (Frobenius) projection onto K by Dykstra's alternating
/// projections between
///   (a) PSD matrices whose range avoids every 1_i - 1_j direction, and
///   (b) matrices whose blocks lie in the capped simplex {0 <= x <= 1, sum x = 1}.
/// Every member of K annihilates 1_i - 1_j (its quadratic form there is the
/// signed sum of four block totals, which is 0), so (a) contains K and the two
/// sets meet in a relatively interior point; plain PSD clamping would make the
/// pair tangent and the iteration sublinear.
ProjectionResult project(const Eigen::MatrixXd& raw, ProblemDims dims, double tol = kProjectionTol,
                         int max_iters = 20000);

/// Projection of one block onto {0 <= x <= 1, sum x = 1}.
Eigen::MatrixXd project_capped_simplex(const Eigen::MatrixXd& block);

struct LabelPair {
  int a = 0;
  int b = 0;
  bool fell_back = false;  // block had no positive mass; drawn uniformly
};

/// Draws (a, b) with probability proportional to max(M_{(i,a),(j,b)}, 0).
LabelPair sample_block(const PseudoMomentMatrix& m, int i, int j, Rng& rng);

/// Plain-text form: "n L" then nL rows of nL values, 17 significant digits.
void write_matrix(std::ostream& out, const PseudoMomentMatrix& m);
PseudoMomentMatrix read_matrix(std::istream& in);

}  // namespace local_regret
