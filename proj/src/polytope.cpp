#include "local_regret/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace local_regret {

ProblemDims::ProblemDims(int n, int L) : n_items(n), n_labels(L) {
  if (n < 1 || L < 1) {
    throw std::invalid_argument("ProblemDims: need n_items >= 1 and n_labels >= 1, got n=" +
                                std::to_string(n) + " L=" + std::to_string(L));
  }
}

PseudoMomentMatrix::PseudoMomentMatrix(ProblemDims d, Eigen::MatrixXd m)
    : dims(d), entries(std::move(m)) {
  if (entries.rows() != dims.side() || entries.cols() != dims.side()) {
    throw std::invalid_argument("PseudoMomentMatrix: expected side " + std::to_string(dims.side()) +
                                ", got " + std::to_string(entries.rows()) + "x" +
                                std::to_string(entries.cols()));
  }
}

std::string FeasibilityReport::describe() const {
  std::ostringstream os;
  os << (feasible ? "feasible" : "infeasible") << " asymmetry=" << asymmetry
     << " box=" << box_violation << " block_sum=" << block_sum_violation;
  if (worst_block_i >= 0) os << " (block " << worst_block_i << "," << worst_block_j << ")";
  os << " min_eig=" << min_eigenvalue;
  return os.str();
}

PseudoMomentMatrix uniform_matrix(ProblemDims dims) {
  const double v = 1.0 / (static_cast<double>(dims.n_labels) * dims.n_labels);
  return {dims, Eigen::MatrixXd::Constant(dims.side(), dims.side(), v)};
}

FeasibilityReport check_feasibility(const PseudoMomentMatrix& m, double tol) {
  if (tol < 0) throw std::invalid_argument("check_feasibility: tol must be >= 0");
  const auto& x = m.entries;
  if (x.rows() != m.dims.side() || x.cols() != m.dims.side()) {
    throw std::invalid_argument("check_feasibility: matrix side does not match dims");
  }
  FeasibilityReport r;
  r.asymmetry = (x - x.transpose()).cwiseAbs().maxCoeff();
  r.box_violation = std::max({0.0, -x.minCoeff(), x.maxCoeff() - 1.0});

  const int n = m.dims.n_items;
  const int L = m.dims.n_labels;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dev = std::abs(x.block(i * L, j * L, L, L).sum() - 1.0);
      if (dev > r.block_sum_violation) {
        r.block_sum_violation = dev;
        r.worst_block_i = i;
        r.worst_block_j = j;
      }
    }
  }

  Eigen::MatrixXd sym = 0.5 * (x + x.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = eig.eigenvalues().minCoeff();
  r.psd_violation = std::max(0.0, -r.min_eigenvalue);

  r.feasible = r.asymmetry <= tol && r.box_violation <= tol && r.block_sum_violation <= tol &&
               r.psd_violation <= tol;
  return r;
}

bool is_feasible(const PseudoMomentMatrix& m, double tol) { return check_feasibility(m, tol).feasible; }

Eigen::MatrixXd project_capped_simplex(const Eigen::MatrixXd& block) {
  // Solution is clamp(v - tau, 0, 1) with tau chosen so the entries sum to 1.
  const Eigen::ArrayXd v = Eigen::Map<const Eigen::ArrayXd>(block.data(), block.size());
  const auto count = static_cast<double>(v.size());
  if (count < 1.0) throw std::invalid_argument("project_capped_simplex: empty block");
  auto mass = [&](double tau) { return (v - tau).max(0.0).min(1.0).sum(); };

  // mass is nonincreasing in tau; bracket the root of mass(tau) = 1.
  double lo = v.minCoeff() - 1.0;  // mass(lo) = count >= 1
  double hi = v.maxCoeff();        // mass(hi) = 0
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mass(mid) >= 1.0) lo = mid; else hi = mid;
  }
  double tau = 0.5 * (lo + hi);
  // Exact solve on the active set identified by bisection.
  const Eigen::ArrayXd shifted = v - tau;
  double free_sum = 0.0, n_free = 0.0, n_upper = 0.0;
  for (Eigen::Index k = 0; k < shifted.size(); ++k) {
    if (shifted[k] >= 1.0) n_upper += 1.0;
    else if (shifted[k] > 0.0) { free_sum += v[k]; n_free += 1.0; }
  }
  if (n_free > 0.0) {
    double exact = (free_sum + n_upper - 1.0) / n_free;
    if (std::abs(mass(exact) - 1.0) <= std::abs(mass(tau) - 1.0)) tau = exact;
  }
  Eigen::ArrayXd out = (v - tau).max(0.0).min(1.0);
  return Eigen::Map<Eigen::MatrixXd>(out.data(), block.rows(), block.cols());
}

namespace {

// Orthogonal projector onto the complement of span{1_i - 1_j}.
Eigen::MatrixXd range_projector(ProblemDims dims) {
  const int n = dims.n_items;
  const int L = dims.n_labels;
  const int N = dims.side();
  Eigen::MatrixXd q = Eigen::MatrixXd::Constant(N, N, -1.0 / N);
  for (int i = 0; i < n; ++i) q.block(i * L, i * L, L, L).array() += 1.0 / L;
  return Eigen::MatrixXd::Identity(N, N) - q;
}

Eigen::MatrixXd project_psd_range(const Eigen::MatrixXd& x, const Eigen::MatrixXd& pi) {
  Eigen::MatrixXd c = pi * x * pi;
  c = (0.5 * (c + c.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  const auto& v = eig.eigenvectors();
  Eigen::MatrixXd out = v * lam.asDiagonal() * v.transpose();
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd project_blocks(const Eigen::MatrixXd& x, ProblemDims dims) {
  const int n = dims.n_items;
  const int L = dims.n_labels;
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // Average the (i,j) block with the transpose of (j,i): the symmetric
      // part is what the Frobenius projection of a symmetric matrix sees.
      Eigen::MatrixXd b = 0.5 * (x.block(i * L, j * L, L, L) +
                                 x.block(j * L, i * L, L, L).transpose());
      Eigen::MatrixXd p = project_capped_simplex(b);
      if (i == j) p = 0.5 * (p + p.transpose());
      out.block(i * L, j * L, L, L) = p;
      out.block(j * L, i * L, L, L) = p.transpose();
    }
  }
  return out;
}

}  // namespace

ProjectionResult project(const Eigen::MatrixXd& raw, ProblemDims dims, double tol, int max_iters) {
  if (raw.rows() != dims.side() || raw.cols() != dims.side()) {
    throw std::invalid_argument("project: matrix side does not match dims");
  }
  if (max_iters < 1) throw std::invalid_argument("project: max_iters must be >= 1");
  const Eigen::MatrixXd pi = range_projector(dims);

  Eigen::MatrixXd x = 0.5 * (raw + raw.transpose());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  Eigen::MatrixXd q = p;
  ProjectionResult result;
  for (int it = 1; it <= max_iters; ++it) {
    Eigen::MatrixXd y = project_psd_range(x + p, pi);
    p += x - y;
    Eigen::MatrixXd x_next = project_blocks(y + q, dims);
    q += y - x_next;
    result.residual = (x_next - x).norm();
    result.iterations = it;
    x = std::move(x_next);
    if (result.residual < tol && (x - y).norm() < tol) {
      result.converged = true;
      break;
    }
  }
  result.matrix = PseudoMomentMatrix(dims, std::move(x));
  return result;
}

LabelPair sample_block(const PseudoMomentMatrix& m, int i, int j, Rng& rng) {
  const int n = m.dims.n_items;
  const int L = m.dims.n_labels;
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("sample_block: item out of range");
  if (i == j) throw std::invalid_argument("sample_block: need i != j");
  Eigen::MatrixXd w = m.block(i, j).cwiseMax(0.0);
  const double total = w.sum();
  LabelPair out;
  if (!(total > 0.0) || !std::isfinite(total)) {
    auto cell = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(L) * L));
    out.a = cell / L;
    out.b = cell % L;
    out.fell_back = true;
    return out;
  }
  double u = uniform01(rng) * total;
  int last_positive = 0;
  for (int a = 0; a < L; ++a) {
    for (int b = 0; b < L; ++b) {
      const double c = w(a, b);
      if (c <= 0.0) continue;
      last_positive = a * L + b;
      if (u < c) {
        out.a = a;
        out.b = b;
        return out;
      }
      u -= c;
    }
  }
  // Round-off left u just past the final cell.
  out.a = last_positive / L;
  out.b = last_positive % L;
  return out;
}

void write_matrix(std::ostream& out, const PseudoMomentMatrix& m) {
  out << m.dims.n_items << ' ' << m.dims.n_labels << '\n';
  char buf[40];
  for (Eigen::Index r = 0; r < m.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.entries.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m.entries(r, c));
      if (c) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

PseudoMomentMatrix read_matrix(std::istream& in) {
  int n = 0, L = 0;
  if (!(in >> n >> L)) throw std::runtime_error("read_matrix: missing 'n L' header");
  ProblemDims dims(n, L);
  Eigen::MatrixXd x(dims.side(), dims.side());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (!(in >> x(r, c))) {
        throw std::runtime_error("read_matrix: expected " + std::to_string(x.size()) + " values");
      }
    }
  }
  return {dims, std::move(x)};
}

}  // namespace local_regret
