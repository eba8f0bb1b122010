#include "local_regret/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace local_regret {

double labeling_payoff(const std::vector<PayoffFunction>& seq, const Labeling& labeling, int n_labels) {
  double total = 0.0;
  for (const auto& p : seq) {
    if (p.i >= static_cast<int>(labeling.labels.size()) || p.j >= static_cast<int>(labeling.labels.size())) {
      throw std::out_of_range("labeling_payoff: labeling does not cover item " +
                              std::to_string(std::max(p.i, p.j)));
    }
    const int a = labeling.labels[p.i];
    const int b = labeling.labels[p.j];
    if (a < 0 || b < 0 || a >= n_labels || b >= n_labels) {
      throw std::out_of_range("labeling_payoff: label outside [0, " + std::to_string(n_labels) + ")");
    }
    total += p.at(a, b);
  }
  return total;
}

OptResult brute_force_opt(const std::vector<PayoffFunction>& seq, ProblemDims dims) {
  const int n = dims.n_items;
  const int L = dims.n_labels;
  double count = std::pow(static_cast<double>(L), n);
  if (count > static_cast<double>(kMaxLabelings)) {
    throw std::length_error("brute_force_opt: " + std::to_string(L) + "^" + std::to_string(n) +
                            " labelings exceed the 1e6 guard; bound OPT by sampling instead");
  }
  // Aggregate per ordered pair so each labeling costs O(#pairs).
  std::vector<Eigen::MatrixXd> agg(static_cast<std::size_t>(n) * n);
  std::vector<std::pair<int, int>> used;
  for (const auto& p : seq) {
    if (p.i >= n || p.j >= n) throw std::out_of_range("brute_force_opt: item out of range");
    if (p.block.rows() != L) throw std::invalid_argument("brute_force_opt: block is not L x L");
    auto& slot = agg[static_cast<std::size_t>(p.i) * n + p.j];
    if (slot.size() == 0) {
      slot = Eigen::MatrixXd::Zero(L, L);
      used.emplace_back(p.i, p.j);
    }
    slot += p.block;
  }

  OptResult best;
  best.opt_value = -std::numeric_limits<double>::infinity();
  std::vector<int> labels(n, 0);
  const auto total = static_cast<std::uint64_t>(count);
  for (std::uint64_t code = 0; code < total; ++code) {
    // Odometer with item 0 most significant, so codes run in lexicographic order.
    std::uint64_t c = code;
    for (int i = n - 1; i >= 0; --i) {
      labels[i] = static_cast<int>(c % L);
      c /= L;
    }
    double v = 0.0;
    for (auto [i, j] : used) v += agg[static_cast<std::size_t>(i) * n + j](labels[i], labels[j]);
    const double tol = 1e-9 * std::max(1.0, std::abs(best.opt_value));
    if (code == 0 || v > best.opt_value + tol) {
      best.opt_value = v;
      best.argmax.labels = labels;
      best.ties = 1;
    } else if (std::abs(v - best.opt_value) <= tol) {
      ++best.ties;
    }
  }
  best.opt_value = labeling_payoff(seq, best.argmax, L);
  return best;
}

Eigen::MatrixXd fd_gradient(const MatrixField& f, const Eigen::MatrixXd& m, double step) {
  if (!(step > 0)) throw std::invalid_argument("fd_gradient: step must be positive");
  const Eigen::Index N = m.rows();
  Eigen::MatrixXd g(N, m.cols());
  for (Eigen::Index w = 0; w < N; ++w) {
    for (Eigen::Index x = w; x < N; ++x) {
      Eigen::MatrixXd plus = m, minus = m;
      plus(w, x) += step;
      minus(w, x) -= step;
      if (w != x) {
        plus(x, w) += step;
        minus(x, w) -= step;
      }
      const double fp = f(plus), fm = f(minus);
      if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw std::domain_error("fd_gradient: non-finite evaluation");
      }
      double d = (fp - fm) / (2.0 * step);
      if (w != x) d *= 0.5;
      g(w, x) = g(x, w) = d;
    }
  }
  return g;
}

PseudoMomentMatrix random_feasible(ProblemDims dims, Rng& rng) {
  const int n = dims.n_items;
  const int L = dims.n_labels;
  const int N = dims.side();
  const int components = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(N) + 2));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
  double weight_total = 0.0;
  for (int c = 0; c < components; ++c) {
    Eigen::VectorXd p(N);
    for (int i = 0; i < n; ++i) {
      if (uniform01(rng) < 0.25) {
        p.segment(i * L, L).setZero();
        p(i * L + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(L)))) = 1.0;
        continue;
      }
      const double sharpness = std::array<double, 3>{1.0, 2.0, 4.0}[uniform_index(rng, 3)];
      for (int a = 0; a < L; ++a) p(i * L + a) = std::pow(1e-3 + uniform01(rng), sharpness);
      p.segment(i * L, L) /= p.segment(i * L, L).sum();
    }
    const double w = -std::log(1.0 - uniform01(rng)) + 1e-3;
    m += w * p * p.transpose();
    weight_total += w;
  }
  m /= weight_total;
  m = (0.5 * (m + m.transpose())).eval();
  return {dims, std::move(m)};
}

namespace {

// Coordinates of the subspace S = {X symmetric : X (1_i - 1_j) = 0}, which
// contains the polytope. X = V Y V^T with V an orthonormal basis of the
// complement of span{1_i - 1_j}; Y is parameterized by an orthonormal basis
// of symmetric k x k matrices, so coordinates are Frobenius-isometric.
struct SubspaceCoords {
  int N = 0;
  int k = 0;
  Eigen::MatrixXd V;
  std::vector<Eigen::MatrixXd> y_basis;  // k x k
  std::vector<Eigen::MatrixXd> x_basis;  // N x N, V E V^T
  Eigen::MatrixXd entry_map;             // rows: unique entries (r <= s) of X
  std::vector<bool> entry_active;
  Eigen::VectorXd block_sum_row;         // every block sum equals block_sum_row . y

  explicit SubspaceCoords(ProblemDims dims) {
    N = dims.side();
    const int n = dims.n_items;
    const int L = dims.n_labels;
    Eigen::MatrixXd q = Eigen::MatrixXd::Constant(N, N, -1.0 / N);
    for (int i = 0; i < n; ++i) q.block(i * L, i * L, L, L).array() += 1.0 / L;
    Eigen::MatrixXd pi = Eigen::MatrixXd::Identity(N, N) - q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(pi);
    std::vector<int> cols;
    for (int c = 0; c < N; ++c)
      if (eig.eigenvalues()(c) > 0.5) cols.push_back(c);
    k = static_cast<int>(cols.size());
    V.resize(N, k);
    for (int c = 0; c < k; ++c) V.col(c) = eig.eigenvectors().col(cols[c]);

    for (int r = 0; r < k; ++r) {
      for (int s = r; s < k; ++s) {
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(k, k);
        if (r == s) {
          e(r, r) = 1.0;
        } else {
          e(r, s) = e(s, r) = 1.0 / std::sqrt(2.0);
        }
        x_basis.push_back(V * e * V.transpose());
        y_basis.push_back(std::move(e));
      }
    }
    const auto m = static_cast<Eigen::Index>(y_basis.size());
    const Eigen::Index entries = static_cast<Eigen::Index>(N) * (N + 1) / 2;
    entry_map.resize(entries, m);
    entry_active.assign(entries, false);
    Eigen::Index row = 0;
    for (int r = 0; r < N; ++r) {
      for (int s = r; s < N; ++s, ++row) {
        for (Eigen::Index p = 0; p < m; ++p) entry_map(row, p) = x_basis[p](r, s);
        entry_active[row] = entry_map.row(row).norm() > 1e-12;
      }
    }
    Eigen::VectorXd ones_i = Eigen::VectorXd::Zero(N);
    ones_i.head(L).setOnes();
    block_sum_row.resize(m);
    Eigen::VectorXd ones_j = Eigen::VectorXd::Zero(N);
    ones_j.tail(L).setOnes();
    for (Eigen::Index p = 0; p < m; ++p) block_sum_row(p) = ones_i.dot(x_basis[p] * ones_j);
  }

  Eigen::Index dim() const { return static_cast<Eigen::Index>(y_basis.size()); }

  Eigen::VectorXd coords(const Eigen::MatrixXd& x) const {
    Eigen::VectorXd y(dim());
    for (Eigen::Index p = 0; p < dim(); ++p) y(p) = x_basis[p].cwiseProduct(x).sum();
    return y;
  }
  Eigen::MatrixXd y_matrix(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index p = 0; p < dim(); ++p) out += y(p) * y_basis[p];
    return out;
  }
  Eigen::MatrixXd x_matrix(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd out = V * y_matrix(y) * V.transpose();
    return (0.5 * (out + out.transpose())).eval();
  }
};

// Smooth convex objective of the coordinates (minimized).
struct CoordObjective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

struct BarrierTerms {
  bool feasible = false;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

BarrierTerms barrier_terms(const SubspaceCoords& sc, const Eigen::VectorXd& y) {
  BarrierTerms out;
  const Eigen::MatrixXd ym = sc.y_matrix(y);
  Eigen::LLT<Eigen::MatrixXd> llt(ym);
  if (llt.info() != Eigen::Success) return out;
  const Eigen::VectorXd x = sc.entry_map * y;
  for (Eigen::Index e = 0; e < x.size(); ++e) {
    if (sc.entry_active[e] && !(x(e) > 0.0 && x(e) < 1.0)) return out;
  }
  out.feasible = true;
  const Eigen::Index m = sc.dim();
  const Eigen::MatrixXd yinv = llt.solve(Eigen::MatrixXd::Identity(sc.k, sc.k));
  out.gradient.resize(m);
  std::vector<Eigen::MatrixXd> ye(m);
  for (Eigen::Index p = 0; p < m; ++p) {
    ye[p] = yinv * sc.y_basis[p];
    out.gradient(p) = -ye[p].trace();
  }
  out.hessian.resize(m, m);
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = p; q < m; ++q)
      out.hessian(p, q) = out.hessian(q, p) = (ye[p] * ye[q]).trace();
  for (Eigen::Index e = 0; e < x.size(); ++e) {
    if (!sc.entry_active[e]) continue;
    const double lo = x(e), hi = 1.0 - x(e);
    const Eigen::VectorXd row = sc.entry_map.row(e).transpose();
    out.gradient += (-1.0 / lo + 1.0 / hi) * row;
    out.hessian += (1.0 / (lo * lo) + 1.0 / (hi * hi)) * row * row.transpose();
  }
  return out;
}

BarrierResult barrier_solve(const SubspaceCoords& sc, ProblemDims dims, const CoordObjective& obj,
                            const Eigen::MatrixXd& start) {
  Eigen::VectorXd y = sc.coords(start);
  const Eigen::Index m = sc.dim();
  std::size_t active = 0;
  for (bool a : sc.entry_active) active += a ? 1 : 0;
  const double barrier_count = sc.k + 2.0 * static_cast<double>(active);

  const Eigen::VectorXd& g = sc.block_sum_row;
  const Eigen::MatrixXd null_basis =
      Eigen::FullPivLU<Eigen::MatrixXd>(g.transpose()).kernel().householderQr().householderQ() *
      Eigen::MatrixXd::Identity(m, m - 1);
  BarrierResult out;
  if (!barrier_terms(sc, y).feasible) throw std::logic_error("barrier_solve: start is not strictly feasible");
  double t = 1.0;
  constexpr double kGapTarget = 1e-11;
  for (int outer = 0; outer < 60; ++outer) {
    for (int inner = 0; inner < 500; ++inner) {
      BarrierTerms b = barrier_terms(sc, y);
      const Eigen::VectorXd grad = t * obj.gradient(y) + b.gradient;
      const Eigen::MatrixXd hess = t * obj.hessian(y) + b.hessian;
      // Newton step restricted to block_sum_row . dy = 0 (null-space form).
      const Eigen::VectorXd dz = (null_basis.transpose() * hess * null_basis).ldlt().solve(-null_basis.transpose() * grad);
      const Eigen::VectorXd dy = null_basis * dz;
      const double decrement2 = std::max(0.0, -grad.dot(dy));
      ++out.newton_steps;
      if (decrement2 < 1e-14) break;
      const double lambda = std::sqrt(decrement2);
      double s = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
      while (!barrier_terms(sc, y + s * dy).feasible && s > 1e-20) s *= 0.5;
      y += s * dy;
      y += g * ((1.0 - g.dot(y)) / g.squaredNorm());
    }
    out.duality_gap_bound = barrier_count / t;
    if (out.duality_gap_bound < kGapTarget) break;
    t *= 8.0;
  }
  out.matrix = PseudoMomentMatrix(dims, sc.x_matrix(y));
  out.objective = obj.value(y);
  return out;
}

Eigen::MatrixXd interior_start(ProblemDims dims) {
  // Half the average over all one-hot labelings (diagonal blocks diag(1/L),
  // off-diagonal blocks 1/L^2), half the uniform matrix.
  const int n = dims.n_items;
  const int L = dims.n_labels;
  Eigen::MatrixXd avg = Eigen::MatrixXd::Constant(dims.side(), dims.side(), 1.0 / (L * L));
  for (int i = 0; i < n; ++i)
    avg.block(i * L, i * L, L, L) = Eigen::MatrixXd::Identity(L, L) / L;
  return 0.5 * avg + 0.5 * uniform_matrix(dims).entries;
}

void check_oracle_dims(const Eigen::MatrixXd& x, ProblemDims dims, const char* who) {
  if (x.rows() != dims.side() || x.cols() != dims.side()) {
    throw std::invalid_argument(std::string(who) + ": matrix side does not match dims");
  }
  if (dims.side() > 12) throw std::invalid_argument(std::string(who) + ": limited to nL <= 12");
}

}  // namespace

BarrierResult qp_projection_oracle(const Eigen::MatrixXd& target, ProblemDims dims) {
  check_oracle_dims(target, dims, "qp_projection_oracle");
  const Eigen::MatrixXd sym = 0.5 * (target + target.transpose());
  if (dims.n_labels == 1) {
    // The polytope is the single all-ones matrix.
    BarrierResult out;
    out.matrix = PseudoMomentMatrix(dims, Eigen::MatrixXd::Ones(dims.side(), dims.side()));
    out.objective = 0.5 * (out.matrix.entries - sym).squaredNorm();
    return out;
  }
  SubspaceCoords sc(dims);
  // Off-subspace part of the target is a constant in the objective.
  const Eigen::VectorXd ya = sc.coords(sym);
  CoordObjective obj;
  obj.value = [&](const Eigen::VectorXd& y) { return 0.5 * (sc.x_matrix(y) - sym).squaredNorm(); };
  obj.gradient = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd { return y - ya; };
  obj.hessian = [&](const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Identity(sc.dim(), sc.dim());
  };
  return barrier_solve(sc, dims, obj, interior_start(dims));
}

BarrierResult concave_max_oracle(const Eigen::MatrixXd& linear, ProblemDims dims) {
  check_oracle_dims(linear, dims, "concave_max_oracle");
  const double L = dims.n_labels;
  const int N = dims.side();
  auto shifted_lu = [&](const Eigen::MatrixXd& x) {
    return Eigen::PartialPivLU<Eigen::MatrixXd>(Eigen::MatrixXd::Identity(N, N) + L * x);
  };
  if (dims.n_labels == 1) {
    BarrierResult out;
    out.matrix = PseudoMomentMatrix(dims, Eigen::MatrixXd::Ones(N, N));
    out.objective = linear.cwiseProduct(out.matrix.entries).sum() +
                    std::log(shifted_lu(out.matrix.entries).determinant());
    return out;
  }
  SubspaceCoords sc(dims);
  const Eigen::VectorXd c = sc.coords(0.5 * (linear + linear.transpose()));
  CoordObjective obj;
  obj.value = [&](const Eigen::VectorXd& y) {
    const Eigen::MatrixXd x = sc.x_matrix(y);
    return -linear.cwiseProduct(x).sum() - std::log(shifted_lu(x).determinant());
  };
  obj.gradient = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    const Eigen::MatrixXd binv = shifted_lu(sc.x_matrix(y)).inverse();
    Eigen::VectorXd g(sc.dim());
    for (Eigen::Index p = 0; p < sc.dim(); ++p) g(p) = -c(p) - L * binv.cwiseProduct(sc.x_basis[p]).sum();
    return g;
  };
  obj.hessian = [&](const Eigen::VectorXd& y) -> Eigen::MatrixXd {
    const Eigen::MatrixXd binv = shifted_lu(sc.x_matrix(y)).inverse();
    std::vector<Eigen::MatrixXd> bf(sc.dim());
    for (Eigen::Index p = 0; p < sc.dim(); ++p) bf[p] = binv * sc.x_basis[p];
    Eigen::MatrixXd h(sc.dim(), sc.dim());
    for (Eigen::Index p = 0; p < sc.dim(); ++p)
      for (Eigen::Index q = p; q < sc.dim(); ++q) h(p, q) = h(q, p) = L * L * (bf[p] * bf[q]).trace();
    return h;
  };
  BarrierResult out = barrier_solve(sc, dims, obj, interior_start(dims));
  out.objective = -out.objective;
  return out;
}

GridResult grid_search_single_item(const Eigen::MatrixXd& linear) {
  if (linear.rows() != 2 || linear.cols() != 2) {
    throw std::invalid_argument("grid_search_single_item: expects a 2 x 2 linear term");
  }
  auto objective = [&](double p, double y, double* value) {
    const double q = 1.0 - p - 2.0 * y;
    if (p < 0 || y < 0 || q < 0 || p * q < y * y) return false;
    Eigen::Matrix2d m;
    m << p, y, y, q;
    const Eigen::Matrix2d b = Eigen::Matrix2d::Identity() + 2.0 * m;
    *value = linear.cwiseProduct(Eigen::MatrixXd(m)).sum() + std::log(b.determinant());
    return true;
  };
  double best = -std::numeric_limits<double>::infinity();
  double bp = 0.5, by = 0.0;
  auto scan = [&](double p_lo, double p_hi, double y_lo, double y_hi, double step) {
    const int np = static_cast<int>(std::round((p_hi - p_lo) / step));
    const int ny = static_cast<int>(std::round((y_hi - y_lo) / step));
    for (int a = 0; a <= np; ++a) {
      for (int b = 0; b <= ny; ++b) {
        const double p = p_lo + a * step;
        const double y = y_lo + b * step;
        double v;
        if (objective(p, y, &v) && v > best) {
          best = v;
          bp = p;
          by = y;
        }
      }
    }
  };
  double step = 1e-2;
  scan(0.0, 1.0, 0.0, 0.5, step);
  while (step > 1e-9) {
    const double span = 2.0 * step;
    step /= 10.0;
    scan(std::max(0.0, bp - span), std::min(1.0, bp + span), std::max(0.0, by - span),
         std::min(0.5, by + span), step);
  }
  GridResult out;
  Eigen::MatrixXd m(2, 2);
  m << bp, by, by, 1.0 - bp - 2.0 * by;
  out.matrix = PseudoMomentMatrix(ProblemDims(1, 2), m);
  out.objective = best;
  return out;
}

}  // namespace local_regret
