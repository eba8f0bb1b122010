#include "local_regret/environments.hpp"

#include <stdexcept>
#include <string>

namespace local_regret {

PayoffFunction::PayoffFunction(int i_, int j_, Eigen::MatrixXd b) : i(i_), j(j_), block(std::move(b)) {
  if (i == j) throw std::invalid_argument("PayoffFunction: pair must have i != j");
  if (i < 0 || j < 0) throw std::invalid_argument("PayoffFunction: negative item index");
  if (block.rows() != block.cols() || block.rows() < 1) {
    throw std::invalid_argument("PayoffFunction: block must be a non-empty square matrix");
  }
  if (!block.allFinite() || block.minCoeff() < -1.0 || block.maxCoeff() > 1.0) {
    throw std::invalid_argument("PayoffFunction: entries must lie in [-1, 1]");
  }
}

std::pair<int, int> SequenceEnvironment::next_pair() {
  if (done()) throw std::logic_error("SequenceEnvironment: no rounds left");
  announced_ = true;
  return {(*seq_)[cursor_].i, (*seq_)[cursor_].j};
}

const PayoffFunction& SequenceEnvironment::reveal(int a, int b) {
  if (!announced_) throw std::logic_error("SequenceEnvironment: reveal before next_pair");
  const auto& p = (*seq_)[cursor_];
  if (a < 0 || b < 0 || a >= p.block.rows() || b >= p.block.cols()) {
    throw std::out_of_range("SequenceEnvironment: label out of range");
  }
  announced_ = false;
  return (*seq_)[cursor_++];
}

SequenceEnvironment maxcut_env(const Graph& graph, int n_labels, std::vector<Edge> order) {
  if (n_labels != 2) {
    throw std::invalid_argument("maxcut_env: max cut needs exactly 2 labels, got " + std::to_string(n_labels));
  }
  if (order.empty()) order = graph.edges();
  Eigen::MatrixXd cut(2, 2);
  cut << 0, 1, 1, 0;
  std::vector<PayoffFunction> seq;
  seq.reserve(order.size());
  for (auto [u, v] : order) {
    if (!graph.has_edge(u, v)) {
      throw std::invalid_argument("maxcut_env: (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") is not an edge");
    }
    seq.emplace_back(u, v, cut);
  }
  return SequenceEnvironment(std::move(seq));
}

SequenceEnvironment cluster_edge_env(const Graph& graph, const ClusterPartition& partition) {
  const int nc = partition.cluster_count();
  const int l = partition.cluster_size;
  if (static_cast<int>(partition.cluster_of.size()) != graph.vertex_count()) {
    throw std::invalid_argument("cluster_edge_env: partition does not cover this graph");
  }
  std::vector<PayoffFunction> seq;
  seq.reserve(static_cast<std::size_t>(nc) * (nc > 0 ? nc - 1 : 0) / 2);
  for (int ci = 0; ci < nc; ++ci) {
    for (int cj = ci + 1; cj < nc; ++cj) {
      Eigen::MatrixXd block(l, l);
      for (int a = 0; a < l; ++a)
        for (int b = 0; b < l; ++b)
          block(a, b) = graph.has_edge(partition.vertex(ci, a), partition.vertex(cj, b)) ? 1.0 : 0.0;
      seq.emplace_back(ci, cj, std::move(block));
    }
  }
  return SequenceEnvironment(std::move(seq));
}

SequenceEnvironment random_env(ProblemDims dims, std::size_t rounds, Rng& rng) {
  const int n = dims.n_items;
  const int L = dims.n_labels;
  if (n < 2) throw std::invalid_argument("random_env: need at least 2 items");
  std::vector<PayoffFunction> seq;
  seq.reserve(rounds);
  const auto pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  for (std::size_t t = 0; t < rounds; ++t) {
    auto k = static_cast<int>(uniform_index(rng, pairs));
    int i = 0;
    while (k >= n - 1 - i) {
      k -= n - 1 - i;
      ++i;
    }
    const int j = i + 1 + k;
    Eigen::MatrixXd block(L, L);
    for (int a = 0; a < L; ++a)
      for (int b = 0; b < L; ++b) block(a, b) = uniform(rng, -1.0, 1.0);
    seq.emplace_back(i, j, std::move(block));
  }
  return SequenceEnvironment(std::move(seq));
}

}  // namespace local_regret
