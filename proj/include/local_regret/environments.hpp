#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "local_regret/graph.hpp"
#include "local_regret/polytope.hpp"
#include "local_regret/rng.hpp"

namespace local_regret {

/// One round's payoff: the queried pair (i, j), i != j, and an L x L block
/// with entries in [-1, 1]; block(a, b) is the payoff for labels a on i, b on j.
struct PayoffFunction {
  int i = 0;
  int j = 1;
  Eigen::MatrixXd block;

  PayoffFunction() = default;
  PayoffFunction(int i_, int j_, Eigen::MatrixXd b);

  double at(int a, int b) const { return block(a, b); }
};

/// Full-information round source. Each round: next_pair() announces the
/// queried pair, the learner commits to labels, reveal() returns the whole
/// payoff function (valid until the next call on the environment).
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::size_t total_rounds() const = 0;
  virtual bool done() const = 0;
  virtual std::pair<int, int> next_pair() = 0;
  virtual const PayoffFunction& reveal(int a, int b) = 0;
};

/// Oblivious environment replaying a fixed sequence. Copies share the
/// sequence and keep their own cursor, so one instance can back many
/// concurrent games.
class SequenceEnvironment final : public Environment {
 public:
  explicit SequenceEnvironment(std::vector<PayoffFunction> seq)
      : seq_(std::make_shared<const std::vector<PayoffFunction>>(std::move(seq))) {}

  std::size_t total_rounds() const override { return seq_->size(); }
  bool done() const override { return cursor_ >= seq_->size(); }
  std::pair<int, int> next_pair() override;
  const PayoffFunction& reveal(int a, int b) override;

  const std::vector<PayoffFunction>& sequence() const { return *seq_; }

  /// A copy rewound to the first round.
  SequenceEnvironment restarted() const {
    SequenceEnvironment e(*this);
    e.cursor_ = 0;
    e.announced_ = false;
    return e;
  }

 private:
  std::shared_ptr<const std::vector<PayoffFunction>> seq_;
  std::size_t cursor_ = 0;
  bool announced_ = false;
};

/// Online max cut with L = 2: one round per edge, payoff 1 when the two
/// endpoints get different labels. Edges play in `order` (lexicographic
/// when empty).
SequenceEnvironment maxcut_env(const Graph& graph, int n_labels, std::vector<Edge> order = {});

/// Reduction instance: one round per unordered cluster pair in
/// lexicographic order; block(a, b) = 1 iff vertex a of the first cluster
/// is adjacent to vertex b of the second.
SequenceEnvironment cluster_edge_env(const Graph& graph, const ClusterPartition& partition);

/// T rounds; each picks a uniform pair i < j and an i.i.d. uniform
/// [-1, 1] block. The sequence is fixed by rng before play.
SequenceEnvironment random_env(ProblemDims dims, std::size_t rounds, Rng& rng);

}  // namespace local_regret
