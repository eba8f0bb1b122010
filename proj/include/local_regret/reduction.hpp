#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "local_regret/graph.hpp"
#include "local_regret/learner.hpp"
#include "local_regret/rng.hpp"

namespace local_regret {

enum class Regime { clique, dense };

std::string to_string(Regime r);
Regime parse_regime(const std::string& s);

/// Erdos-Renyi G(n, p).
Graph gen_gnp(int n, double p, Rng& rng);

struct PlantedGraph {
  Graph graph;
  std::vector<int> planted;  // sorted vertex ids of S
};

/// G(n, p, k, q): a uniformly random k-set S whose internal pairs are edges
/// with probability q; every other pair with probability p. The clique
/// ensemble G(n, 1/2, k) is q = 1, p = 1/2.
PlantedGraph gen_planted(int n, double p, int k, double q, Rng& rng);

/// Cluster size l = round(10 n / k) and cluster count n' = floor(n / l).
struct PartitionShape {
  int cluster_size = 0;
  int cluster_count = 0;
};
PartitionShape partition_shape(int n, int k);

/// Uniformly random equipartition into n' clusters of size l; surplus
/// vertices are discarded at random. Uses only the vertex count, never the
/// edges, so the partition is independent of the graph.
ClusterPartition random_partition(int n_vertices, int k, Rng& rng);
inline ClusterPartition random_partition(const Graph& g, int k, Rng& rng) {
  return random_partition(g.vertex_count(), k, rng);
}

/// x (x - 1) / 2 for real x.
double binom2(double x);

/// (1 + 1/100) (1/2) C(k/10, 2).
double clique_threshold(int k);
/// (1/2) C(2k/25, 2) p_d.
double dense_threshold(int k, double p_d);
/// n^4 / k^3.7, and n^4 / (k^3.7 p_d^2) for the dense regime (rounded up).
double repetitions_formula(Regime regime, int n, int k, double p_d = 1.0);

struct DistinguisherConfig {
  Regime regime = Regime::clique;
  int n = 0;
  int k = 0;
  int l = 0;        // cluster size
  int n_prime = 0;  // cluster count
  std::size_t T = 0;
  std::size_t R = 0;
  double threshold = 0.0;
  double p_s = 0.5;
  double p_d = 1.0;

  /// Derives l, n', T and the threshold. R defaults to the repetition
  /// formula; pass an override for anything beyond toy sizes.
  static DistinguisherConfig make(Regime regime, int n, int k, std::optional<std::size_t> repetitions = {},
                                  double p_s = 0.5, double p_d = 1.0);
  void validate() const;
};

struct Verdict {
  double avg_payoff = 0.0;
  double threshold = 0.0;
  bool planted = false;
};

inline Verdict decide(double avg_payoff, double threshold) {
  return {avg_payoff, threshold, avg_payoff >= threshold};
}

struct DistinguisherRun {
  Verdict verdict;
  std::vector<double> repetition_payoffs;
  ClusterPartition partition;
};

/// Builds a fresh learner for one repetition. Must be callable concurrently.
using LearnerFactory =
    std::function<std::unique_ptr<OnlineLearner>(std::size_t repetition, const ClusterPartition& partition)>;

/// Partitions the graph once (stream "partition" of seed), then plays the
/// cluster-edge game R times with a fresh learner and rng stream
/// ("repetition", r) each, and thresholds the mean total payoff.
DistinguisherRun run_distinguisher(const Graph& graph, const DistinguisherConfig& cfg,
                                   const LearnerFactory& factory, std::uint64_t seed);

/// Test-only learner that knows the planted set: in a cluster holding a
/// planted vertex it always plays the first such vertex's label, elsewhere
/// a uniform label.
class CheatingOracleLearner final : public OnlineLearner {
 public:
  CheatingOracleLearner(const ClusterPartition& partition, const std::vector<int>& planted);

  Prediction predict(int i, int j, Rng& rng) override;
  void update(const PayoffFunction&) override {}
  double expected_payoff(const PayoffFunction& p) const override;

  const std::vector<int>& choices() const { return choice_; }

 private:
  int cluster_size_;
  std::vector<int> choice_;  // per cluster, -1 when it holds no planted vertex
};

/// Number of clusters holding at least one planted vertex.
int covered_clusters(const ClusterPartition& partition, const std::vector<int>& planted);

struct RegretTarget {
  double beta = 0.0;
  double k = 0.0;
  double l = 0.0;
  double n_prime = 0.0;
  double T = 0.0;
  double target_regret = 0.0;  // sqrt(n' l^beta T)
  double ratio_to_k2 = 0.0;    // target_regret / k^2; < 1 for the reduction to separate
  double p_s = 0.0;            // dense regime only
  double p_d = 0.0;
  double ratio_to_k2_pd = 0.0;  // target_regret / (k^2 p_d), dense regime only
};

/// beta = (1 - slack) / (1/2 + eps) - 1 for planted clique of size n^(1/2 - eps).
/// slack stands in for the vanishing omega(1/log n) term.
RegretTarget clique_regret_target(double n, double eps, double slack);

/// beta = 2 (1/2 - (1/2 - eps') (alpha + eps) - slack) / (1/2 + eps') - 1 with
/// p_s = n^-alpha, k = n^(1/2 - eps'), p_d = k^(-alpha - eps).
RegretTarget dense_regret_target(double n, double alpha, double eps, double eps_prime, double slack);

struct CliqueCorollary {
  double clique_exponent = 0.0;  // 1/2 - eps/6
  double eps_tilde = 0.0;        // eps / 6
  double beta = 0.0;             // (1 - eps~) * 2 / (1 + 2 eps~) - 1
  double required_beta = 0.0;    // 1 - eps
};

/// Regret sqrt(n L^(1-eps) T) suffices to detect cliques of size n^(1/2 - eps/6).
CliqueCorollary clique_corollary(double eps);

struct DenseCorollary {
  double alpha_tilde = 0.0;      // alpha / 8
  double eps_tilde = 0.0;        // eps / 8
  double eps_prime_tilde = 0.0;  // eps' / 4
  double k_exponent = 0.0;       // 1/2 - eps'/4
  double beta = 0.0;             // 2 (1/2 - 2 (1/2 + eps'~)(alpha~ + eps~)) / (1/2 + eps'~) - 1
  double formula_beta = 0.0;     // dense_regret_target beta at the tilde parameters, slack 0
  double required_beta = 0.0;    // 1 - eps' - alpha - eps
};

DenseCorollary dense_corollary(double alpha, double eps, double eps_prime);

}  // namespace local_regret
