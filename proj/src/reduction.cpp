#include "local_regret/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "local_regret/environments.hpp"

namespace local_regret {

std::string to_string(Regime r) { return r == Regime::clique ? "clique" : "dense"; }

Regime parse_regime(const std::string& s) {
  if (s == "clique") return Regime::clique;
  if (s == "dense") return Regime::dense;
  throw std::invalid_argument("unknown regime '" + s + "' (expected clique or dense)");
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << " must lie in [0, 1], got " << p;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Graph gen_gnp(int n, double p, Rng& rng) {
  check_probability(p, "gen_gnp: p");
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (uniform01(rng) < p) g.add_edge(u, v);
  return g;
}

PlantedGraph gen_planted(int n, double p, int k, double q, Rng& rng) {
  check_probability(p, "gen_planted: p");
  check_probability(q, "gen_planted: q");
  if (p > q) throw std::invalid_argument("gen_planted: need p <= q");
  if (k < 0 || k > n) throw std::invalid_argument("gen_planted: need 0 <= k <= n");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::vector<int> planted(order.begin(), order.begin() + k);
  std::sort(planted.begin(), planted.end());
  std::vector<char> in_s(static_cast<std::size_t>(n), 0);
  for (int v : planted) in_s[v] = 1;

  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const double prob = (in_s[u] && in_s[v]) ? q : p;
      if (uniform01(rng) < prob) g.add_edge(u, v);
    }
  return {std::move(g), std::move(planted)};
}

PartitionShape partition_shape(int n, int k) {
  if (n <= 0 || k <= 0 || k > n) {
    std::ostringstream os;
    os << "partition: need 0 < k <= n, got n=" << n << " k=" << k;
    throw std::invalid_argument(os.str());
  }
  PartitionShape s;
  s.cluster_size = static_cast<int>(std::lround(10.0 * n / k));
  if (s.cluster_size < 1) s.cluster_size = 1;
  s.cluster_count = n / s.cluster_size;
  if (s.cluster_count < 2) {
    std::ostringstream os;
    os << "partition: l = round(10n/k) = " << s.cluster_size << " leaves n' = " << s.cluster_count
       << " cluster(s) for n=" << n << " k=" << k << "; need n' >= 2, i.e. k >= 20 roughly";
    throw std::invalid_argument(os.str());
  }
  return s;
}

ClusterPartition random_partition(int n_vertices, int k, Rng& rng) {
  const PartitionShape s = partition_shape(n_vertices, k);
  std::vector<int> order(static_cast<std::size_t>(n_vertices));
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::vector<std::vector<int>> clusters(static_cast<std::size_t>(s.cluster_count));
  for (int c = 0; c < s.cluster_count; ++c)
    clusters[c].assign(order.begin() + static_cast<std::ptrdiff_t>(c) * s.cluster_size,
                       order.begin() + static_cast<std::ptrdiff_t>(c + 1) * s.cluster_size);
  return ClusterPartition::from_clusters(n_vertices, std::move(clusters));
}

double binom2(double x) { return x * (x - 1.0) / 2.0; }

double clique_threshold(int k) { return 1.01 * 0.5 * binom2(k / 10.0); }

double dense_threshold(int k, double p_d) { return 0.5 * binom2(2.0 * k / 25.0) * p_d; }

double repetitions_formula(Regime regime, int n, int k, double p_d) {
  double r = std::pow(static_cast<double>(n), 4.0) / std::pow(static_cast<double>(k), 3.7);
  if (regime == Regime::dense) r /= p_d * p_d;
  return std::ceil(r);
}

DistinguisherConfig DistinguisherConfig::make(Regime regime, int n, int k, std::optional<std::size_t> repetitions,
                                              double p_s, double p_d) {
  DistinguisherConfig c;
  c.regime = regime;
  c.n = n;
  c.k = k;
  const PartitionShape s = partition_shape(n, k);
  c.l = s.cluster_size;
  c.n_prime = s.cluster_count;
  c.T = static_cast<std::size_t>(c.n_prime) * static_cast<std::size_t>(c.n_prime - 1) / 2;
  c.p_s = p_s;
  c.p_d = p_d;
  if (regime == Regime::clique) {
    c.p_s = 0.5;
    c.p_d = 1.0;
    c.threshold = clique_threshold(k);
  } else {
    check_probability(p_s, "dense regime: p_s");
    check_probability(p_d, "dense regime: p_d");
    if (p_s > p_d) throw std::invalid_argument("dense regime: need p_s <= p_d");
    c.threshold = dense_threshold(k, p_d);
  }
  if (repetitions) {
    c.R = *repetitions;
  } else {
    const double r = repetitions_formula(regime, n, k, c.p_d);
    if (!(r < 1e9))
      throw std::invalid_argument("repetition formula gives R = " + std::to_string(r) +
                                  "; pass an explicit repetition count");
    c.R = static_cast<std::size_t>(r);
  }
  c.validate();
  return c;
}

void DistinguisherConfig::validate() const {
  if (R == 0) throw std::invalid_argument("distinguisher: repetition count R must be positive");
  if (T == 0 || n_prime < 2) throw std::invalid_argument("distinguisher: need at least two clusters (T > 0)");
  if (static_cast<long long>(l) * n_prime > n) throw std::invalid_argument("distinguisher: l * n' exceeds n");
  if (T != static_cast<std::size_t>(n_prime) * static_cast<std::size_t>(n_prime - 1) / 2)
    throw std::invalid_argument("distinguisher: T must equal C(n', 2)");
  if (!(threshold > 0.0)) throw std::invalid_argument("distinguisher: threshold must be positive");
}

DistinguisherRun run_distinguisher(const Graph& graph, const DistinguisherConfig& cfg,
                                   const LearnerFactory& factory, std::uint64_t seed) {
  cfg.validate();
  if (graph.vertex_count() != cfg.n)
    throw std::invalid_argument("distinguisher: graph has " + std::to_string(graph.vertex_count()) +
                                " vertices, config expects " + std::to_string(cfg.n));
  DistinguisherRun run;
  Rng part_rng = make_rng(seed, "partition");
  run.partition = random_partition(graph, cfg.k, part_rng);
  const SequenceEnvironment instance = cluster_edge_env(graph, run.partition);

  run.repetition_payoffs.assign(cfg.R, 0.0);
  parallel_for(cfg.R, [&](std::size_t r) {
    // Only the realized total matters here, so skip play()'s per-round records.
    SequenceEnvironment env = instance.restarted();
    auto learner = factory(r, run.partition);
    Rng rng = make_rng(seed, "repetition", r);
    double total = 0.0;
    while (!env.done()) {
      const auto [i, j] = env.next_pair();
      const Prediction pred = learner->predict(i, j, rng);
      const PayoffFunction& payoff = env.reveal(pred.a, pred.b);
      total += payoff.at(pred.a, pred.b);
      learner->update(payoff);
    }
    run.repetition_payoffs[r] = total;
  });
  double sum = 0.0;
  for (double v : run.repetition_payoffs) sum += v;
  run.verdict = decide(sum / static_cast<double>(cfg.R), cfg.threshold);
  return run;
}

CheatingOracleLearner::CheatingOracleLearner(const ClusterPartition& partition, const std::vector<int>& planted)
    : cluster_size_(partition.cluster_size), choice_(partition.clusters.size(), -1) {
  std::vector<char> in_s(partition.cluster_of.size(), 0);
  for (int v : planted) {
    if (v < 0 || v >= static_cast<int>(in_s.size()))
      throw std::invalid_argument("CheatingOracleLearner: planted vertex out of range");
    in_s[v] = 1;
  }
  for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
    const auto& members = partition.clusters[c];
    for (std::size_t a = 0; a < members.size(); ++a)
      if (in_s[members[a]]) {
        choice_[c] = static_cast<int>(a);
        break;
      }
  }
}

Prediction CheatingOracleLearner::predict(int i, int j, Rng& rng) {
  Prediction p;
  p.a = choice_.at(i) >= 0 ? choice_[i] : static_cast<int>(uniform_index(rng, cluster_size_));
  p.b = choice_.at(j) >= 0 ? choice_[j] : static_cast<int>(uniform_index(rng, cluster_size_));
  return p;
}

double CheatingOracleLearner::expected_payoff(const PayoffFunction& p) const {
  const int ci = choice_.at(p.i), cj = choice_.at(p.j);
  if (ci >= 0 && cj >= 0) return p.at(ci, cj);
  if (ci >= 0) return p.block.row(ci).mean();
  if (cj >= 0) return p.block.col(cj).mean();
  return p.block.mean();
}

int covered_clusters(const ClusterPartition& partition, const std::vector<int>& planted) {
  std::vector<char> covered(partition.clusters.size(), 0);
  for (int v : planted) {
    if (v < 0 || v >= static_cast<int>(partition.cluster_of.size()))
      throw std::invalid_argument("covered_clusters: vertex out of range");
    const int c = partition.cluster_of[v];
    if (c >= 0) covered[c] = 1;
  }
  return static_cast<int>(std::count(covered.begin(), covered.end(), 1));
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void fill_instance(RegretTarget& t, double n, double k) {
  t.k = k;
  t.l = 10.0 * n / k;
  t.n_prime = n / t.l;
  t.T = std::max(0.0, binom2(t.n_prime));  // fewer than two clusters: no rounds
  t.target_regret = std::sqrt(t.n_prime * std::pow(t.l, t.beta) * t.T);
  t.ratio_to_k2 = t.target_regret / (k * k);
}

}  // namespace

RegretTarget clique_regret_target(double n, double eps, double slack) {
  require(n > 1.0, "clique target: need n > 1");
  require(eps > 0.0 && eps <= 0.5, "clique target: planted clique conjecture needs 0 < eps <= 1/2 (k = n^(1/2 - eps))");
  require(slack >= 0.0 && slack < 1.0, "clique target: slack must lie in [0, 1)");
  RegretTarget t;
  t.beta = (1.0 - slack) / (0.5 + eps) - 1.0;
  t.p_s = 0.5;
  t.p_d = 1.0;
  fill_instance(t, n, std::pow(n, 0.5 - eps));
  return t;
}

RegretTarget dense_regret_target(double n, double alpha, double eps, double eps_prime, double slack) {
  require(n > 1.0, "dense target: need n > 1");
  require(alpha > 0.0 && alpha <= 0.5, "dense target: planted dense subgraph conjecture needs 0 < alpha <= 1/2");
  require(eps > 0.0 && eps <= 0.5, "dense target: planted dense subgraph conjecture needs 0 < eps <= 1/2");
  require(eps_prime > 0.0 && eps_prime < 0.5,
          "dense target: planted dense subgraph conjecture needs 0 < eps' < 1/2 (k = n^(1/2 - eps'))");
  require(slack >= 0.0, "dense target: slack must be nonnegative");
  RegretTarget t;
  t.beta = 2.0 * (0.5 - (0.5 - eps_prime) * (alpha + eps) - slack) / (0.5 + eps_prime) - 1.0;
  const double k = std::pow(n, 0.5 - eps_prime);
  t.p_s = std::pow(n, -alpha);
  t.p_d = std::pow(k, -alpha - eps);
  fill_instance(t, n, k);
  t.ratio_to_k2_pd = t.ratio_to_k2 / t.p_d;
  return t;
}

CliqueCorollary clique_corollary(double eps) {
  require(eps > 0.0 && eps <= 1.0, "clique corollary: need 0 < eps <= 1");
  CliqueCorollary c;
  c.eps_tilde = eps / 6.0;
  c.clique_exponent = 0.5 - c.eps_tilde;
  c.beta = (1.0 - c.eps_tilde) * 2.0 / (1.0 + 2.0 * c.eps_tilde) - 1.0;
  c.required_beta = 1.0 - eps;
  return c;
}

DenseCorollary dense_corollary(double alpha, double eps, double eps_prime) {
  require(alpha > 0.0 && eps > 0.0 && eps_prime > 0.0, "dense corollary: alpha, eps, eps' must be positive");
  require(alpha >= eps, "dense corollary: needs alpha >= eps");
  require(alpha <= 4.0 && eps <= 4.0, "dense corollary: needs alpha/8 <= 1/2 and eps/8 <= 1/2");
  require(eps_prime < 2.0, "dense corollary: needs eps'/4 < 1/2");
  DenseCorollary c;
  c.alpha_tilde = alpha / 8.0;
  c.eps_tilde = eps / 8.0;
  c.eps_prime_tilde = eps_prime / 4.0;
  c.k_exponent = 0.5 - c.eps_prime_tilde;
  const double h = 0.5 + c.eps_prime_tilde;
  c.beta = 2.0 * (0.5 - 2.0 * h * (c.alpha_tilde + c.eps_tilde)) / h - 1.0;
  c.formula_beta = 2.0 * (0.5 - (0.5 - c.eps_prime_tilde) * (c.alpha_tilde + c.eps_tilde)) / h - 1.0;
  c.required_beta = 1.0 - eps_prime - alpha - eps;
  return c;
}

}  // namespace local_regret
