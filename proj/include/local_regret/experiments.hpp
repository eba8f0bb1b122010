#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "local_regret/learner.hpp"
#include "local_regret/reduction.hpp"

namespace local_regret {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Safety factor c in the reported bound c * sqrt(n L T).
inline constexpr double kRegretBoundConstant = 8.0;

enum class EnvKind { maxcut, random, cluster };
enum class LearnerKind { ftrl, oracle, uniform };
enum class CaseFilter { both, random, planted };

std::string to_string(EnvKind e);
std::string to_string(LearnerKind l);
std::string to_string(CaseFilter c);
EnvKind parse_env(const std::string& s);
LearnerKind parse_learner(const std::string& s);
CaseFilter parse_cases(const std::string& s);

/// Everything a run needs. Unset optionals are resolved to defaults and the
/// resolved values are written to the output metadata.
struct RunConfig {
  std::string command = "regret";
  std::optional<int> n;
  std::optional<int> L;
  std::optional<std::size_t> T;
  std::uint64_t seed = 1;

  EnvKind env = EnvKind::random;
  std::string graph_path;
  std::optional<double> nu;
  std::optional<int> inner_iters;
  std::optional<double> grad_tol;
  bool compute_opt = true;

  Regime regime = Regime::clique;
  std::optional<int> k;
  std::optional<double> p;
  std::optional<double> q;
  std::optional<double> alpha;
  std::optional<double> eps;
  std::optional<double> eps_prime;
  double slack = 0.0;
  std::optional<std::size_t> repetitions;
  std::size_t trials = 20;
  LearnerKind learner = LearnerKind::ftrl;
  CaseFilter cases = CaseFilter::both;

  std::string out;
};

/// "# key=value" lines.
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(std::ostream& out, const Metadata& meta);

struct RegretReport {
  Metadata metadata;
  ProblemDims dims;
  std::size_t T = 0;
  double nu = 0.0;
  std::optional<double> opt;
  double total_expected_payoff = 0.0;
  double total_payoff = 0.0;
  std::optional<double> regret;  // opt - total_expected_payoff
  double bound = 0.0;            // kRegretBoundConstant * sqrt(n L T)
  GameTrace trace;
};

/// Plays the configured environment and measures regret against the best
/// fixed labeling in hindsight. Writes the round trace to cfg.out and the
/// summary to cfg.out + ".summary.csv" when cfg.out is set; the summary
/// is also printed to console.
RegretReport run_regret(const RunConfig& cfg, std::ostream* console = nullptr);

void write_trace_csv(std::ostream& out, const RegretReport& report);
void write_regret_summary(std::ostream& out, const RegretReport& report);

struct TrialRow {
  std::size_t trial = 0;
  bool planted_case = false;
  DistinguisherConfig config;
  Verdict verdict;
  std::uint64_t seed = 0;
};

struct DistinguishReport {
  Metadata metadata;
  std::vector<TrialRow> rows;
  std::size_t true_planted = 0;   // planted graph, verdict planted
  std::size_t false_random = 0;   // planted graph, verdict random
  std::size_t true_random = 0;    // random graph, verdict random
  std::size_t false_planted = 0;  // random graph, verdict planted
  double accuracy = 0.0;
};

/// Runs the distinguisher on `trials` fresh graphs (alternating random and
/// planted unless cfg.cases restricts it). Rows are in trial order.
DistinguishReport run_distinguish(const RunConfig& cfg, std::ostream* console = nullptr);

void write_distinguish_csv(std::ostream& out, const DistinguishReport& report);
void write_distinguish_summary(std::ostream& out, const DistinguishReport& report);

using GradientFn = std::function<Eigen::MatrixXd(const Eigen::MatrixXd& m, int n_labels)>;

/// Test hooks for the verification suite.
struct VerifyOptions {
  GradientFn gradient;  // defaults to eval_regularizer(...).gradient
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;      // worst observed value of the suite's statistic
  double tolerance = 0.0;  // pass iff every case has statistic <= tolerance
  bool passed() const { return failures == 0; }
};

struct VerifyReport {
  Metadata metadata;
  std::vector<SuiteResult> suites;
  double max_quadform = 0.0;
  bool all_passed() const;
};

/// Gradient, Hessian-inverse, gamma-bound, diameter, projection-oracle and
/// feasibility suites over a fixed sweep of small dimensions.
VerifyReport run_verify(const RunConfig& cfg, const VerifyOptions& opts = {}, std::ostream* console = nullptr);

void write_verify_csv(std::ostream& out, const VerifyReport& report);

}  // namespace local_regret
