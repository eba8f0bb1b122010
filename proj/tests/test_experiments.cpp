#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "local_regret/experiments.hpp"
#include "local_regret/regularizer.hpp"

using namespace local_regret;

namespace {

std::string trace_text(const RegretReport& r) {
  std::ostringstream os;
  write_trace_csv(os, r);
  write_regret_summary(os, r);
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("regret on the triangle max cut") {
  RunConfig cfg;
  cfg.env = EnvKind::maxcut;
  cfg.n = 3;
  cfg.T = 3;
  const auto r = run_regret(cfg);
  REQUIRE(r.opt);
  CHECK(*r.opt == 2.0);
  CHECK(*r.regret == doctest::Approx(2.0 - r.total_expected_payoff));
  CHECK(r.trace.rounds.size() == 3);
  CHECK(r.bound == doctest::Approx(8 * std::sqrt(18.0)));
}

TEST_CASE("regret runs are reproducible and carry their metadata") {
  RunConfig cfg;
  cfg.env = EnvKind::random;
  cfg.n = 3;
  cfg.L = 3;
  cfg.T = 20;
  cfg.seed = 42;
  const std::string a = trace_text(run_regret(cfg)), b = trace_text(run_regret(cfg));
  CHECK(a == b);
  CHECK(a.find("# seed=42\n") != std::string::npos);
  CHECK(a.find("# nu=") != std::string::npos);
  CHECK(a.find("# inner_iters=500\n") != std::string::npos);
  CHECK(a.find("t,i,j,a,b,payoff,expected_payoff,inner_iters,inner_residual\n") != std::string::npos);
  cfg.seed = 43;
  CHECK(trace_text(run_regret(cfg)) != a);
}

TEST_CASE("zero rounds") {
  RunConfig cfg;
  cfg.T = 0;
  const auto r = run_regret(cfg);
  CHECK(r.trace.rounds.empty());
  CHECK(*r.regret == 0.0);
}

TEST_CASE("regret files") {
  RunConfig cfg;
  cfg.T = 5;
  cfg.out = "test_experiments_regret.csv";
  std::ostringstream console;
  const auto r = run_regret(cfg, &console);
  const std::string trace = read_file(cfg.out), summary = read_file(cfg.out + ".summary.csv");
  CHECK(trace.rfind("# command=regret\n", 0) == 0);
  CHECK(summary.find("opt,total_expected_payoff,regret,bound\n") != std::string::npos);
  CHECK(console.str().rfind("opt,total_expected_payoff,regret,bound\n", 0) == 0);
  CHECK(r.trace.rounds.size() == 5);
  std::remove(cfg.out.c_str());
  std::remove((cfg.out + ".summary.csv").c_str());
}

TEST_CASE("regret configuration errors come before any work") {
  RunConfig cfg;
  cfg.env = EnvKind::maxcut;
  cfg.L = 3;
  CHECK_THROWS(run_regret(cfg));
  cfg = RunConfig{};
  cfg.n = 25;
  cfg.L = 2;
  CHECK_THROWS_WITH(run_regret(cfg), doctest::Contains("--no-opt"));
  cfg.compute_opt = false;
  cfg.T = 2;
  const auto r = run_regret(cfg);
  CHECK_FALSE(r.opt);
  cfg = RunConfig{};
  cfg.learner = LearnerKind::oracle;
  CHECK_THROWS(run_regret(cfg));
  cfg = RunConfig{};
  cfg.env = EnvKind::cluster;
  CHECK_THROWS(run_regret(cfg));  // needs k
}

TEST_CASE("regret on the cluster environment") {
  RunConfig cfg;
  cfg.env = EnvKind::cluster;
  cfg.n = 40;
  cfg.k = 20;
  const auto r = run_regret(cfg);
  CHECK(r.dims.n_items == 2);
  CHECK(r.dims.n_labels == 20);
  CHECK(r.T == 1);
  CHECK(*r.opt == 1.0);  // a planted pair is adjacent
}

TEST_CASE("distinguish with the cheating oracle") {
  RunConfig cfg;
  cfg.command = "distinguish";
  cfg.n = 500;
  cfg.k = 50;
  cfg.trials = 20;
  // The clique threshold sits 1% above the null mean T/2, so the average over
  // repetitions must be tight: sd of the mean is sqrt(T/4 / R) = 0.016 here.
  cfg.repetitions = 10000;
  cfg.learner = LearnerKind::oracle;
  const auto r = run_distinguish(cfg);
  CHECK(r.rows.size() == 20);
  CHECK(r.accuracy >= 0.9);
  CHECK(r.true_planted + r.false_random == 10);
  for (std::size_t t = 0; t < r.rows.size(); ++t) CHECK(r.rows[t].trial == t);

  std::ostringstream a, b;
  write_distinguish_csv(a, r);
  write_distinguish_csv(b, run_distinguish(cfg));
  CHECK(a.str() == b.str());
  CHECK(a.str().find("trial,case,regime,n,k,l,n_prime,T,R,avg_payoff,threshold,verdict,seed\n") !=
        std::string::npos);
}

TEST_CASE("distinguish null case with the uniform learner") {
  // The clique threshold sits only 1% above the null mean T/2. Between-cluster
  // edge density fluctuates by about sqrt(T)/(2l) per graph, so the margin
  // dominates that noise only once n is in the hundreds; n = 1000 gives z ~ 7.
  RunConfig cfg;
  cfg.n = 1000;
  cfg.k = 100;
  cfg.trials = 20;
  cfg.repetitions = 2000;
  cfg.learner = LearnerKind::uniform;
  cfg.cases = CaseFilter::random;
  const auto r = run_distinguish(cfg);
  CHECK(r.true_random >= 19);
  CHECK(r.true_planted + r.false_random == 0);
}

TEST_CASE("distinguish parameter derivation") {
  RunConfig cfg;
  cfg.regime = Regime::dense;
  cfg.n = 2000;
  cfg.alpha = 0.25;
  cfg.eps = 0.25;
  cfg.eps_prime = 0.05;
  cfg.trials = 2;
  cfg.repetitions = 1;
  cfg.learner = LearnerKind::uniform;
  const auto r = run_distinguish(cfg);
  const auto& c = r.rows.front().config;
  CHECK(c.k == static_cast<int>(std::lround(std::pow(2000.0, 0.45))));
  CHECK(c.p_s == doctest::Approx(std::pow(2000.0, -0.25)));
  CHECK(c.p_d == doctest::Approx(std::pow(c.k, -0.5)));
  std::ostringstream os;
  write_metadata(os, r.metadata);
  CHECK(os.str().find("# target_beta=") != std::string::npos);

  RunConfig bad;
  bad.regime = Regime::dense;
  bad.k = 40;
  CHECK_THROWS(run_distinguish(bad));
  bad = RunConfig{};
  CHECK_THROWS(run_distinguish(bad));  // no k
}

TEST_CASE("verification suite") {
  RunConfig cfg;
  std::ostringstream console;
  const auto r = run_verify(cfg, {}, &console);
  for (const auto& s : r.suites) {
    INFO(s.name << " worst=" << s.worst);
    CHECK(s.passed());
  }
  CHECK(r.all_passed());
  CHECK(r.max_quadform <= 4.0);
  CHECK(console.str().find("max |quadform|") != std::string::npos);

  SUBCASE("a sign error in the gradient is caught") {
    VerifyOptions mutant;
    mutant.gradient = [](const Eigen::MatrixXd& m, int L) {
      return Eigen::MatrixXd(-eval_regularizer(m, L).gradient);
    };
    const auto bad = run_verify(cfg, mutant);
    CHECK_FALSE(bad.all_passed());
    for (const auto& s : bad.suites)
      if (s.name == "gradient") CHECK_FALSE(s.passed());
  }
}
