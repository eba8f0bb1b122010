#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "local_regret/experiments.hpp"

using namespace local_regret;

namespace {

template <typename T>
void set_if(const CLI::App* sub, const std::string& flag, const T& value, std::optional<T>& target) {
  if (sub->get_option_no_throw(flag) != nullptr && sub->count(flag) > 0) target = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online local learning: FTRL regret runs, planted-subgraph distinguisher, numeric checks"};
  app.require_subcommand(1);

  int n = 0, L = 0, k = 0, inner_iters = 0;
  std::size_t T = 0, repetitions = 0;
  double nu = 0, grad_tol = 0, p = 0, q = 0, alpha = 0, eps = 0, eps_prime = 0;
  RunConfig cfg;
  std::string env = "random", regime = "clique", learner = "ftrl", cases = "both";
  bool no_opt = false;

  auto* regret = app.add_subcommand("regret", "play FTRL against an adversary and measure regret");
  auto* distinguish = app.add_subcommand("distinguish", "random vs planted graph distinguisher");
  auto* verify = app.add_subcommand("verify", "numeric verification suites");

  for (CLI::App* sub : {regret, distinguish, verify}) {
    sub->add_option("--seed", cfg.seed, "root seed")->capture_default_str();
    sub->add_option("--out", cfg.out, "output file (summary goes to <out>.summary.csv)");
  }
  for (CLI::App* sub : {regret, distinguish}) {
    sub->add_option("--n", n, "items (regret) or graph vertices (distinguish, cluster env)")->check(CLI::PositiveNumber);
    sub->add_option("--k", k, "planted set size")->check(CLI::PositiveNumber);
    sub->add_option("--p", p, "ambient edge density")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--q", q, "planted edge density")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--nu", nu, "FTRL learning rate override");
    sub->add_option("--inner-iters", inner_iters, "inner solver iteration cap");
    sub->add_option("--grad-tol", grad_tol, "inner solver gradient tolerance");
    sub->add_option("--learner", learner, "learner")->check(CLI::IsMember({"ftrl", "oracle", "uniform"}))->capture_default_str();
  }
  regret->add_option("--L", L, "labels")->check(CLI::PositiveNumber);
  regret->add_option("--T", T, "rounds");
  regret->add_option("--env", env, "adversary")->check(CLI::IsMember({"maxcut", "random", "cluster"}))->capture_default_str();
  regret->add_option("--graph", cfg.graph_path, "graph file for maxcut/cluster environments");
  regret->add_flag("--no-opt", no_opt, "skip the brute-force OPT (regret not reported)");

  distinguish->add_option("--regime", regime, "planted regime")->check(CLI::IsMember({"clique", "dense"}))->capture_default_str();
  distinguish->add_option("--alpha", alpha, "dense regime: p_s = n^-alpha");
  distinguish->add_option("--eps", eps, "clique: k = n^(1/2-eps); dense: p_d = k^(-alpha-eps)");
  distinguish->add_option("--eps-prime", eps_prime, "dense regime: k = n^(1/2-eps')");
  distinguish->add_option("--slack", cfg.slack, "constant standing in for the vanishing term in beta")->check(CLI::NonNegativeNumber);
  distinguish->add_option("--repetitions", repetitions, "repetitions R (default n^4/k^3.7)");
  distinguish->add_option("--trials", cfg.trials, "number of graphs")->capture_default_str();
  distinguish->add_option("--cases", cases, "which graphs to draw")->check(CLI::IsMember({"both", "random", "planted"}))->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const CLI::App* sub = app.get_subcommands().front();
    set_if(sub, "--n", n, cfg.n);
    set_if(sub, "--L", L, cfg.L);
    set_if(sub, "--T", T, cfg.T);
    set_if(sub, "--k", k, cfg.k);
    set_if(sub, "--inner-iters", inner_iters, cfg.inner_iters);
    set_if(sub, "--nu", nu, cfg.nu);
    set_if(sub, "--grad-tol", grad_tol, cfg.grad_tol);
    set_if(sub, "--p", p, cfg.p);
    set_if(sub, "--q", q, cfg.q);
    set_if(sub, "--alpha", alpha, cfg.alpha);
    set_if(sub, "--eps", eps, cfg.eps);
    set_if(sub, "--eps-prime", eps_prime, cfg.eps_prime);
    set_if(sub, "--repetitions", repetitions, cfg.repetitions);
    cfg.env = parse_env(env);
    cfg.regime = parse_regime(regime);
    cfg.learner = parse_learner(learner);
    cfg.cases = parse_cases(cases);
    cfg.compute_opt = !no_opt;

    if (regret->parsed()) {
      cfg.command = "regret";
      run_regret(cfg, &std::cout);
      return 0;
    }
    if (distinguish->parsed()) {
      cfg.command = "distinguish";
      run_distinguish(cfg, &std::cout);
      return 0;
    }
    cfg.command = "verify";
    return run_verify(cfg, {}, &std::cout).all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
