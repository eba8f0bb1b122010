#include "local_regret/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "local_regret/environments.hpp"
#include "local_regret/graph.hpp"
#include "local_regret/oracles.hpp"
#include "local_regret/regularizer.hpp"

namespace local_regret {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string num_int(T v) {
  return std::to_string(v);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  return f;
}

Graph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open graph file '" + path + "'");
  return read_graph(f);
}

Graph cycle_graph(int n) {
  Graph g(n);
  if (n == 2) g.add_edge(0, 1);
  if (n >= 3)
    for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

InnerSolverConfig inner_config(const RunConfig& cfg, int n_labels) {
  InnerSolverConfig ic = InnerSolverConfig::defaults(n_labels);
  if (cfg.inner_iters) ic.max_iters = *cfg.inner_iters;
  if (cfg.grad_tol) ic.grad_tol = *cfg.grad_tol;
  ic.validate();
  return ic;
}

bool labelings_within_guard(ProblemDims dims) {
  double count = 1.0;
  for (int i = 0; i < dims.n_items; ++i) count *= dims.n_labels;
  return count <= static_cast<double>(kMaxLabelings);
}

}  // namespace

std::string to_string(EnvKind e) {
  switch (e) {
    case EnvKind::maxcut: return "maxcut";
    case EnvKind::random: return "random";
    case EnvKind::cluster: return "cluster";
  }
  return "?";
}

std::string to_string(LearnerKind l) {
  switch (l) {
    case LearnerKind::ftrl: return "ftrl";
    case LearnerKind::oracle: return "oracle";
    case LearnerKind::uniform: return "uniform";
  }
  return "?";
}

std::string to_string(CaseFilter c) {
  switch (c) {
    case CaseFilter::both: return "both";
    case CaseFilter::random: return "random";
    case CaseFilter::planted: return "planted";
  }
  return "?";
}

EnvKind parse_env(const std::string& s) {
  if (s == "maxcut") return EnvKind::maxcut;
  if (s == "random") return EnvKind::random;
  if (s == "cluster") return EnvKind::cluster;
  throw std::invalid_argument("unknown environment '" + s + "'");
}

LearnerKind parse_learner(const std::string& s) {
  if (s == "ftrl") return LearnerKind::ftrl;
  if (s == "oracle") return LearnerKind::oracle;
  if (s == "uniform") return LearnerKind::uniform;
  throw std::invalid_argument("unknown learner '" + s + "'");
}

CaseFilter parse_cases(const std::string& s) {
  if (s == "both") return CaseFilter::both;
  if (s == "random") return CaseFilter::random;
  if (s == "planted") return CaseFilter::planted;
  throw std::invalid_argument("unknown case filter '" + s + "'");
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
}

// ---------------------------------------------------------------- regret

RegretReport run_regret(const RunConfig& cfg, std::ostream* console) {
  RegretReport rep;
  Metadata& meta = rep.metadata;
  meta = {{"command", "regret"}, {"version", kArtifactVersion}, {"seed", num_int(cfg.seed)},
          {"env", to_string(cfg.env)}, {"learner", to_string(cfg.learner)}};
  if (cfg.learner == LearnerKind::oracle)
    throw std::invalid_argument("regret: the oracle learner only applies to the distinguish command");

  std::vector<PayoffFunction> seq;
  switch (cfg.env) {
    case EnvKind::maxcut: {
      const int L = cfg.L.value_or(2);
      if (L != 2) throw std::invalid_argument("regret: maxcut needs L = 2, got " + std::to_string(L));
      Graph g = cfg.graph_path.empty() ? cycle_graph(cfg.n.value_or(4)) : load_graph(cfg.graph_path);
      if (cfg.n && *cfg.n != g.vertex_count())
        throw std::invalid_argument("regret: --n " + std::to_string(*cfg.n) + " disagrees with the graph's " +
                                    std::to_string(g.vertex_count()) + " vertices");
      rep.dims = ProblemDims(g.vertex_count(), 2);
      const auto edges = g.edges();
      rep.T = cfg.T.value_or(edges.size());
      if (rep.T > 0 && edges.empty()) throw std::invalid_argument("regret: maxcut graph has no edges");
      // Passes over the edge set, each in a fresh random order.
      std::vector<Edge> order;
      Rng order_rng = make_rng(cfg.seed, "order");
      while (order.size() < rep.T) {
        std::vector<Edge> pass = edges;
        shuffle(pass, order_rng);
        for (const Edge& e : pass) {
          if (order.size() == rep.T) break;
          order.push_back(e);
        }
      }
      if (rep.T > 0) seq = maxcut_env(g, 2, order).sequence();
      meta.emplace_back("graph", cfg.graph_path.empty() ? "cycle" : cfg.graph_path);
      meta.emplace_back("edges", num_int(edges.size()));
      break;
    }
    case EnvKind::random: {
      rep.dims = ProblemDims(cfg.n.value_or(4), cfg.L.value_or(2));
      rep.T = cfg.T.value_or(100);
      if (rep.dims.n_items < 2) throw std::invalid_argument("regret: random environment needs n >= 2");
      Rng env_rng = make_rng(cfg.seed, "environment");
      if (rep.T > 0) seq = random_env(rep.dims, rep.T, env_rng).sequence();
      break;
    }
    case EnvKind::cluster: {
      if (!cfg.k) throw std::invalid_argument("regret: cluster environment needs --k");
      const double p = cfg.p.value_or(0.5), q = cfg.q.value_or(1.0);
      Graph g;
      if (cfg.graph_path.empty()) {
        Rng graph_rng = make_rng(cfg.seed, "graph");
        g = gen_planted(cfg.n.value_or(200), p, *cfg.k, q, graph_rng).graph;
        meta.emplace_back("graph", "planted");
        meta.emplace_back("p", num(p));
        meta.emplace_back("q", num(q));
      } else {
        g = load_graph(cfg.graph_path);
        if (cfg.n && *cfg.n != g.vertex_count())
          throw std::invalid_argument("regret: --n disagrees with the graph's vertex count");
        meta.emplace_back("graph", cfg.graph_path);
      }
      Rng part_rng = make_rng(cfg.seed, "partition");
      const ClusterPartition part = random_partition(g, *cfg.k, part_rng);
      rep.dims = ProblemDims(part.cluster_count(), part.cluster_size);
      if (cfg.L && *cfg.L != part.cluster_size)
        throw std::invalid_argument("regret: --L " + std::to_string(*cfg.L) + " disagrees with cluster size l = " +
                                    std::to_string(part.cluster_size));
      seq = cluster_edge_env(g, part).sequence();
      rep.T = seq.size();
      if (cfg.T && *cfg.T != rep.T)
        throw std::invalid_argument("regret: cluster environment has T = C(n', 2) = " + std::to_string(rep.T));
      meta.emplace_back("graph_vertices", num_int(g.vertex_count()));
      meta.emplace_back("k", num_int(*cfg.k));
      break;
    }
  }

  if (cfg.compute_opt && !labelings_within_guard(rep.dims))
    throw std::invalid_argument("regret: L^n labelings exceed the brute-force limit of " +
                                std::to_string(kMaxLabelings) + "; pass --no-opt to skip OPT");

  const InnerSolverConfig ic = inner_config(cfg, rep.dims.n_labels);
  rep.nu = cfg.nu ? *cfg.nu : choose_nu(rep.dims, std::max<std::size_t>(rep.T, 1));
  if (!(rep.nu > 0.0)) throw std::invalid_argument("regret: nu must be positive");
  meta.emplace_back("n", num_int(rep.dims.n_items));
  meta.emplace_back("L", num_int(rep.dims.n_labels));
  meta.emplace_back("T", num_int(rep.T));
  meta.emplace_back("nu", num(rep.nu));
  meta.emplace_back("inner_step", num(ic.step_size));
  meta.emplace_back("inner_iters", num_int(ic.max_iters));
  meta.emplace_back("grad_tol", num(ic.grad_tol));
  meta.emplace_back("opt", cfg.compute_opt ? "brute_force" : "off");
  meta.emplace_back("bound_constant", num(kRegretBoundConstant));

  std::unique_ptr<OnlineLearner> learner;
  if (cfg.learner == LearnerKind::ftrl)
    learner = std::make_unique<FtrlLearner>(rep.dims, rep.nu, ic);
  else
    learner = std::make_unique<UniformLearner>(rep.dims.n_labels);

  SequenceEnvironment env(seq);
  Rng play_rng = make_rng(cfg.seed, "play");
  rep.trace = play(env, *learner, play_rng);
  rep.total_expected_payoff = rep.trace.total_expected_payoff;
  rep.total_payoff = rep.trace.total_payoff;
  if (cfg.compute_opt) {
    rep.opt = brute_force_opt(seq, rep.dims).opt_value;
    rep.regret = *rep.opt - rep.total_expected_payoff;
  }
  rep.bound = kRegretBoundConstant *
              std::sqrt(static_cast<double>(rep.dims.n_items) * rep.dims.n_labels * static_cast<double>(rep.T));

  if (!cfg.out.empty()) {
    auto f = open_output(cfg.out);
    write_trace_csv(f, rep);
    auto s = open_output(cfg.out + ".summary.csv");
    write_regret_summary(s, rep);
  }
  if (console) {
    *console << "opt,total_expected_payoff,regret,bound\n"
             << (rep.opt ? num(*rep.opt) : "NA") << ',' << num(rep.total_expected_payoff) << ','
             << (rep.regret ? num(*rep.regret) : "NA") << ',' << num(rep.bound) << '\n';
  }
  return rep;
}

void write_trace_csv(std::ostream& out, const RegretReport& report) {
  write_metadata(out, report.metadata);
  out << "t,i,j,a,b,payoff,expected_payoff,inner_iters,inner_residual\n";
  for (const RoundRecord& r : report.trace.rounds) {
    out << r.t << ',' << r.i << ',' << r.j << ',' << r.a << ',' << r.b << ',' << num(r.payoff) << ','
        << num(r.expected_payoff) << ',' << r.inner_iters << ',' << num(r.inner_residual) << '\n';
  }
}

void write_regret_summary(std::ostream& out, const RegretReport& report) {
  write_metadata(out, report.metadata);
  out << "opt,total_expected_payoff,regret,bound\n"
      << (report.opt ? num(*report.opt) : "NA") << ',' << num(report.total_expected_payoff) << ','
      << (report.regret ? num(*report.regret) : "NA") << ',' << num(report.bound) << '\n';
}

// ------------------------------------------------------------ distinguish

DistinguishReport run_distinguish(const RunConfig& cfg, std::ostream* console) {
  DistinguishReport rep;
  Metadata& meta = rep.metadata;
  const int n = cfg.n.value_or(200);
  if (cfg.trials == 0) throw std::invalid_argument("distinguish: --trials must be positive");

  int k = 0;
  if (cfg.k) {
    k = *cfg.k;
  } else if (cfg.regime == Regime::clique && cfg.eps) {
    k = static_cast<int>(std::lround(std::pow(n, 0.5 - *cfg.eps)));
  } else if (cfg.regime == Regime::dense && cfg.eps_prime) {
    k = static_cast<int>(std::lround(std::pow(n, 0.5 - *cfg.eps_prime)));
  } else {
    throw std::invalid_argument("distinguish: pass --k (or --eps for clique, --eps-prime for dense)");
  }

  double p_s = 0.5, p_d = 1.0;
  if (cfg.regime == Regime::dense) {
    if (cfg.p) {
      p_s = *cfg.p;
    } else if (cfg.alpha) {
      p_s = std::pow(n, -*cfg.alpha);
    } else {
      throw std::invalid_argument("distinguish: dense regime needs --p or --alpha");
    }
    if (cfg.q) {
      p_d = *cfg.q;
    } else if (cfg.alpha && cfg.eps) {
      p_d = std::pow(k, -*cfg.alpha - *cfg.eps);
    } else {
      throw std::invalid_argument("distinguish: dense regime needs --q or --alpha with --eps");
    }
  }
  const DistinguisherConfig dc = DistinguisherConfig::make(cfg.regime, n, k, cfg.repetitions, p_s, p_d);
  const ProblemDims dims(dc.n_prime, dc.l);
  const InnerSolverConfig ic = inner_config(cfg, dc.l);
  const double nu = cfg.nu ? *cfg.nu : choose_nu(dims, dc.T);

  meta = {{"command", "distinguish"},
          {"version", kArtifactVersion},
          {"seed", num_int(cfg.seed)},
          {"regime", to_string(dc.regime)},
          {"learner", to_string(cfg.learner)},
          {"cases", to_string(cfg.cases)},
          {"trials", num_int(cfg.trials)},
          {"n", num_int(dc.n)},
          {"k", num_int(dc.k)},
          {"l", num_int(dc.l)},
          {"n_prime", num_int(dc.n_prime)},
          {"T", num_int(dc.T)},
          {"R", num_int(dc.R)},
          {"p_s", num(dc.p_s)},
          {"p_d", num(dc.p_d)},
          {"threshold", num(dc.threshold)}};
  if (cfg.learner == LearnerKind::ftrl) {
    meta.emplace_back("nu", num(nu));
    meta.emplace_back("inner_step", num(ic.step_size));
    meta.emplace_back("inner_iters", num_int(ic.max_iters));
    meta.emplace_back("grad_tol", num(ic.grad_tol));
  }
  // Regret target the learner would need at these asymptotic parameters.
  std::optional<RegretTarget> target;
  if (cfg.regime == Regime::clique && cfg.eps) {
    target = clique_regret_target(n, *cfg.eps, cfg.slack);
  } else if (cfg.regime == Regime::dense && cfg.alpha && cfg.eps && cfg.eps_prime) {
    target = dense_regret_target(n, *cfg.alpha, *cfg.eps, *cfg.eps_prime, cfg.slack);
  }
  if (target) {
    meta.emplace_back("slack", num(cfg.slack));
    meta.emplace_back("target_beta", num(target->beta));
    meta.emplace_back("target_regret", num(target->target_regret));
    meta.emplace_back("target_ratio_k2", num(target->ratio_to_k2));
  }

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    TrialRow row;
    row.trial = t;
    row.planted_case = cfg.cases == CaseFilter::planted || (cfg.cases == CaseFilter::both && t % 2 == 1);
    row.config = dc;
    row.seed = derive_seed(cfg.seed, "trial", t);
    Rng graph_rng = make_rng(cfg.seed, "graph", t);
    PlantedGraph pg;
    if (row.planted_case)
      pg = gen_planted(n, dc.p_s, k, dc.p_d, graph_rng);
    else
      pg.graph = gen_gnp(n, dc.p_s, graph_rng);

    LearnerFactory factory = [&](std::size_t, const ClusterPartition& part) -> std::unique_ptr<OnlineLearner> {
      switch (cfg.learner) {
        case LearnerKind::ftrl: return std::make_unique<FtrlLearner>(dims, nu, ic);
        case LearnerKind::oracle: return std::make_unique<CheatingOracleLearner>(part, pg.planted);
        case LearnerKind::uniform: return std::make_unique<UniformLearner>(dc.l);
      }
      return nullptr;
    };
    row.verdict = run_distinguisher(pg.graph, dc, factory, row.seed).verdict;
    if (row.planted_case)
      ++(row.verdict.planted ? rep.true_planted : rep.false_random);
    else
      ++(row.verdict.planted ? rep.false_planted : rep.true_random);
    rep.rows.push_back(row);
  }
  rep.accuracy = static_cast<double>(rep.true_planted + rep.true_random) / static_cast<double>(cfg.trials);

  if (!cfg.out.empty()) {
    auto f = open_output(cfg.out);
    write_distinguish_csv(f, rep);
    auto s = open_output(cfg.out + ".summary.csv");
    write_distinguish_summary(s, rep);
  }
  if (console) {
    *console << "true_planted,false_random,true_random,false_planted,accuracy\n"
             << rep.true_planted << ',' << rep.false_random << ',' << rep.true_random << ',' << rep.false_planted
             << ',' << num(rep.accuracy) << '\n';
  }
  return rep;
}

void write_distinguish_csv(std::ostream& out, const DistinguishReport& report) {
  write_metadata(out, report.metadata);
  out << "trial,case,regime,n,k,l,n_prime,T,R,avg_payoff,threshold,verdict,seed\n";
  for (const TrialRow& r : report.rows) {
    const DistinguisherConfig& c = r.config;
    out << r.trial << ',' << (r.planted_case ? "planted" : "random") << ',' << to_string(c.regime) << ',' << c.n
        << ',' << c.k << ',' << c.l << ',' << c.n_prime << ',' << c.T << ',' << c.R << ','
        << num(r.verdict.avg_payoff) << ',' << num(r.verdict.threshold) << ','
        << (r.verdict.planted ? "planted" : "random") << ',' << r.seed << '\n';
  }
}

void write_distinguish_summary(std::ostream& out, const DistinguishReport& report) {
  write_metadata(out, report.metadata);
  out << "true_planted,false_random,true_random,false_planted,accuracy\n"
      << report.true_planted << ',' << report.false_random << ',' << report.true_random << ','
      << report.false_planted << ',' << num(report.accuracy) << '\n';
}

// ----------------------------------------------------------------- verify

bool VerifyReport::all_passed() const {
  for (const SuiteResult& s : suites)
    if (!s.passed()) return false;
  return true;
}

namespace {

struct SuiteTally {
  SuiteResult r;
  SuiteTally(std::string name, double tol) {
    r.name = std::move(name);
    r.tolerance = tol;
  }
  void add(double stat) {
    ++r.cases;
    if (!(stat <= r.tolerance)) ++r.failures;
    if (!(stat <= r.worst)) r.worst = stat;  // NaN propagates as worst
  }
};

const std::vector<ProblemDims>& sweep_dims() {
  static const std::vector<ProblemDims> dims = {{2, 2}, {2, 3}, {2, 5}, {3, 2}, {3, 3},
                                                {3, 5}, {4, 2}, {4, 3}, {4, 5}};
  return dims;
}

}  // namespace

VerifyReport run_verify(const RunConfig& cfg, const VerifyOptions& opts, std::ostream* console) {
  VerifyReport rep;
  rep.metadata = {{"command", "verify"}, {"version", kArtifactVersion}, {"seed", num_int(cfg.seed)}};
  const GradientFn gradient =
      opts.gradient ? opts.gradient
                    : GradientFn([](const Eigen::MatrixXd& m, int L) { return eval_regularizer(m, L).gradient; });

  {
    // Analytic gradient against central differences of the value.
    SuiteTally s("gradient", 1e-4);
    Rng rng = make_rng(cfg.seed, "verify-gradient");
    const std::vector<ProblemDims> dims = {{1, 2}, {2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3}, {1, 5}, {1, 9}};
    for (int c = 0; c < 24; ++c) {
      const ProblemDims d = dims[c % dims.size()];
      const PseudoMomentMatrix m = random_feasible(d, rng);
      const Eigen::MatrixXd g = gradient(m.entries, d.n_labels);
      const Eigen::MatrixXd fd = fd_gradient(
          [&](const Eigen::MatrixXd& x) { return eval_regularizer(x, d.n_labels).value; }, m.entries, 1e-5);
      s.add((g - fd).norm() / fd.norm());
    }
    rep.suites.push_back(s.r);
  }
  {
    SuiteTally ident("hessian_identity", 1e-6);
    SuiteTally fd("hessian_fd", 1e-3);
    Rng rng = make_rng(cfg.seed, "verify-hessian");
    const std::vector<ProblemDims> dims = {{1, 2}, {2, 2}, {3, 2}, {4, 2}, {2, 3}, {1, 5}, {2, 4}, {1, 8}};
    for (int c = 0; c < 16; ++c) {
      const ProblemDims d = dims[c % dims.size()];
      const HessianCheck h = hessian_inverse_identity_check(random_feasible(d, rng));
      ident.add(h.identity_deviation);
      fd.add(h.fd_relative_error);
    }
    rep.suites.push_back(ident.r);
    rep.suites.push_back(fd.r);
  }
  {
    SuiteTally s("gamma", 4.0);
    Rng rng = make_rng(cfg.seed, "verify-gamma");
    const auto& dims = sweep_dims();
    for (int c = 0; c < 1008; ++c) {
      const ProblemDims d = dims[c % dims.size()];
      const PseudoMomentMatrix m = random_feasible(d, rng);
      const int i = static_cast<int>(uniform_index(rng, d.n_items));
      int j = static_cast<int>(uniform_index(rng, d.n_items - 1));
      if (j >= i) ++j;
      Eigen::MatrixXd p(d.n_labels, d.n_labels);
      for (int a = 0; a < d.n_labels; ++a)
        for (int b = 0; b < d.n_labels; ++b) p(a, b) = uniform(rng, -1.0, 1.0);
      const double v = std::abs(inv_hessian_quadform(m, i, j, p).value);
      s.add(v);
    }
    rep.max_quadform = s.r.worst;
    rep.suites.push_back(s.r);
  }
  {
    // |log det(I + L M)| / (n L) must stay below 1.
    SuiteTally s("diameter", 1.0);
    Rng rng = make_rng(cfg.seed, "verify-diameter");
    const auto& dims = sweep_dims();
    for (int c = 0; c < 108; ++c) {
      const ProblemDims d = dims[c % dims.size()];
      s.add(std::abs(eval_regularizer(random_feasible(d, rng)).value) / diameter_bound(d));
    }
    rep.suites.push_back(s.r);
  }
  SuiteTally feas("feasibility", kFeasibilityTol);
  {
    SuiteTally s("projection_oracle", 1e-4);
    Rng rng = make_rng(cfg.seed, "verify-projection");
    const ProblemDims d(2, 2);
    for (int c = 0; c < 50; ++c) {
      Eigen::MatrixXd raw(d.side(), d.side());
      for (int a = 0; a < d.side(); ++a)
        for (int b = a; b < d.side(); ++b) raw(a, b) = raw(b, a) = uniform(rng, -0.5, 1.5);
      const ProjectionResult dyk = project(raw, d);
      const BarrierResult qp = qp_projection_oracle(raw, d);
      s.add((dyk.matrix.entries - qp.matrix.entries).norm());
      const FeasibilityReport fr = check_feasibility(dyk.matrix);
      feas.add(std::max({fr.asymmetry, fr.box_violation, fr.block_sum_violation, fr.psd_violation}));
    }
    rep.suites.push_back(s.r);
  }
  {
    Rng rng = make_rng(cfg.seed, "verify-feasibility");
    for (const ProblemDims& d : sweep_dims()) {
      for (int c = 0; c < 10; ++c) {
        const FeasibilityReport fr = check_feasibility(random_feasible(d, rng));
        feas.add(std::max({fr.asymmetry, fr.box_violation, fr.block_sum_violation, fr.psd_violation}));
      }
      const FeasibilityReport fu = check_feasibility(uniform_matrix(d));
      feas.add(std::max({fu.asymmetry, fu.box_violation, fu.block_sum_violation, fu.psd_violation}));
    }
    rep.suites.push_back(feas.r);
  }

  if (!cfg.out.empty()) {
    auto f = open_output(cfg.out);
    write_verify_csv(f, rep);
  }
  if (console) {
    write_verify_csv(*console, rep);
    *console << "max |quadform| = " << num(rep.max_quadform) << " (bound 4)\n";
  }
  return rep;
}

void write_verify_csv(std::ostream& out, const VerifyReport& report) {
  write_metadata(out, report.metadata);
  out << "suite,cases,failures,worst,tolerance,status\n";
  for (const SuiteResult& s : report.suites) {
    out << s.name << ',' << s.cases << ',' << s.failures << ',' << num(s.worst) << ',' << num(s.tolerance) << ','
        << (s.passed() ? "PASS" : "FAIL") << '\n';
  }
}

}  // namespace local_regret
