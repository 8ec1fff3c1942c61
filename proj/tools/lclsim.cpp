// lclsim: generate instances, run solvers, check labelings, sweep and fit.
#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "lcl/bench.hpp"
#include "lcl/checkers.hpp"
#include "lcl/graph_io.hpp"

using namespace lcl;

namespace {

Regime parse_regime(const std::string& s) {
  if (s == "poly") return Regime::Poly;
  if (s == "logstar") return Regime::Logstar;
  throw Error("regime must be poly or logstar");
}

int meta_int(const nlohmann::json& meta, const char* key, int fallback) {
  return meta.contains(key) && meta.at(key).is_number_integer() ? meta.at(key).get<int>() : fallback;
}

void print_violations(const Verdict& v, std::size_t limit = 20) {
  std::size_t shown = 0;
  for (const auto& x : v.violations) {
    if (shown++ == limit) {
      std::cerr << "  ... " << v.violations.size() - limit << " more\n";
      break;
    }
    std::cerr << "  node " << x.node << " [" << x.rule << "] " << x.message << '\n';
  }
}

struct GenArgs {
  std::string family = "lb";
  std::uint64_t n = 1000;
  int k = 2;
  int delta = 5;
  int d = 2;
  std::vector<double> alphas;
  std::string regime = "poly";
  std::string rounding = "half-up";
  std::uint64_t seed = 1;
  std::uint64_t id_factor = 1;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  GraphDocument doc;
  if (a.family == "lb" || a.family == "weighted") {
    ExperimentConfig c;
    c.family = a.family;
    c.k = a.k;
    c.delta = a.delta;
    c.d = a.d;
    c.alphas = a.alphas;
    c.regime = parse_regime(a.regime);
    c.rounding = a.rounding == "ceil" ? Rounding::Ceil : Rounding::HalfUp;
    Instance inst = make_instance(c, a.n, a.seed);
    doc.tree = std::move(inst.tree);
    doc.meta = std::move(inst.meta);
    doc.explicit_inputs = a.family == "weighted";
  } else if (a.family == "path") {
    doc.tree = path_graph(a.n).with_ids(random_ids(a.n, a.id_factor, a.seed));
    doc.meta = {{"family", "path"}};
  } else if (a.family == "random") {
    doc.tree = random_tree(a.n, static_cast<std::size_t>(a.delta), a.seed).with_ids(random_ids(a.n, a.id_factor, a.seed));
    doc.meta = {{"family", "random"}, {"delta", a.delta}};
  } else if (a.family == "balanced") {
    doc.tree = balanced_regular_tree(static_cast<std::size_t>(a.delta), a.n);
    doc.meta = {{"family", "balanced"}, {"delta", a.delta}};
  } else {
    throw Error("unknown family '" + a.family + "'");
  }
  doc.explicit_ids = true;
  doc.meta["k"] = a.k;
  const std::string text = canonical_dump(graph_to_json(doc));
  if (a.out.empty()) std::cout << text << '\n';
  else write_text_file(a.out, text);
  std::cerr << "generated " << doc.tree.size() << " nodes, max degree " << doc.tree.max_degree() << '\n';
  return 0;
}

struct SolveArgs {
  std::string algorithm = "generic";
  std::string variant = "2.5";
  std::string graph;
  std::string out;
  std::string trace;
  int k = 0;
  int delta = 0;
  int d = -1;
  std::vector<std::uint64_t> gammas;
};

int cmd_solve(const SolveArgs& a) {
  GraphDocument doc = load_graph(a.graph);
  SolveRequest req;
  req.algorithm = parse_algorithm(a.algorithm);
  req.variant = parse_variant(a.variant);
  req.k = a.k > 0 ? a.k : meta_int(doc.meta, "k", 2);
  req.delta = a.delta > 0 ? a.delta : meta_int(doc.meta, "delta", 5);
  req.d = a.d >= 0 ? a.d : meta_int(doc.meta, "d", 2);
  req.gammas = a.gammas;
  SolveOutcome out = solve_and_check(doc.tree, req);
  if (!a.out.empty()) write_text_file(a.out, canonical_dump(labeling_to_json(doc.tree, out.labels, out.problem)));
  if (!a.trace.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, doc.tree, &out.levels, out.trace);
    write_text_file(a.trace, csv.str());
  }
  std::cout << std::setprecision(12) << trace_summary(out.trace).dump() << '\n';
  if (!out.verdict.ok()) {
    std::cerr << "checker rejected the output:\n";
    print_violations(out.verdict);
    return 1;
  }
  return 0;
}

struct CheckArgs {
  std::string graph;
  std::string labels;
  std::string problem;
};

int cmd_check(const CheckArgs& a) {
  GraphDocument doc = load_graph(a.graph);
  const Tree& tree = doc.tree;
  ProblemParams p;
  Labeling l = labeling_from_json(tree, read_json_file(a.labels), &p);
  if (!a.problem.empty()) {
    ProblemParams q = parse_problem(a.problem);
    if (q.problem != p.problem || q.variant != p.variant) throw Error("labeling file is for problem " + std::string(problem_name(p)));
  }
  std::vector<InputLabel> inputs = tree.has_inputs() ? tree.inputs() : std::vector<InputLabel>(tree.size(), InputLabel::Active);
  Verdict v;
  switch (p.problem) {
    case Problem::Khier:
      v = check_khier(tree, compute_levels(tree, p.k), colors_of(l), p.k, p.variant);
      break;
    case Problem::Weighted:
      v = check_weighted(tree, inputs, l.nodes, p.variant, p.delta, p.d, p.k);
      break;
    case Problem::Dfree: {
      const NodeMask weight = input_mask(tree, InputLabel::Weight);
      std::vector<DfreeInput> din(tree.size(), DfreeInput::W);
      std::vector<WeightChoice> choices(tree.size(), WeightChoice::Decline);
      for (NodeId u = 0; u < tree.size(); ++u) {
        choices[u] = l.nodes[u].choice;
        for (NodeId w : tree.neighbors(u))
          if (!weight[w]) din[u] = DfreeInput::A;
      }
      v = check_dfree(tree, din, choices, p.d, p.delta, weight);
      break;
    }
    case Problem::Hier: {
      std::vector<HierTag> tags(tree.size());
      for (NodeId u = 0; u < tree.size(); ++u) tags[u] = l.nodes[u].tag;
      v = check_hier_labeling(tree, tags, l.orient, p.k);
      break;
    }
    case Problem::WeightAugmented:
      v = check_weight_augmented(tree, inputs, l, p.k);
      break;
  }
  if (v.ok()) {
    std::cout << "ok: " << problem_name(p) << " labeling of " << tree.size() << " nodes is valid\n";
    return 0;
  }
  std::cout << "invalid: " << v.violations.size() << " violations\n";
  print_violations(v);
  return 1;
}

struct BenchArgs {
  std::string config;
  std::string csv;
  unsigned workers = 0;
  int seeds = 0;
  std::vector<std::uint64_t> n_grid;
};

int cmd_bench(const BenchArgs& a) {
  ExperimentConfig c = config_from_json(read_json_file(a.config));
  if (!a.csv.empty()) c.csv = a.csv;
  if (a.seeds > 0) c.seeds = a.seeds;
  if (!a.n_grid.empty()) c.n_grid = a.n_grid;
  ExperimentResult r = run_experiment(c, a.workers);
  std::cout << std::setprecision(6);
  for (const auto& row : r.rows)
    std::cout << "n=" << row.n << " seed=" << row.seed << " avg=" << row.avg.value() << " worst=" << row.worst
              << " wall_ms=" << row.wall_ms << (row.valid ? "" : "  INVALID: " + row.first_violation) << '\n';
  std::cout << "seeds=" << r.tally.seeds << " copy_violations=" << r.tally.copy_violations << " phases=" << r.tally.phases
            << " shrink_violations=" << r.tally.shrink_violations << '\n';
  return r.all_valid ? 0 : 1;
}

int cmd_fit(const std::string& csv, const std::string& x, const std::string& y) {
  const XTransform t = x == "logstar" ? XTransform::LogStar : XTransform::N;
  if (x != "n" && x != "logstar") throw Error("--x must be n or logstar");
  const auto pts = read_csv_columns(csv, "n", y);
  const FitResult f = fit_with_drop(pts, t);
  std::cout << std::setprecision(6) << "slope=" << f.slope << " intercept=" << f.intercept << " r2=" << f.r2
            << " points=" << f.points;
  if (f.dropped_smallest) std::cout << " dropped_n=" << static_cast<std::uint64_t>(f.dropped_x);
  std::cout << '\n';
  return 0;
}

int cmd_predict(int delta, int d, int k, const std::string& regime) {
  const Prediction p = predict(delta, d, k, parse_regime(regime));
  std::cout << std::setprecision(12) << "exponent=" << p.exponent << " x=" << p.x << " x_prime=" << p.x_prime << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LCL simulation and benchmarking on trees"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate an instance");
  g->add_option("--family", gen.family, "lb | weighted | path | random | balanced");
  g->add_option("--n", gen.n, "target node count");
  g->add_option("--k", gen.k);
  g->add_option("--delta", gen.delta);
  g->add_option("--d", gen.d);
  g->add_option("--alphas", gen.alphas, "exponents alpha_1..alpha_{k-1}");
  g->add_option("--regime", gen.regime, "poly | logstar");
  g->add_option("--rounding", gen.rounding, "half-up | ceil");
  g->add_option("--seed", gen.seed);
  g->add_option("--id-factor", gen.id_factor);
  g->add_option("--out", gen.out);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "run a solver and check its output");
  s->add_option("--algorithm", solve.algorithm, "generic | apoly | labeling | waug");
  s->add_option("--variant", solve.variant, "2.5 | 3.5");
  s->add_option("--graph", solve.graph)->required();
  s->add_option("--out", solve.out);
  s->add_option("--trace", solve.trace);
  s->add_option("--k", solve.k);
  s->add_option("--delta", solve.delta);
  s->add_option("--d", solve.d);
  s->add_option("--gammas", solve.gammas);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "validate a labeling file");
  c->add_option("--graph", check.graph)->required();
  c->add_option("--labels", check.labels)->required();
  c->add_option("--problem", check.problem);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "run an experiment sweep");
  b->add_option("--config", bench.config)->required();
  b->add_option("--csv", bench.csv);
  b->add_option("--workers", bench.workers);
  b->add_option("--seeds", bench.seeds);
  b->add_option("--n-grid", bench.n_grid);

  std::string fit_csv, fit_x = "n", fit_y = "avg_rounds";
  auto* f = app.add_subcommand("fit", "fit a scaling exponent");
  f->add_option("--csv", fit_csv)->required();
  f->add_option("--x", fit_x, "n | logstar");
  f->add_option("--y", fit_y);

  int p_delta = 5, p_d = 2, p_k = 2;
  std::string p_regime = "poly";
  auto* p = app.add_subcommand("predict", "closed-form exponent");
  p->add_option("--delta", p_delta);
  p->add_option("--d", p_d);
  p->add_option("--k", p_k);
  p->add_option("--regime", p_regime);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*c) return cmd_check(check);
    if (*b) return cmd_bench(bench);
    if (*f) return cmd_fit(fit_csv, fit_x, fit_y);
    if (*p) return cmd_predict(p_delta, p_d, p_k, p_regime);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
