#include "lcl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "lcl/graph_io.hpp"

namespace lcl {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Generic: return "generic";
    case Algorithm::APoly: return "apoly";
    case Algorithm::Labeling: return "labeling";
    case Algorithm::Waug: return "waug";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  if (s == "generic") return Algorithm::Generic;
  if (s == "apoly") return Algorithm::APoly;
  if (s == "labeling") return Algorithm::Labeling;
  if (s == "waug") return Algorithm::Waug;
  throw Error("unknown algorithm '" + std::string(s) + "'");
}

InvariantTally& InvariantTally::operator+=(const InvariantTally& o) {
  seeds += o.seeds;
  copy_violations += o.copy_violations;
  phases += o.phases;
  shrink_violations += o.shrink_violations;
  undecided_checks += o.undecided_checks;
  undecided_violations += o.undecided_violations;
  return *this;
}

namespace {

constexpr CheckLimits kLimits{100};

std::vector<InputLabel> inputs_of(const Tree& tree) {
  if (tree.has_inputs()) return tree.inputs();
  return std::vector<InputLabel>(tree.size(), InputLabel::Active);
}

}  // namespace

SolveOutcome solve_and_check(const Tree& tree, const SolveRequest& req) {
  SolveOutcome out;
  out.problem.k = req.k;
  out.problem.variant = req.variant;
  out.problem.delta = req.delta;
  out.problem.d = req.d;
  const std::uint64_t n = req.n_known ? req.n_known : tree.size();
  const std::vector<InputLabel> inputs = inputs_of(tree);
  switch (req.algorithm) {
    case Algorithm::Generic: {
      out.problem.problem = Problem::Khier;
      out.levels = compute_levels(tree, req.k);
      GenericParams params;
      params.variant = req.variant;
      params.id_bound = req.id_bound;
      params.gammas = req.gammas.empty() ? gammas_poly(n, alpha_seq_poly(0.0, req.k)) : req.gammas;
      GenericResult res = generic_khier(tree, out.levels, params);
      out.verdict = check_khier(tree, out.levels, res.colors, req.k, req.variant, kLimits);
      out.labels = labeling_from_colors(res.colors);
      out.trace = std::move(res.trace);
      out.tally.phases = res.phases.size();
      out.tally.shrink_violations = res.shrink_violations;
      break;
    }
    case Algorithm::APoly: {
      out.problem.problem = Problem::Weighted;
      out.levels = compute_levels(tree, req.k, input_mask(tree, InputLabel::Active));
      APolyOptions opt;
      opt.variant = req.variant;
      opt.n_known = req.n_known;
      opt.id_bound = req.id_bound;
      APolyResult res = a_poly(tree, req.delta, req.d, req.k, opt);
      out.verdict = check_weighted(tree, inputs, res.labels.nodes, req.variant, req.delta, req.d, req.k, kLimits);
      out.labels = std::move(res.labels);
      out.trace = std::move(res.trace);
      out.tally.seeds = res.weight.seeds.size();
      out.tally.copy_violations = res.weight.copy_bound_violations;
      out.tally.phases = res.phases.size();
      out.tally.shrink_violations = res.shrink_violations;
      out.tally.undecided_checks = res.undecided.size();
      out.tally.undecided_violations = res.undecided_violations;
      break;
    }
    case Algorithm::Labeling: {
      out.problem.problem = Problem::Hier;
      out.levels = compute_levels(tree, req.k);
      HierResult res = hier_labeling_solve(tree, req.k);
      std::vector<HierTag> tags(tree.size());
      for (NodeId v = 0; v < tree.size(); ++v) tags[v] = res.labels.nodes[v].tag;
      out.verdict = check_hier_labeling(tree, tags, res.labels.orient, req.k, {}, kLimits);
      for (const std::string& p : validate_decomposition(tree, res.dec))
        out.verdict.violations.push_back({0, "decomposition", p});
      out.labels = std::move(res.labels);
      out.trace = std::move(res.trace);
      break;
    }
    case Algorithm::Waug: {
      out.problem.problem = Problem::WeightAugmented;
      out.levels = compute_levels(tree, req.k, input_mask(tree, InputLabel::Active));
      WaugResult res = weight_augmented_solve(tree, req.k, req.n_known, req.id_bound);
      out.verdict = check_weight_augmented(tree, inputs, res.labels, req.k, kLimits);
      out.labels = std::move(res.labels);
      out.trace = std::move(res.trace);
      out.tally.phases = res.phases.size();
      out.tally.shrink_violations = res.shrink_violations;
      break;
    }
  }
  return out;
}

// ---- configuration ----------------------------------------------------------

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const auto& v = it.value();
    if (key == "family") c.family = v.get<std::string>();
    else if (key == "algorithm") c.algorithm = parse_algorithm(v.get<std::string>());
    else if (key == "variant") c.variant = parse_variant(v.get<std::string>());
    else if (key == "k") c.k = v.get<int>();
    else if (key == "delta") c.delta = v.get<int>();
    else if (key == "d") c.d = v.get<int>();
    else if (key == "alphas") c.alphas = v.get<std::vector<double>>();
    else if (key == "regime") {
      const auto s = v.get<std::string>();
      if (s == "poly") c.regime = Regime::Poly;
      else if (s == "logstar") c.regime = Regime::Logstar;
      else throw Error("unknown regime '" + s + "'");
    } else if (key == "rounding") {
      const auto s = v.get<std::string>();
      if (s == "half-up") c.rounding = Rounding::HalfUp;
      else if (s == "ceil") c.rounding = Rounding::Ceil;
      else throw Error("unknown rounding '" + s + "'");
    } else if (key == "n_grid") c.n_grid = v.get<std::vector<std::uint64_t>>();
    else if (key == "seeds") c.seeds = v.get<int>();
    else if (key == "seed_base") c.seed_base = v.get<std::uint64_t>();
    else if (key == "id_factor") c.id_factor = v.get<std::uint64_t>();
    else if (key == "csv") c.csv = v.get<std::string>();
    else throw Error("unknown config field '" + key + "'");
  }
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  return {{"family", c.family},
          {"algorithm", std::string(to_string(c.algorithm))},
          {"variant", std::string(to_string(c.variant))},
          {"k", c.k},
          {"delta", c.delta},
          {"d", c.d},
          {"alphas", c.alphas},
          {"regime", c.regime == Regime::Poly ? "poly" : "logstar"},
          {"rounding", c.rounding == Rounding::Ceil ? "ceil" : "half-up"},
          {"n_grid", c.n_grid},
          {"seeds", c.seeds},
          {"seed_base", c.seed_base},
          {"id_factor", c.id_factor},
          {"csv", c.csv}};
}

void validate_config(const ExperimentConfig& c) {
  if (c.family != "lb" && c.family != "weighted") throw Error("family must be lb or weighted");
  if (c.k < 2) throw Error("k must be at least 2");
  if (c.seeds < 1) throw Error("seeds must be at least 1");
  if (c.id_factor < 1) throw Error("id_factor must be at least 1");
  if (c.n_grid.empty()) throw Error("n_grid is empty");
  for (std::size_t i = 1; i < c.n_grid.size(); ++i)
    if (c.n_grid[i] <= c.n_grid[i - 1]) throw Error("n_grid must be strictly increasing");
  if (!c.alphas.empty() && c.alphas.size() + 1 != static_cast<std::size_t>(c.k))
    throw Error("alphas must have k-1 entries");
  if (c.family == "weighted") check_weighted_params(c.delta, c.d);
}

namespace {

std::vector<double> family_alphas(const ExperimentConfig& c) {
  if (!c.alphas.empty()) return c.alphas;
  const double x = c.family == "weighted" ? x_factor(c.delta, c.d) : 0.0;
  return c.regime == Regime::Poly ? alpha_seq_poly(x, c.k) : alpha_seq_logstar(x, c.k);
}

}  // namespace

Instance make_instance(const ExperimentConfig& c, std::uint64_t n, std::uint64_t seed) {
  const std::vector<double> alphas = family_alphas(c);
  const std::vector<std::uint64_t> lengths = lengths_from_exponents(n, alphas, c.regime, c.rounding);
  Instance inst;
  if (c.family == "lb") {
    LowerBoundGraph g = lower_bound_graph(lengths);
    inst.tree = std::move(g.tree);
    nlohmann::json ls = lengths;
    inst.meta = {{"family", "lb"}, {"k", c.k}, {"lengths", ls}, {"n_target", n}};
  } else {
    inst = weighted_construction(n, lengths, c.delta, c.d);
  }
  const std::size_t size = inst.tree.size();
  inst.tree = std::move(inst.tree).with_ids(random_ids(size, c.id_factor, seed));
  inst.meta["seed"] = seed;
  inst.meta["id_factor"] = c.id_factor;
  return inst;
}

SolveRequest make_request(const ExperimentConfig& c, std::uint64_t n) {
  SolveRequest r;
  r.algorithm = c.algorithm;
  r.variant = c.variant;
  r.k = c.k;
  r.delta = c.delta;
  r.d = c.d;
  r.n_known = n;
  r.id_bound = n * c.id_factor;
  if (c.algorithm == Algorithm::Generic) {
    if (c.regime == Regime::Poly) {
      const std::vector<double> alphas = family_alphas(c);
      r.gammas = gammas_poly(n, alphas);
    } else {
      r.gammas = gammas_logstar(n, c.k);
    }
  }
  return r;
}

ExperimentRow run_cell(const ExperimentConfig& c, std::uint64_t n, std::uint64_t seed, CellArtifacts* artifacts) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentRow row;
  row.n_target = n;
  row.seed = seed;
  try {
    Instance inst = make_instance(c, n, seed);
    row.n = inst.tree.size();
    SolveOutcome out = solve_and_check(inst.tree, make_request(c, n));
    row.avg = node_averaged(out.trace);
    row.worst = worst_case(out.trace);
    row.total = total_rounds(out.trace);
    row.valid = out.verdict.ok();
    if (!row.valid) row.first_violation = out.verdict.violations.front().rule + ": " + out.verdict.violations.front().message;
    row.tally = out.tally;
    if (artifacts) {
      artifacts->labels_json = canonical_dump(labeling_to_json(inst.tree, out.labels, out.problem));
      std::ostringstream trace;
      write_trace_csv(trace, inst.tree, &out.levels, out.trace);
      artifacts->trace_csv = trace.str();
    }
  } catch (const std::exception& e) {
    throw Error("cell n=" + std::to_string(n) + " seed=" + std::to_string(seed) + ": " + e.what());
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

unsigned worker_cap(unsigned requested) {
  unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LCL_WORKERS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) w = std::min<unsigned>(w, static_cast<unsigned>(cap));
  }
  return std::max(1u, w);
}

ExperimentResult run_experiment(const ExperimentConfig& c, unsigned workers) {
  validate_config(c);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
  for (std::uint64_t n : c.n_grid)
    for (int s = 0; s < c.seeds; ++s) cells.emplace_back(n, c.seed_base + static_cast<std::uint64_t>(s));

  ExperimentResult res;
  res.rows.resize(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        res.rows[i] = run_cell(c, cells[i].first, cells[i].second);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = cells.size();
        return;
      }
    }
  };
  const unsigned w = std::min<unsigned>(worker_cap(workers), static_cast<unsigned>(cells.size()));
  if (w <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  for (const auto& row : res.rows) {
    res.tally += row.tally;
    res.all_valid = res.all_valid && row.valid;
  }
  if (!c.csv.empty()) write_csv_file(c.csv, c, res.rows);
  return res;
}

const char* const kCsvHeader = "n,seed,family,algorithm,variant,delta,d,k,avg_rounds,worst_rounds,total_rounds,wall_ms";

void write_csv(std::ostream& out, const ExperimentConfig& c, const std::vector<ExperimentRow>& rows) {
  out << kCsvHeader << '\n';
  std::ostringstream line;
  line << std::setprecision(12);
  for (const auto& r : rows) {
    line.str("");
    line << r.n << ',' << r.seed << ',' << c.family << ',' << to_string(c.algorithm) << ',' << to_string(c.variant)
         << ',' << c.delta << ',' << c.d << ',' << c.k << ',' << r.avg.value() << ',' << r.worst << ',' << r.total
         << ',' << r.wall_ms << '\n';
    out << line.str();
  }
}

void write_csv_file(const std::string& path, const ExperimentConfig& c, const std::vector<ExperimentRow>& rows) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp);
    write_csv(f, c, rows);
    if (!f) throw Error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// ---- fitting ----------------------------------------------------------------

FitResult fit_exponent(const std::vector<std::pair<double, double>>& points, XTransform t) {
  if (points.size() < 3) throw Error("need at least 3 points");
  std::vector<double> lx, ly;
  for (auto [x, y] : points) {
    if (!(x > 0) || !(y > 0)) throw Error("fit points must be positive");
    const double xt = t == XTransform::LogStar ? static_cast<double>(iterated_log(x)) : x;
    if (!(xt > 0)) throw Error("transformed x must be positive");
    lx.push_back(std::log(xt));
    ly.push_back(std::log(y));
  }
  const double m = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0) throw Error("all x values are equal");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (f.intercept + f.slope * lx[i]);
    ssr += e * e;
  }
  f.r2 = syy <= 1e-300 ? 1.0 : std::clamp(1.0 - ssr / syy, 0.0, 1.0);
  f.points = points.size();
  return f;
}

FitResult fit_with_drop(const std::vector<std::pair<double, double>>& points, XTransform t, double min_r2) {
  FitResult f = fit_exponent(points, t);
  if (f.r2 >= min_r2) return f;
  double xmin = points.front().first;
  for (const auto& p : points) xmin = std::min(xmin, p.first);
  std::vector<std::pair<double, double>> rest;
  for (const auto& p : points)
    if (p.first != xmin) rest.push_back(p);
  if (rest.size() < 3) return f;
  FitResult g = fit_exponent(rest, t);
  g.dropped_smallest = true;
  g.dropped_x = xmin;
  return g;
}

std::vector<std::pair<double, double>> read_csv_columns(const std::string& path, const std::string& x,
                                                        const std::string& y) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) throw Error(path + " is empty");
  const auto header = split(line);
  auto col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error("column '" + name + "' not found in " + path);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cx = col(x), cy = col(y);
  std::vector<std::pair<double, double>> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw Error("malformed row in " + path + ": " + line);
    pts.emplace_back(std::stod(cells[cx]), std::stod(cells[cy]));
  }
  return pts;
}

Prediction predict(int delta, int d, int k, Regime regime) {
  Prediction p;
  p.x = x_factor(delta, d);
  p.x_prime = x_prime(delta, d);
  p.exponent = regime == Regime::Poly ? alpha_poly(p.x, k) : alpha_logstar(p.x, k);
  return p;
}

}  // namespace lcl
