#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcl/algorithms.hpp"
#include "lcl/checkers.hpp"
#include "lcl/generators.hpp"

namespace lcl {

// ---- solving one instance ---------------------------------------------------

enum class Algorithm : std::uint8_t { Generic, APoly, Labeling, Waug };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

struct SolveRequest {
  Algorithm algorithm = Algorithm::Generic;
  Variant variant = Variant::TwoHalf;
  int k = 2;
  int delta = 5;
  int d = 2;
  std::vector<std::uint64_t> gammas;  // generic only; empty: gammas_poly(n, alpha_seq_poly(0, k))
  std::uint64_t n_known = 0;
  std::uint64_t id_bound = 0;
};

// Counters for the per-run invariants.
struct InvariantTally {
  std::uint64_t seeds = 0;
  std::uint64_t copy_violations = 0;
  std::uint64_t phases = 0;
  std::uint64_t shrink_violations = 0;
  std::uint64_t undecided_checks = 0;
  std::uint64_t undecided_violations = 0;

  InvariantTally& operator+=(const InvariantTally& o);
};

struct SolveOutcome {
  ProblemParams problem;
  Labeling labels;
  RunTrace trace;
  LevelMap levels;  // for trace export
  Verdict verdict;
  InvariantTally tally;
};

// Runs the solver and its checker.
SolveOutcome solve_and_check(const Tree& tree, const SolveRequest& req);

// ---- experiments ----------------------------------------------------------

struct ExperimentConfig {
  std::string family = "lb";  // lb | weighted
  Algorithm algorithm = Algorithm::Generic;
  Variant variant = Variant::TwoHalf;
  int k = 2;
  int delta = 5;
  int d = 2;
  std::vector<double> alphas;  // empty: optimal exponents for x = 0 (lb) or x_factor(delta, d) (weighted)
  Regime regime = Regime::Poly;
  Rounding rounding = Rounding::HalfUp;
  std::vector<std::uint64_t> n_grid;
  int seeds = 1;
  std::uint64_t seed_base = 1;
  std::uint64_t id_factor = 1;
  std::string csv;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
void validate_config(const ExperimentConfig& c);

// Instance of the configured family for one grid cell. The seed only drives the ids.
Instance make_instance(const ExperimentConfig& c, std::uint64_t n, std::uint64_t seed);
// Solver request for a cell with target size n (the n the nodes are told).
SolveRequest make_request(const ExperimentConfig& c, std::uint64_t n);

struct ExperimentRow {
  std::uint64_t n = 0;  // actual node count
  std::uint64_t n_target = 0;
  std::uint64_t seed = 0;
  Rational avg;
  Round worst = 0;
  std::uint64_t total = 0;
  double wall_ms = 0;
  bool valid = false;
  std::string first_violation;
  InvariantTally tally;
};

struct CellArtifacts {
  std::string labels_json;
  std::string trace_csv;
};

ExperimentRow run_cell(const ExperimentConfig& c, std::uint64_t n, std::uint64_t seed,
                       CellArtifacts* artifacts = nullptr);

struct ExperimentResult {
  std::vector<ExperimentRow> rows;  // grid order: n ascending, then seed
  InvariantTally tally;
  bool all_valid = true;
};

// Cells run on up to `workers` threads (0: hardware concurrency, capped by LCL_WORKERS).
ExperimentResult run_experiment(const ExperimentConfig& c, unsigned workers = 0);

unsigned worker_cap(unsigned requested);

extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const ExperimentConfig& c, const std::vector<ExperimentRow>& rows);
// Writes to a temporary file next to path and renames it into place.
void write_csv_file(const std::string& path, const ExperimentConfig& c, const std::vector<ExperimentRow>& rows);

// ---- fitting ----------------------------------------------------------------

enum class XTransform : std::uint8_t { N, LogStar };

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::size_t points = 0;
  bool dropped_smallest = false;
  double dropped_x = 0;
};

// Least squares on (log x, log y). LogStar maps x -> iterated_log(x) first.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& points, XTransform t = XTransform::N);

// Refits without the smallest-x points when r2 < min_r2 (reported in the result).
FitResult fit_with_drop(const std::vector<std::pair<double, double>>& points, XTransform t = XTransform::N,
                        double min_r2 = 0.98);

// Reads (column x, column y) pairs from a CSV with a header row.
std::vector<std::pair<double, double>> read_csv_columns(const std::string& path, const std::string& x,
                                                        const std::string& y);

struct Prediction {
  double exponent = 0;
  double x = 0;
  double x_prime = 0;
};

Prediction predict(int delta, int d, int k, Regime regime);

}  // namespace lcl
