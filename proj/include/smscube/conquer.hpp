#pragma once

// Conquer phase: solve every cube with a fresh solver in a worker pool,
// aggregate models and timings, and drive the whole encode/prerun/cube/
// conquer pipeline. Also the parameter sensitivity sweep.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smscube/cubing.hpp"
#include "smscube/encoders.hpp"

namespace smscube {

struct CubeResult {
  std::size_t id = 0;
  SolveStatus status = SolveStatus::BudgetExhausted;
  std::vector<Cube> models;  // projected to the edge variables
  std::int64_t wall_ns = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  int attempts = 0;
  bool failed = false;
  std::string error;
};

struct HistogramBucket {
  double lo_min = 0;
  std::optional<double> hi_min;  // none for the overflow bucket
  double total_time_s = 0;
  std::size_t cube_count = 0;
};

inline const std::vector<double> kDefaultBucketEdgesMin = {1, 2, 4, 8, 16, 32};

// Buckets [0,e0), [e0,e1), ..., [e_last, inf) over per-cube times.
// Throws ConfigError unless the edges are positive and strictly increasing.
std::vector<HistogramBucket> histogram(std::span<const std::int64_t> times_ns, std::span<const double> edges_min);
void write_histogram_csv(std::ostream& out, std::span<const HistogramBucket> buckets);

struct ConquerOptions {
  int workers = 1;
  SolverConfig solver;
  std::vector<double> bucket_edges_min = kDefaultBucketEdgesMin;
};

struct PipelineReport {
  std::vector<CubeResult> results;  // by cube id
  std::vector<Cube> prerun_models;
  std::vector<Cube> cubing_models;
  std::vector<Cube> models;  // sorted union of everything above
  std::int64_t sum_ns = 0;
  std::int64_t max_ns = 0;
  std::uint64_t sum_conflicts = 0;
  std::uint64_t max_conflicts = 0;
  std::vector<HistogramBucket> buckets;
  bool complete = false;
};

PipelineReport conquer(const EnrichedFormula& ef, const CubeSet& cs, const PropagatorFactory& props,
                       const ConquerOptions& opt = {});

// One line per model, "n: u-v ...<TAB>graph6", sorted.
std::vector<std::string> model_lines(int n, std::span<const Cube> models);
Cube edges_to_cube(const PartialGraph& g);

// --- pipeline ---------------------------------------------------------------

enum class Cuber { Cdcl, LookaheadAll, LookaheadEdge, March };

std::string to_string(Cuber c);
Cuber parse_cuber(const std::string& s);  // cdcl, la-all, la-edge, march

struct PipelineConfig {
  EncodingSpec encoding;
  Cuber cuber = Cuber::LookaheadEdge;
  std::string sigma = "default";
  // edge variables for the CDCL cuber, all variables for the look-ahead
  // cubers; default depends on the formula size
  std::optional<int> cutoff;
  std::uint64_t prerun_conflicts = 1000;
  std::optional<std::uint64_t> cube_budget;
  SolverConfig solver;
  std::uint64_t minimality_budget = 10000;
  int workers = 1;
  std::vector<double> bucket_edges_min = kDefaultBucketEdgesMin;
  std::string output_dir;  // empty: nothing is written

  // Throws ConfigError listing every problem.
  void validate() const;
  static PipelineConfig from_json(std::string_view text);
  std::string to_json() const;
};

int default_cutoff(Cuber c, const CnfFormula& f);

struct PipelineRun {
  EnrichedFormula enriched;
  CubeSet cubes;
  PipelineReport report;
  int exit_code = 1;  // 0 when every model was found
};

PipelineRun run_pipeline(const PipelineConfig& cfg);
CubeSet make_cubes(const PipelineConfig& cfg, const Encoding& enc, CubingSession& session, const EnrichedFormula& ef);

std::string report_json(const PipelineConfig& cfg, const PipelineRun& run);

// --- sensitivity sweep ------------------------------------------------------

enum class SweepMetric { WallTime, Conflicts };

struct SweepProbe {
  std::string value;
  SolverConfig config;
};

struct SweepSpec {
  std::string parameter;
  std::string baseline;
  std::vector<SweepProbe> probes;
};

// Extremes of each solver parameter, relative to `base`.
std::vector<SweepSpec> default_sweep_specs(const SolverConfig& base);

struct SweepOptions {
  SweepMetric metric = SweepMetric::Conflicts;
  // per-cube limit; cubes hitting it are scored at the limit
  std::optional<std::uint64_t> conflict_limit;
  std::optional<std::chrono::milliseconds> timeout;
  // upper bounds of the hardness classes, in the metric's unit (seconds
  // or conflicts); the last class is open
  std::vector<double> class_edges;
  int workers = 1;
};

struct SweepRow {
  std::string parameter;
  std::string value;
  std::vector<double> ratio;  // per hardness class, probe / baseline
  double overall = 1.0;
};

struct SweepRanking {
  std::string parameter;
  std::vector<double> best_ratio;          // per class
  std::vector<std::optional<int>> rank;    // per class, none above the cap
};

struct SweepResult {
  std::vector<std::string> classes;
  std::vector<std::size_t> class_sizes;
  std::vector<SweepRow> rows;
  std::vector<SweepRanking> ranking;
  std::string to_json() const;
};

inline constexpr int kSweepRankCap = 10;

// Standard competition ranking (1,2,2,4) of ratios, lower is better;
// ranks above `cap` are dropped.
std::vector<std::optional<int>> competition_rank(std::span<const double> ratios, int cap = kSweepRankCap);

SweepResult sensitivity_sweep(std::span<const SweepSpec> specs, const EnrichedFormula& ef, const CubeSet& cs,
                              const PropagatorFactory& props, const SolverConfig& baseline, const SweepOptions& opt);

}  // namespace smscube
