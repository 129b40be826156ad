#pragma once

// Prerun, cubing strategies and the files they exchange: the enriched
// formula (DIMACS with delimited clause sections) and cube sets (iCNF).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smscube/encoders.hpp"
#include "smscube/solver.hpp"

namespace smscube {

using PropagatorFactory = std::function<PropagatorSet()>;

// F plus everything the prerun learned about it. Blocked models are
// projected to the edge variables; their negations are part of the formula.
struct EnrichedFormula {
  CnfFormula base;
  std::vector<Clause> sigma;
  std::vector<Clause> pi;
  std::vector<Clause> lambda;
  std::vector<Cube> blocked_models;
  bool complete = false;  // the prerun already enumerated everything

  CnfFormula flatten() const;
  bool operator==(const EnrichedFormula&) const = default;
};

std::string serialize_enriched(const EnrichedFormula& ef);
EnrichedFormula parse_enriched(std::string_view text);

struct CubingStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t nodes = 0;
  std::uint64_t probes = 0;
  std::uint64_t refuted = 0;
  std::uint64_t failed_literals = 0;
};

struct CubeSet {
  std::vector<Cube> cubes;
  std::string origin;
  // false when the cuber ran out of budget before covering the search
  // space; the uncovered part is then the conjunction of the negations of
  // all cubes (CDCL cuber only)
  bool complete = true;
  // the look-ahead cubers turn open nodes into leaves when over budget
  bool truncated = false;
  std::vector<Cube> models;  // found (and blocked) while cubing
  CubingStats stats;

  bool operator==(const CubeSet& o) const { return cubes == o.cubes; }
};

void write_icnf(std::ostream& out, const CubeSet& cs);
std::string write_icnf(const CubeSet& cs);
CubeSet parse_icnf(std::string_view text);

struct ScoringFunction {
  std::string name;
  std::function<double(double, double)> evaluate;
  double operator()(double a, double b) const { return evaluate(a, b); }
};

ScoringFunction score_default();
ScoringFunction score_march();
ScoringFunction score_ks();
ScoringFunction score_tf();
ScoringFunction score_smc();
std::vector<ScoringFunction> score_presets();
// By preset name (default, march, ks, tf, smc); throws ConfigError.
ScoringFunction find_score(const std::string& name);

// Enumerates under a conflict budget and collects Sigma, Pi and Lambda.
// A zero budget skips the run and returns F unchanged.
EnrichedFormula prerun(Solver& s, const CnfFormula& f, std::uint64_t conflict_budget);
EnrichedFormula prerun(const CnfFormula& f, std::span<ExternalPropagator* const> props, const SolverConfig& cfg,
                       std::uint64_t conflict_budget);

// Runs the solver on until every branch is either refuted or has at
// least `cutoff` assigned edge variables at a fixpoint; each such branch
// becomes a cube whose negation is then added.
CubeSet cube_cdcl_cutoff(Solver& s, int cutoff, std::optional<std::uint64_t> conflict_budget = std::nullopt);
CubeSet cube_cdcl_cutoff(const EnrichedFormula& ef, std::span<ExternalPropagator* const> props, int cutoff,
                         const SolverConfig& cfg = {}, std::optional<std::uint64_t> conflict_budget = std::nullopt);

enum class LookaheadScope { AllVars, EdgeVars };

struct LookaheadOptions {
  LookaheadScope scope = LookaheadScope::EdgeVars;
  int cutoff = 1;  // assigned variables (all of them) at a leaf
  std::optional<std::uint64_t> node_budget;
  bool consult_propagators = true;
  bool branching_literals_only = false;
};

CubeSet cube_lookahead(const EnrichedFormula& ef, std::span<ExternalPropagator* const> props, const ScoringFunction& score,
                       const LookaheadOptions& opt, const SolverConfig& cfg = {});
// Look-ahead on the plain enriched CNF with the march score; cubes keep
// only the branching literals.
CubeSet cube_march_style(const EnrichedFormula& ef, int cutoff, std::optional<std::uint64_t> node_budget = std::nullopt);

// Keeps the prerun solver alive so the CDCL cuber can continue from it.
class CubingSession {
 public:
  CubingSession(const CnfFormula& f, PropagatorSet props, const SolverConfig& cfg = {});

  EnrichedFormula prerun(std::uint64_t conflict_budget);
  CubeSet cube_cdcl(int cutoff, std::optional<std::uint64_t> conflict_budget = std::nullopt);
  Solver& solver() { return *solver_; }

 private:
  CnfFormula base_;
  PropagatorSet props_;
  std::unique_ptr<Solver> solver_;
};

}  // namespace smscube
