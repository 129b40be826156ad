#pragma once

// CDCL engine with an external-propagator interface modelled after
// IPASIR-UP, plus projected all-model enumeration via blocking clauses.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "smscube/formula.hpp"

namespace smscube {

struct SolverConfig {
  bool restarts_enabled = true;
  bool chronological_backtracking_enabled = false;
  std::optional<std::uint64_t> conflict_budget;
  std::optional<std::chrono::milliseconds> time_budget;
  // Consult propagators at every k-th conflict-free fixpoint.
  int propagator_frequency = 1;
  bool default_phase = false;
  int learned_clause_size_harvest_limit = 5;

  // Throws ConfigError listing every invalid field.
  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

// Where a clause in the engine's database came from. Blocking and
// cube-negation clauses are not consequences of the problem, so anything
// derived from them is kept out of the harvested learned-clause set.
enum class ClauseOrigin : std::uint8_t { Original, Learned, Symmetry, Propagator, Blocking, CubeNegation, Refutation };

enum class ReasonKind : std::uint8_t { Decision, Clause, External };

struct TrailEntry {
  Lit lit;
  int level = 0;
  ReasonKind reason = ReasonKind::Decision;
};

// Read-only view of the engine state handed to propagators.
struct Trail {
  std::span<const TrailEntry> entries;
  const Assignment& assignment;
  int decision_level = 0;
};

struct ModelVerdict {
  bool accepted = true;
  Clause clause;  // when rejected: a clause falsified by the model

  static ModelVerdict accept() { return {}; }
  static ModelVerdict reject(Clause c) { return {false, std::move(c)}; }
};

class ExternalPropagator {
 public:
  virtual ~ExternalPropagator() = default;

  // Harvest bucket for the clauses this propagator returns (Symmetry or
  // Propagator).
  virtual ClauseOrigin clause_origin() const { return ClauseOrigin::Propagator; }

  virtual void on_assignment(Lit) {}
  virtual void on_backtrack(int /*level*/) {}
  // Called at conflict-free fixpoints (gated by propagator_frequency). A
  // returned clause must be falsified or unit under the trail.
  virtual std::optional<Clause> on_fixpoint(const Trail&) { return std::nullopt; }
  // Called on total assignments; a rejecting clause must be falsified.
  virtual ModelVerdict on_model(const Assignment&) { return ModelVerdict::accept(); }
  // Polled after each fixpoint check; a level below the current decision
  // level makes the engine backtrack there.
  virtual std::optional<int> requested_backtrack() { return std::nullopt; }
};

enum class SolveStatus { Sat, Unsat, BudgetExhausted };

std::string to_string(SolveStatus s);

struct SolverStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t learned = 0;
  std::uint64_t restarts = 0;
  std::uint64_t fixpoint_checks = 0;
  std::uint64_t external_clauses = 0;
};

// Clause sets collected during a run: symmetry-breaking (sigma), other
// propagator clauses (pi) and short learned clauses (lambda).
struct Harvest {
  std::vector<Clause> sigma;
  std::vector<Clause> pi;
  std::vector<Clause> lambda;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Unsat;
  std::optional<Assignment> model;
  SolverStats stats;
  Harvest harvested;
};

struct EnumerationResult {
  std::vector<Cube> models;  // projected, literals ordered by variable
  bool complete = false;
  SolverStats stats;
  Harvest harvested;
};

struct ConflictAnalysis {
  bool unsat = false;  // conflict at level 0
  Clause learned;      // asserting literal first
  int backjump_level = 0;
  bool tainted = false;  // derivation used a blocking or cube-negation clause
};

using ClauseId = std::uint32_t;

class Solver {
 public:
  explicit Solver(const CnfFormula& f, SolverConfig cfg = {});
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  // Propagators are not owned and must outlive the solver.
  void attach(ExternalPropagator& p);

  // Adds an irredundant clause. Allowed at any time; integrates with the
  // current trail (may backtrack).
  void add_clause(const Clause& c, ClauseOrigin origin = ClauseOrigin::Original);

  // Search until the first model accepted by every propagator.
  SolveStatus solve(const Cube& assumptions = {});
  // Projected all-model enumeration; blocks each model's projection.
  EnumerationResult enumerate(std::span<const Var> projection, const Cube& assumptions = {});

  // Generalised search loop used by the cubers.
  enum class HookAction { Continue, Repropagate, Stop };
  struct Hooks {
    // Runs at every conflict-free fixpoint after the propagators.
    std::function<HookAction(Solver&)> fixpoint;
    // Runs for each accepted model; return true to keep searching (the hook
    // must then add a clause excluding the model).
    std::function<bool(Solver&, const Assignment&)> model;
  };
  SolveStatus run(const Cube& assumptions, const Hooks& hooks);

  const std::optional<Assignment>& model() const { return model_; }
  const SolverStats& stats() const { return stats_; }
  const Harvest& harvest() const { return harvest_; }
  const SolverConfig& config() const { return cfg_; }
  void set_config(const SolverConfig& cfg);
  Var num_vars() const { return num_vars_; }
  Var num_edge_vars() const { return num_edge_vars_; }
  bool is_unsat() const { return unsat_; }

  // --- low-level interface (cubers, tests) -------------------------------
  const Assignment& assignment() const { return assign_; }
  std::span<const TrailEntry> trail() const { return trail_; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  int level_of(Var v) const { return level_[static_cast<std::size_t>(v)]; }

  // Unassigned variable with maximal activity (ties: lowest index), with
  // saved or default phase. Precondition: some variable is unassigned.
  Lit decide_next();
  void bump_activity(Var v);
  double activity(Var v) const { return activity_[static_cast<std::size_t>(v)]; }

  // Opens a decision level and assigns `l` (must be unassigned).
  void decide(Lit l);
  // Boolean constraint propagation only; returns a falsified clause.
  std::optional<ClauseId> propagate();
  ConflictAnalysis analyze(ClauseId conflict);
  void backtrack(int level);

  // Look-ahead probing: clauses from propagators are kept aside (with
  // reason-less implications) until flush_deferred() at the root.
  void set_probe_mode(bool on) { probe_mode_ = on; }
  // BCP to fixpoint, then (if requested and due) one round of propagator
  // checks, repeated until stable. Returns true on conflict.
  bool probe_propagate(bool consult_propagators);
  // Requires decision level 0. Integrates deferred clauses; false if the
  // formula became unsatisfiable.
  bool flush_deferred();

 private:
  struct ClauseData {
    std::vector<Lit> lits;
    ClauseOrigin origin = ClauseOrigin::Original;
    bool tainted = false;
    bool deleted = false;
    bool protect = false;
    std::uint32_t lbd = 0;
  };
  struct Watch {
    ClauseId cref;
    Lit blocker;
  };
  static constexpr ClauseId kNoReason = 0xffffffffU;

  void enqueue(Lit l, ClauseId reason, ReasonKind kind);
  void attach_watches(ClauseId cref);
  ClauseId store(std::vector<Lit> lits, ClauseOrigin origin, bool tainted);
  // Integrates a clause into the current state. Returns a conflicting
  // clause to be analysed at the current level, if any.
  std::optional<ClauseId> integrate(std::vector<Lit> lits, ClauseOrigin origin, bool tainted);
  bool resolve_conflict(ClauseId conflict);
  void learn(const ConflictAnalysis& a, bool tainted);
  void record_harvest(std::span<const Lit> lits, ClauseOrigin origin, bool tainted);
  // Re-asserts clauses learned under chronological backtracking whose
  // asserted literal was undone; returns a falsified one if any.
  std::optional<ClauseId> repair_chrono_watches();
  void reduce_db();
  bool budget_exhausted(std::uint64_t conflicts_at_start, std::chrono::steady_clock::time_point start) const;
  void notify_propagators();
  Trail trail_view() const { return Trail{trail_, assign_, decision_level()}; }
  // One round of propagator fixpoint checks. Returns conflict / progress.
  enum class CheckResult { Quiet, Progress, Conflict, Unsat };
  CheckResult check_propagators(std::optional<ClauseId>& conflict);
  void check_external_contract(const Clause& c, const char* who) const;

  // heap of unassigned variables ordered by (activity desc, index asc)
  bool heap_less(Var a, Var b) const;
  void heap_insert(Var v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  Var heap_pop();

  SolverConfig cfg_;
  Var num_vars_ = 0;
  Var num_edge_vars_ = 0;
  bool unsat_ = false;
  bool probe_mode_ = false;

  Assignment assign_;
  std::vector<int> level_;
  std::vector<ClauseId> reason_;
  std::vector<bool> taint0_;
  std::vector<std::int8_t> phase_;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<char> seen_;

  std::vector<Var> heap_;
  std::vector<int> heap_pos_;

  std::vector<TrailEntry> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::size_t notified_ = 0;

  std::vector<ClauseData> clauses_;
  std::vector<std::vector<Watch>> watches_;
  std::vector<ClauseId> chrono_repair_;
  bool need_repair_ = false;
  std::vector<std::vector<Lit>> deferred_;
  std::vector<ClauseOrigin> deferred_origin_;

  std::vector<ExternalPropagator*> props_;
  std::uint64_t fixpoints_ = 0;

  std::uint64_t next_reduce_ = 2000;
  std::uint64_t reduce_inc_ = 300;

  std::optional<Assignment> model_;
  SolverStats stats_;
  Harvest harvest_;
  std::set<std::vector<Lit>> harvested_keys_[3];
};

// Convenience wrappers over a fresh Solver.
SolveOutcome solve(const CnfFormula& f, const Cube& assumptions, std::span<ExternalPropagator* const> props,
                   const SolverConfig& cfg = {});
EnumerationResult enumerate_models(const CnfFormula& f, std::span<ExternalPropagator* const> props,
                                   const SolverConfig& cfg, std::span<const Var> projection,
                                   const Cube& assumptions = {});

// Variables 1..n as a projection set.
std::vector<Var> first_vars(Var n);

}  // namespace smscube
