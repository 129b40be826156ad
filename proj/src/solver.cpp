#include "smscube/solver.hpp"

#include <algorithm>
#include <cmath>

namespace smscube {

namespace {

bool is_propagator_origin(ClauseOrigin o) { return o == ClauseOrigin::Symmetry || o == ClauseOrigin::Propagator; }

bool is_tainting_origin(ClauseOrigin o) { return o == ClauseOrigin::Blocking || o == ClauseOrigin::CubeNegation; }

// Luby sequence 1 1 2 1 1 2 4 ...
double luby(double y, std::uint64_t x) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

constexpr std::uint64_t kRestartBase = 64;
constexpr double kVarDecay = 0.95;

}  // namespace

void SolverConfig::validate() const {
  std::vector<std::string> problems;
  if (propagator_frequency < 1) problems.push_back("propagator_frequency must be >= 1");
  if (learned_clause_size_harvest_limit < 1) problems.push_back("learned_clause_size_harvest_limit must be >= 1");
  if (conflict_budget && *conflict_budget == 0) problems.push_back("conflict_budget must be positive");
  if (time_budget && time_budget->count() <= 0) problems.push_back("time_budget must be positive");
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::BudgetExhausted: return "BUDGET";
  }
  return "?";
}

Solver::Solver(const CnfFormula& f, SolverConfig cfg)
    : cfg_(cfg), num_vars_(f.num_vars()), num_edge_vars_(f.num_edge_vars()), assign_(f.num_vars()) {
  cfg_.validate();
  const auto n1 = static_cast<std::size_t>(num_vars_) + 1;
  level_.assign(n1, 0);
  reason_.assign(n1, kNoReason);
  taint0_.assign(n1, false);
  phase_.assign(n1, -1);
  activity_.assign(n1, 0.0);
  seen_.assign(n1, 0);
  heap_pos_.assign(n1, -1);
  watches_.resize(2 * n1);
  for (Var v = 1; v <= num_vars_; ++v) heap_insert(v);
  for (const Clause& c : f.clauses()) {
    add_clause(c, ClauseOrigin::Original);
    if (unsat_) break;
  }
}

void Solver::set_config(const SolverConfig& cfg) {
  cfg.validate();
  cfg_ = cfg;
}

void Solver::attach(ExternalPropagator& p) { props_.push_back(&p); }

// --- heap -----------------------------------------------------------------

bool Solver::heap_less(Var a, Var b) const {
  const double x = activity_[static_cast<std::size_t>(a)];
  const double y = activity_[static_cast<std::size_t>(b)];
  return x > y || (x == y && a < b);
}

void Solver::heap_insert(Var v) {
  if (heap_pos_[static_cast<std::size_t>(v)] >= 0) return;
  heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
  const Var v = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  const Var v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

Var Solver::heap_pop() {
  const Var top = heap_.front();
  heap_pos_[static_cast<std::size_t>(top)] = -1;
  const Var last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[static_cast<std::size_t>(last)] = 0;
    heap_down(0);
  }
  return top;
}

Lit Solver::decide_next() {
  while (!heap_.empty() && assign_.value(heap_.front()) != Value::Unassigned) heap_pop();
  if (heap_.empty()) throw ContractViolation("decide_next: no unassigned variable");
  const Var v = heap_.front();
  const std::int8_t ph = phase_[static_cast<std::size_t>(v)];
  const bool positive = ph < 0 ? cfg_.default_phase : ph == 1;
  return Lit::make(v, !positive);
}

void Solver::bump_activity(Var v) {
  auto& a = activity_[static_cast<std::size_t>(v)];
  a += var_inc_;
  if (a > 1e100) {
    for (auto& x : activity_) x *= 1e-100;
    var_inc_ *= 1e-100;
  }
  const int pos = heap_pos_[static_cast<std::size_t>(v)];
  if (pos >= 0) heap_up(static_cast<std::size_t>(pos));
}

// --- trail ----------------------------------------------------------------

void Solver::enqueue(Lit l, ClauseId reason, ReasonKind kind) {
  const auto v = static_cast<std::size_t>(l.var());
  assign_.assign(l);
  level_[v] = decision_level();
  reason_[v] = reason;
  if (decision_level() == 0 && reason != kNoReason) {
    const ClauseData& c = clauses_[reason];
    bool t = c.tainted;
    for (Lit q : c.lits)
      if (q.var() != l.var()) t = t || taint0_[static_cast<std::size_t>(q.var())];
    taint0_[v] = t;
  }
  trail_.push_back(TrailEntry{l, decision_level(), kind});
}

void Solver::decide(Lit l) {
  if (assign_.value(l) != Value::Unassigned) throw ContractViolation("decide: literal already assigned");
  trail_lim_.push_back(trail_.size());
  enqueue(l, kNoReason, ReasonKind::Decision);
}

void Solver::backtrack(int level) {
  if (level < 0) level = 0;
  if (decision_level() <= level) return;
  const std::size_t keep = trail_lim_[static_cast<std::size_t>(level)];
  for (std::size_t i = trail_.size(); i-- > keep;) {
    const Lit l = trail_[i].lit;
    const auto v = static_cast<std::size_t>(l.var());
    phase_[v] = l.negated() ? 0 : 1;
    assign_.unassign(l.var());
    reason_[v] = kNoReason;
    heap_insert(l.var());
  }
  trail_.resize(keep);
  trail_lim_.resize(static_cast<std::size_t>(level));
  qhead_ = std::min(qhead_, trail_.size());
  notified_ = std::min(notified_, trail_.size());
  for (ExternalPropagator* p : props_) p->on_backtrack(level);
  need_repair_ = !chrono_repair_.empty();
}

std::optional<ClauseId> Solver::repair_chrono_watches() {
  std::optional<ClauseId> conflict;
  std::size_t out = 0;
  for (ClauseId cref : chrono_repair_) {
    const ClauseData& c = clauses_[cref];
    if (c.deleted) continue;
    const Lit asserted = c.lits[0];
    const Lit other = c.lits[1];
    if (assign_.value(other) == Value::Unassigned) continue;
    if (assign_.value(asserted) == Value::Unassigned) {
      // the asserting literal sat above the level where the clause became
      // unit and was undone; put it back
      enqueue(asserted, cref, ReasonKind::Clause);
    } else if (assign_.is_false(asserted) && !conflict) {
      conflict = cref;
    }
    chrono_repair_[out++] = cref;
  }
  chrono_repair_.resize(out);
  return conflict;
}

// --- clause database ------------------------------------------------------

ClauseId Solver::store(std::vector<Lit> lits, ClauseOrigin origin, bool tainted) {
  ClauseData c;
  c.lits = std::move(lits);
  c.origin = origin;
  c.tainted = tainted;
  clauses_.push_back(std::move(c));
  return static_cast<ClauseId>(clauses_.size() - 1);
}

void Solver::attach_watches(ClauseId cref) {
  const ClauseData& c = clauses_[cref];
  watches_[c.lits[0].index()].push_back(Watch{cref, c.lits[1]});
  watches_[c.lits[1].index()].push_back(Watch{cref, c.lits[0]});
}

void Solver::record_harvest(std::span<const Lit> lits, ClauseOrigin origin, bool tainted) {
  int bucket = -1;
  std::vector<Clause>* dst = nullptr;
  switch (origin) {
    case ClauseOrigin::Symmetry: bucket = 0; dst = &harvest_.sigma; break;
    case ClauseOrigin::Propagator: bucket = 1; dst = &harvest_.pi; break;
    case ClauseOrigin::Learned:
      if (tainted || lits.size() > static_cast<std::size_t>(cfg_.learned_clause_size_harvest_limit)) return;
      bucket = 2;
      dst = &harvest_.lambda;
      break;
    default: return;
  }
  std::vector<Lit> key(lits.begin(), lits.end());
  std::sort(key.begin(), key.end());
  if (!harvested_keys_[bucket].insert(key).second) return;
  dst->push_back(Clause(std::move(key)));
}

void Solver::add_clause(const Clause& c, ClauseOrigin origin) {
  for (Lit l : c)
    if (l.var() > num_vars_) throw DomainError("clause variable " + std::to_string(l.var()) + " exceeds " + std::to_string(num_vars_));
  if (unsat_) return;
  std::vector<Lit> lits(c.begin(), c.end());
  if (probe_mode_ && decision_level() > 0) {
    if (is_propagator_origin(origin)) record_harvest(lits, origin, false);
    deferred_.push_back(std::move(lits));
    deferred_origin_.push_back(origin);
    return;
  }
  if (origin != ClauseOrigin::Original) ++stats_.external_clauses;
  if (auto confl = integrate(std::move(lits), origin, is_tainting_origin(origin))) {
    if (!resolve_conflict(*confl)) unsat_ = true;
  }
}

std::optional<ClauseId> Solver::integrate(std::vector<Lit> lits, ClauseOrigin origin, bool tainted) {
  if (is_propagator_origin(origin)) record_harvest(lits, origin, false);
  if (lits.empty()) {
    unsat_ = true;
    return std::nullopt;
  }
  auto lvl = [&](Lit l) { return level_[static_cast<std::size_t>(l.var())]; };
  if (lits.size() == 1) {
    const Lit u = lits[0];
    if (assign_.is_true(u) && lvl(u) == 0) return std::nullopt;
    backtrack(0);
    if (assign_.is_false(u)) {
      unsat_ = true;
      return std::nullopt;
    }
    enqueue(u, kNoReason, ReasonKind::Clause);
    taint0_[static_cast<std::size_t>(u.var())] = tainted;
    return std::nullopt;
  }
  // true literals (lowest level first), then unassigned, then false
  // literals by descending level
  auto rank = [&](Lit l) -> std::pair<int, int> {
    switch (assign_.value(l)) {
      case Value::True: return {0, lvl(l)};
      case Value::Unassigned: return {1, 0};
      default: return {2, -lvl(l)};
    }
  };
  std::stable_sort(lits.begin(), lits.end(), [&](Lit a, Lit b) { return rank(a) < rank(b); });
  const auto nonfalse = std::count_if(lits.begin(), lits.end(), [&](Lit l) { return !assign_.is_false(l); });
  if (nonfalse >= 2) {
    attach_watches(store(std::move(lits), origin, tainted));
    return std::nullopt;
  }
  if (nonfalse == 1) {
    const Lit u = lits[0];
    const int lf = lvl(lits[1]);
    if (assign_.is_true(u) && lvl(u) <= lf) {
      attach_watches(store(std::move(lits), origin, tainted));
      return std::nullopt;
    }
    backtrack(lf);
    const ClauseId cref = store(std::move(lits), origin, tainted);
    attach_watches(cref);
    if (assign_.value(u) == Value::Unassigned) enqueue(u, cref, ReasonKind::Clause);
    return std::nullopt;
  }
  const int top = lvl(lits[0]);
  if (top == 0) {
    unsat_ = true;
    return std::nullopt;
  }
  const int second = lvl(lits[1]);
  if (second < top) {
    backtrack(second);
    const Lit u = lits[0];
    const ClauseId cref = store(std::move(lits), origin, tainted);
    attach_watches(cref);
    enqueue(u, cref, ReasonKind::Clause);
    return std::nullopt;
  }
  backtrack(top);
  const ClauseId cref = store(std::move(lits), origin, tainted);
  attach_watches(cref);
  return cref;
}

// --- propagation and analysis ---------------------------------------------

std::optional<ClauseId> Solver::propagate() {
  if (need_repair_) {
    need_repair_ = false;
    if (auto c = repair_chrono_watches()) return c;
  }
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++].lit;
    const Lit falsified = ~p;
    ++stats_.propagations;
    auto& ws = watches_[falsified.index()];
    std::size_t i = 0;
    std::size_t j = 0;
    std::optional<ClauseId> conflict;
    while (i < ws.size()) {
      const Watch w = ws[i++];
      ClauseData& c = clauses_[w.cref];
      if (c.deleted) continue;
      if (assign_.is_true(w.blocker)) {
        ws[j++] = w;
        continue;
      }
      if (c.lits[0] == falsified) std::swap(c.lits[0], c.lits[1]);
      const Lit first = c.lits[0];
      if (first != w.blocker && assign_.is_true(first)) {
        ws[j++] = Watch{w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.lits.size(); ++k) {
        if (!assign_.is_false(c.lits[k])) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[c.lits[1].index()].push_back(Watch{w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = Watch{w.cref, first};
      if (assign_.is_false(first)) {
        conflict = w.cref;
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref, ReasonKind::Clause);
      }
    }
    ws.resize(j);
    if (conflict) {
      qhead_ = trail_.size();
      return conflict;
    }
  }
  return std::nullopt;
}

ConflictAnalysis Solver::analyze(ClauseId conflict) {
  ConflictAnalysis out;
  // conflicts are analysed at the highest level among the clause literals,
  // which with chronological backtracking may be below the current level
  int conflict_level = 0;
  for (Lit l : clauses_[conflict].lits) conflict_level = std::max(conflict_level, level_[static_cast<std::size_t>(l.var())]);
  if (conflict_level == 0) {
    out.unsat = true;
    return out;
  }
  if (conflict_level < decision_level()) backtrack(conflict_level);

  std::vector<Lit> learnt{Lit{}};
  std::vector<Var> touched;
  bool tainted = false;
  int pending = 0;
  ClauseId cref = conflict;
  std::size_t idx = trail_.size();
  Lit p{};
  bool have_p = false;
  for (;;) {
    const ClauseData& c = clauses_[cref];
    tainted = tainted || c.tainted;
    for (Lit q : c.lits) {
      if (have_p && q.var() == p.var()) continue;
      const auto v = static_cast<std::size_t>(q.var());
      if (seen_[v]) continue;
      if (level_[v] == 0) {
        tainted = tainted || taint0_[v];
        continue;
      }
      seen_[v] = 1;
      touched.push_back(q.var());
      bump_activity(q.var());
      if (level_[v] >= conflict_level)
        ++pending;
      else
        learnt.push_back(q);
    }
    // next marked literal of the conflict level on the trail
    do {
      --idx;
    } while (!seen_[static_cast<std::size_t>(trail_[idx].lit.var())] ||
             level_[static_cast<std::size_t>(trail_[idx].lit.var())] < conflict_level);
    p = trail_[idx].lit;
    have_p = true;
    --pending;
    if (pending == 0) break;
    cref = reason_[static_cast<std::size_t>(p.var())];
    if (cref == kNoReason) throw ContractViolation("analyze: reason-less implication on the conflict level");
  }
  learnt[0] = ~p;

  // local minimisation: drop literals whose reason is subsumed
  std::size_t keep = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    const Lit q = learnt[i];
    const ClauseId r = reason_[static_cast<std::size_t>(q.var())];
    bool removable = r != kNoReason;
    if (removable) {
      for (Lit x : clauses_[r].lits) {
        if (x.var() == q.var()) continue;
        const auto v = static_cast<std::size_t>(x.var());
        if (!seen_[v] && level_[v] != 0) {
          removable = false;
          break;
        }
      }
    }
    if (removable) {
      tainted = tainted || clauses_[r].tainted;
      for (Lit x : clauses_[r].lits)
        if (level_[static_cast<std::size_t>(x.var())] == 0) tainted = tainted || taint0_[static_cast<std::size_t>(x.var())];
    } else {
      learnt[keep++] = q;
    }
  }
  learnt.resize(keep);
  for (Var v : touched) seen_[static_cast<std::size_t>(v)] = 0;

  int bj = 0;
  if (learnt.size() > 1) {
    std::size_t best = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level_[static_cast<std::size_t>(learnt[i].var())] > level_[static_cast<std::size_t>(learnt[best].var())]) best = i;
    std::swap(learnt[1], learnt[best]);
    bj = level_[static_cast<std::size_t>(learnt[1].var())];
  }
  var_inc_ /= kVarDecay;
  out.backjump_level = bj;
  out.tainted = tainted;
  out.learned = Clause(std::move(learnt));
  return out;
}

bool Solver::resolve_conflict(ClauseId conflict) {
  ++stats_.conflicts;
  const ConflictAnalysis a = analyze(conflict);
  if (a.unsat) {
    unsat_ = true;
    return false;
  }
  learn(a, a.tainted);
  return true;
}

void Solver::learn(const ConflictAnalysis& a, bool tainted) {
  ++stats_.learned;
  std::vector<Lit> lits(a.learned.begin(), a.learned.end());
  record_harvest(lits, ClauseOrigin::Learned, tainted);
  if (lits.size() == 1) {
    backtrack(0);
    enqueue(lits[0], kNoReason, ReasonKind::Clause);
    taint0_[static_cast<std::size_t>(lits[0].var())] = tainted;
    return;
  }
  int target = a.backjump_level;
  if (cfg_.chronological_backtracking_enabled) target = std::max(target, decision_level() - 1);
  backtrack(target);
  std::vector<int> levels;
  for (Lit l : lits) levels.push_back(level_[static_cast<std::size_t>(l.var())]);
  std::sort(levels.begin(), levels.end());
  const auto lbd = static_cast<std::uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin());
  const Lit asserting = lits[0];
  const bool harvested = !tainted && lits.size() <= static_cast<std::size_t>(cfg_.learned_clause_size_harvest_limit);
  const ClauseId cref = store(std::move(lits), ClauseOrigin::Learned, tainted);
  clauses_[cref].lbd = lbd;
  clauses_[cref].protect = harvested;
  attach_watches(cref);
  enqueue(asserting, cref, ReasonKind::Clause);
  if (target > a.backjump_level) chrono_repair_.push_back(cref);
}

void Solver::reduce_db() {
  next_reduce_ = stats_.conflicts + 2000 + reduce_inc_;
  reduce_inc_ += 300;
  std::vector<ClauseId> cand;
  for (ClauseId i = 0; i < clauses_.size(); ++i) {
    const ClauseData& c = clauses_[i];
    if (c.origin != ClauseOrigin::Learned || c.deleted || c.protect || c.lits.size() <= 2) continue;
    const Var v0 = c.lits[0].var();
    if (reason_[static_cast<std::size_t>(v0)] == i && assign_.value(v0) != Value::Unassigned) continue;
    cand.push_back(i);
  }
  std::sort(cand.begin(), cand.end(), [&](ClauseId a, ClauseId b) {
    const auto& x = clauses_[a];
    const auto& y = clauses_[b];
    if (x.lbd != y.lbd) return x.lbd > y.lbd;
    if (x.lits.size() != y.lits.size()) return x.lits.size() > y.lits.size();
    return a < b;
  });
  for (std::size_t i = 0; i < cand.size() / 2; ++i) {
    ClauseData& c = clauses_[cand[i]];
    c.deleted = true;
    std::vector<Lit>().swap(c.lits);
  }
  for (auto& ws : watches_)
    std::erase_if(ws, [&](const Watch& w) { return clauses_[w.cref].deleted; });
}

// --- propagators ----------------------------------------------------------

void Solver::notify_propagators() {
  if (props_.empty()) {
    notified_ = trail_.size();
    return;
  }
  for (; notified_ < trail_.size(); ++notified_)
    for (ExternalPropagator* p : props_) p->on_assignment(trail_[notified_].lit);
}

void Solver::check_external_contract(const Clause& c, const char* who) const {
  for (Lit l : c) {
    if (l.var() < 1 || l.var() > num_vars_) throw ContractViolation(std::string(who) + ": clause variable out of range");
    if (assign_.is_true(l)) throw ContractViolation(std::string(who) + ": clause satisfied by the current assignment");
  }
}

Solver::CheckResult Solver::check_propagators(std::optional<ClauseId>& conflict) {
  if (fixpoints_++ % static_cast<std::uint64_t>(cfg_.propagator_frequency) != 0) return CheckResult::Quiet;
  ++stats_.fixpoint_checks;
  notify_propagators();
  for (ExternalPropagator* p : props_) {
    auto c = p->on_fixpoint(trail_view());
    if (!c) continue;
    check_external_contract(*c, "on_fixpoint");
    ++stats_.external_clauses;
    const std::size_t before = trail_.size();
    const int level_before = decision_level();
    auto cf = integrate(std::vector<Lit>(c->begin(), c->end()), p->clause_origin(), false);
    if (unsat_) return CheckResult::Unsat;
    if (cf) {
      conflict = cf;
      return CheckResult::Conflict;
    }
    if (trail_.size() != before || decision_level() != level_before) return CheckResult::Progress;
  }
  for (ExternalPropagator* p : props_) {
    if (auto lvl = p->requested_backtrack(); lvl && *lvl < decision_level()) {
      backtrack(*lvl);
      return CheckResult::Progress;
    }
  }
  return CheckResult::Quiet;
}

bool Solver::probe_propagate(bool consult) {
  for (;;) {
    if (propagate()) return true;
    if (!consult || props_.empty()) return false;
    if (fixpoints_++ % static_cast<std::uint64_t>(cfg_.propagator_frequency) != 0) return false;
    ++stats_.fixpoint_checks;
    notify_propagators();
    bool progress = false;
    for (ExternalPropagator* p : props_) {
      auto c = p->on_fixpoint(trail_view());
      if (!c) continue;
      check_external_contract(*c, "on_fixpoint");
      ++stats_.external_clauses;
      std::vector<Lit> lits(c->begin(), c->end());
      if (decision_level() == 0) {
        const std::size_t before = trail_.size();
        if (auto cf = integrate(std::move(lits), p->clause_origin(), false); cf || unsat_) {
          unsat_ = true;
          return true;
        }
        if (trail_.size() != before) {
          progress = true;
          break;
        }
        continue;
      }
      if (is_propagator_origin(p->clause_origin())) record_harvest(lits, p->clause_origin(), false);
      std::optional<Lit> open;
      int unassigned = 0;
      for (Lit l : lits)
        if (assign_.value(l) == Value::Unassigned) {
          ++unassigned;
          open = l;
        }
      deferred_.push_back(std::move(lits));
      deferred_origin_.push_back(p->clause_origin());
      if (unassigned == 0) return true;
      if (unassigned == 1) {
        enqueue(*open, kNoReason, ReasonKind::External);
        progress = true;
        break;
      }
    }
    if (!progress) return false;
  }
}

bool Solver::flush_deferred() {
  if (decision_level() != 0) throw ContractViolation("flush_deferred: not at the root level");
  auto lits = std::move(deferred_);
  auto origins = std::move(deferred_origin_);
  deferred_.clear();
  deferred_origin_.clear();
  for (std::size_t i = 0; i < lits.size() && !unsat_; ++i) {
    bool satisfied = false;
    for (Lit l : lits[i]) satisfied = satisfied || (assign_.is_true(l) && level_of(l.var()) == 0);
    if (satisfied) continue;
    if (origins[i] != ClauseOrigin::Original) ++stats_.external_clauses;
    if (integrate(std::move(lits[i]), origins[i], is_tainting_origin(origins[i]))) unsat_ = true;
    if (!unsat_ && propagate()) unsat_ = true;
  }
  if (!unsat_ && propagate()) unsat_ = true;
  return !unsat_;
}

// --- search ---------------------------------------------------------------

bool Solver::budget_exhausted(std::uint64_t conflicts_at_start, std::chrono::steady_clock::time_point start) const {
  if (cfg_.conflict_budget && stats_.conflicts - conflicts_at_start >= *cfg_.conflict_budget) return true;
  if (cfg_.time_budget && std::chrono::steady_clock::now() - start >= *cfg_.time_budget) return true;
  return false;
}

SolveStatus Solver::run(const Cube& assumptions, const Hooks& hooks) {
  model_.reset();
  for (Lit a : assumptions)
    if (a.var() > num_vars_) throw DomainError("assumption variable " + std::to_string(a.var()) + " exceeds " + std::to_string(num_vars_));
  if (unsat_) return SolveStatus::Unsat;
  backtrack(0);
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t c0 = stats_.conflicts;
  std::uint64_t restarts = 0;
  std::uint64_t next_restart = stats_.conflicts + kRestartBase;
  std::uint64_t ticks = 0;
  const std::vector<Lit> assum(assumptions.begin(), assumptions.end());

  auto after_conflict = [&]() -> std::optional<SolveStatus> {
    if (budget_exhausted(c0, start)) return SolveStatus::BudgetExhausted;
    if (cfg_.restarts_enabled && stats_.conflicts >= next_restart) {
      ++restarts;
      ++stats_.restarts;
      next_restart = stats_.conflicts + static_cast<std::uint64_t>(luby(2.0, restarts) * kRestartBase);
      backtrack(0);
    }
    if (stats_.conflicts >= next_reduce_) reduce_db();
    return std::nullopt;
  };

  for (;;) {
    if (unsat_) return SolveStatus::Unsat;
    if (auto confl = propagate()) {
      if (!resolve_conflict(*confl)) return SolveStatus::Unsat;
      if (auto s = after_conflict()) return *s;
      continue;
    }
    if (!props_.empty()) {
      std::optional<ClauseId> confl;
      const CheckResult r = check_propagators(confl);
      if (r == CheckResult::Unsat) return SolveStatus::Unsat;
      if (r == CheckResult::Conflict) {
        if (!resolve_conflict(*confl)) return SolveStatus::Unsat;
        if (auto s = after_conflict()) return *s;
        continue;
      }
      if (r == CheckResult::Progress) continue;
    }
    if (hooks.fixpoint) {
      const std::uint64_t before = stats_.conflicts;
      const HookAction act = hooks.fixpoint(*this);
      if (unsat_) return SolveStatus::Unsat;
      if (act == HookAction::Stop) return SolveStatus::BudgetExhausted;
      if (stats_.conflicts != before)
        if (auto s = after_conflict()) return *s;
      if (act == HookAction::Repropagate) continue;
    }
    if (assign_.is_total()) {
      // assumptions not yet decided are implied by the earlier ones
      for (Lit a : assum)
        if (assign_.is_false(a)) return SolveStatus::Unsat;
      notify_propagators();
      bool rejected = false;
      for (ExternalPropagator* p : props_) {
        ModelVerdict verdict = p->on_model(assign_);
        if (verdict.accepted) continue;
        if (!assign_.falsifies(verdict.clause)) throw ContractViolation("on_model: rejecting clause not falsified by the model");
        ++stats_.external_clauses;
        auto confl = integrate(std::vector<Lit>(verdict.clause.begin(), verdict.clause.end()), p->clause_origin(), false);
        if (unsat_) return SolveStatus::Unsat;
        if (confl) {
          if (!resolve_conflict(*confl)) return SolveStatus::Unsat;
          if (auto s = after_conflict()) return *s;
        }
        rejected = true;
        break;
      }
      if (rejected) continue;
      model_ = assign_;
      if (hooks.model) {
        const std::uint64_t before = stats_.conflicts;
        if (hooks.model(*this, assign_)) {
          if (unsat_) return SolveStatus::Unsat;
          if (stats_.conflicts != before)
            if (auto s = after_conflict()) return *s;
          if (budget_exhausted(c0, start)) return SolveStatus::BudgetExhausted;
          continue;
        }
      }
      return SolveStatus::Sat;
    }
    if ((++ticks & 127U) == 0 && budget_exhausted(c0, start)) return SolveStatus::BudgetExhausted;

    std::optional<Lit> next;
    while (static_cast<std::size_t>(decision_level()) < assum.size()) {
      const Lit a = assum[static_cast<std::size_t>(decision_level())];
      if (assign_.is_true(a)) {
        trail_lim_.push_back(trail_.size());
        continue;
      }
      if (assign_.is_false(a)) return SolveStatus::Unsat;
      next = a;
      break;
    }
    if (!next) next = decide_next();
    ++stats_.decisions;
    decide(*next);
  }
}

SolveStatus Solver::solve(const Cube& assumptions) { return run(assumptions, {}); }

EnumerationResult Solver::enumerate(std::span<const Var> projection, const Cube& assumptions) {
  for (Var v : projection)
    if (v < 1 || v > num_vars_) throw DomainError("projection variable " + std::to_string(v) + " out of range");
  EnumerationResult r;
  Hooks hooks;
  hooks.model = [&](Solver& s, const Assignment& a) {
    std::vector<Lit> proj;
    proj.reserve(projection.size());
    for (Var v : projection) proj.push_back(Lit::make(v, a.value(v) == Value::False));
    std::sort(proj.begin(), proj.end());
    Cube cube(std::move(proj));
    s.add_clause(cube.negation(), ClauseOrigin::Blocking);
    r.models.push_back(std::move(cube));
    return true;
  };
  const SolveStatus st = run(assumptions, hooks);
  r.complete = st == SolveStatus::Unsat;
  r.stats = stats_;
  r.harvested = harvest_;
  return r;
}

SolveOutcome solve(const CnfFormula& f, const Cube& assumptions, std::span<ExternalPropagator* const> props,
                   const SolverConfig& cfg) {
  Solver s(f, cfg);
  for (ExternalPropagator* p : props) s.attach(*p);
  SolveOutcome out;
  out.status = s.solve(assumptions);
  out.model = s.model();
  out.stats = s.stats();
  out.harvested = s.harvest();
  return out;
}

EnumerationResult enumerate_models(const CnfFormula& f, std::span<ExternalPropagator* const> props,
                                   const SolverConfig& cfg, std::span<const Var> projection, const Cube& assumptions) {
  Solver s(f, cfg);
  for (ExternalPropagator* p : props) s.attach(*p);
  return s.enumerate(projection, assumptions);
}

std::vector<Var> first_vars(Var n) {
  std::vector<Var> out;
  for (Var v = 1; v <= n; ++v) out.push_back(v);
  return out;
}

}  // namespace smscube
