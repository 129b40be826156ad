#include "smscube/cubing.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

namespace smscube {

// --- enriched formula -----------------------------------------------------

namespace {

constexpr const char* kSections[] = {"sigma", "pi", "lambda", "blocked"};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<long long> to_int(std::string_view s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t pos = 0;
  std::size_t lineno = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    f(++lineno, line);
  }
}

Cube negate(const Clause& c) {
  std::vector<Lit> lits;
  for (Lit l : c) lits.push_back(~l);
  return Cube(std::move(lits));
}

Cube sorted_cube(std::vector<Lit> lits) {
  std::sort(lits.begin(), lits.end());
  return Cube(std::move(lits));
}

std::vector<Var> edge_projection(Var edge_vars, Var num_vars) { return first_vars(edge_vars > 0 ? edge_vars : num_vars); }

}  // namespace

CnfFormula EnrichedFormula::flatten() const {
  CnfFormula f = base;
  f.add_clauses(sigma);
  f.add_clauses(pi);
  f.add_clauses(lambda);
  for (const Cube& m : blocked_models) f.add_clause(m.negation());
  return f;
}

std::string serialize_enriched(const EnrichedFormula& ef) {
  std::ostringstream out;
  if (ef.base.num_edge_vars() > 0) out << "c edge-vars " << ef.base.num_edge_vars() << '\n';
  if (ef.complete) out << "c prerun complete\n";
  const std::size_t total =
      ef.base.num_clauses() + ef.sigma.size() + ef.pi.size() + ef.lambda.size() + ef.blocked_models.size();
  out << "p cnf " << ef.base.num_vars() << ' ' << total << '\n';
  for (const Clause& c : ef.base.clauses()) write_clause(out, c);
  const std::vector<Clause>* sets[] = {&ef.sigma, &ef.pi, &ef.lambda};
  for (int i = 0; i < 3; ++i) {
    out << "c --- " << kSections[i] << " ---\n";
    for (const Clause& c : *sets[i]) write_clause(out, c);
  }
  out << "c --- blocked ---\n";
  for (const Cube& m : ef.blocked_models) write_clause(out, m.negation());
  return out.str();
}

EnrichedFormula parse_enriched(std::string_view text) {
  const CnfFormula all = parse_dimacs(text);
  // count clause terminators per section
  std::size_t counts[5] = {0, 0, 0, 0, 0};
  int section = 0;
  bool complete = false;
  bool header = false;
  for_each_line(text, [&](std::size_t, std::string_view line) {
    auto toks = split_ws(line);
    if (toks.empty()) return;
    if (toks[0] == "c") {
      if (toks.size() == 3 && toks[1] == "prerun" && toks[2] == "complete") complete = true;
      if (toks.size() == 4 && toks[1] == "---" && toks[3] == "---")
        for (int i = 0; i < 4; ++i)
          if (toks[2] == kSections[i]) section = i + 1;
      return;
    }
    if (toks[0][0] == 'c') return;
    if (toks[0] == "p") {
      header = true;
      return;
    }
    if (!header) return;
    for (auto t : toks)
      if (t == "0") ++counts[section];
  });
  EnrichedFormula ef;
  ef.complete = complete;
  ef.base = CnfFormula(all.num_vars(), all.num_edge_vars());
  std::size_t k = 0;
  for (std::size_t i = 0; i < counts[0]; ++i) ef.base.add_clause(all.clauses()[k++]);
  std::vector<Clause>* sets[] = {&ef.sigma, &ef.pi, &ef.lambda};
  for (int s = 0; s < 3; ++s)
    for (std::size_t i = 0; i < counts[s + 1]; ++i) sets[s]->push_back(all.clauses()[k++]);
  for (std::size_t i = 0; i < counts[4]; ++i) ef.blocked_models.push_back(negate(all.clauses()[k++]));
  return ef;
}

// --- iCNF -----------------------------------------------------------------

void write_icnf(std::ostream& out, const CubeSet& cs) {
  out << "p inccnf\n";
  for (const Cube& c : cs.cubes) {
    out << 'a';
    for (Lit l : c) out << ' ' << l.to_dimacs();
    out << " 0\n";
  }
}

std::string write_icnf(const CubeSet& cs) {
  std::ostringstream out;
  write_icnf(out, cs);
  return out.str();
}

CubeSet parse_icnf(std::string_view text) {
  CubeSet cs;
  bool header = false;
  std::size_t last = 0;
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    last = lineno;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == 'c') return;
    if (toks[0] == "p") {
      if (header) throw ParseError(lineno, "duplicate header");
      if (toks.size() != 2 || toks[1] != "inccnf") throw ParseError(lineno, "malformed header, expected 'p inccnf'");
      header = true;
      return;
    }
    if (!header) throw ParseError(lineno, "cube before 'p inccnf' header");
    if (toks[0] != "a") throw ParseError(lineno, "expected a cube line starting with 'a'");
    if (toks.back() != "0") throw ParseError(lineno, "cube missing terminating 0");
    std::vector<Lit> lits;
    for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
      auto d = to_int(toks[i]);
      if (!d || *d == 0 || *d > (1LL << 30) || *d < -(1LL << 30))
        throw ParseError(lineno, "invalid literal '" + std::string(toks[i]) + "'");
      lits.push_back(Lit::from_dimacs(static_cast<int>(*d)));
    }
    try {
      cs.cubes.emplace_back(std::move(lits));
    } catch (const DomainError& e) {
      throw ParseError(lineno, e.what());
    }
  });
  if (!header) throw ParseError(last, "missing 'p inccnf' header");
  return cs;
}

// --- scoring --------------------------------------------------------------

ScoringFunction score_default() {
  return {"default", [](double a, double b) { return std::min(a, b) + 1e-9 * (a + b); }};
}

ScoringFunction score_march() {
  return {"march", [](double a, double b) { return a + b + a * b; }};
}

ScoringFunction score_ks() {
  return {"ks", [](double a, double b) {
            const double lo = std::min(a, b);
            const double hi = std::max(a, b);
            return 8 * lo + 2 * lo / (hi + 1) + a + b;
          }};
}

ScoringFunction score_tf() {
  return {"tf", [](double a, double b) {
            const double r = std::min(a, b) / (std::max(a, b) + 1);
            return std::min(a, b) + 10 * r * r;
          }};
}

ScoringFunction score_smc() {
  return {"smc", [](double a, double b) { return a * b + a + b; }};
}

std::vector<ScoringFunction> score_presets() { return {score_default(), score_march(), score_ks(), score_tf(), score_smc()}; }

ScoringFunction find_score(const std::string& name) {
  for (auto& s : score_presets())
    if (s.name == name) return s;
  throw ConfigError({"unknown scoring function '" + name + "' (expected default, march, ks, tf or smc)"});
}

// --- prerun ---------------------------------------------------------------

EnrichedFormula prerun(Solver& s, const CnfFormula& f, std::uint64_t conflict_budget) {
  EnrichedFormula ef;
  ef.base = f;
  if (conflict_budget == 0) return ef;
  const SolverConfig saved = s.config();
  SolverConfig cfg = saved;
  cfg.conflict_budget = conflict_budget;
  s.set_config(cfg);
  const auto proj = edge_projection(f.num_edge_vars(), f.num_vars());
  auto r = s.enumerate(proj);
  s.set_config(saved);
  ef.sigma = r.harvested.sigma;
  ef.pi = r.harvested.pi;
  ef.lambda = r.harvested.lambda;
  ef.blocked_models = std::move(r.models);
  ef.complete = r.complete;
  return ef;
}

EnrichedFormula prerun(const CnfFormula& f, std::span<ExternalPropagator* const> props, const SolverConfig& cfg,
                       std::uint64_t conflict_budget) {
  Solver s(f, cfg);
  for (ExternalPropagator* p : props) s.attach(*p);
  return prerun(s, f, conflict_budget);
}

// --- CDCL cuber -----------------------------------------------------------

CubeSet cube_cdcl_cutoff(Solver& s, int cutoff, std::optional<std::uint64_t> conflict_budget) {
  if (cutoff < 1) throw ConfigError({"cutoff must be >= 1"});
  CubeSet cs;
  cs.origin = "cdcl cutoff=" + std::to_string(cutoff);
  const Var edges = s.num_edge_vars() > 0 ? s.num_edge_vars() : s.num_vars();
  const auto proj = first_vars(edges);
  const SolverConfig saved = s.config();
  SolverConfig cfg = saved;
  cfg.conflict_budget = conflict_budget;
  s.set_config(cfg);
  const std::uint64_t c0 = s.stats().conflicts;
  const std::uint64_t d0 = s.stats().decisions;

  Solver::Hooks hooks;
  hooks.fixpoint = [&](Solver& sv) {
    const Assignment& a = sv.assignment();
    int assigned = 0;
    for (Var v = 1; v <= edges; ++v) assigned += a.value(v) != Value::Unassigned;
    if (assigned < cutoff) return Solver::HookAction::Continue;
    // Stay inside every earlier cube's negation, otherwise the new cube
    // could overlap an old one on the still-open literals.
    for (const Cube& old : cs.cubes) {
      std::optional<Lit> open;
      bool sat = false;
      for (Lit l : old) {
        if (a.is_false(l)) {
          sat = true;
          break;
        }
        if (!open && a.value(l) == Value::Unassigned) open = ~l;
      }
      if (sat) continue;
      if (!open) throw ContractViolation("cdcl cuber: earlier cube not excluded at a fixpoint");
      sv.decide(*open);
      return Solver::HookAction::Repropagate;
    }
    std::vector<Lit> lits;
    for (Var v = 1; v <= edges; ++v)
      if (a.value(v) != Value::Unassigned) lits.push_back(Lit::make(v, a.value(v) == Value::False));
    Cube cube(std::move(lits));
    const Clause neg = cube.negation();
    cs.cubes.push_back(std::move(cube));
    sv.add_clause(neg, ClauseOrigin::CubeNegation);
    return Solver::HookAction::Repropagate;
  };
  hooks.model = [&](Solver& sv, const Assignment& a) {
    std::vector<Lit> lits;
    for (Var v : proj) lits.push_back(Lit::make(v, a.value(v) == Value::False));
    Cube m(std::move(lits));
    sv.add_clause(m.negation(), ClauseOrigin::Blocking);
    cs.models.push_back(std::move(m));
    return true;
  };
  const SolveStatus st = s.run({}, hooks);
  s.set_config(saved);
  cs.complete = st == SolveStatus::Unsat;
  cs.stats.conflicts = s.stats().conflicts - c0;
  cs.stats.decisions = s.stats().decisions - d0;
  return cs;
}

CubeSet cube_cdcl_cutoff(const EnrichedFormula& ef, std::span<ExternalPropagator* const> props, int cutoff,
                         const SolverConfig& cfg, std::optional<std::uint64_t> conflict_budget) {
  Solver s(ef.flatten(), cfg);
  for (ExternalPropagator* p : props) s.attach(*p);
  return cube_cdcl_cutoff(s, cutoff, conflict_budget);
}

// --- look-ahead -----------------------------------------------------------

namespace {

class TreeCuber {
 public:
  TreeCuber(Solver& s, const ScoringFunction& score, const LookaheadOptions& opt, CubeSet& out)
      : s_(s), score_(score), opt_(opt), out_(out) {
    last_ = opt.scope == LookaheadScope::EdgeVars && s.num_edge_vars() > 0 ? s.num_edge_vars() : s.num_vars();
  }

  void run() {
    s_.set_probe_mode(true);
    if (!s_.is_unsat()) node();
    s_.backtrack(0);
    s_.set_probe_mode(false);
  }

 private:
  bool over_budget() const { return opt_.node_budget && out_.stats.nodes >= *opt_.node_budget; }

  void emit() {
    if (opt_.branching_literals_only) {
      out_.cubes.emplace_back(branch_);
      return;
    }
    std::vector<Lit> lits;
    for (const auto& e : s_.trail()) lits.push_back(e.lit);
    out_.cubes.push_back(sorted_cube(std::move(lits)));
  }

  // Implied literals after assuming l, or nullopt on conflict.
  std::optional<std::size_t> probe(Lit l) {
    ++out_.stats.probes;
    const int level = s_.decision_level();
    const std::size_t before = s_.trail().size();
    s_.decide(l);
    const bool conflict = s_.probe_propagate(opt_.consult_propagators);
    const std::size_t implied = s_.trail().size() - before - 1;
    s_.backtrack(level);
    if (conflict) return std::nullopt;
    return implied;
  }

  void node() {
    ++out_.stats.nodes;
    const int base = s_.decision_level();
    for (;;) {
      if (s_.probe_propagate(opt_.consult_propagators) || s_.is_unsat()) {
        ++out_.stats.refuted;
        break;
      }
      if (static_cast<int>(s_.trail().size()) >= opt_.cutoff) {
        emit();
        break;
      }
      if (over_budget()) {
        out_.truncated = true;
        emit();
        break;
      }
      std::optional<Var> best;
      double best_score = 0;
      bool restart = false;
      bool refuted = false;
      for (Var v = 1; v <= last_; ++v) {
        if (s_.assignment().value(v) != Value::Unassigned) continue;
        const auto a = probe(Lit::positive(v));
        const auto b = probe(Lit::negative(v));
        if (!a && !b) {
          refuted = true;
          break;
        }
        if (!a || !b) {
          // failed literal: assert the other polarity and start over
          ++out_.stats.failed_literals;
          s_.decide(a ? Lit::positive(v) : Lit::negative(v));
          restart = true;
          break;
        }
        const double sc = score_(static_cast<double>(*a), static_cast<double>(*b));
        if (!best || sc > best_score) {
          best = v;
          best_score = sc;
        }
      }
      if (refuted) {
        ++out_.stats.refuted;
        break;
      }
      if (restart) continue;
      if (!best) {
        // every candidate is assigned
        emit();
        break;
      }
      const int here = s_.decision_level();
      for (Lit l : {Lit::negative(*best), Lit::positive(*best)}) {
        branch_.push_back(l);
        s_.decide(l);
        node();
        s_.backtrack(here);
        branch_.pop_back();
      }
      break;
    }
    s_.backtrack(base);
  }

  Solver& s_;
  const ScoringFunction& score_;
  const LookaheadOptions& opt_;
  CubeSet& out_;
  Var last_ = 0;
  std::vector<Lit> branch_;
};

}  // namespace

CubeSet cube_lookahead(const EnrichedFormula& ef, std::span<ExternalPropagator* const> props, const ScoringFunction& score,
                       const LookaheadOptions& opt, const SolverConfig& cfg) {
  if (opt.cutoff < 1) throw ConfigError({"cutoff must be >= 1"});
  CubeSet cs;
  cs.origin = std::string(opt.branching_literals_only ? "march" : "lookahead") +
              (opt.scope == LookaheadScope::EdgeVars ? " scope=edge" : " scope=all") + " sigma=" + score.name +
              " cutoff=" + std::to_string(opt.cutoff);
  Solver s(ef.flatten(), cfg);
  if (opt.consult_propagators)
    for (ExternalPropagator* p : props) s.attach(*p);
  TreeCuber(s, score, opt, cs).run();
  cs.stats.conflicts = s.stats().conflicts;
  cs.stats.decisions = s.stats().decisions;
  return cs;
}

CubeSet cube_march_style(const EnrichedFormula& ef, int cutoff, std::optional<std::uint64_t> node_budget) {
  LookaheadOptions opt;
  opt.scope = LookaheadScope::AllVars;
  opt.cutoff = cutoff;
  opt.node_budget = node_budget;
  opt.consult_propagators = false;
  opt.branching_literals_only = true;
  return cube_lookahead(ef, {}, score_march(), opt);
}

// --- session --------------------------------------------------------------

CubingSession::CubingSession(const CnfFormula& f, PropagatorSet props, const SolverConfig& cfg)
    : base_(f), props_(std::move(props)), solver_(std::make_unique<Solver>(f, cfg)) {
  for (ExternalPropagator* p : props_.pointers()) solver_->attach(*p);
}

EnrichedFormula CubingSession::prerun(std::uint64_t conflict_budget) { return smscube::prerun(*solver_, base_, conflict_budget); }

CubeSet CubingSession::cube_cdcl(int cutoff, std::optional<std::uint64_t> conflict_budget) {
  return cube_cdcl_cutoff(*solver_, cutoff, conflict_budget);
}

}  // namespace smscube
