#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "smscube/solver.hpp"

using namespace smscube;

namespace {

CnfFormula random_cnf(std::mt19937& rng, Var vars, int clauses, int width) {
  CnfFormula f(vars);
  std::uniform_int_distribution<int> var(1, vars);
  std::uniform_int_distribution<int> len(1, width);
  std::bernoulli_distribution neg(0.5);
  for (int i = 0; i < clauses; ++i) {
    std::vector<Lit> lits;
    const int k = len(rng);
    for (int j = 0; j < k; ++j) {
      const Var v = var(rng);
      bool clash = false;
      for (Lit l : lits) clash = clash || l.var() == v;
      if (!clash) lits.push_back(Lit::make(v, neg(rng)));
    }
    f.add_clause(Clause(lits));
  }
  return f;
}

std::set<std::vector<Lit>> as_set(const std::vector<Assignment>& ms) {
  std::set<std::vector<Lit>> out;
  for (const auto& m : ms) out.insert(m.literals());
  return out;
}

std::set<std::vector<Lit>> as_set(const std::vector<Cube>& ms, Var vars) {
  std::set<std::vector<Lit>> out;
  for (const auto& c : ms) out.insert(Assignment::from_literals(vars, c.literals()).literals());
  return out;
}

// Pigeonhole: p pigeons into p-1 holes.
CnfFormula pigeonhole(int p) {
  const int h = p - 1;
  CnfFormula f(p * h);
  auto x = [&](int i, int j) { return i * h + j + 1; };
  for (int i = 0; i < p; ++i) {
    std::vector<Lit> c;
    for (int j = 0; j < h; ++j) c.push_back(Lit::positive(x(i, j)));
    f.add_clause(Clause(c));
  }
  for (int j = 0; j < h; ++j)
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) f.add_clause(Clause{-x(a, j), -x(b, j)});
  return f;
}

std::vector<SolverConfig> configs() {
  std::vector<SolverConfig> out(4);
  out[1].restarts_enabled = false;
  out[2].chronological_backtracking_enabled = true;
  out[3].restarts_enabled = false;
  out[3].chronological_backtracking_enabled = true;
  out[3].default_phase = true;
  return out;
}

class CountingPropagator : public ExternalPropagator {
 public:
  int assigned = 0;
  int backtracks = 0;
  void on_assignment(Lit) override { ++assigned; }
  void on_backtrack(int) override { ++backtracks; }
};

// Rejects every model where variable 1 is true, but only at the model check.
class NoX1 : public ExternalPropagator {
 public:
  ModelVerdict on_model(const Assignment& a) override {
    if (a.is_true(Lit::positive(1))) return ModelVerdict::reject(Clause{-1});
    return ModelVerdict::accept();
  }
};

class SatisfiedClauseProp : public ExternalPropagator {
 public:
  std::optional<Clause> on_fixpoint(const Trail& t) override {
    for (const auto& e : t.entries)
      if (e.lit.var() == 1) return Clause(std::vector<Lit>{e.lit});
    return std::nullopt;
  }
};

}  // namespace

TEST_CASE("solve: small examples") {
  CnfFormula f(2);
  f.add_clause(Clause{1, 2});
  f.add_clause(Clause{-1});
  f.add_clause(Clause{-2});
  CHECK(solve(f, {}, {}).status == SolveStatus::Unsat);

  CnfFormula g(2);
  g.add_clause(Clause{1, 2});
  auto r = solve(g, Cube{-1}, {});
  REQUIRE(r.status == SolveStatus::Sat);
  CHECK(r.model->is_true(Lit::positive(2)));
  CHECK(r.model->is_true(Lit::negative(1)));
}

TEST_CASE("solve and enumerate agree with brute force") {
  std::mt19937 rng(2024);
  for (const auto& cfg : configs()) {
    for (int i = 0; i < 150; ++i) {
      const Var vars = 3 + static_cast<Var>(i % 12);
      auto f = random_cnf(rng, vars, 2 + static_cast<int>(rng() % (4 * vars)), 3);
      const auto models = models_bruteforce(f);
      auto r = solve(f, {}, {}, cfg);
      CHECK((r.status == SolveStatus::Sat) == !models.empty());
      if (r.status == SolveStatus::Sat) {
        for (const auto& c : f.clauses()) CHECK(r.model->satisfies(c));
      }
      auto proj = first_vars(vars);
      auto e = enumerate_models(f, {}, cfg, proj);
      CHECK(e.complete);
      CHECK(e.models.size() == models.size());
      CHECK(as_set(e.models, vars) == as_set(models));
    }
  }
}

TEST_CASE("enumeration under assumptions and projection") {
  CnfFormula f(2);
  auto e = enumerate_models(f, {}, {}, first_vars(2));
  CHECK(e.models.size() == 4);

  std::mt19937 rng(5);
  for (int i = 0; i < 60; ++i) {
    auto f2 = random_cnf(rng, 10, 18, 3);
    const Cube assume{(i % 2 ? 2 : -2), (i % 3 ? 5 : -5)};
    const std::vector<Var> proj{1, 2, 3, 4};
    auto got = enumerate_models(f2, {}, {}, proj, assume);
    CHECK(got.complete);
    std::set<std::vector<Lit>> want;
    for (const auto& m : models_bruteforce(f2)) {
      if (!m.is_true(assume.literals()[0]) || !m.is_true(assume.literals()[1])) continue;
      std::vector<Lit> p;
      for (Var v : proj) p.push_back(Lit::make(v, m.value(v) == Value::False));
      want.insert(p);
    }
    std::set<std::vector<Lit>> have;
    for (const auto& c : got.models) have.insert(std::vector<Lit>(c.begin(), c.end()));
    CHECK(have == want);
    CHECK(have.size() == got.models.size());
  }
}

TEST_CASE("harvested learned clauses are entailed and short") {
  std::mt19937 rng(99);
  for (int i = 0; i < 80; ++i) {
    auto f = random_cnf(rng, 12, 50, 3);
    SolverConfig cfg;
    cfg.learned_clause_size_harvest_limit = 5;
    Solver s(f, cfg);
    s.solve();
    for (const auto& c : s.harvest().lambda) {
      CHECK(c.size() <= 5);
      CHECK(oracle::entails(f, c));
    }
  }
}

TEST_CASE("enumeration harvest excludes blocking-derived clauses") {
  std::mt19937 rng(17);
  for (int i = 0; i < 40; ++i) {
    auto f = random_cnf(rng, 10, 22, 3);
    SolverConfig cfg;
    cfg.learned_clause_size_harvest_limit = 20;
    Solver s(f, cfg);
    auto e = s.enumerate(first_vars(10));
    for (const auto& c : e.harvested.lambda) CHECK(oracle::entails(f, c));
  }
}

TEST_CASE("pigeonhole is unsat under every configuration") {
  for (const auto& cfg : configs()) {
    auto r = solve(pigeonhole(6), {}, {}, cfg);
    CHECK(r.status == SolveStatus::Unsat);
    CHECK(r.stats.conflicts > 0);
  }
}

TEST_CASE("budgets") {
  SolverConfig cfg;
  cfg.conflict_budget = 5;
  auto r = solve(pigeonhole(8), {}, {}, cfg);
  CHECK(r.status == SolveStatus::BudgetExhausted);
  CHECK(!r.model);

  SolverConfig bad;
  bad.propagator_frequency = 0;
  bad.learned_clause_size_harvest_limit = 0;
  try {
    bad.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() == 2);
  }
}

TEST_CASE("decide_next") {
  CnfFormula f(3);
  Solver s(f);
  CHECK(s.decide_next() == Lit::negative(1));
  s.bump_activity(2);
  CHECK(s.decide_next().var() == 2);
  s.decide(Lit::positive(2));
  s.decide(Lit::positive(1));
  CHECK(s.decide_next().var() == 3);
  SolverConfig pos;
  pos.default_phase = true;
  Solver t(f, pos);
  CHECK(t.decide_next() == Lit::positive(1));
}

TEST_CASE("analyze: single decision conflict") {
  // x=1, y=2: {-x,y}, {-x,-y}
  CnfFormula f(2);
  f.add_clause(Clause{-1, 2});
  f.add_clause(Clause{-1, -2});
  Solver s(f);
  s.decide(Lit::positive(1));
  auto confl = s.propagate();
  REQUIRE(confl);
  auto a = s.analyze(*confl);
  CHECK(!a.unsat);
  CHECK(a.learned == Clause{-1});
  CHECK(a.backjump_level == 0);
}

TEST_CASE("analyze: asserting clause with one literal at the conflict level") {
  // level 1: a=1; level 2: b=2 -> c=3; {-a,-c,d}, {-a,-c,-d}
  CnfFormula f(4);
  f.add_clause(Clause{-2, 3});
  f.add_clause(Clause{-1, -3, 4});
  f.add_clause(Clause{-1, -3, -4});
  Solver s(f);
  s.decide(Lit::positive(1));
  REQUIRE(!s.propagate());
  s.decide(Lit::positive(2));
  auto confl = s.propagate();
  REQUIRE(confl);
  auto a = s.analyze(*confl);
  int at_top = 0;
  for (Lit l : a.learned) at_top += s.level_of(l.var()) == 2;
  CHECK(at_top == 1);
  CHECK(a.backjump_level == 1);
  CHECK(s.level_of(a.learned.literals()[0].var()) == 2);
}

TEST_CASE("conflict at level 0 is unsat") {
  CnfFormula f(1);
  f.add_clause(Clause{1});
  f.add_clause(Clause{-1});
  Solver s(f);
  CHECK(s.is_unsat());
  CHECK(s.solve() == SolveStatus::Unsat);
}

TEST_CASE("propagator callbacks") {
  CnfFormula f(3);
  f.add_clause(Clause{1, 2, 3});
  CountingPropagator cp;
  NoX1 nx;
  Solver s(f);
  s.attach(cp);
  s.attach(nx);
  auto e = s.enumerate(first_vars(3));
  CHECK(e.complete);
  CHECK(e.models.size() == 3);  // x1 false, (x2,x3) != (0,0)
  for (const auto& m : e.models) CHECK(m.literals()[0] == Lit::negative(1));
  CHECK(cp.assigned > 0);
  CHECK(cp.backtracks > 0);
  CHECK(e.harvested.pi.size() == 1);
}

TEST_CASE("satisfied propagator clause is a contract violation") {
  CnfFormula f(2);
  SatisfiedClauseProp p;
  Solver s(f);
  s.attach(p);
  CHECK_THROWS_AS(s.solve(), ContractViolation);
}

TEST_CASE("deterministic without restarts") {
  std::mt19937 rng(1);
  auto f = random_cnf(rng, 40, 170, 3);
  SolverConfig cfg;
  cfg.restarts_enabled = false;
  auto a = solve(f, {}, {}, cfg);
  auto b = solve(f, {}, {}, cfg);
  CHECK(a.status == b.status);
  CHECK(a.stats.conflicts == b.stats.conflicts);
  CHECK(a.stats.decisions == b.stats.decisions);
  CHECK(a.model == b.model);
}
