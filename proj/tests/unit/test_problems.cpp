#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "smscube/coloring.hpp"
#include "smscube/encoders.hpp"
#include "smscube/minimality.hpp"

using namespace smscube;

namespace {

VertexPair p1(int u, int v) { return {u - 1, v - 1}; }
Lit e1(int n, int u, int v) { return Lit::positive(edge_var(n, u - 1, v - 1)); }

PartialGraph to_graph(const oracle::Adj& a) {
  const int n = static_cast<int>(a.size());
  PartialGraph g(n, EdgeState::Absent);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (a[u][v]) g.set(u, v, EdgeState::Present);
  return g;
}

oracle::Adj to_adj(const Cube& edges, int n) {
  oracle::Adj a(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (Lit l : edges)
    if (!l.negated()) {
      const auto p = pair_of_var(n, l.var());
      a[p.u][p.v] = a[p.v][p.u] = true;
    }
  return a;
}

std::uint64_t code_of(const Cube& edges) {
  std::uint64_t c = 0;
  for (Lit l : edges)
    if (!l.negated()) c |= 1ULL << (l.var() - 1);
  return c;
}

// Labelled graphs accepted by encoding + domain propagator (no minimality).
std::set<std::uint64_t> labelled_models(const Encoding& enc) {
  auto props = make_propagators(enc);
  props.owned.erase(props.owned.begin());  // drop the minimality propagator
  auto ptrs = props.pointers();
  auto r = enumerate_models(enc.formula, ptrs, {}, first_vars(enc.formula.num_edge_vars()));
  REQUIRE(r.complete);
  std::set<std::uint64_t> out;
  for (const auto& m : r.models) out.insert(code_of(m));
  CHECK(out.size() == r.models.size());
  return out;
}

std::set<std::uint64_t> brute(int n, const std::function<bool(const oracle::Adj&)>& prop) {
  std::set<std::uint64_t> out;
  for (std::uint64_t c = 0; c < (1ULL << oracle::pairs(n)); ++c)
    if (prop(oracle::graph_of_code(n, c))) out.insert(c);
  return out;
}

std::vector<Cube> canonical_models(const Encoding& enc) {
  auto props = make_propagators(enc);
  auto ptrs = props.pointers();
  auto r = enumerate_models(enc.formula, ptrs, {}, first_vars(enc.formula.num_edge_vars()));
  REQUIRE(r.complete);
  return r.models;
}

Encoding make(Problem p, int n, int k = 3, std::optional<int> m = std::nullopt, std::optional<bool> sb = std::nullopt) {
  EncodingSpec s;
  s.problem = p;
  s.n = n;
  s.k = k;
  s.m = m;
  s.static_sb = sb;
  return encode(s);
}

}  // namespace

TEST_CASE("derive_symmetry_clause") {
  PartialGraph g(3);
  g.set(0, 1, EdgeState::Present);
  g.set(1, 2, EdgeState::Absent);
  MinimalityWitness w{Permutation({2, 0, 1}), {{p1(1, 2), true, p1(2, 3), false}}};
  CHECK(derive_symmetry_clause(w, g) == Clause{-1, 3});

  MinimalityWitness one{Permutation::identity(3), {{p1(1, 2), true, p1(1, 2), true}}};
  CHECK(derive_symmetry_clause(one, g) == Clause{-1});

  MinimalityWitness bad{Permutation::identity(3), {{p1(1, 3), true, p1(1, 3), true}}};
  CHECK_THROWS_AS(derive_symmetry_clause(bad, g), ContractViolation);

  auto single = PartialGraph::from_edges(3, {p1(1, 2)});
  auto r = is_canonical(single);
  REQUIRE(r.witness);
  auto c = derive_symmetry_clause(*r.witness, single);
  Assignment a(3);
  for (Var x = 1; x <= 3; ++x) a.assign(Lit::make(x, single.at(pair_of_var(3, x)) != EdgeState::Present));
  CHECK(a.falsifies(c));
  std::set<VertexPair> pairs;
  for (const auto& e : r.witness->certificate) {
    pairs.insert(e.position);
    pairs.insert(e.image);
  }
  CHECK(c.size() == pairs.size());
}

TEST_CASE("minimality propagator on the trail") {
  MinimalityPropagator prop(3);
  Assignment a(3);
  std::vector<TrailEntry> entries;
  CHECK(!prop.on_fixpoint(Trail{entries, a, 0}));
  a.assign(Lit::positive(1));
  a.assign(Lit::negative(3));
  auto c = prop.on_fixpoint(Trail{entries, a, 0});
  REQUIRE(c);
  CHECK(*c == Clause{-1, 3});
  // both completions are non-canonical
  for (int x : {0, 1}) {
    auto g = PartialGraph::from_edges(3, x ? std::vector<VertexPair>{p1(1, 2), p1(1, 3)} : std::vector<VertexPair>{p1(1, 2)});
    CHECK(!oracle::is_canonical(oracle::graph_of_code(3, x ? 0b011 : 0b001)));
    CHECK(!is_canonical(g).canonical);
  }
}

TEST_CASE("minimality propagator: canonical total graphs pass") {
  for (int n = 2; n <= 5; ++n) {
    MinimalityPropagator prop(n);
    for (std::uint64_t code = 0; code < (1ULL << oracle::pairs(n)); ++code) {
      const auto adj = oracle::graph_of_code(n, code);
      Assignment a(oracle::pairs(n));
      for (Var x = 1; x <= oracle::pairs(n); ++x) a.assign(Lit::make(x, ((code >> (x - 1)) & 1U) == 0));
      std::vector<TrailEntry> entries;
      const bool canon = oracle::is_canonical(adj);
      const auto fix = prop.on_fixpoint(Trail{entries, a, 0});
      const auto verdict = prop.on_model(a);
      CHECK(fix.has_value() == !canon);
      CHECK(verdict.accepted == canon);
      if (!canon) CHECK(a.falsifies(verdict.clause));
    }
  }
}

TEST_CASE("enumeration modulo isomorphism") {
  const int counts[] = {0, 1, 2, 4, 11, 34, 156};
  for (int n = 1; n <= 6; ++n) {
    auto models = canonical_models(make(Problem::AllGraphs, n));
    CHECK(static_cast<int>(models.size()) == counts[n]);
    for (const auto& m : models) CHECK(oracle::is_canonical(to_adj(m, n)));
  }
}

TEST_CASE("solve all graphs n=3 with minimality") {
  auto enc = make(Problem::AllGraphs, 3);
  auto props = make_propagators(enc);
  auto ptrs = props.pointers();
  auto r = solve(enc.formula, {}, ptrs);
  REQUIRE(r.status == SolveStatus::Sat);
  CHECK(oracle::is_canonical(oracle::graph_of_code(3, code_of(Cube(r.model->literals())))));
}

TEST_CASE("find_k_coloring") {
  auto c5 = PartialGraph::from_edges(5, {p1(1, 2), p1(2, 3), p1(3, 4), p1(4, 5), p1(1, 5)});
  CHECK(!find_k_coloring(c5, 2));
  auto col = find_k_coloring(c5, 3);
  REQUIRE(col);
  for (const auto& e : c5.edges()) CHECK((*col)[e.u] != (*col)[e.v]);
  CHECK(!find_k_coloring(PartialGraph(3, EdgeState::Present), 2));

  for (int n = 1; n <= 6; ++n)
    for (std::uint64_t code = 0; code < (1ULL << oracle::pairs(n)); code += (n == 6 ? 7 : 1))
      for (int k = 1; k <= 3; ++k) {
        const auto adj = oracle::graph_of_code(n, code);
        CHECK(find_k_coloring(to_graph(adj), k).has_value() == oracle::colorable(adj, k));
      }
}

TEST_CASE("coloring_clause") {
  CHECK(coloring_clause({0, 0, 1}, 3) == Clause(std::vector<Lit>{e1(3, 1, 2)}));
  CHECK(coloring_clause({0, 1, 2}, 3).empty());
  CHECK(coloring_clause({0, 0, 1, 1}, 4) == Clause(std::vector<Lit>{e1(4, 1, 2), e1(4, 3, 4)}));
}

TEST_CASE("010 colourings") {
  auto k3 = find_010_coloring(PartialGraph(3, EdgeState::Present));
  REQUIRE(k3);
  CHECK(std::count(k3->begin(), k3->end(), kRed) == 1);
  CHECK(*find_010_coloring(PartialGraph(4, EdgeState::Absent)) == Coloring(4, kBlue));
  CHECK(*find_010_coloring(PartialGraph::from_edges(2, {p1(1, 2)})) == Coloring{kBlue, kBlue});

  for (int n = 1; n <= 6; ++n)
    for (std::uint64_t code = 0; code < (1ULL << oracle::pairs(n)); code += (n == 6 ? 5 : 1)) {
      const auto adj = oracle::graph_of_code(n, code);
      auto c = find_010_coloring(to_graph(adj));
      CHECK(c.has_value() == oracle::colorable_010(adj));
    }
}

TEST_CASE("triangle variables") {
  for (int n = 3; n <= 8; ++n) {
    TriangleVars t{n, 100};
    Var expect = 100;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = b + 1; c < n; ++c) CHECK(t.var(c, a, b) == expect++);
    CHECK(expect - 100 == t.count());
  }
}

TEST_CASE("coloring_clause_010") {
  TriangleVars t3{3, 4};
  CHECK(coloring_clause_010({kBlue, kBlue, kBlue}, 3, t3) == Clause{4});
  // one red vertex: no red-red pair, and the only triple contains the red
  // vertex, so nothing can invalidate this colouring
  CHECK(coloring_clause_010({kRed, kBlue, kBlue}, 3, t3).empty());
  TriangleVars t4{4, 7};
  CHECK(coloring_clause_010(Coloring(4, kRed), 4, t4) == Clause{1, 2, 3, 4, 5, 6});
  CHECK_THROWS_AS(coloring_clause_010({kBlue, kBlue, kBlue}, 3, std::nullopt), ConfigError);
  CHECK_THROWS_AS(Non010ColorablePropagator(3, std::nullopt), ConfigError);
}

TEST_CASE("encoder shapes") {
  CHECK(encode_all_graphs(3).num_vars() == 3);
  CHECK(encode_all_graphs(3).num_clauses() == 0);
  CHECK(encode_all_graphs(1).num_vars() == 0);
  CHECK(encode_all_graphs(4).num_vars() == 6);

  auto tf3 = encode_triangle_free(3, 3, false);
  REQUIRE(tf3.num_clauses() == 1);
  CHECK(tf3.clauses()[0] == Clause{-1, -2, -3});
  CHECK(encode_triangle_free(4, 3, false).num_clauses() == 4);

  auto ks3 = encode_ks(3);
  int mentions = 0;
  for (const auto& c : ks3.clauses())
    for (Lit l : c) mentions += l.var() == 4;
  CHECK(ks3.num_vars() == 4);
  CHECK(mentions >= 4);

  auto ks4 = make(Problem::KS, 4, 3, std::nullopt, false);
  const auto* tri = ks4.vars.find("triangle");
  REQUIRE(tri);
  const auto& last = ks4.formula.clauses();
  int vertex_clauses = 0;
  for (const auto& c : last) {
    bool all_t = true;
    for (Lit l : c) all_t = all_t && l.var() >= tri->first && !l.negated();
    if (all_t) {
      ++vertex_clauses;
      CHECK(c.size() == 3);
    }
  }
  CHECK(vertex_clauses == 4);

  CnfFormula f(3, 3);
  CHECK(static_symmetry_clauses(f, 3).size() == 2);
  for (const auto& c : static_symmetry_clauses(f, 3)) CHECK(c.size() == 2);

  CHECK_THROWS_AS(make(Problem::TriangleFree, 2), ConfigError);
  EncodingSpec bad;
  bad.problem = Problem::Diameter2;
  bad.n = 2;
  bad.m = 9;
  try {
    bad.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() == 2);
  }
}

TEST_CASE("variable map sidecar") {
  auto enc = make(Problem::Diameter2, 5);
  const auto json = enc.vars.to_json(enc.formula.num_vars());
  CHECK(json.find("\"common_neighbor\"") != std::string::npos);
  CHECK(json.find("\"totalizer\"") != std::string::npos);
  Var next = enc.formula.num_edge_vars() + 1;
  for (const auto& b : enc.vars.blocks()) {
    CHECK(b.first == next);
    next += b.count;
  }
  CHECK(next == enc.formula.num_vars() + 1);
}

TEST_CASE("static symmetry breaking keeps every canonical graph") {
  for (int n = 2; n <= 6; ++n) {
    auto enc = make(Problem::AllGraphs, n, 3, std::nullopt, true);
    const auto models = labelled_models(enc);
    for (std::uint64_t code = 0; code < (1ULL << oracle::pairs(n)); ++code) {
      if (n <= 5 && oracle::is_canonical(oracle::graph_of_code(n, code))) CHECK(models.count(code) == 1);
      if (n == 6 && is_canonical(from_graph6(to_graph6(to_graph(oracle::graph_of_code(n, code))))).canonical)
        CHECK(models.count(code) == 1);
    }
  }
  // incompleteness: adjacent transpositions alone are exact at n=4, a
  // non-canonical survivor first appears at n=5
  auto count_non_canonical = [&](int n) {
    int bad = 0;
    for (auto code : labelled_models(make(Problem::AllGraphs, n, 3, std::nullopt, true)))
      bad += !oracle::is_canonical(oracle::graph_of_code(n, code));
    return bad;
  };
  CHECK(count_non_canonical(4) == 0);
  CHECK(count_non_canonical(5) > 0);
}

TEST_CASE("triangle-free encoding matches brute force") {
  for (int n = 3; n <= 6; ++n)
    for (int k = 2; k <= 3; ++k) {
      auto enc = make(Problem::TriangleFree, n, k, std::nullopt, false);
      CHECK(labelled_models(enc) == brute(n, [&](const oracle::Adj& a) {
              return oracle::maximal_triangle_free(a) && !oracle::colorable(a, k - 1);
            }));
    }
  auto c5 = canonical_models(make(Problem::TriangleFree, 5, 3));
  REQUIRE(c5.size() == 1);
  const auto cycle = to_adj(Cube(std::vector<Lit>{e1(5, 1, 2), e1(5, 2, 3), e1(5, 3, 4), e1(5, 4, 5), e1(5, 1, 5)}), 5);
  CHECK(oracle::canonical_vector(to_adj(c5[0], 5)) == oracle::canonical_vector(cycle));
  CHECK(canonical_models(make(Problem::TriangleFree, 4, 3)).empty());
}

TEST_CASE("Mantel bound") {
  for (int n = 3; n <= 6; ++n) {
    auto f = encode_triangle_free(n, 3, false);
    std::vector<Lit> edges;
    for (Var x = 1; x <= f.num_edge_vars(); ++x) edges.push_back(Lit::positive(x));
    add_exactly(f, edges, n * n / 4 + 1);
    CHECK(solve(f, {}, {}).status == SolveStatus::Unsat);
    auto g = encode_triangle_free(n, 3, false);
    add_exactly(g, edges, n * n / 4);
    CHECK(solve(g, {}, {}).status == SolveStatus::Sat);
  }
}

TEST_CASE("totalizer counts exactly") {
  for (int total = 1; total <= 7; ++total)
    for (int m = 0; m <= total; ++m) {
      CnfFormula f(total);
      std::vector<Lit> in;
      for (Var x = 1; x <= total; ++x) in.push_back(Lit::positive(x));
      add_exactly(f, in, m);
      auto r = enumerate_models(f, {}, {}, first_vars(total));
      REQUIRE(r.complete);
      std::size_t binom = 1;
      for (int i = 0; i < m; ++i) binom = binom * static_cast<std::size_t>(total - i) / static_cast<std::size_t>(i + 1);
      CHECK(r.models.size() == binom);
      // auxiliaries are fixed by unit propagation from the inputs
      for (const auto& c : r.models) {
        auto up = unit_propagate(f, Assignment::from_literals(f.num_vars(), c.literals()));
        CHECK(!up.conflict);
        CHECK(up.assignment.is_total());
      }
    }
}

TEST_CASE("diameter-2-critical encoding matches brute force") {
  for (int n = 3; n <= 6; ++n)
    for (int m = 0; m <= oracle::pairs(n); ++m) {
      if (n == 6 && m % 3 != 0) continue;
      auto enc = make(Problem::Diameter2, n, 3, m, false);
      CHECK(labelled_models(enc) == brute(n, [&](const oracle::Adj& a) {
              return oracle::edges(a) == m && oracle::diameter2_critical(a);
            }));
    }
  auto c4 = canonical_models(make(Problem::Diameter2, 4, 3, 4));
  REQUIRE(c4.size() == 1);
  CHECK(oracle::canonical_vector(to_adj(c4[0], 4)) == oracle::canonical_vector(oracle::graph_of_code(4, 0b011110)));
  auto k23 = canonical_models(make(Problem::Diameter2, 5, 3, 6));
  REQUIRE(k23.size() == 1);
  // K_{2,3}: {1,2} joined to {3,4,5}
  const auto k23_adj = to_adj(Cube(std::vector<Lit>{e1(5, 1, 3), e1(5, 1, 4), e1(5, 1, 5), e1(5, 2, 3), e1(5, 2, 4), e1(5, 2, 5)}), 5);
  CHECK(oracle::canonical_vector(to_adj(k23[0], 5)) == oracle::canonical_vector(k23_adj));
  CHECK(canonical_models(make(Problem::Diameter2, 5, 3, 7)).empty());
}

TEST_CASE("auxiliary variables are determined by the edges") {
  for (auto p : {Problem::TriangleFree, Problem::Diameter2, Problem::KS}) {
    auto enc = make(p, 5, 3, 6, true);
    const Var e = enc.formula.num_edge_vars();
    for (std::uint64_t code = 0; code < (1ULL << e); code += 13) {
      Assignment a(enc.formula.num_vars());
      for (Var x = 1; x <= e; ++x) a.assign(Lit::make(x, ((code >> (x - 1)) & 1U) == 0));
      auto up = unit_propagate(enc.formula, a);
      if (!up.conflict) CHECK(up.assignment.is_total());
    }
  }
}

TEST_CASE("KS encoding") {
  CHECK(canonical_models(make(Problem::KS, 3)).empty());
  for (int n = 3; n <= 6; ++n) {
    auto enc = make(Problem::KS, n, 3, std::nullopt, false);
    CHECK(labelled_models(enc) == brute(n, [&](const oracle::Adj& a) {
            for (std::size_t v = 0; v < a.size(); ++v) {
              int deg = 0;
              bool tri = false;
              for (std::size_t u = 0; u < a.size(); ++u) {
                deg += a[v][u];
                for (std::size_t w = u + 1; w < a.size(); ++w) tri = tri || (a[v][u] && a[v][w] && a[u][w]);
              }
              if (deg < 2 || !tri) return false;
            }
            return !oracle::colorable_010(a);
          }));
  }
}
