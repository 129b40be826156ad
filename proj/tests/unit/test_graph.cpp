#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "smscube/graph.hpp"

using namespace smscube;

namespace {

PartialGraph from_code(int n, std::uint64_t code) {
  PartialGraph g(n, EdgeState::Absent);
  int k = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v, ++k)
      if ((code >> k) & 1U) g.set(u, v, EdgeState::Present);
  return g;
}

// 1-based pair, as written in the examples
VertexPair p1(int u, int v) { return {u - 1, v - 1}; }

// Every completion of g, as total graphs.
std::vector<PartialGraph> completions(const PartialGraph& g) {
  std::vector<VertexPair> unknown;
  const int n = g.num_vertices();
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (g.at(u, v) == EdgeState::Unknown) unknown.push_back({u, v});
  std::vector<PartialGraph> out;
  for (std::uint64_t bits = 0; bits < (1ULL << unknown.size()); ++bits) {
    PartialGraph h = g;
    for (std::size_t i = 0; i < unknown.size(); ++i)
      h.set(unknown[i].u, unknown[i].v, (bits >> i) & 1U ? EdgeState::Present : EdgeState::Absent);
    out.push_back(h);
  }
  return out;
}

}  // namespace

TEST_CASE("edge_var") {
  CHECK(edge_var(4, p1(1, 2)) == 1);
  CHECK(edge_var(4, p1(1, 4)) == 3);
  CHECK(edge_var(4, p1(2, 3)) == 4);
  CHECK(edge_var(4, p1(3, 4)) == 6);
  CHECK(edge_var(3, p1(2, 3)) == 3);
  CHECK(edge_var(5, p1(4, 5)) == 10);
  CHECK_THROWS_AS(edge_var(3, 0, 3), DomainError);
  CHECK_THROWS_AS(edge_var(3, 1, 1), DomainError);
  for (int n = 2; n <= 9; ++n)
    for (Var x = 1; x <= num_pairs(n); ++x) CHECK(edge_var(n, pair_of_var(n, x)) == x);
}

TEST_CASE("graph_from_assignment") {
  Assignment a(3);
  a.assign(Lit::positive(3));
  auto g = graph_from_assignment(3, a);
  CHECK(g.at(p1(2, 3)) == EdgeState::Present);
  CHECK(g.at(p1(1, 2)) == EdgeState::Unknown);
  CHECK(g.at(p1(1, 3)) == EdgeState::Unknown);

  Assignment b(3);
  for (Var v = 1; v <= 3; ++v) b.assign(Lit::negative(v));
  CHECK(graph_from_assignment(3, b) == PartialGraph(3, EdgeState::Absent));

  Assignment c(3);
  c.assign(Lit::negative(1));
  c.assign(Lit::positive(2));
  auto h = graph_from_assignment(3, c);
  CHECK(h.at(p1(1, 2)) == EdgeState::Absent);
  CHECK(h.at(p1(1, 3)) == EdgeState::Present);
  CHECK(h.at(p1(2, 3)) == EdgeState::Unknown);
}

TEST_CASE("adjacency_vector and compare_lex") {
  CHECK(adjacency_vector(PartialGraph::from_edges(3, {p1(2, 3)})) == std::vector<bool>{false, false, true});
  CHECK(adjacency_vector(PartialGraph(3, EdgeState::Present)) == std::vector<bool>{true, true, true});
  CHECK_THROWS_AS(adjacency_vector(PartialGraph(3)), DomainError);

  auto a = from_code(3, 0b100);
  auto b = from_code(3, 0b010);
  CHECK(compare_lex(a, b) == Ordering::Less);
  CHECK(compare_lex(a, a) == Ordering::Equal);
  CHECK(compare_lex(from_code(3, 0b001), from_code(3, 0b110)) == Ordering::Greater);
  CHECK_THROWS_AS(compare_lex(PartialGraph(3, EdgeState::Absent), PartialGraph(4, EdgeState::Absent)), DomainError);
}

TEST_CASE("apply_permutation") {
  auto g = PartialGraph::from_edges(3, {p1(1, 2)});
  Permutation swap13({2, 1, 0});
  CHECK(apply_permutation(g, swap13) == PartialGraph::from_edges(3, {p1(2, 3)}));
  CHECK(apply_permutation(g, Permutation::identity(3)) == g);

  PartialGraph u(3, EdgeState::Absent);
  u.set(0, 1, EdgeState::Unknown);
  CHECK(apply_permutation(u, Permutation({1, 0, 2})).at(0, 1) == EdgeState::Unknown);

  CHECK_THROWS_AS(Permutation({0, 0, 1}), DomainError);

  // composition: apply(apply(g, pi), rho) == apply(g, pi then rho)
  std::vector<int> pi(5), rho(5);
  std::iota(pi.begin(), pi.end(), 0);
  for (std::uint64_t code = 0; code < 1024; code += 37) {
    auto h = from_code(5, code);
    std::next_permutation(pi.begin(), pi.end());
    rho = pi;
    std::reverse(rho.begin(), rho.end());
    Permutation P(pi), R(rho);
    CHECK(apply_permutation(apply_permutation(h, P), R) == apply_permutation(h, P.then(R)));
  }
}

TEST_CASE("is_canonical examples") {
  CHECK(is_canonical(PartialGraph::from_edges(3, {p1(2, 3)})).canonical);
  auto r = is_canonical(PartialGraph::from_edges(3, {p1(1, 2)}));
  CHECK(!r.canonical);
  REQUIRE(r.witness);
  const auto single = PartialGraph::from_edges(3, {p1(1, 2)});
  CHECK(compare_lex(apply_permutation(single, r.witness->perm), single) == Ordering::Less);
  for (int n = 0; n <= 7; ++n) CHECK(is_canonical(PartialGraph(n, EdgeState::Absent)).canonical);
}

TEST_CASE("is_canonical agrees with the all-permutations oracle") {
  const int counts[] = {1, 1, 2, 4, 11, 34, 156};
  for (int n = 1; n <= 6; ++n) {
    int canonical = 0;
    for (std::uint64_t code = 0; code < (1ULL << num_pairs(n)); ++code) {
      const auto g = from_code(n, code);
      const auto r = is_canonical(g);
      if (n <= 5) CHECK(r.canonical == oracle::is_canonical(oracle::graph_of_code(n, code)));
      if (r.canonical) {
        ++canonical;
      } else {
        REQUIRE(r.witness);
        CHECK(verify_witness(g, *r.witness));
        CHECK(compare_lex(apply_permutation(g, r.witness->perm), g) == Ordering::Less);
      }
    }
    CHECK(canonical == counts[n]);
  }
}

TEST_CASE("partial_minimality_check") {
  CHECK(!partial_minimality_check(PartialGraph(5)));

  PartialGraph g(3);
  g.set(0, 1, EdgeState::Present);
  g.set(1, 2, EdgeState::Absent);
  auto w = partial_minimality_check(g);
  REQUIRE(w);
  CHECK(verify_witness(g, *w));
  REQUIRE(w->certificate.size() == 1);
  CHECK(w->certificate[0].position == p1(1, 2));
  CHECK(w->certificate[0].image == p1(2, 3));
  for (const auto& h : completions(g)) {
    CHECK(!oracle::is_canonical(oracle::graph_of_code(3, [&] {
      std::uint64_t c = 0;
      const auto v = adjacency_vector(h);
      for (std::size_t i = 0; i < v.size(); ++i) c |= static_cast<std::uint64_t>(v[i]) << i;
      return c;
    }())));
    CHECK(compare_lex(apply_permutation(h, w->perm), h) == Ordering::Less);
  }
}

TEST_CASE("partial check on total graphs matches is_canonical") {
  for (int n = 2; n <= 5; ++n)
    for (std::uint64_t code = 0; code < (1ULL << num_pairs(n)); ++code) {
      const auto g = from_code(n, code);
      CHECK(partial_minimality_check(g).has_value() == !is_canonical(g).canonical);
    }
}

TEST_CASE("partial check soundness, n <= 5, up to 3 unknowns") {
  for (int n = 2; n <= 5; ++n) {
    const int m = static_cast<int>(num_pairs(n));
    // each entry: 0 absent, 1 present, 2 unknown
    int total = 1;
    for (int i = 0; i < m; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      PartialGraph g(n);
      int c = code;
      int unknown = 0;
      for (int k = 0; k < m; ++k, c /= 3) {
        const auto p = pair_of_var(n, k + 1);
        const int s = c % 3;
        unknown += s == 2;
        g.set(p.u, p.v, s == 2 ? EdgeState::Unknown : s == 1 ? EdgeState::Present : EdgeState::Absent);
      }
      if (unknown > 3) continue;
      auto w = partial_minimality_check(g);
      if (!w) continue;
      CHECK(verify_witness(g, *w));
      for (const auto& h : completions(g)) {
        CHECK(!is_canonical(h).canonical);
        CHECK(compare_lex(apply_permutation(h, w->perm), h) == Ordering::Less);
      }
    }
  }
}

TEST_CASE("budget truncation returns nothing") {
  // vertex 1 is isolated, so the decrease only shows up in the second row
  auto g = PartialGraph::from_edges(4, {p1(2, 3)});
  CHECK(partial_minimality_check(g, 1'000'000));
  CHECK(!partial_minimality_check(g, 1));
}

TEST_CASE("output formats") {
  auto c5 = PartialGraph::from_edges(5, {p1(1, 2), p1(2, 3), p1(3, 4), p1(4, 5), p1(1, 5)});
  CHECK(to_graph6(c5) == "Dhc");
  CHECK(from_graph6("Dhc") == c5);
  CHECK(edge_list_string(c5) == "5: 1-2 1-5 2-3 3-4 4-5");
  CHECK(edge_list_string(PartialGraph(3, EdgeState::Absent)) == "3:");
  for (std::uint64_t code = 0; code < 1024; code += 11) CHECK(from_graph6(to_graph6(from_code(5, code))) == from_code(5, code));
}
