#include "smscube/coloring.hpp"

#include <algorithm>
#include <numeric>

namespace smscube {

Var TriangleVars::var(int u, int v, int w) const {
  int a[3] = {u, v, w};
  std::sort(a, a + 3);
  if (a[0] < 0 || a[2] >= n || a[0] == a[1] || a[1] == a[2]) throw DomainError("invalid triangle");
  // rank of (a0,a1,a2) among 3-subsets in lexicographic order
  std::int64_t rank = 0;
  auto choose2 = [](std::int64_t m) { return m * (m - 1) / 2; };
  auto choose3 = [](std::int64_t m) { return m * (m - 1) * (m - 2) / 6; };
  rank += choose3(n) - choose3(n - a[0]);
  rank += choose2(n - a[0] - 1) - choose2(n - a[1]);
  rank += a[2] - a[1] - 1;
  return first + static_cast<Var>(rank);
}

std::int64_t TriangleVars::count() const { return static_cast<std::int64_t>(n) * (n - 1) * (n - 2) / 6; }

namespace {

bool adjacent(const PartialGraph& g, int u, int v) { return g.at(u, v) == EdgeState::Present; }

bool extend_coloring(const PartialGraph& g, int k, const std::vector<int>& order, std::size_t i, Coloring& col) {
  if (i == order.size()) return true;
  const int v = order[i];
  const int n = g.num_vertices();
  for (int c = 0; c < k; ++c) {
    bool ok = true;
    for (int u = 0; u < n && ok; ++u)
      if (u != v && col[static_cast<std::size_t>(u)] == c && adjacent(g, u, v)) ok = false;
    if (!ok) continue;
    col[static_cast<std::size_t>(v)] = c;
    if (extend_coloring(g, k, order, i + 1, col)) return true;
  }
  col[static_cast<std::size_t>(v)] = -1;
  return false;
}

bool extend_010(const PartialGraph& g, int v, Coloring& col) {
  const int n = g.num_vertices();
  if (v == n) return true;
  for (int c : {kBlue, kRed}) {
    bool ok = true;
    for (int u = 0; u < v && ok; ++u) {
      if (!adjacent(g, u, v)) continue;
      if (c == kRed && col[static_cast<std::size_t>(u)] == kRed) ok = false;
      if (c == kBlue && col[static_cast<std::size_t>(u)] == kBlue)
        for (int w = u + 1; w < v && ok; ++w)
          if (col[static_cast<std::size_t>(w)] == kBlue && adjacent(g, w, v) && adjacent(g, u, w)) ok = false;
    }
    if (!ok) continue;
    col[static_cast<std::size_t>(v)] = c;
    if (extend_010(g, v + 1, col)) return true;
  }
  return false;
}

}  // namespace

std::optional<Coloring> find_k_coloring(const PartialGraph& g, int k) {
  if (!g.is_total()) throw DomainError("find_k_coloring needs a total graph");
  const int n = g.num_vertices();
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (const auto& e : g.edges()) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return degree[a] > degree[b]; });
  Coloring col(static_cast<std::size_t>(n), -1);
  if (n > 0 && k <= 0) return std::nullopt;
  if (!extend_coloring(g, k, order, 0, col)) return std::nullopt;
  return col;
}

Clause coloring_clause(const Coloring& c, int n) {
  std::vector<Lit> lits;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (c[static_cast<std::size_t>(u)] == c[static_cast<std::size_t>(v)]) lits.push_back(Lit::positive(edge_var(n, u, v)));
  return Clause(std::move(lits));
}

std::optional<Coloring> find_010_coloring(const PartialGraph& g) {
  if (!g.is_total()) throw DomainError("find_010_coloring needs a total graph");
  Coloring col(static_cast<std::size_t>(g.num_vertices()), kBlue);
  if (!extend_010(g, 0, col)) return std::nullopt;
  return col;
}

Clause coloring_clause_010(const Coloring& c, int n, const std::optional<TriangleVars>& triangles) {
  if (!triangles) throw ConfigError({"010 colouring clauses need triangle variables from the encoding"});
  std::vector<Lit> lits;
  auto red = [&](int v) { return c[static_cast<std::size_t>(v)] == kRed; };
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (red(u) && red(v)) lits.push_back(Lit::positive(edge_var(n, u, v)));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      for (int w = v + 1; w < n; ++w)
        if (!red(u) && !red(v) && !red(w)) lits.push_back(Lit::positive(triangles->var(u, v, w)));
  return Clause(std::move(lits));
}

ModelVerdict NonColorablePropagator::on_model(const Assignment& a) {
  const PartialGraph g = graph_from_assignment(n_, a);
  if (auto c = find_k_coloring(g, colors_)) return ModelVerdict::reject(coloring_clause(*c, n_));
  return ModelVerdict::accept();
}

Non010ColorablePropagator::Non010ColorablePropagator(int n, std::optional<TriangleVars> triangles) : n_(n) {
  if (!triangles) throw ConfigError({"the non-010-colourability propagator needs triangle variables"});
  triangles_ = *triangles;
}

ModelVerdict Non010ColorablePropagator::on_model(const Assignment& a) {
  const PartialGraph g = graph_from_assignment(n_, a);
  if (auto c = find_010_coloring(g)) return ModelVerdict::reject(coloring_clause_010(*c, n_, triangles_));
  return ModelVerdict::accept();
}

}  // namespace smscube
