#include "smscube/encoders.hpp"

#include <algorithm>
#include <functional>

#include <json.hpp>

#include "smscube/graph.hpp"
#include "smscube/minimality.hpp"

namespace smscube {

std::string to_string(Problem p) {
  switch (p) {
    case Problem::AllGraphs: return "all";
    case Problem::TriangleFree: return "tf";
    case Problem::KS: return "ks";
    case Problem::Diameter2: return "d2";
  }
  return "?";
}

Problem parse_problem(const std::string& s) {
  if (s == "all" || s == "all-graphs") return Problem::AllGraphs;
  if (s == "tf" || s == "triangle-free") return Problem::TriangleFree;
  if (s == "ks" || s == "kochen-specker") return Problem::KS;
  if (s == "d2" || s == "diameter2") return Problem::Diameter2;
  throw ConfigError({"unknown problem '" + s + "' (expected all, tf, ks or d2)"});
}

void EncodingSpec::validate() const {
  std::vector<std::string> problems;
  if (n < 1) problems.push_back("n must be >= 1");
  if (n > kMaxVertices) problems.push_back("n must be <= " + std::to_string(kMaxVertices));
  if (problem == Problem::TriangleFree) {
    if (n < 3) problems.push_back("triangle-free needs n >= 3");
    if (k < 2) problems.push_back("triangle-free needs k >= 2");
  }
  if (problem == Problem::KS && n < 3) problems.push_back("ks needs n >= 3");
  if (problem == Problem::Diameter2) {
    if (n < 3) problems.push_back("diameter2 needs n >= 3");
    if (edge_count() < 0 || edge_count() > num_pairs(n)) problems.push_back("m must lie in [0, n(n-1)/2]");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

VariableMap::VariableMap(int n) : n_(n) {}

Var VariableMap::allocate(CnfFormula& f, const std::string& name, Var count) {
  const Var first = f.new_vars(count);
  blocks_.push_back({name, first, count});
  return first;
}

const VariableBlock* VariableMap::find(const std::string& name) const {
  for (const auto& b : blocks_)
    if (b.name == name) return &b;
  return nullptr;
}

std::string VariableMap::to_json(Var num_vars) const {
  nlohmann::ordered_json j;
  j["n"] = n_;
  j["num_vars"] = num_vars;
  j["edge_vars"] = {{"first", num_edge_vars() > 0 ? 1 : 0}, {"count", num_edge_vars()}};
  auto blocks = nlohmann::ordered_json::array();
  for (const auto& b : blocks_) blocks.push_back({{"name", b.name}, {"first", b.first}, {"count", b.count}});
  j["blocks"] = blocks;
  return j.dump(2);
}

namespace {

Lit edge(int n, int u, int v) { return Lit::positive(edge_var(n, u, v)); }

// Index of the third vertex k among the n-2 vertices other than i<j.
int other_index(int i, int j, int k) { return k - (k > i ? 1 : 0) - (k > j ? 1 : 0); }

// Block of variables x_{ij,k}: one per pair i<j and vertex k outside it.
struct PairVertexVars {
  int n = 0;
  Var first = 0;
  Var at(int i, int j, int k) const {
    if (i > j) std::swap(i, j);
    return first + (edge_var(n, i, j) - 1) * (n - 2) + other_index(i, j, k);
  }
};

// out <-> a & b
void define_and(CnfFormula& f, Lit out, Lit a, Lit b) {
  f.add_clause(Clause(std::vector<Lit>{~out, a}));
  f.add_clause(Clause(std::vector<Lit>{~out, b}));
  f.add_clause(Clause(std::vector<Lit>{out, ~a, ~b}));
}

PairVertexVars common_neighbors(CnfFormula& f, int n, VariableMap* vars) {
  PairVertexVars c{n, 0};
  const Var count = static_cast<Var>(num_pairs(n) * (n - 2));
  c.first = vars ? vars->allocate(f, "common_neighbor", count) : f.new_vars(count);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (k != i && k != j) define_and(f, Lit::positive(c.at(i, j, k)), edge(n, i, k), edge(n, j, k));
  return c;
}

void triangle_free_into(CnfFormula& f, int n, bool maximal, VariableMap* vars) {
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      for (int w = v + 1; w < n; ++w) f.add_clause(Clause(std::vector<Lit>{~edge(n, u, v), ~edge(n, u, w), ~edge(n, v, w)}));
  if (!maximal) return;
  const auto c = common_neighbors(f, n, vars);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      std::vector<Lit> cl{edge(n, u, v)};
      for (int w = 0; w < n; ++w)
        if (w != u && w != v) cl.push_back(Lit::positive(c.at(u, v, w)));
      f.add_clause(Clause(std::move(cl)));
    }
}

void diameter2_into(CnfFormula& f, int n, int m, VariableMap* vars) {
  const auto c = common_neighbors(f, n, vars);
  const Var pairs = static_cast<Var>(num_pairs(n));
  // nc_ij: i and j have no common neighbour
  const Var nc_first = vars ? vars->allocate(f, "no_common_neighbor", pairs) : f.new_vars(pairs);
  auto nc = [&](int i, int j) { return Lit::positive(nc_first + edge_var(n, i, j) - 1); };
  // u_{pq,k}: p,q non-adjacent and k is their only common neighbour
  PairVertexVars u{n, 0};
  u.first = vars ? vars->allocate(f, "unique_common_neighbor", pairs * (n - 2)) : f.new_vars(pairs * (n - 2));

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<Lit> reach{edge(n, i, j)};
      std::vector<Lit> none{nc(i, j)};
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const Lit ck = Lit::positive(c.at(i, j, k));
        reach.push_back(ck);
        none.push_back(ck);
        f.add_clause(Clause(std::vector<Lit>{~nc(i, j), ~ck}));
      }
      f.add_clause(Clause(std::move(reach)));  // distance at most 2
      f.add_clause(Clause(std::move(none)));

      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const Lit uk = Lit::positive(u.at(i, j, k));
        const Lit ck = Lit::positive(c.at(i, j, k));
        f.add_clause(Clause(std::vector<Lit>{~uk, ~edge(n, i, j)}));
        f.add_clause(Clause(std::vector<Lit>{~uk, ck}));
        std::vector<Lit> back{edge(n, i, j), ~ck, uk};
        for (int k2 = 0; k2 < n; ++k2) {
          if (k2 == i || k2 == j || k2 == k) continue;
          const Lit c2 = Lit::positive(c.at(i, j, k2));
          f.add_clause(Clause(std::vector<Lit>{~uk, ~c2}));
          back.push_back(c2);
        }
        f.add_clause(Clause(std::move(back)));
      }
    }

  // removing edge ij must push some pair beyond distance 2: either i,j
  // lose their only connection, or a non-neighbour of one endpoint reached
  // it only through the other endpoint
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<Lit> cl{~edge(n, i, j), nc(i, j)};
      for (int q = 0; q < n; ++q) {
        if (q == i || q == j) continue;
        cl.push_back(Lit::positive(u.at(i, q, j)));
        cl.push_back(Lit::positive(u.at(j, q, i)));
      }
      f.add_clause(Clause(std::move(cl)));
    }

  std::vector<Lit> edges;
  for (Var x = 1; x <= pairs; ++x) edges.push_back(Lit::positive(x));
  add_exactly(f, edges, m, vars);
}

void ks_into(CnfFormula& f, int n, VariableMap* vars, std::optional<TriangleVars>* out) {
  TriangleVars t{n, 0};
  t.first = vars ? vars->allocate(f, "triangle", static_cast<Var>(t.count())) : f.new_vars(static_cast<Var>(t.count()));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const Lit x = Lit::positive(t.var(a, b, c));
        f.add_clause(Clause(std::vector<Lit>{~x, edge(n, a, b)}));
        f.add_clause(Clause(std::vector<Lit>{~x, edge(n, a, c)}));
        f.add_clause(Clause(std::vector<Lit>{~x, edge(n, b, c)}));
        f.add_clause(Clause(std::vector<Lit>{x, ~edge(n, a, b), ~edge(n, a, c), ~edge(n, b, c)}));
      }
  // minimum degree 2: for every vertex i and every j, a neighbour besides j
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<Lit> cl;
      for (int k = 0; k < n; ++k)
        if (k != i && k != j) cl.push_back(edge(n, i, k));
      f.add_clause(Clause(std::move(cl)));
    }
  // every vertex lies on a triangle
  for (int i = 0; i < n; ++i) {
    std::vector<Lit> cl;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (a != i && b != i) cl.push_back(Lit::positive(t.var(i, a, b)));
    f.add_clause(Clause(std::move(cl)));
  }
  if (out) *out = t;
}

CnfFormula fresh(int n) {
  CnfFormula f(static_cast<Var>(num_pairs(n)));
  f.set_num_edge_vars(static_cast<Var>(num_pairs(n)));
  return f;
}

}  // namespace

void add_exactly(CnfFormula& f, const std::vector<Lit>& inputs, int m, VariableMap* vars) {
  const int total = static_cast<int>(inputs.size());
  if (m < 0 || m > total) {
    f.add_clause(Clause{});
    return;
  }
  if (total == 0) return;
  // unary counter over inputs[lo, hi): out[j] <-> at least j+1 inputs true
  std::function<std::vector<Lit>(int, int)> build = [&](int lo, int hi) -> std::vector<Lit> {
    if (hi - lo == 1) return {inputs[static_cast<std::size_t>(lo)]};
    const int mid = lo + (hi - lo) / 2;
    const auto a = build(lo, mid);
    const auto b = build(mid, hi);
    const int p = static_cast<int>(a.size());
    const int q = static_cast<int>(b.size());
    const Var first = vars ? vars->allocate(f, "totalizer", p + q) : f.new_vars(p + q);
    std::vector<Lit> r;
    for (int i = 0; i < p + q; ++i) r.push_back(Lit::positive(first + i));
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= q; ++j) {
        if (i + j >= 1) {
          std::vector<Lit> up;
          if (i > 0) up.push_back(~a[static_cast<std::size_t>(i - 1)]);
          if (j > 0) up.push_back(~b[static_cast<std::size_t>(j - 1)]);
          up.push_back(r[static_cast<std::size_t>(i + j - 1)]);
          f.add_clause(Clause(std::move(up)));
        }
        if (i + j < p + q) {
          std::vector<Lit> down;
          if (i < p) down.push_back(a[static_cast<std::size_t>(i)]);
          if (j < q) down.push_back(b[static_cast<std::size_t>(j)]);
          down.push_back(~r[static_cast<std::size_t>(i + j)]);
          f.add_clause(Clause(std::move(down)));
        }
      }
    return r;
  };
  const auto out = build(0, total);
  if (m >= 1) f.add_clause(Clause(std::vector<Lit>{out[static_cast<std::size_t>(m - 1)]}));
  if (m < total) f.add_clause(Clause(std::vector<Lit>{~out[static_cast<std::size_t>(m)]}));
}

std::vector<Clause> static_symmetry_clauses(CnfFormula& f, int n, VariableMap* vars) {
  std::vector<Clause> added;
  auto add = [&](std::vector<Lit> lits) {
    Clause c(std::move(lits));
    f.add_clause(c);
    added.push_back(std::move(c));
  };
  for (int i = 0; i + 1 < n; ++i) {
    std::vector<Lit> x;
    std::vector<Lit> y;
    for (int col = 0; col < n; ++col) {
      if (col == i || col == i + 1) continue;
      x.push_back(edge(n, i, col));
      y.push_back(edge(n, i + 1, col));
    }
    const int len = static_cast<int>(x.size());
    if (len == 0) continue;
    // eq[t]: the first t+1 columns agree
    Var first = 0;
    if (len > 1) first = vars ? vars->allocate(f, "static_sb_chain", len - 1) : f.new_vars(len - 1);
    auto eq = [&](int t) { return Lit::positive(first + t); };
    for (int t = 0; t < len; ++t) {
      std::vector<Lit> leq{~x[static_cast<std::size_t>(t)], y[static_cast<std::size_t>(t)]};
      if (t > 0) leq.insert(leq.begin(), ~eq(t - 1));
      add(std::move(leq));
      if (t == len - 1) break;
      const Lit e = eq(t);
      const Lit xt = x[static_cast<std::size_t>(t)];
      const Lit yt = y[static_cast<std::size_t>(t)];
      if (t > 0) add({~e, eq(t - 1)});
      add({~e, ~xt, yt});
      add({~e, xt, ~yt});
      std::vector<Lit> both{~xt, ~yt, e};
      std::vector<Lit> neither{xt, yt, e};
      if (t > 0) {
        both.insert(both.begin(), ~eq(t - 1));
        neither.insert(neither.begin(), ~eq(t - 1));
      }
      add(std::move(both));
      add(std::move(neither));
    }
  }
  return added;
}

CnfFormula encode_all_graphs(int n) { return fresh(n); }

CnfFormula encode_triangle_free(int n, int k, bool maximal) {
  EncodingSpec s{Problem::TriangleFree, n, k, std::nullopt, false, maximal};
  return encode(s).formula;
}

CnfFormula encode_diameter2(int n, int m) {
  EncodingSpec s{Problem::Diameter2, n, 3, m, false, true};
  return encode(s).formula;
}

CnfFormula encode_ks(int n) {
  EncodingSpec s{Problem::KS, n, 3, std::nullopt, false, true};
  return encode(s).formula;
}

Encoding encode(const EncodingSpec& spec) {
  spec.validate();
  Encoding enc{spec, fresh(spec.n), VariableMap(spec.n), std::nullopt};
  CnfFormula& f = enc.formula;
  switch (spec.problem) {
    case Problem::AllGraphs: break;
    case Problem::TriangleFree: triangle_free_into(f, spec.n, spec.maximal, &enc.vars); break;
    case Problem::Diameter2: diameter2_into(f, spec.n, spec.edge_count(), &enc.vars); break;
    case Problem::KS: ks_into(f, spec.n, &enc.vars, &enc.triangles); break;
  }
  if (spec.use_static_sb()) static_symmetry_clauses(f, spec.n, &enc.vars);
  return enc;
}

std::vector<ExternalPropagator*> PropagatorSet::pointers() const {
  std::vector<ExternalPropagator*> out;
  for (const auto& p : owned) out.push_back(p.get());
  return out;
}

PropagatorSet make_propagators(const Encoding& enc, std::uint64_t minimality_budget) {
  PropagatorSet s;
  const int n = enc.spec.n;
  s.owned.push_back(std::make_unique<MinimalityPropagator>(n, minimality_budget));
  if (enc.spec.problem == Problem::TriangleFree)
    s.owned.push_back(std::make_unique<NonColorablePropagator>(n, enc.spec.k - 1));
  if (enc.spec.problem == Problem::KS) s.owned.push_back(std::make_unique<Non010ColorablePropagator>(n, enc.triangles));
  return s;
}

}  // namespace smscube
