#pragma once

// Model-checking propagators for the colouring side conditions of the
// benchmark families: non-k-colourability (triangle-free search) and
// non-010-colourability (Kochen-Specker candidates).

#include <optional>
#include <vector>

#include "smscube/graph.hpp"
#include "smscube/solver.hpp"

namespace smscube {

// color[v] in [0, k), or kBlue / kRed for 010-colourings.
using Coloring = std::vector<int>;
inline constexpr int kBlue = 0;
inline constexpr int kRed = 1;

// Triangle variables t_uvw (u<v<w), contiguous in lexicographic order.
struct TriangleVars {
  int n = 0;
  Var first = 0;

  Var var(int u, int v, int w) const;
  std::int64_t count() const;
};

std::optional<Coloring> find_k_coloring(const PartialGraph& g, int k);
// OR of e_uv over all monochromatic pairs.
Clause coloring_clause(const Coloring& c, int n);

std::optional<Coloring> find_010_coloring(const PartialGraph& g);
// OR of e_uv over red-red pairs and t_uvw over all-blue triples.
Clause coloring_clause_010(const Coloring& c, int n, const std::optional<TriangleVars>& triangles);

// Rejects models whose graph has a proper colouring with `colors` colours.
class NonColorablePropagator : public ExternalPropagator {
 public:
  NonColorablePropagator(int n, int colors) : n_(n), colors_(colors) {}
  ModelVerdict on_model(const Assignment& a) override;

 private:
  int n_;
  int colors_;
};

// Rejects models whose graph is 010-colourable.
class Non010ColorablePropagator : public ExternalPropagator {
 public:
  // Throws ConfigError without triangle variables.
  Non010ColorablePropagator(int n, std::optional<TriangleVars> triangles);
  ModelVerdict on_model(const Assignment& a) override;

 private:
  int n_;
  TriangleVars triangles_;
};

}  // namespace smscube
