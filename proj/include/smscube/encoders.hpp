#pragma once

// CNF generators for the benchmark families. Edge variables come first;
// every auxiliary variable is defined by a full biconditional, so unit
// propagation from a total edge assignment fixes all of them.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smscube/coloring.hpp"
#include "smscube/formula.hpp"
#include "smscube/solver.hpp"

namespace smscube {

enum class Problem { AllGraphs, TriangleFree, KS, Diameter2 };

std::string to_string(Problem p);
// Accepts "all", "tf", "ks", "d2" and the long spellings.
Problem parse_problem(const std::string& s);

struct EncodingSpec {
  Problem problem = Problem::AllGraphs;
  int n = 1;
  int k = 3;                 // triangle-free: target chromatic number
  std::optional<int> m;      // diameter2: edge count, default floor(n^2/4)
  std::optional<bool> static_sb;  // default: on except for AllGraphs
  bool maximal = true;       // triangle-free

  // Throws ConfigError listing every problem.
  void validate() const;
  bool use_static_sb() const { return static_sb.value_or(problem != Problem::AllGraphs); }
  int edge_count() const { return m.value_or(n * n / 4); }
};

struct VariableBlock {
  std::string name;
  Var first = 0;
  Var count = 0;
};

class VariableMap {
 public:
  VariableMap() = default;
  explicit VariableMap(int n);

  int n() const { return n_; }
  Var num_edge_vars() const { return static_cast<Var>(num_pairs(n_)); }
  const std::vector<VariableBlock>& blocks() const { return blocks_; }
  // Reserves `count` variables in f under `name`; returns the first.
  Var allocate(CnfFormula& f, const std::string& name, Var count);
  const VariableBlock* find(const std::string& name) const;
  std::string to_json(Var num_vars) const;

 private:
  int n_ = 0;
  std::vector<VariableBlock> blocks_;
};

struct Encoding {
  EncodingSpec spec;
  CnfFormula formula;
  VariableMap vars;
  std::optional<TriangleVars> triangles;
};

Encoding encode(const EncodingSpec& spec);

CnfFormula encode_all_graphs(int n);
CnfFormula encode_triangle_free(int n, int k, bool maximal);
CnfFormula encode_diameter2(int n, int m);
CnfFormula encode_ks(int n);

// Row i <=lex row i+1 outside columns {i, i+1}, for every i; adds chain
// variables to f. Returns the clauses added.
std::vector<Clause> static_symmetry_clauses(CnfFormula& f, int n, VariableMap* vars = nullptr);

// Exactly `m` of `inputs` true, via a totalizer; allocates counter
// variables in f.
void add_exactly(CnfFormula& f, const std::vector<Lit>& inputs, int m, VariableMap* vars = nullptr);

// Minimality propagator plus the problem's domain propagator.
struct PropagatorSet {
  std::vector<std::unique_ptr<ExternalPropagator>> owned;
  std::vector<ExternalPropagator*> pointers() const;
};
PropagatorSet make_propagators(const Encoding& enc, std::uint64_t minimality_budget = 10000);

}  // namespace smscube
