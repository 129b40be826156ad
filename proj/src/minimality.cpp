#include "smscube/minimality.hpp"

#include <algorithm>
#include <map>

namespace smscube {

Clause derive_symmetry_clause(const MinimalityWitness& w, const PartialGraph& g) {
  const int n = g.num_vertices();
  std::map<Var, Lit> lits;
  auto add = [&](VertexPair p) {
    const EdgeState s = g.at(p);
    if (s == EdgeState::Unknown) throw ContractViolation("symmetry certificate reads an undefined edge");
    const Var x = edge_var(n, p);
    lits.emplace(x, Lit::make(x, s == EdgeState::Present));
  };
  for (const auto& e : w.certificate) {
    add(e.position);
    add(e.image);
  }
  std::vector<Lit> out;
  for (const auto& [x, l] : lits) out.push_back(l);
  return Clause(std::move(out));
}

MinimalityPropagator::MinimalityPropagator(int n, std::uint64_t budget) : n_(n), budget_(budget) {}

std::optional<Clause> MinimalityPropagator::on_fixpoint(const Trail& t) {
  const PartialGraph g = graph_from_assignment(n_, t.assignment);
  if (g.num_unknown() == static_cast<std::size_t>(num_pairs(n_))) return std::nullopt;
  ++checks_;
  auto w = partial_minimality_check(g, budget_);
  if (!w) return std::nullopt;
  return derive_symmetry_clause(*w, g);
}

ModelVerdict MinimalityPropagator::on_model(const Assignment& a) {
  const PartialGraph g = graph_from_assignment(n_, a);
  ++checks_;
  auto r = is_canonical(g);
  if (r.canonical) return ModelVerdict::accept();
  return ModelVerdict::reject(derive_symmetry_clause(*r.witness, g));
}

}  // namespace smscube
