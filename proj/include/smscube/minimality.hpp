#pragma once

// Search modulo isomorphism: a propagator that only lets lex-minimal
// graphs through and learns clauses excluding non-minimal ones.

#include <cstdint>

#include "smscube/graph.hpp"
#include "smscube/solver.hpp"

namespace smscube {

// Negation of the edge entries read by the certificate, by ascending
// variable. Throws ContractViolation if an entry is undefined in g.
Clause derive_symmetry_clause(const MinimalityWitness& w, const PartialGraph& g);

class MinimalityPropagator : public ExternalPropagator {
 public:
  explicit MinimalityPropagator(int n, std::uint64_t budget = kDefaultMinimalityBudget);

  ClauseOrigin clause_origin() const override { return ClauseOrigin::Symmetry; }
  std::optional<Clause> on_fixpoint(const Trail& t) override;
  ModelVerdict on_model(const Assignment& a) override;

  std::uint64_t checks() const { return checks_; }

 private:
  int n_;
  std::uint64_t budget_;
  std::uint64_t checks_ = 0;
};

}  // namespace smscube
