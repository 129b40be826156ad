#pragma once

// Propositional data model: literals, clauses, cubes, CNF formulas and
// (partial) assignments, plus DIMACS I/O, formula reduction and a simple
// unit propagation that is independent of the CDCL engine.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smscube/errors.hpp"

namespace smscube {

// Variables are 1-based, as in DIMACS.
using Var = int;

class Lit {
 public:
  constexpr Lit() = default;

  static constexpr Lit positive(Var v) { return Lit(static_cast<std::uint32_t>(v) << 1); }
  static constexpr Lit negative(Var v) { return Lit((static_cast<std::uint32_t>(v) << 1) | 1U); }
  static constexpr Lit make(Var v, bool negated) { return negated ? negative(v) : positive(v); }
  // Throws DomainError for 0.
  static Lit from_dimacs(int d);

  constexpr Var var() const { return static_cast<Var>(code_ >> 1); }
  constexpr bool negated() const { return (code_ & 1U) != 0; }
  constexpr int to_dimacs() const { return negated() ? -var() : var(); }
  constexpr Lit operator~() const { return Lit(code_ ^ 1U); }
  // Dense index usable for per-literal tables (2*var + sign).
  constexpr std::uint32_t index() const { return code_; }

  constexpr auto operator<=>(const Lit&) const = default;

 private:
  constexpr explicit Lit(std::uint32_t code) : code_(code) {}
  std::uint32_t code_ = 0;
};

std::string to_string(Lit l);

// A disjunction of literals. Duplicates are removed at construction and
// tautological input (x together with -x) is rejected with DomainError.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Lit> lits);
  Clause(std::initializer_list<int> dimacs);

  std::span<const Lit> literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  Var max_var() const;

  // Copy with literals ordered by variable; used to compare clause sets.
  Clause sorted() const;

  bool operator==(const Clause&) const = default;
  auto operator<=>(const Clause&) const = default;

 private:
  std::vector<Lit> lits_;
};

// A conjunction of literals forming a consistent partial assignment.
// Duplicates are removed; two literals over one variable are rejected.
class Cube {
 public:
  Cube() = default;
  explicit Cube(std::vector<Lit> lits);
  Cube(std::initializer_list<int> dimacs);

  std::span<const Lit> literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  Var max_var() const;

  // The clause excluding exactly this cube.
  Clause negation() const;

  bool operator==(const Cube&) const = default;
  auto operator<=>(const Cube&) const = default;

 private:
  std::vector<Lit> lits_;
};

enum class Value : std::int8_t { False = -1, Unassigned = 0, True = 1 };

constexpr Value negate(Value v) { return static_cast<Value>(-static_cast<int>(v)); }

// Per-variable truth values over variables 1..num_vars.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(Var num_vars) : values_(static_cast<std::size_t>(num_vars) + 1, Value::Unassigned) {}
  static Assignment from_literals(Var num_vars, std::span<const Lit> lits);

  Var num_vars() const { return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1); }
  Value value(Var v) const { return values_[static_cast<std::size_t>(v)]; }
  Value value(Lit l) const {
    Value v = values_[static_cast<std::size_t>(l.var())];
    return l.negated() ? negate(v) : v;
  }
  bool is_true(Lit l) const { return value(l) == Value::True; }
  bool is_false(Lit l) const { return value(l) == Value::False; }

  // Assigning a variable that already holds the opposite value throws.
  void assign(Lit l);
  void unassign(Var v);

  std::size_t num_assigned() const { return assigned_; }
  bool is_total() const { return assigned_ == static_cast<std::size_t>(num_vars()); }

  // The literals mapped to true, by ascending variable.
  std::vector<Lit> literals() const;

  bool satisfies(const Clause& c) const;
  bool falsifies(const Clause& c) const;

  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;

 private:
  std::vector<Value> values_;
  std::size_t assigned_ = 0;
};

class CnfFormula {
 public:
  CnfFormula() = default;
  explicit CnfFormula(Var num_vars, Var num_edge_vars = 0);

  Var num_vars() const { return num_vars_; }
  Var num_edge_vars() const { return num_edge_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t num_clauses() const { return clauses_.size(); }

  // Throws DomainError when a literal exceeds num_vars.
  void add_clause(Clause c);
  void add_clauses(std::span<const Clause> cs);
  Var new_var() { return ++num_vars_; }
  // Reserve `count` fresh contiguous variables; returns the first.
  Var new_vars(Var count);
  void set_num_edge_vars(Var e);

  bool operator==(const CnfFormula&) const = default;

 private:
  Var num_vars_ = 0;
  Var num_edge_vars_ = 0;
  std::vector<Clause> clauses_;
};

// DIMACS CNF. An optional "c edge-vars E" comment (before the header)
// carries the number of edge variables.
CnfFormula parse_dimacs(std::string_view text);
CnfFormula parse_dimacs(std::istream& in);
std::string serialize_dimacs(const CnfFormula& f);
void write_clause(std::ostream& out, const Clause& c);

// F[c]: drops satisfied clauses and falsified literals; num_vars unchanged.
CnfFormula reduce(const CnfFormula& f, const Cube& c);

struct UnitPropagation {
  Assignment assignment;
  bool conflict = false;
  std::size_t implied_count = 0;
};

// Naive fixpoint unit propagation over the clause list. Deliberately
// unrelated to the solver's watched-literal machinery.
UnitPropagation unit_propagate(const CnfFormula& f, const Assignment& a);

// Exact mod(F) over all variables, ascending by the integer whose bit v-1
// holds variable v. Refuses formulas over more than kBruteforceVarLimit vars.
inline constexpr Var kBruteforceVarLimit = 30;
std::vector<Assignment> models_bruteforce(const CnfFormula& f);

}  // namespace smscube
