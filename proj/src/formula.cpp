#include "smscube/formula.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

namespace smscube {

Lit Lit::from_dimacs(int d) {
  if (d == 0) throw DomainError("literal 0 is not a variable");
  return d > 0 ? positive(d) : negative(-d);
}

std::string to_string(Lit l) { return std::to_string(l.to_dimacs()); }

namespace {

std::vector<Lit> lits_from_dimacs(std::initializer_list<int> dimacs) {
  std::vector<Lit> out;
  out.reserve(dimacs.size());
  for (int d : dimacs) out.push_back(Lit::from_dimacs(d));
  return out;
}

// Removes repeated literals, keeping first occurrences. Returns true if the
// input contains a complementary pair.
bool dedupe(std::vector<Lit>& lits) {
  std::vector<Lit> sorted = lits;
  std::sort(sorted.begin(), sorted.end());
  bool complementary = false;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].var() == sorted[i - 1].var() && sorted[i] != sorted[i - 1]) complementary = true;
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    std::vector<Lit> kept;
    kept.reserve(lits.size());
    for (Lit l : lits) {
      if (std::find(kept.begin(), kept.end(), l) == kept.end()) kept.push_back(l);
    }
    lits = std::move(kept);
  }
  return complementary;
}

Var max_var_of(std::span<const Lit> lits) {
  Var m = 0;
  for (Lit l : lits) m = std::max(m, l.var());
  return m;
}

}  // namespace

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
  for (Lit l : lits_) {
    if (l.var() < 1) throw DomainError("clause literal over variable < 1");
  }
  if (dedupe(lits_)) throw DomainError("tautological clause");
}

Clause::Clause(std::initializer_list<int> dimacs) : Clause(lits_from_dimacs(dimacs)) {}

Var Clause::max_var() const { return max_var_of(lits_); }

Clause Clause::sorted() const {
  Clause c = *this;
  std::sort(c.lits_.begin(), c.lits_.end());
  return c;
}

Cube::Cube(std::vector<Lit> lits) : lits_(std::move(lits)) {
  for (Lit l : lits_) {
    if (l.var() < 1) throw DomainError("cube literal over variable < 1");
  }
  if (dedupe(lits_)) throw DomainError("inconsistent cube: contains a variable in both polarities");
}

Cube::Cube(std::initializer_list<int> dimacs) : Cube(lits_from_dimacs(dimacs)) {}

Var Cube::max_var() const { return max_var_of(lits_); }

Clause Cube::negation() const {
  std::vector<Lit> out;
  out.reserve(lits_.size());
  for (Lit l : lits_) out.push_back(~l);
  return Clause(std::move(out));
}

Assignment Assignment::from_literals(Var num_vars, std::span<const Lit> lits) {
  Assignment a(num_vars);
  for (Lit l : lits) a.assign(l);
  return a;
}

void Assignment::assign(Lit l) {
  if (l.var() < 1 || l.var() > num_vars()) throw DomainError("assignment to variable " + std::to_string(l.var()) + " out of range");
  Value& slot = values_[static_cast<std::size_t>(l.var())];
  Value want = l.negated() ? Value::False : Value::True;
  if (slot == want) return;
  if (slot != Value::Unassigned) throw DomainError("conflicting assignment to variable " + std::to_string(l.var()));
  slot = want;
  ++assigned_;
}

void Assignment::unassign(Var v) {
  Value& slot = values_[static_cast<std::size_t>(v)];
  if (slot != Value::Unassigned) {
    slot = Value::Unassigned;
    --assigned_;
  }
}

std::vector<Lit> Assignment::literals() const {
  std::vector<Lit> out;
  out.reserve(assigned_);
  for (Var v = 1; v <= num_vars(); ++v) {
    Value x = value(v);
    if (x == Value::True) out.push_back(Lit::positive(v));
    if (x == Value::False) out.push_back(Lit::negative(v));
  }
  return out;
}

bool Assignment::satisfies(const Clause& c) const {
  return std::any_of(c.begin(), c.end(), [&](Lit l) { return l.var() <= num_vars() && is_true(l); });
}

bool Assignment::falsifies(const Clause& c) const {
  return std::all_of(c.begin(), c.end(), [&](Lit l) { return l.var() <= num_vars() && is_false(l); });
}

CnfFormula::CnfFormula(Var num_vars, Var num_edge_vars) : num_vars_(num_vars) {
  if (num_vars < 0) throw DomainError("negative variable count");
  set_num_edge_vars(num_edge_vars);
}

void CnfFormula::add_clause(Clause c) {
  Var m = c.max_var();
  if (m > num_vars_) {
    throw DomainError("literal over variable " + std::to_string(m) + " exceeds " + std::to_string(num_vars_) + " declared vars");
  }
  clauses_.push_back(std::move(c));
}

void CnfFormula::add_clauses(std::span<const Clause> cs) {
  for (const Clause& c : cs) add_clause(c);
}

Var CnfFormula::new_vars(Var count) {
  Var first = num_vars_ + 1;
  num_vars_ += count;
  return first;
}

void CnfFormula::set_num_edge_vars(Var e) {
  if (e < 0 || e > num_vars_) throw DomainError("edge variable count exceeds variable count");
  num_edge_vars_ = e;
}

// ---------------------------------------------------------------------------
// DIMACS

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<long long> to_int(std::string_view tok) {
  long long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) return std::nullopt;
  return v;
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text) {
  std::optional<long long> edge_vars;
  bool have_header = false;
  long long declared_vars = 0;
  long long declared_clauses = 0;
  CnfFormula f;
  std::vector<Lit> pending;
  std::size_t pending_line = 0;
  std::size_t lineno = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "c") {
      if (toks.size() == 3 && toks[1] == "edge-vars") {
        auto e = to_int(toks[2]);
        if (!e || *e < 0) throw ParseError(lineno, "malformed edge-vars comment");
        edge_vars = *e;
      }
      continue;
    }
    if (toks[0][0] == 'c') continue;
    if (toks[0] == "p") {
      if (have_header) throw ParseError(lineno, "duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf") throw ParseError(lineno, "malformed header, expected 'p cnf V C'");
      auto v = to_int(toks[2]);
      auto c = to_int(toks[3]);
      if (!v || !c || *v < 0 || *c < 0) throw ParseError(lineno, "malformed header counts");
      declared_vars = *v;
      declared_clauses = *c;
      have_header = true;
      f = CnfFormula(static_cast<Var>(declared_vars));
      continue;
    }
    if (!have_header) throw ParseError(lineno, "clause before 'p cnf' header");
    for (auto tok : toks) {
      auto d = to_int(tok);
      if (!d) throw ParseError(lineno, "invalid literal '" + std::string(tok) + "'");
      if (*d == 0) {
        try {
          f.add_clause(Clause(std::move(pending)));
        } catch (const DomainError& e) {
          throw ParseError(pending_line ? pending_line : lineno, e.what());
        }
        pending.clear();
        pending_line = 0;
        continue;
      }
      if (*d > declared_vars || -*d > declared_vars) {
        throw ParseError(lineno, "literal " + std::string(tok) + " exceeds declared " + std::to_string(declared_vars) + " vars");
      }
      if (pending.empty()) pending_line = lineno;
      pending.push_back(Lit::from_dimacs(static_cast<int>(*d)));
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(pending_line, "clause missing terminating 0");
  if (static_cast<long long>(f.num_clauses()) != declared_clauses) {
    throw ParseError(lineno, "clause count mismatch: header declares " + std::to_string(declared_clauses) + ", found " +
                                 std::to_string(f.num_clauses()));
  }
  if (edge_vars) {
    if (*edge_vars > declared_vars) throw ParseError(1, "edge-vars exceeds declared variable count");
    f.set_num_edge_vars(static_cast<Var>(*edge_vars));
  }
  return f;
}

CnfFormula parse_dimacs(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_dimacs(text);
}

void write_clause(std::ostream& out, const Clause& c) {
  for (Lit l : c) out << l.to_dimacs() << ' ';
  out << "0\n";
}

std::string serialize_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  if (f.num_edge_vars() > 0) out << "c edge-vars " << f.num_edge_vars() << '\n';
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const Clause& c : f.clauses()) write_clause(out, c);
  return out.str();
}

// ---------------------------------------------------------------------------

CnfFormula reduce(const CnfFormula& f, const Cube& c) {
  if (c.max_var() > f.num_vars()) throw DomainError("cube assigns variable beyond the formula's variables");
  Assignment a = Assignment::from_literals(f.num_vars(), c.literals());
  CnfFormula out(f.num_vars(), f.num_edge_vars());
  for (const Clause& cl : f.clauses()) {
    if (a.satisfies(cl)) continue;
    std::vector<Lit> kept;
    for (Lit l : cl) {
      if (!a.is_false(l)) kept.push_back(l);
    }
    out.add_clause(Clause(std::move(kept)));
  }
  return out;
}

UnitPropagation unit_propagate(const CnfFormula& f, const Assignment& a) {
  UnitPropagation r{a, false, 0};
  bool changed = true;
  while (changed && !r.conflict) {
    changed = false;
    for (const Clause& c : f.clauses()) {
      std::size_t open = 0;
      Lit last{};
      bool sat = false;
      for (Lit l : c) {
        Value v = r.assignment.value(l);
        if (v == Value::True) {
          sat = true;
          break;
        }
        if (v == Value::Unassigned) {
          ++open;
          last = l;
        }
      }
      if (sat) continue;
      if (open == 0) {
        r.conflict = true;
        break;
      }
      if (open == 1) {
        r.assignment.assign(last);
        ++r.implied_count;
        changed = true;
      }
    }
  }
  return r;
}

std::vector<Assignment> models_bruteforce(const CnfFormula& f) {
  const Var n = f.num_vars();
  if (n > kBruteforceVarLimit) throw DomainError("models_bruteforce refuses formulas over more than 30 variables");
  struct Masks {
    std::uint32_t pos = 0, neg = 0;
  };
  std::vector<Masks> masks;
  masks.reserve(f.num_clauses());
  for (const Clause& c : f.clauses()) {
    Masks m;
    for (Lit l : c) (l.negated() ? m.neg : m.pos) |= 1U << (l.var() - 1);
    masks.push_back(m);
  }
  std::vector<Assignment> out;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const auto x = static_cast<std::uint32_t>(bits);
    bool ok = true;
    for (const Masks& m : masks) {
      if ((x & m.pos) == 0 && (~x & m.neg) == 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Assignment a(n);
    for (Var v = 1; v <= n; ++v) a.assign(Lit::make(v, ((x >> (v - 1)) & 1U) == 0));
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace smscube
