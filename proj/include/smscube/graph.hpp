#pragma once

// Graphs over edge variables: vertices are 0-based here (printed 1-based),
// the pair u<v owns the row-major rank of the upper adjacency triangle.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smscube/formula.hpp"

namespace smscube {

struct VertexPair {
  int u = 0;
  int v = 1;

  auto operator<=>(const VertexPair&) const = default;
};

inline constexpr int kMaxVertices = 62;  // graph6 short form and our bitsets

std::int64_t num_pairs(int n);
// 1-based variable of pair {u,v}; throws DomainError when out of range.
Var edge_var(int n, VertexPair p);
Var edge_var(int n, int u, int v);
VertexPair pair_of_var(int n, Var x);

enum class EdgeState : std::int8_t { Absent = 0, Present = 1, Unknown = 2 };

class PartialGraph {
 public:
  PartialGraph() = default;
  // All entries start unknown (or absent if `total`).
  explicit PartialGraph(int n, EdgeState init = EdgeState::Unknown);
  static PartialGraph from_edges(int n, const std::vector<VertexPair>& edges);

  int num_vertices() const { return n_; }
  EdgeState at(int u, int v) const;
  EdgeState at(VertexPair p) const { return at(p.u, p.v); }
  void set(int u, int v, EdgeState s);
  bool is_total() const { return unknown_ == 0; }
  std::size_t num_unknown() const { return unknown_; }
  std::vector<VertexPair> edges() const;

  bool operator==(const PartialGraph&) const = default;

 private:
  std::size_t index(int u, int v) const;
  int n_ = 0;
  std::vector<EdgeState> entries_;  // edge_var order
  std::size_t unknown_ = 0;
};

// Bijection on [n]; image[v] is where vertex v goes.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int v) const { return image_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& image() const { return image_; }
  Permutation inverse() const;
  // (a.then(b))(v) = b(a(v))
  Permutation then(const Permutation& b) const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

PartialGraph graph_from_assignment(int n, const Assignment& a);
std::vector<bool> adjacency_vector(const PartialGraph& g);
// entry({pi(u),pi(v)}) of the result equals entry({u,v}) of g
PartialGraph apply_permutation(const PartialGraph& g, const Permutation& pi);

enum class Ordering { Less, Equal, Greater };
Ordering compare_lex(const PartialGraph& a, const PartialGraph& b);

struct CertificateEntry {
  VertexPair position;  // entry of g compared at this step
  bool value = false;
  VertexPair image;     // entry of g landing on `position` in perm(g)
  bool image_value = false;
};

struct MinimalityWitness {
  Permutation perm;
  // Row-major comparison prefix; the last entry is the strict decrease.
  std::vector<CertificateEntry> certificate;
};

// True iff replaying the certificate on g is consistent: every entry is
// defined in g with the recorded value, all but the last compare equal,
// the last strictly smaller, and positions/images follow perm.
bool verify_witness(const PartialGraph& g, const MinimalityWitness& w);

struct CanonicityResult {
  bool canonical = true;
  std::optional<MinimalityWitness> witness;
};

inline constexpr std::uint64_t kDefaultMinimalityBudget = 10000;

// Exact test for total graphs (unbudgeted).
CanonicityResult is_canonical(const PartialGraph& g);
// Sound on partial graphs; nullopt means nothing was proven within budget
// (each permutation prefix extension counts one node).
std::optional<MinimalityWitness> partial_minimality_check(const PartialGraph& g,
                                                          std::uint64_t budget = kDefaultMinimalityBudget);

// "n: u-v ..." with 1-based vertices.
std::string edge_list_string(const PartialGraph& g);
std::string to_graph6(const PartialGraph& g);
PartialGraph from_graph6(const std::string& s);

}  // namespace smscube
