#include "smscube/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace smscube {

std::int64_t num_pairs(int n) { return static_cast<std::int64_t>(n) * (n - 1) / 2; }

Var edge_var(int n, int u, int v) {
  if (u > v) std::swap(u, v);
  if (u < 0 || v >= n || u == v)
    throw DomainError("vertex pair (" + std::to_string(u) + "," + std::to_string(v) + ") invalid for n=" + std::to_string(n));
  // pairs in rows before u, then offset within row u
  return static_cast<Var>(static_cast<std::int64_t>(u) * (2 * n - u - 1) / 2 + (v - u - 1) + 1);
}

Var edge_var(int n, VertexPair p) { return edge_var(n, p.u, p.v); }

VertexPair pair_of_var(int n, Var x) {
  if (x < 1 || x > num_pairs(n)) throw DomainError("variable " + std::to_string(x) + " is not an edge variable for n=" + std::to_string(n));
  int rank = x - 1;
  int u = 0;
  while (rank >= n - u - 1) {
    rank -= n - u - 1;
    ++u;
  }
  return {u, u + 1 + rank};
}

PartialGraph::PartialGraph(int n, EdgeState init)
    : n_(n), entries_(static_cast<std::size_t>(num_pairs(n)), init), unknown_(init == EdgeState::Unknown ? entries_.size() : 0) {
  if (n < 0 || n > kMaxVertices) throw DomainError("vertex count " + std::to_string(n) + " out of range");
}

PartialGraph PartialGraph::from_edges(int n, const std::vector<VertexPair>& edges) {
  PartialGraph g(n, EdgeState::Absent);
  for (const auto& e : edges) g.set(e.u, e.v, EdgeState::Present);
  return g;
}

std::size_t PartialGraph::index(int u, int v) const { return static_cast<std::size_t>(edge_var(n_, u, v) - 1); }

EdgeState PartialGraph::at(int u, int v) const { return entries_[index(u, v)]; }

void PartialGraph::set(int u, int v, EdgeState s) {
  auto& e = entries_[index(u, v)];
  if (e == EdgeState::Unknown) --unknown_;
  if (s == EdgeState::Unknown) ++unknown_;
  e = s;
}

std::vector<VertexPair> PartialGraph::edges() const {
  std::vector<VertexPair> out;
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v)
      if (at(u, v) == EdgeState::Present) out.push_back({u, v});
  return out;
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> hit(image_.size(), false);
  for (int x : image_) {
    if (x < 0 || static_cast<std::size_t>(x) >= image_.size() || hit[static_cast<std::size_t>(x)])
      throw DomainError("not a permutation");
    hit[static_cast<std::size_t>(x)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (std::size_t v = 0; v < image_.size(); ++v) inv[static_cast<std::size_t>(image_[v])] = static_cast<int>(v);
  return Permutation(std::move(inv));
}

Permutation Permutation::then(const Permutation& b) const {
  if (b.size() != size()) throw DomainError("permutation size mismatch");
  std::vector<int> img(image_.size());
  for (std::size_t v = 0; v < image_.size(); ++v) img[v] = b(image_[v]);
  return Permutation(std::move(img));
}

PartialGraph graph_from_assignment(int n, const Assignment& a) {
  if (a.num_vars() < num_pairs(n)) throw DomainError("assignment has fewer variables than edge variables");
  PartialGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const Value x = a.value(edge_var(n, u, v));
      if (x != Value::Unassigned) g.set(u, v, x == Value::True ? EdgeState::Present : EdgeState::Absent);
    }
  return g;
}

std::vector<bool> adjacency_vector(const PartialGraph& g) {
  if (!g.is_total()) throw DomainError("adjacency_vector needs a total graph");
  std::vector<bool> out;
  const int n = g.num_vertices();
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) out.push_back(g.at(u, v) == EdgeState::Present);
  return out;
}

PartialGraph apply_permutation(const PartialGraph& g, const Permutation& pi) {
  const int n = g.num_vertices();
  if (pi.size() != n) throw DomainError("permutation size mismatch");
  PartialGraph h(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) h.set(pi(u), pi(v), g.at(u, v));
  return h;
}

Ordering compare_lex(const PartialGraph& a, const PartialGraph& b) {
  if (a.num_vertices() != b.num_vertices()) throw DomainError("compare_lex: size mismatch");
  const auto x = adjacency_vector(a);
  const auto y = adjacency_vector(b);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return x[i] < y[i] ? Ordering::Less : Ordering::Greater;
  return Ordering::Equal;
}

bool verify_witness(const PartialGraph& g, const MinimalityWitness& w) {
  const int n = g.num_vertices();
  if (w.perm.size() != n || w.certificate.empty()) return false;
  const Permutation sigma = w.perm.inverse();
  std::size_t k = 0;
  for (int a = 0; a < n && k < w.certificate.size(); ++a)
    for (int b = a + 1; b < n && k < w.certificate.size(); ++b, ++k) {
      const auto& e = w.certificate[k];
      const int x = std::min(sigma(a), sigma(b));
      const int y = std::max(sigma(a), sigma(b));
      if (e.position != VertexPair{a, b} || e.image != VertexPair{x, y}) return false;
      const EdgeState s = g.at(a, b);
      const EdgeState t = g.at(x, y);
      if (s == EdgeState::Unknown || t == EdgeState::Unknown) return false;
      if ((s == EdgeState::Present) != e.value || (t == EdgeState::Present) != e.image_value) return false;
      const bool last = k + 1 == w.certificate.size();
      if (last ? !(e.value && !e.image_value) : e.value != e.image_value) return false;
    }
  return k == w.certificate.size();
}

namespace {

// Depth-first search over sigma = perm^-1, one row of the adjacency matrix
// per level. Positions and vertices not yet fixed are grouped into cells:
// a vertex may fill a position only if it has the same adjacency towards
// the vertices already placed as the position has towards earlier rows.
// Inside a row the free positions are filled greedily with the smallest
// achievable entry, which decides the row exactly.
class MinimalitySearch {
 public:
  MinimalitySearch(const PartialGraph& g, std::optional<std::uint64_t> budget) : g_(g), n_(g.num_vertices()), budget_(budget) {}

  std::optional<MinimalityWitness> run() {
    if (n_ < 2) return std::nullopt;
    std::vector<int> sigma(static_cast<std::size_t>(n_), -1);
    std::vector<int> pos_cell(static_cast<std::size_t>(n_), 0);
    std::vector<int> vert_cell(static_cast<std::size_t>(n_), 0);
    std::vector<char> used(static_cast<std::size_t>(n_), 0);
    return row(0, sigma, pos_cell, vert_cell, used);
  }

 private:
  using Vec = std::vector<int>;

  std::optional<MinimalityWitness> row(int r, Vec& sigma, const Vec& pos_cell, const Vec& vert_cell, std::vector<char>& used) {
    if (r >= n_ - 1) return std::nullopt;  // all rows equal: automorphism
    const int cell = pos_cell[static_cast<std::size_t>(r)];
    for (int s = 0; s < n_; ++s) {
      if (used[static_cast<std::size_t>(s)] || vert_cell[static_cast<std::size_t>(s)] != cell) continue;
      if (aborted_) return std::nullopt;
      if (budget_ && ++nodes_ > *budget_) {
        aborted_ = true;
        return std::nullopt;
      }
      sigma[static_cast<std::size_t>(r)] = s;
      used[static_cast<std::size_t>(s)] = 1;
      auto w = scan_row(r, s, sigma, pos_cell, vert_cell, used);
      used[static_cast<std::size_t>(s)] = 0;
      if (w) return w;
    }
    sigma[static_cast<std::size_t>(r)] = -1;
    return std::nullopt;
  }

  std::optional<MinimalityWitness> scan_row(int r, int s, Vec& sigma, const Vec& pos_cell, const Vec& vert_cell,
                                            std::vector<char>& used) {
    // free vertices per cell, split by known adjacency to s
    std::map<int, std::vector<int>> zeros;
    std::map<int, std::vector<int>> ones;
    for (int w = n_ - 1; w >= 0; --w) {
      if (used[static_cast<std::size_t>(w)]) continue;
      const EdgeState e = g_.at(s, w);
      if (e == EdgeState::Absent) zeros[vert_cell[static_cast<std::size_t>(w)]].push_back(w);
      if (e == EdgeState::Present) ones[vert_cell[static_cast<std::size_t>(w)]].push_back(w);
    }
    Vec fill(sigma);
    for (int j = r + 1; j < n_; ++j) {
      const int c = pos_cell[static_cast<std::size_t>(j)];
      auto& z = zeros[c];
      auto& o = ones[c];
      const EdgeState e = g_.at(r, j);
      if (e == EdgeState::Unknown) return std::nullopt;
      if (e == EdgeState::Present && !z.empty()) {
        fill[static_cast<std::size_t>(j)] = z.back();
        return witness(fill, r, j);
      }
      auto& take = e == EdgeState::Present ? o : z;
      if (take.empty()) return std::nullopt;  // greater, or not decidable
      fill[static_cast<std::size_t>(j)] = take.back();
      take.pop_back();
    }
    // row equal: refine cells by adjacency to row r / vertex s
    std::map<std::pair<int, int>, int> ids;
    auto id = [&](int c, EdgeState e) {
      auto [it, fresh] = ids.emplace(std::pair{c, static_cast<int>(e)}, static_cast<int>(ids.size()));
      return it->second;
    };
    Vec pc(static_cast<std::size_t>(n_), -1);
    Vec vc(static_cast<std::size_t>(n_), -1);
    for (int p = r + 1; p < n_; ++p) pc[static_cast<std::size_t>(p)] = id(pos_cell[static_cast<std::size_t>(p)], g_.at(r, p));
    for (int w = 0; w < n_; ++w)
      if (!used[static_cast<std::size_t>(w)]) vc[static_cast<std::size_t>(w)] = id(vert_cell[static_cast<std::size_t>(w)], g_.at(s, w));
    return row(r + 1, sigma, pc, vc, used);
  }

  MinimalityWitness witness(Vec sigma, int r, int j) const {
    std::vector<char> taken(static_cast<std::size_t>(n_), 0);
    for (int x : sigma)
      if (x >= 0) taken[static_cast<std::size_t>(x)] = 1;
    int next = 0;
    for (auto& x : sigma) {
      if (x >= 0) continue;
      while (taken[static_cast<std::size_t>(next)]) ++next;
      x = next;
      taken[static_cast<std::size_t>(next)] = 1;
    }
    Permutation inv(sigma);
    MinimalityWitness w{inv.inverse(), {}};
    for (int a = 0; a <= r; ++a)
      for (int b = a + 1; b < n_; ++b) {
        const int x = std::min(sigma[static_cast<std::size_t>(a)], sigma[static_cast<std::size_t>(b)]);
        const int y = std::max(sigma[static_cast<std::size_t>(a)], sigma[static_cast<std::size_t>(b)]);
        w.certificate.push_back(
            {{a, b}, g_.at(a, b) == EdgeState::Present, {x, y}, g_.at(x, y) == EdgeState::Present});
        if (a == r && b == j) return w;
      }
    return w;
  }

  const PartialGraph& g_;
  int n_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

CanonicityResult is_canonical(const PartialGraph& g) {
  if (!g.is_total()) throw DomainError("is_canonical needs a total graph");
  CanonicityResult out;
  out.witness = MinimalitySearch(g, std::nullopt).run();
  out.canonical = !out.witness;
  return out;
}

std::optional<MinimalityWitness> partial_minimality_check(const PartialGraph& g, std::uint64_t budget) {
  return MinimalitySearch(g, budget).run();
}

std::string edge_list_string(const PartialGraph& g) {
  std::ostringstream out;
  out << g.num_vertices() << ":";
  for (const auto& e : g.edges()) out << ' ' << e.u + 1 << '-' << e.v + 1;
  return out.str();
}

std::string to_graph6(const PartialGraph& g) {
  const int n = g.num_vertices();
  std::string out(1, static_cast<char>(63 + n));
  int bits = 0;
  int acc = 0;
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u) {
      acc = (acc << 1) | (g.at(u, v) == EdgeState::Present ? 1 : 0);
      if (++bits == 6) {
        out.push_back(static_cast<char>(63 + acc));
        bits = acc = 0;
      }
    }
  if (bits > 0) out.push_back(static_cast<char>(63 + (acc << (6 - bits))));
  return out;
}

PartialGraph from_graph6(const std::string& s) {
  if (s.empty() || s[0] < 63 || s[0] > 63 + kMaxVertices) throw DomainError("unsupported graph6 string");
  const int n = s[0] - 63;
  PartialGraph g(n, EdgeState::Absent);
  std::size_t k = 0;
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u, ++k) {
      const std::size_t ch = 1 + k / 6;
      if (ch >= s.size()) throw DomainError("graph6 string too short");
      const int bit = ((s[ch] - 63) >> (5 - static_cast<int>(k % 6))) & 1;
      if (bit) g.set(u, v, EdgeState::Present);
    }
  return g;
}

}  // namespace smscube
