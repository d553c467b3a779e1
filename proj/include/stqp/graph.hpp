#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stqp/errors.hpp"
#include "stqp/simplex.hpp"

namespace stqp {

/// Simple undirected graph on {0..n-1}, n <= 64, stored as adjacency bitmasks.
class Graph {
 public:
  static constexpr std::size_t kMaxVertices = 64;

  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), adj_(n, 0) {
    if (n > kMaxVertices) throw CapExceeded("graph: more than 64 vertices");
  }

  static Graph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Graph g(n);
    for (const auto& [i, j] : edges) g.add_edge(i, j);
    return g;
  }

  static Graph complete(std::size_t n) {
    Graph g(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
  }

  static Graph cycle(std::size_t n) {
    Graph g(n);
    for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
  }

  void add_edge(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_) throw DimensionError("graph: vertex out of range");
    if (i == j) throw InvalidArgument("graph: loops are not allowed");
    adj_[i] |= bit(j);
    adj_[j] |= bit(i);
  }

  std::size_t n() const { return n_; }
  bool has_edge(std::size_t i, std::size_t j) const { return i < n_ && j < n_ && (adj_[i] >> j & 1u); }
  std::uint64_t neighbors(std::size_t i) const { return adj_.at(i); }
  std::size_t degree(std::size_t i) const { return static_cast<std::size_t>(std::popcount(adj_.at(i))); }
  std::uint64_t all() const { return n_ == 64 ? ~std::uint64_t{0} : (bit(n_) - 1); }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (has_edge(i, j)) out.emplace_back(i, j);
    return out;
  }
  std::size_t edge_count() const {
    std::size_t c = 0;
    for (auto a : adj_) c += static_cast<std::size_t>(std::popcount(a));
    return c / 2;
  }

  Graph complement() const {
    Graph g(n_);
    for (std::size_t i = 0; i < n_; ++i) g.adj_[i] = all() & ~adj_[i] & ~bit(i);
    return g;
  }

  /// True when every pair in `mask` is adjacent.
  bool is_clique(std::uint64_t mask) const {
    for (std::uint64_t m = mask; m; m &= m - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(m));
      if ((mask & ~bit(i) & ~adj_[i]) != 0) return false;
    }
    return true;
  }

  bool operator==(const Graph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

  static std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> adj_;
};

inline constexpr std::size_t kCliqueCap = 32;
inline constexpr std::size_t kCycleCap = 16;

namespace detail {

inline void bron_kerbosch(const Graph& g, std::uint64_t r, std::uint64_t p, std::uint64_t x,
                          std::vector<std::uint64_t>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  // Pivot on the vertex of P u X with the most neighbours in P.
  std::size_t pivot = 0;
  int best = -1;
  for (std::uint64_t m = p | x; m; m &= m - 1) {
    const auto u = static_cast<std::size_t>(std::countr_zero(m));
    const int c = std::popcount(p & g.neighbors(u));
    if (c > best) {
      best = c;
      pivot = u;
    }
  }
  for (std::uint64_t m = p & ~g.neighbors(pivot); m; m &= m - 1) {
    const auto v = static_cast<std::size_t>(std::countr_zero(m));
    const auto nv = g.neighbors(v);
    bron_kerbosch(g, r | Graph::bit(v), p & nv, x & nv, out);
    p &= ~Graph::bit(v);
    x |= Graph::bit(v);
  }
}

/// Orders the vertices of `mask`, which must induce a graph containing a
/// Hamiltonian cycle through consecutive elements, as that cycle.
inline IndexSet cycle_order(const Graph& g, std::uint64_t mask) {
  const auto start = static_cast<std::size_t>(std::countr_zero(mask));
  IndexSet order{start};
  std::uint64_t used = Graph::bit(start);
  // Depth-first search for a Hamiltonian cycle; sizes here are at most 16.
  auto dfs = [&](auto&& self, std::size_t v) -> bool {
    if (used == mask) return g.has_edge(v, start);
    for (std::uint64_t m = g.neighbors(v) & mask & ~used; m; m &= m - 1) {
      const auto u = static_cast<std::size_t>(std::countr_zero(m));
      used |= Graph::bit(u);
      order.push_back(u);
      if (self(self, u)) return true;
      order.pop_back();
      used &= ~Graph::bit(u);
    }
    return false;
  };
  if (!dfs(dfs, start)) throw Error("graph: vertex set carries no Hamiltonian cycle");
  return order;
}

/// Vertex set of an induced odd cycle of length >= 5 (an odd hole), if any.
inline std::optional<std::uint64_t> find_odd_hole(const Graph& g) {
  const std::size_t n = g.n();
  const std::uint64_t total = n == 64 ? 0 : (std::uint64_t{1} << n);
  std::optional<std::uint64_t> best;
  for (std::uint64_t s = 1; s < total; ++s) {
    const int k = std::popcount(s);
    if (k < 5 || k % 2 == 0) continue;
    bool ok = true;
    for (std::uint64_t m = s; m && ok; m &= m - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(m));
      ok = std::popcount(g.neighbors(v) & s) == 2;
    }
    if (!ok) continue;
    // 2-regular: connected iff a single cycle.
    const auto start = static_cast<std::size_t>(std::countr_zero(s));
    std::uint64_t seen = Graph::bit(start), frontier = seen;
    while (frontier) {
      std::uint64_t next = 0;
      for (std::uint64_t m = frontier; m; m &= m - 1)
        next |= g.neighbors(static_cast<std::size_t>(std::countr_zero(m))) & s;
      frontier = next & ~seen;
      seen |= next;
    }
    if (seen != s) continue;
    // Prefer the shortest hole, then the lexicographically smallest.
    if (!best || std::popcount(s) < std::popcount(*best)) best = s;
    if (std::popcount(*best) == 5) break;
  }
  return best;
}

}  // namespace detail

/// All maximal cliques, each sorted, listed in lexicographic order.
inline std::vector<IndexSet> maximal_cliques(const Graph& g, std::size_t cap = kCliqueCap) {
  if (g.n() > cap) throw CapExceeded("maximal_cliques: graph has more than " + std::to_string(cap) + " vertices");
  std::vector<std::uint64_t> masks;
  if (g.n() > 0) detail::bron_kerbosch(g, 0, g.all(), 0, masks);
  std::vector<IndexSet> out;
  out.reserve(masks.size());
  for (auto m : masks) out.push_back(from_mask(m));
  std::sort(out.begin(), out.end());
  return out;
}

struct PerfectResult {
  bool perfect = true;
  IndexSet hole;               // in cycle order
  bool in_complement = false;  // hole found in the complement graph
};

/// Perfect-graph test by odd-hole search in G and its complement.
inline PerfectResult is_perfect(const Graph& g) {
  if (g.n() > kCycleCap) throw CapExceeded("is_perfect: graph has more than 16 vertices");
  PerfectResult r;
  if (auto h = detail::find_odd_hole(g)) {
    r.perfect = false;
    r.hole = detail::cycle_order(g, *h);
    return r;
  }
  const Graph c = g.complement();
  if (auto h = detail::find_odd_hole(c)) {
    r.perfect = false;
    r.in_complement = true;
    r.hole = detail::cycle_order(c, *h);
  }
  return r;
}

struct CompletableResult {
  bool completable = true;
  IndexSet cycle;  // an odd cycle whose vertex set is not a clique, in cycle order
};

/// Every odd cycle must induce a complete subgraph. A vertex set carries a
/// cycle through all of its vertices iff the path table below reaches back
/// to its smallest vertex.
inline CompletableResult is_spn_completable(const Graph& g) {
  const std::size_t n = g.n();
  if (n > kCycleCap) throw CapExceeded("is_spn_completable: graph has more than 16 vertices");
  CompletableResult r;
  if (n < 5) return r;
  const std::size_t total = std::size_t{1} << n;
  // ends[mask]: vertices v such that a path from min(mask) through exactly mask ends at v.
  std::vector<std::uint32_t> ends(total, 0);
  for (std::size_t v = 0; v < n; ++v) ends[std::size_t{1} << v] = 1u << v;
  std::optional<std::uint64_t> bad;
  for (std::size_t mask = 1; mask < total; ++mask) {
    const std::uint32_t e = ends[mask];
    if (!e) continue;
    const auto lo = static_cast<std::size_t>(std::countr_zero(mask));
    const int k = std::popcount(mask);
    if (k >= 5 && k % 2 == 1 && (g.neighbors(lo) & e) && !g.is_clique(mask)) {
      if (!bad || std::popcount(mask) < std::popcount(*bad)) bad = mask;
    }
    for (std::uint32_t m = e; m; m &= m - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(m));
      for (std::uint64_t nb = g.neighbors(v) & ~mask; nb; nb &= nb - 1) {
        const auto u = static_cast<std::size_t>(std::countr_zero(nb));
        if (u < lo) continue;  // the start stays the smallest vertex
        ends[mask | (std::size_t{1} << u)] |= 1u << u;
      }
    }
  }
  if (bad) {
    r.completable = false;
    r.cycle = detail::cycle_order(g, *bad);
  }
  return r;
}

/// Clique of maximum total weight; ties go to the lexicographically first
/// maximal clique.
inline std::pair<IndexSet, double> max_weight_clique(const Graph& g, const Vector& w,
                                                     std::size_t cap = kCliqueCap) {
  if (static_cast<std::size_t>(w.size()) != g.n()) throw DimensionError("max_weight_clique: weight length mismatch");
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (!(w(k) > 0.0)) throw InvalidArgument("max_weight_clique: weights must be positive");
  std::pair<IndexSet, double> best{{}, 0.0};
  for (const auto& c : maximal_cliques(g, cap)) {
    double s = 0.0;
    for (auto j : c) s += w(static_cast<Eigen::Index>(j));
    if (best.first.empty() || s > best.second) best = {c, s};
  }
  return best;
}

/// Graphviz rendering with 1-based labels.
inline std::string to_dot(const Graph& g, const std::string& name = "G") {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (std::size_t i = 0; i < g.n(); ++i) out << "  " << i + 1 << ";\n";
  for (const auto& [i, j] : g.edges()) out << "  " << i + 1 << " -- " << j + 1 << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace stqp
