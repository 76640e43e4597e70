#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unx {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class Side { Left, Right };

/// Sorted, duplicate-free set of vertex indices on one side of a bipartite
/// graph (or plain vertex indices of a regular graph, tagged Left).
struct VertexSubset {
  Side side = Side::Left;
  std::vector<std::uint32_t> members;

  VertexSubset() = default;
  VertexSubset(Side s, std::vector<std::uint32_t> m)
      : side(s), members(std::move(m)) {
    for (std::size_t i = 1; i < members.size(); ++i) {
      if (members[i] <= members[i - 1])
        throw Error("VertexSubset: members must be sorted strictly increasing");
    }
  }

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
  bool operator==(const VertexSubset&) const = default;
};

/// Undirected multigraph stored as a dense symmetric matrix of edge
/// multiplicities. A diagonal entry t means t loop units, each contributing
/// 1 to the row sum (so power(G,k) stays exactly d^k-regular).
class RegularGraph {
 public:
  RegularGraph(std::uint32_t n, std::vector<std::uint32_t> adj,
               std::optional<std::uint32_t> declared_degree = std::nullopt)
      : n_(n), adj_(std::move(adj)), degree_(declared_degree) {
    if (adj_.size() != static_cast<std::size_t>(n_) * n_)
      throw Error("RegularGraph: adjacency size mismatch");
    for (std::uint32_t i = 0; i < n_; ++i)
      for (std::uint32_t j = i + 1; j < n_; ++j)
        if (at(i, j) != at(j, i))
          throw Error("RegularGraph: adjacency must be symmetric");
    if (degree_) {
      for (std::uint32_t i = 0; i < n_; ++i)
        if (row_sum(i) != *degree_)
          throw Error("RegularGraph: row sum " + std::to_string(row_sum(i)) +
                      " at vertex " + std::to_string(i) +
                      " does not match declared degree " +
                      std::to_string(*degree_));
    }
  }

  static RegularGraph from_edges(
      std::uint32_t n,
      const std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>&
          edges,
      std::optional<std::uint32_t> declared_degree = std::nullopt) {
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(n) * n, 0);
    for (auto [u, v, t] : edges) {
      if (u >= n || v >= n) throw Error("RegularGraph: edge endpoint out of range");
      if (u == v) {
        adj[static_cast<std::size_t>(u) * n + u] += t;
      } else {
        adj[static_cast<std::size_t>(u) * n + v] += t;
        adj[static_cast<std::size_t>(v) * n + u] += t;
      }
    }
    return RegularGraph(n, std::move(adj), declared_degree);
  }

  std::uint32_t n() const { return n_; }
  std::uint32_t at(std::uint32_t i, std::uint32_t j) const {
    return adj_[static_cast<std::size_t>(i) * n_ + j];
  }
  std::span<const std::uint32_t> row(std::uint32_t i) const {
    return {adj_.data() + static_cast<std::size_t>(i) * n_, n_};
  }
  const std::vector<std::uint32_t>& adjacency() const { return adj_; }

  std::uint32_t row_sum(std::uint32_t i) const {
    auto r = row(i);
    return std::accumulate(r.begin(), r.end(), std::uint32_t{0});
  }

  bool is_regular() const {
    std::uint32_t d0 = row_sum(0);
    for (std::uint32_t i = 1; i < n_; ++i)
      if (row_sum(i) != d0) return false;
    return true;
  }

  std::optional<std::uint32_t> declared_degree() const { return degree_; }

  std::uint32_t loop_count(std::uint32_t v) const { return at(v, v); }
  bool has_loops() const {
    for (std::uint32_t v = 0; v < n_; ++v)
      if (at(v, v) != 0) return true;
    return false;
  }

  /// Total edge count: loop units + off-diagonal pairs once each.
  std::uint64_t edge_count() const {
    std::uint64_t s = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
      s += at(i, i);
      for (std::uint32_t j = i + 1; j < n_; ++j) s += at(i, j);
    }
    return s;
  }

  bool is_connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(n_, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::uint32_t cnt = 1;
    while (!stack.empty()) {
      std::uint32_t u = stack.back();
      stack.pop_back();
      for (std::uint32_t v = 0; v < n_; ++v) {
        if (at(u, v) && !seen[v]) {
          seen[v] = 1;
          ++cnt;
          stack.push_back(v);
        }
      }
    }
    return cnt == n_;
  }

  /// 2-colorability on the multigraph; any loop is an odd cycle.
  bool is_bipartite() const {
    std::vector<int> color(n_, -1);
    for (std::uint32_t s = 0; s < n_; ++s) {
      if (color[s] != -1) continue;
      color[s] = 0;
      std::vector<std::uint32_t> stack{s};
      while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        if (at(u, u) != 0) return false;
        for (std::uint32_t v = 0; v < n_; ++v) {
          if (!at(u, v)) continue;
          if (color[v] == -1) {
            color[v] = color[u] ^ 1;
            stack.push_back(v);
          } else if (color[v] == color[u]) {
            return false;
          }
        }
      }
    }
    return true;
  }

  /// 0/1 bipartition colors, or nullopt when not bipartite.
  std::optional<std::vector<int>> bipartition() const {
    std::vector<int> color(n_, -1);
    for (std::uint32_t s = 0; s < n_; ++s) {
      if (color[s] != -1) continue;
      color[s] = 0;
      std::vector<std::uint32_t> stack{s};
      while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        if (at(u, u) != 0) return std::nullopt;
        for (std::uint32_t v = 0; v < n_; ++v) {
          if (!at(u, v)) continue;
          if (color[v] == -1) {
            color[v] = color[u] ^ 1;
            stack.push_back(v);
          } else if (color[v] == color[u]) {
            return std::nullopt;
          }
        }
      }
    }
    return color;
  }

  /// Canonical edge list: (u, v, mult) with u <= v, sorted.
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>
  canonical_edges() const {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (at(i, i)) out.emplace_back(i, i, at(i, i));
      for (std::uint32_t j = i + 1; j < n_; ++j)
        if (at(i, j)) out.emplace_back(i, j, at(i, j));
    }
    return out;
  }

  bool operator==(const RegularGraph& o) const {
    return n_ == o.n_ && adj_ == o.adj_ && degree_ == o.degree_;
  }

 private:
  std::uint32_t n_;
  std::vector<std::uint32_t> adj_;
  std::optional<std::uint32_t> degree_;
};

struct BipartiteEdge {
  std::uint32_t left;
  std::uint32_t right;
  std::uint32_t mult;
  bool operator==(const BipartiteEdge&) const = default;
  auto operator<=>(const BipartiteEdge&) const = default;
};

/// Bipartite multigraph. Each right vertex carries an ordered list of its
/// incident edge slots (one slot per edge unit); the canonical order sorts
/// slots by (left endpoint, parallel-edge counter). The slot order is what
/// the routed product and the SS2 construction route through.
class BipartiteGraph {
 public:
  BipartiteGraph(std::uint32_t nl, std::uint32_t nr,
                 const std::vector<BipartiteEdge>& edges)
      : nl_(nl), nr_(nr), custom_order_(false) {
    right_slots_.assign(nr_, {});
    left_adj_.assign(nl_, {});
    auto sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
      if (sorted[i].left == sorted[i + 1].left &&
          sorted[i].right == sorted[i + 1].right)
        throw Error("BipartiteGraph: duplicate edge entry; use multiplicity");
    for (const auto& e : sorted) {
      if (e.left >= nl_) throw Error("BipartiteGraph: left index out of range");
      if (e.right >= nr_) throw Error("BipartiteGraph: right index out of range");
      if (e.mult == 0) throw Error("BipartiteGraph: zero multiplicity edge");
      left_adj_[e.left].emplace_back(e.right, e.mult);
      for (std::uint32_t c = 0; c < e.mult; ++c)
        right_slots_[e.right].push_back(e.left);
    }
    // sorted edge insertion makes every right_slots_[v] canonical already
  }

  std::uint32_t num_left() const { return nl_; }
  std::uint32_t num_right() const { return nr_; }

  /// Slot order of right vertex v: slot i holds the left endpoint of the
  /// i-th edge incident to v.
  std::span<const std::uint32_t> slots(std::uint32_t v) const {
    return right_slots_[v];
  }

  std::span<const std::pair<std::uint32_t, std::uint32_t>> left_neighbors(
      std::uint32_t u) const {
    return left_adj_[u];
  }

  std::uint32_t left_degree(std::uint32_t u) const {
    std::uint32_t d = 0;
    for (auto [v, m] : left_adj_[u]) d += m;
    return d;
  }
  std::uint32_t right_degree(std::uint32_t v) const {
    return static_cast<std::uint32_t>(right_slots_[v].size());
  }

  std::optional<std::uint32_t> left_regular_degree() const {
    if (nl_ == 0) return std::nullopt;
    std::uint32_t d = left_degree(0);
    for (std::uint32_t u = 1; u < nl_; ++u)
      if (left_degree(u) != d) return std::nullopt;
    return d;
  }
  std::optional<std::uint32_t> right_regular_degree() const {
    if (nr_ == 0) return std::nullopt;
    std::uint32_t d = right_degree(0);
    for (std::uint32_t v = 1; v < nr_; ++v)
      if (right_degree(v) != d) return std::nullopt;
    return d;
  }

  std::uint32_t max_right_degree() const {
    std::uint32_t d = 0;
    for (std::uint32_t v = 0; v < nr_; ++v) d = std::max(d, right_degree(v));
    return d;
  }
  std::uint32_t min_right_degree() const {
    std::uint32_t d = nr_ ? right_degree(0) : 0;
    for (std::uint32_t v = 1; v < nr_; ++v) d = std::min(d, right_degree(v));
    return d;
  }

  /// (d1, d2) when both sides are regular.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> biregular_degrees()
      const {
    auto d1 = left_regular_degree();
    auto d2 = right_regular_degree();
    if (d1 && d2) return std::make_pair(*d1, *d2);
    return std::nullopt;
  }

  bool is_simple() const {
    for (std::uint32_t u = 0; u < nl_; ++u)
      for (auto [v, m] : left_adj_[u])
        if (m > 1) return false;
    return true;
  }

  /// |R| / |L|.
  double imbalance() const {
    return static_cast<double>(nr_) / static_cast<double>(nl_);
  }

  std::uint64_t edge_units() const {
    std::uint64_t s = 0;
    for (std::uint32_t v = 0; v < nr_; ++v) s += right_slots_[v].size();
    return s;
  }

  bool has_custom_order() const { return custom_order_; }

  /// Replace right vertex v's slot order. The new order must be a
  /// permutation of the current multiset of incident left endpoints.
  void override_order(std::uint32_t v, std::vector<std::uint32_t> order) {
    if (v >= nr_) throw Error("override_order: right index out of range");
    auto a = right_slots_[v];
    auto b = order;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw Error("override_order: not a permutation of the incident slots");
    right_slots_[v] = std::move(order);
    custom_order_ = true;
  }

  std::vector<BipartiteEdge> canonical_edges() const {
    std::vector<BipartiteEdge> out;
    for (std::uint32_t u = 0; u < nl_; ++u)
      for (auto [v, m] : left_adj_[u]) out.push_back({u, v, m});
    std::sort(out.begin(), out.end());
    return out;
  }

  std::uint32_t multiplicity(std::uint32_t u, std::uint32_t v) const {
    for (auto [w, m] : left_adj_[u])
      if (w == v) return m;
    return 0;
  }

  bool operator==(const BipartiteGraph& o) const {
    return nl_ == o.nl_ && nr_ == o.nr_ && right_slots_ == o.right_slots_;
  }

 private:
  std::uint32_t nl_, nr_;
  std::vector<std::vector<std::uint32_t>> right_slots_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> left_adj_;
  bool custom_order_;
};

inline void require_left_subset(const BipartiteGraph& b, const VertexSubset& s) {
  if (s.side != Side::Left) throw Error("expected a left subset");
  for (auto u : s.members)
    if (u >= b.num_left()) throw Error("subset index out of range");
}

/// Right vertices with at least one edge into S.
inline VertexSubset neighbors(const BipartiteGraph& b, const VertexSubset& s) {
  require_left_subset(b, s);
  std::vector<char> hit(b.num_right(), 0);
  for (auto u : s.members)
    for (auto [v, m] : b.left_neighbors(u)) hit[v] = 1;
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < b.num_right(); ++v)
    if (hit[v]) out.push_back(v);
  return {Side::Right, std::move(out)};
}

/// Right vertices whose total edge multiplicity into S is exactly 1.
/// A double edge to a single member of S disqualifies.
inline VertexSubset unique_neighbors(const BipartiteGraph& b,
                                     const VertexSubset& s) {
  require_left_subset(b, s);
  std::vector<std::uint32_t> cnt(b.num_right(), 0);
  for (auto u : s.members)
    for (auto [v, m] : b.left_neighbors(u)) cnt[v] += m;
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < b.num_right(); ++v)
    if (cnt[v] == 1) out.push_back(v);
  return {Side::Right, std::move(out)};
}

/// Bipartite (2,d)-biregular incidence graph: left = edges, right = vertices.
/// Left vertex numbering follows the canonical edge order (min endpoint,
/// max endpoint, parallel index). Loops are rejected; strip them first.
inline BipartiteGraph edge_vertex_incidence(const RegularGraph& g) {
  if (g.has_loops()) {
    std::ostringstream os;
    os << "edge_vertex_incidence: graph has loops; strip them first (";
    bool first = true;
    for (std::uint32_t v = 0; v < g.n(); ++v) {
      if (g.loop_count(v)) {
        if (!first) os << ", ";
        os << "vertex " << v << ": " << g.loop_count(v);
        first = false;
      }
    }
    os << ")";
    throw Error(os.str());
  }
  std::vector<BipartiteEdge> edges;
  std::uint32_t next_left = 0;
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    for (std::uint32_t v = u + 1; v < g.n(); ++v) {
      for (std::uint32_t c = 0; c < g.at(u, v); ++c) {
        edges.push_back({next_left, u, 1});
        edges.push_back({next_left, v, 1});
        ++next_left;
      }
    }
  }
  return BipartiteGraph(next_left, g.n(), edges);
}

struct StripResult {
  RegularGraph graph;
  std::vector<std::uint32_t> deficit;  // removed diagonal entry per vertex
  bool uniform() const {
    return std::adjacent_find(deficit.begin(), deficit.end(),
                              std::not_equal_to<>()) == deficit.end();
  }
};

/// Zero the diagonal, reporting per-vertex removed loop units. The result
/// keeps a declared degree only when the deficits are uniform on a graph
/// that had one.
inline StripResult strip_loops(const RegularGraph& g) {
  std::vector<std::uint32_t> adj = g.adjacency();
  std::vector<std::uint32_t> deficit(g.n(), 0);
  for (std::uint32_t v = 0; v < g.n(); ++v) {
    deficit[v] = adj[static_cast<std::size_t>(v) * g.n() + v];
    adj[static_cast<std::size_t>(v) * g.n() + v] = 0;
  }
  bool uniform = std::adjacent_find(deficit.begin(), deficit.end(),
                                    std::not_equal_to<>()) == deficit.end();
  std::optional<std::uint32_t> d;
  if (g.declared_degree() && (uniform || g.n() == 0))
    d = *g.declared_degree() - (g.n() ? deficit[0] : 0);
  return {RegularGraph(g.n(), std::move(adj), d), std::move(deficit)};
}

}  // namespace unx
