#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lbm {

/// An ordered pair (i, j) with 1 <= i < j <= n.
struct Edge {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// (inner, outer) nested: outer.i <= inner.i < inner.j <= outer.j.
/// Reflexive, so an edge is nested in itself.
inline bool nested_in(const Edge& inner, const Edge& outer) {
  return outer.i <= inner.i && inner.j <= outer.j;
}

using EdgeSet = std::vector<Edge>;  // kept sorted and duplicate-free

/// Downward-closed directed graph on vertices 1..n.
///
/// Downward closure means that whenever (i, j) is an edge, every pair nested
/// in it is an edge too. Such a graph is determined by the reach b(i) of each
/// vertex (the greatest j with (i, j) an edge, or i itself), which is
/// nondecreasing.
class DCGraph {
 public:
  /// Throws std::invalid_argument on pairs outside E_n or a non-closed set.
  DCGraph(int n, EdgeSet edges);

  static DCGraph empty(int n);
  static DCGraph complete(int n);
  /// Edges (i, i+1).
  static DCGraph line(int n);

  int n() const { return n_; }
  const EdgeSet& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(int i, int j) const { return 1 <= i && i < j && j <= n_ && j <= reach_[i]; }
  bool has_edge(const Edge& e) const { return has_edge(e.i, e.j); }

  /// b(i) for 0 <= i <= n, with b(0) = 1. Throws std::out_of_range otherwise.
  int b(int i) const;

  /// True when vertex 1's component spans all of 1..n.
  bool connected() const;

  std::string to_json() const;
  static DCGraph from_json(std::string_view text);

  friend bool operator==(const DCGraph& x, const DCGraph& y) { return x.n_ == y.n_ && x.edges_ == y.edges_; }
  friend auto operator<=>(const DCGraph& x, const DCGraph& y) {
    if (auto c = x.n_ <=> y.n_; c != 0) return c;
    return x.edges_ <=> y.edges_;
  }

 private:
  int n_;
  EdgeSet edges_;
  std::vector<int> reach_;  // reach_[0] = 1, reach_[i] = b(i)
};

/// Words over {'+', '-'} with balanced, never-negative prefix sums.
class DyckPath {
 public:
  /// Throws std::invalid_argument on bad characters or an unbalanced word.
  explicit DyckPath(std::string word);

  const std::string& word() const { return word_; }
  int semilength() const { return static_cast<int>(word_.size() / 2); }
  /// Height after the first x steps, 0 <= x <= 2n.
  int height(int x) const;

  friend auto operator<=>(const DyckPath&, const DyckPath&) = default;

 private:
  std::string word_;
};

/// Catalan number C_n.
unsigned long long catalan(int n);

/// All downward-closed graphs on n vertices, ordered lexicographically by
/// their Dyck word ('+' < '-'). Throws std::invalid_argument for n < 1.
std::vector<DCGraph> enumerate_dc(int n);

/// Position of g in enumerate_dc(g.n()).
std::size_t canonical_index(const DCGraph& g);

/// Pointwise supremum of the edge and vertex broken lines.
DyckPath dc_to_dyck(const DCGraph& g);
DCGraph dyck_to_dc(const DyckPath& path);

int b_map(const DCGraph& g, int i);

/// m(G): edges not strictly nested in another edge.
EdgeSet maximal_edges(const DCGraph& g);
/// M(G): non-edges whose addition keeps the graph downward closed.
EdgeSet addable_edges(const DCGraph& g);

bool is_antichain(const EdgeSet& edges);

EdgeSet symmetric_difference(const DCGraph& g1, const DCGraph& g2);

struct Adjacency {
  bool adjacent = false;
  std::optional<std::size_t> codim;
};

/// Common boundary of the two regions: the symmetric difference of edge sets
/// must be an antichain; its size is the codimension.
/// Throws std::invalid_argument when g1 == g2 or the vertex counts differ.
Adjacency regions_adjacent(const DCGraph& g1, const DCGraph& g2);

/// Same predicate through the maximal/addable edge sets of g1:
/// E(g1)\E(g2) within m(g1) and E(g2)\E(g1) within M(g1).
bool boundary_condition(const DCGraph& g1, const DCGraph& g2);

/// g2 covers g1 under edge-set inclusion.
bool stanley_covers(const DCGraph& g1, const DCGraph& g2);

/// Induced graph on vertex 1's component, which is always {1..k}.
DCGraph connected_component_of_one(const DCGraph& g);

/// Smallest downward-closed graph containing the given pairs.
DCGraph downward_closure(int n, const EdgeSet& edges);

/// g with edge e added (e must be addable) or removed (e must be maximal).
DCGraph with_edge(const DCGraph& g, const Edge& e);
DCGraph without_edge(const DCGraph& g, const Edge& e);

}  // namespace lbm

template <>
struct std::hash<lbm::DCGraph> {
  std::size_t operator()(const lbm::DCGraph& g) const noexcept;
};
