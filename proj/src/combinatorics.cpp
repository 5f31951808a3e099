#include "lbm/combinatorics.hpp"

#include <algorithm>
#include "json.hpp"
#include <stdexcept>

namespace lbm {

namespace {

std::string edge_text(const Edge& e) { return "(" + std::to_string(e.i) + "," + std::to_string(e.j) + ")"; }

// Number of +-1 paths of the given length from height h down to 0 that never go negative.
unsigned long long suffix_count(int length, int h) {
  if (h < 0 || h > length || (length - h) % 2 != 0) return 0;
  std::vector<unsigned long long> ways(static_cast<std::size_t>(length + 2), 0);
  ways[0] = 1;
  for (int step = 0; step < length; ++step) {
    std::vector<unsigned long long> next(ways.size(), 0);
    for (std::size_t k = 0; k + 1 < ways.size(); ++k) {
      if (ways[k] == 0) continue;
      next[k + 1] += ways[k];
      if (k > 0) next[k - 1] += ways[k];
    }
    ways = std::move(next);
  }
  return ways[static_cast<std::size_t>(h)];
}

void dyck_words(int n, std::string& prefix, int ups, int downs, std::vector<std::string>& out) {
  if (ups == n && downs == n) {
    out.push_back(prefix);
    return;
  }
  if (ups < n) {
    prefix.push_back('+');
    dyck_words(n, prefix, ups + 1, downs, out);
    prefix.pop_back();
  }
  if (downs < ups) {
    prefix.push_back('-');
    dyck_words(n, prefix, ups, downs + 1, out);
    prefix.pop_back();
  }
}

}  // namespace

DCGraph::DCGraph(int n, EdgeSet edges) : n_(n), edges_(std::move(edges)) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex, got n = " + std::to_string(n));
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  reach_.assign(static_cast<std::size_t>(n + 1), 0);
  reach_[0] = 1;
  for (int i = 1; i <= n; ++i) reach_[static_cast<std::size_t>(i)] = i;
  for (const Edge& e : edges_) {
    if (e.i < 1 || e.i >= e.j || e.j > n) {
      throw std::invalid_argument("edge " + edge_text(e) + " is not a pair 1 <= i < j <= " + std::to_string(n));
    }
    reach_[static_cast<std::size_t>(e.i)] = std::max(reach_[static_cast<std::size_t>(e.i)], e.j);
  }
  // Closure holds iff the stored edges are exactly {(i, j) : j <= b(i)} with b nondecreasing.
  std::size_t expected = 0;
  for (int i = 1; i <= n; ++i) {
    const int bi = reach_[static_cast<std::size_t>(i)];
    expected += static_cast<std::size_t>(bi - i);
    if (i > 1 && bi < reach_[static_cast<std::size_t>(i - 1)]) {
      throw std::invalid_argument("edge set is not downward closed: (" + std::to_string(i - 1) + "," +
                                  std::to_string(reach_[static_cast<std::size_t>(i - 1)]) + ") present but (" +
                                  std::to_string(i) + "," + std::to_string(reach_[static_cast<std::size_t>(i - 1)]) +
                                  ") missing");
    }
  }
  if (expected != edges_.size()) {
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= reach_[static_cast<std::size_t>(i)]; ++j) {
        if (!std::binary_search(edges_.begin(), edges_.end(), Edge{i, j})) {
          throw std::invalid_argument("edge set is not downward closed: (" + std::to_string(i) + "," +
                                      std::to_string(reach_[static_cast<std::size_t>(i)]) + ") present but " +
                                      edge_text({i, j}) + " missing");
        }
      }
    }
  }
}

DCGraph DCGraph::empty(int n) { return DCGraph(n, {}); }

DCGraph DCGraph::complete(int n) {
  EdgeSet e;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) e.push_back({i, j});
  return DCGraph(n, std::move(e));
}

DCGraph DCGraph::line(int n) {
  EdgeSet e;
  for (int i = 1; i < n; ++i) e.push_back({i, i + 1});
  return DCGraph(n, std::move(e));
}

int DCGraph::b(int i) const {
  if (i < 0 || i > n_) {
    throw std::out_of_range("vertex " + std::to_string(i) + " outside 0.." + std::to_string(n_));
  }
  return reach_[static_cast<std::size_t>(i)];
}

bool DCGraph::connected() const { return connected_component_of_one(*this).n() == n_; }

std::string DCGraph::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : edges_) j["edges"].push_back({e.i, e.j});
  return j.dump();
}

DCGraph DCGraph::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("graph JSON: ") + ex.what());
  }
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
    throw std::invalid_argument("graph JSON needs an integer field \"n\"");
  }
  EdgeSet edges;
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
        throw std::invalid_argument("graph JSON edge " + e.dump() + " is not a pair of integers");
      }
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
  }
  return DCGraph(j["n"].get<int>(), std::move(edges));
}

DyckPath::DyckPath(std::string word) : word_(std::move(word)) {
  int h = 0;
  for (std::size_t k = 0; k < word_.size(); ++k) {
    const char c = word_[k];
    if (c == '+') {
      ++h;
    } else if (c == '-') {
      if (--h < 0) throw std::invalid_argument("Dyck word '" + word_ + "' dips below zero at step " + std::to_string(k + 1));
    } else {
      throw std::invalid_argument("Dyck word '" + word_ + "' contains '" + std::string(1, c) + "'");
    }
  }
  if (h != 0) throw std::invalid_argument("Dyck word '" + word_ + "' does not return to zero");
}

int DyckPath::height(int x) const {
  int h = 0;
  for (int k = 0; k < x; ++k) h += word_[static_cast<std::size_t>(k)] == '+' ? 1 : -1;
  return h;
}

unsigned long long catalan(int n) {
  unsigned long long c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * static_cast<unsigned long long>(k) + 1) / (static_cast<unsigned long long>(k) + 2);
  return c;
}

std::vector<DCGraph> enumerate_dc(int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1, got " + std::to_string(n));
  std::vector<std::string> words;
  std::string prefix;
  dyck_words(n, prefix, 0, 0, words);
  std::vector<DCGraph> out;
  out.reserve(words.size());
  for (auto& w : words) out.push_back(dyck_to_dc(DyckPath(std::move(w))));
  return out;
}

std::size_t canonical_index(const DCGraph& g) {
  const std::string& w = dc_to_dyck(g).word();
  const int len = static_cast<int>(w.size());
  std::size_t rank = 0;
  int h = 0;
  for (int k = 0; k < len; ++k) {
    if (w[static_cast<std::size_t>(k)] == '-') {
      // Every word that agrees so far and puts '+' here sorts first.
      rank += suffix_count(len - k - 1, h + 1);
      --h;
    } else {
      ++h;
    }
  }
  return rank;
}

DyckPath dc_to_dyck(const DCGraph& g) {
  const int n = g.n();
  std::vector<int> height(static_cast<std::size_t>(2 * n + 1), 0);
  auto raise = [&](int apex_x, int apex_h, int from, int to) {
    for (int x = from; x <= to; ++x) {
      const int h = apex_h - std::abs(x - apex_x);
      height[static_cast<std::size_t>(x)] = std::max(height[static_cast<std::size_t>(x)], h);
    }
  };
  // Vertex tent of i: (2i-2, 0) -> (2i-1, 1) -> (2i, 0).
  for (int i = 1; i <= n; ++i) raise(2 * i - 1, 1, 2 * i - 2, 2 * i);
  // Edge line of (i, j): (2i-1, 1) -> (i+j-1, j-i+1) -> (2j-1, 1).
  for (const Edge& e : g.edges()) raise(e.i + e.j - 1, e.j - e.i + 1, 2 * e.i - 1, 2 * e.j - 1);
  std::string word;
  word.reserve(static_cast<std::size_t>(2 * n));
  for (int x = 0; x < 2 * n; ++x) {
    word.push_back(height[static_cast<std::size_t>(x + 1)] > height[static_cast<std::size_t>(x)] ? '+' : '-');
  }
  return DyckPath(std::move(word));
}

DCGraph dyck_to_dc(const DyckPath& path) {
  const int n = path.semilength();
  if (n < 1) throw std::invalid_argument("empty Dyck word");
  std::vector<int> height(static_cast<std::size_t>(2 * n + 1), 0);
  for (int x = 0; x < 2 * n; ++x) {
    height[static_cast<std::size_t>(x + 1)] =
        height[static_cast<std::size_t>(x)] + (path.word()[static_cast<std::size_t>(x)] == '+' ? 1 : -1);
  }
  // (i, j) lies under the path exactly when the path reaches the apex of its line.
  EdgeSet edges;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (height[static_cast<std::size_t>(i + j - 1)] >= j - i + 1) edges.push_back({i, j});
    }
  }
  return DCGraph(n, std::move(edges));
}

int b_map(const DCGraph& g, int i) { return g.b(i); }

EdgeSet maximal_edges(const DCGraph& g) {
  EdgeSet out;
  for (int i = 1; i <= g.n(); ++i) {
    const int bi = g.b(i);
    if (bi > i && (i == 1 || g.b(i - 1) < bi)) out.push_back({i, bi});
  }
  return out;
}

EdgeSet addable_edges(const DCGraph& g) {
  EdgeSet out;
  for (int i = 1; i <= g.n(); ++i) {
    const int j = g.b(i) + 1;
    if (j > g.n()) continue;
    // The two pairs immediately nested in (i, j) must already be present.
    const bool inner_left = (j - 1 == i) || g.has_edge(i, j - 1);
    const bool inner_right = (i + 1 == j) || g.has_edge(i + 1, j);
    if (inner_left && inner_right) out.push_back({i, j});
  }
  return out;
}

bool is_antichain(const EdgeSet& edges) {
  for (std::size_t x = 0; x < edges.size(); ++x) {
    for (std::size_t y = 0; y < edges.size(); ++y) {
      if (x != y && edges[x] != edges[y] && nested_in(edges[x], edges[y])) return false;
    }
  }
  return true;
}

EdgeSet symmetric_difference(const DCGraph& g1, const DCGraph& g2) {
  EdgeSet out;
  std::set_symmetric_difference(g1.edges().begin(), g1.edges().end(), g2.edges().begin(), g2.edges().end(),
                                std::back_inserter(out));
  return out;
}

Adjacency regions_adjacent(const DCGraph& g1, const DCGraph& g2) {
  if (g1.n() != g2.n()) throw std::invalid_argument("graphs have different vertex counts");
  if (g1 == g2) throw std::invalid_argument("adjacency needs two distinct graphs");
  const EdgeSet delta = symmetric_difference(g1, g2);
  Adjacency result;
  result.adjacent = is_antichain(delta);
  if (result.adjacent) result.codim = delta.size();
  return result;
}

bool boundary_condition(const DCGraph& g1, const DCGraph& g2) {
  const EdgeSet m1 = maximal_edges(g1);
  const EdgeSet big_m1 = addable_edges(g1);
  for (const Edge& e : g1.edges()) {
    if (!g2.has_edge(e) && !std::binary_search(m1.begin(), m1.end(), e)) return false;
  }
  for (const Edge& e : g2.edges()) {
    if (!g1.has_edge(e) && !std::binary_search(big_m1.begin(), big_m1.end(), e)) return false;
  }
  return true;
}

bool stanley_covers(const DCGraph& g1, const DCGraph& g2) {
  if (g1.n() != g2.n()) return false;
  if (g2.edge_count() != g1.edge_count() + 1) return false;
  return std::includes(g2.edges().begin(), g2.edges().end(), g1.edges().begin(), g1.edges().end());
}

DCGraph connected_component_of_one(const DCGraph& g) {
  int r = 1;
  while (g.b(r) > r) r = g.b(r);
  EdgeSet edges;
  for (const Edge& e : g.edges()) {
    if (e.j <= r) edges.push_back(e);
  }
  return DCGraph(r, std::move(edges));
}

DCGraph downward_closure(int n, const EdgeSet& edges) {
  std::vector<int> reach(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) reach[static_cast<std::size_t>(i)] = i;
  for (const Edge& e : edges) {
    if (e.i < 1 || e.i >= e.j || e.j > n) {
      throw std::invalid_argument("edge " + edge_text(e) + " is not a pair 1 <= i < j <= " + std::to_string(n));
    }
    for (int i = e.i; i < e.j; ++i) reach[static_cast<std::size_t>(i)] = std::max(reach[static_cast<std::size_t>(i)], e.j);
  }
  EdgeSet closed;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= reach[static_cast<std::size_t>(i)]; ++j) closed.push_back({i, j});
  }
  return DCGraph(n, std::move(closed));
}

DCGraph with_edge(const DCGraph& g, const Edge& e) {
  EdgeSet edges = g.edges();
  edges.push_back(e);
  return DCGraph(g.n(), std::move(edges));
}

DCGraph without_edge(const DCGraph& g, const Edge& e) {
  EdgeSet edges = g.edges();
  auto it = std::find(edges.begin(), edges.end(), e);
  if (it == edges.end()) throw std::invalid_argument("edge " + edge_text(e) + " is not in the graph");
  edges.erase(it);
  return DCGraph(g.n(), std::move(edges));
}

}  // namespace lbm

std::size_t std::hash<lbm::DCGraph>::operator()(const lbm::DCGraph& g) const noexcept {
  std::size_t h = std::hash<int>{}(g.n());
  for (const lbm::Edge& e : g.edges()) {
    h ^= std::hash<int>{}(e.i * 131 + e.j) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}
