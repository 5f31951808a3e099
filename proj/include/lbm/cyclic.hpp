#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbm/combinatorics.hpp"
#include "lbm/params.hpp"

namespace lbm {

/// Total cyclic order on 1..N read clockwise, rotated so that 1 comes first.
class CyclicOrder {
 public:
  /// Throws std::invalid_argument unless `order` is a permutation of 1..N;
  /// any rotation is accepted and canonicalized.
  explicit CyclicOrder(std::vector<int> order);

  int n() const { return static_cast<int>(order_.size()); }
  const std::vector<int>& order() const { return order_; }

  /// (x, y, z) holds when y lies strictly between x and z clockwise.
  bool contains(int x, int y, int z) const;
  /// Starting from tuple[0] and turning clockwise, the remaining entries appear in order.
  bool is_chain(const std::vector<int>& tuple) const;

  std::string to_string() const;

  friend auto operator<=>(const CyclicOrder&, const CyclicOrder&) = default;

 private:
  std::vector<int> order_;
  std::vector<int> slot_;  // slot_[x] = position of x in order_
};

struct ChainConstraint {
  std::vector<int> tuple;
  friend auto operator<=>(const ChainConstraint&, const ChainConstraint&) = default;
};

/// Raised for parameters whose stationary graph is disconnected; the cyclic
/// order of jumps is then outside the scope of f_map.
class DisconnectedGraphError : public std::invalid_argument {
 public:
  explicit DisconnectedGraphError(DCGraph g);
  const DCGraph& graph() const { return graph_; }

 private:
  DCGraph graph_;
};

/// Raised when two cursors jump at the same instant (parameters on a wall).
class SimultaneousJumpError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Order in which the cursors jump during one stationary period, found by
/// simulating the liquid bin model from the canonical stationary configuration.
template <Scalar S>
CyclicOrder jump_order(const Params<S>& params);

/// Same order read off the phases t(a_i) mod z_1 of the stationary profile.
template <Scalar S>
CyclicOrder jump_order_from_phases(const Params<S>& params);

/// Graph with edges (i, j), i < j <= beta(i), where beta(i) is the largest m
/// such that (i, i+1, ..., m) is a chain.
DCGraph f_map(const CyclicOrder& z);

/// Chains (i..j), (i, i-1, j) and (j, i, j+1) for every maximal edge (i, j),
/// without tuples shorter than 3 or leaving 1..N. Throws for disconnected g.
std::vector<ChainConstraint> zprime_chains(const DCGraph& g);

/// zprime_chains(g) plus (b(i), i, b(i)+1) for every i. These say that
/// (i, ..., b(i), b(i)+1) is not a chain, which the maximal edges alone
/// do not force once N >= 5.
std::vector<ChainConstraint> fiber_chains(const DCGraph& g);

/// Every cyclic order on 1..n, in lexicographic order of the canonical rotation.
std::vector<CyclicOrder> all_cyclic_orders(int n);

/// Cyclic orders satisfying every constraint of zprime_chains(g). For N <= 4
/// this is the fiber of f_map over g; from N = 5 on it can be larger.
std::vector<CyclicOrder> zprime_extensions(const DCGraph& g);

/// Fiber of f_map over g. Cross-checked against the orders satisfying
/// fiber_chains(g) (std::logic_error on mismatch).
/// Throws DisconnectedGraphError for disconnected g, std::invalid_argument for n > 9.
std::vector<CyclicOrder> circular_extensions(const DCGraph& g);

struct ProbeBucket {
  DCGraph graph;
  std::vector<CyclicOrder> extensions;
  std::map<CyclicOrder, std::uint64_t> realized;  // extension -> hits
  std::uint64_t hits = 0;                          // samples classified into graph
  /// Realized orders outside the extensions (always empty if the theory holds).
  std::map<CyclicOrder, std::uint64_t> foreign;

  bool covered() const { return realized.size() == extensions.size(); }
  std::vector<CyclicOrder> missing() const;
};

struct ProbeReport {
  int n = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::uint64_t disconnected = 0;  // samples landing in a disconnected region
  std::uint64_t skipped = 0;       // samples too close to a wall to decide
  std::vector<ProbeBucket> buckets;  // connected graphs in enumerate_dc order

  bool all_covered() const;
};

/// Samples d_i and p_i log-uniformly in [1e-2, 1e2], classifies each point and
/// records the jump order per connected graph. Samples are split into fixed
/// chunks with their own RNG streams, so the report does not depend on `jobs`.
ProbeReport conjecture_probe_all(int n, std::uint64_t budget, std::uint64_t seed, int jobs = 1);
ProbeReport conjecture_probe_all_serial(int n, std::uint64_t budget, std::uint64_t seed);

/// Bucket of conjecture_probe_all for a single connected graph.
ProbeBucket conjecture_probe(const DCGraph& g, std::uint64_t budget, std::uint64_t seed, int jobs = 1);

}  // namespace lbm
