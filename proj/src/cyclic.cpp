#include "lbm/cyclic.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lbm/dynamics.hpp"
#include "lbm/regions.hpp"
#include "lbm/rng.hpp"
#include "lbm/stationary.hpp"

namespace lbm {

CyclicOrder::CyclicOrder(std::vector<int> order) : order_(std::move(order)) {
  const int n = static_cast<int>(order_.size());
  if (n < 1) throw std::invalid_argument("cyclic order needs at least one element");
  slot_.assign(static_cast<std::size_t>(n + 1), -1);
  for (int k = 0; k < n; ++k) {
    const int x = order_[static_cast<std::size_t>(k)];
    if (x < 1 || x > n || slot_[static_cast<std::size_t>(x)] != -1) {
      throw std::invalid_argument("cyclic order is not a permutation of 1.." + std::to_string(n) + " (entry " +
                                  std::to_string(x) + ")");
    }
    slot_[static_cast<std::size_t>(x)] = k;
  }
  std::rotate(order_.begin(), order_.begin() + slot_[1], order_.end());
  for (int k = 0; k < n; ++k) slot_[static_cast<std::size_t>(order_[static_cast<std::size_t>(k)])] = k;
}

bool CyclicOrder::contains(int x, int y, int z) const {
  if (x == y || y == z || x == z) return false;
  const int n = this->n();
  const int sx = slot_[static_cast<std::size_t>(x)];
  const int dy = (slot_[static_cast<std::size_t>(y)] - sx + n) % n;
  const int dz = (slot_[static_cast<std::size_t>(z)] - sx + n) % n;
  return dy < dz;
}

bool CyclicOrder::is_chain(const std::vector<int>& tuple) const {
  for (std::size_t k = 1; k + 1 < tuple.size(); ++k) {
    if (!contains(tuple[0], tuple[k], tuple[k + 1])) return false;
  }
  return true;
}

std::string CyclicOrder::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < order_.size(); ++k) {
    if (k > 0) s += ',';
    s += std::to_string(order_[k]);
  }
  return s + ")";
}

DisconnectedGraphError::DisconnectedGraphError(DCGraph g)
    : std::invalid_argument("graph " + g.to_json() + " is not connected"), graph_(std::move(g)) {}

namespace {

template <Scalar S>
S modulo(const S& x, const S& period) {
  if constexpr (is_exact_v<S>) {
    Rational ratio = x / period;
    mpz_class whole;
    mpz_fdiv_q(whole.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
    return S(x - Rational(whole) * period);
  } else {
    return x - std::floor(x / period) * period;
  }
}

template <Scalar S>
bool same_instant(const S& x, const S& y, const S& scale) {
  if constexpr (is_exact_v<S>) {
    return x == y;
  } else {
    return std::fabs(x - y) <= kWallEpsilon * scale;
  }
}

// Sorts cursors by jump instant; rejects ties.
template <Scalar S>
CyclicOrder order_by_time(std::vector<std::pair<S, int>> jumps, const S& scale) {
  std::sort(jumps.begin(), jumps.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  for (std::size_t k = 1; k < jumps.size(); ++k) {
    if (same_instant(jumps[k - 1].first, jumps[k].first, scale)) {
      throw SimultaneousJumpError("cursors " + std::to_string(jumps[k - 1].second) + " and " +
                                  std::to_string(jumps[k].second) + " jump at the same instant");
    }
  }
  std::vector<int> order;
  for (const auto& j : jumps) order.push_back(j.second);
  return CyclicOrder(std::move(order));
}

template <Scalar S>
RegionReport<S> connected_region(const Params<S>& params) {
  RegionReport<S> report = classify(params);
  if (!report.graph.connected()) throw DisconnectedGraphError(report.graph);
  if (report.ambiguous) throw SimultaneousJumpError("parameters lie on a wall within floating tolerance");
  return report;
}

}  // namespace

template <Scalar S>
CyclicOrder jump_order(const Params<S>& params) {
  const RegionReport<S> region = connected_region(params);
  const StationaryProfile<S> profile{region.z};
  const S period = profile.period();
  const BinConfig<S> start = sigma_inverse(canonical_configuration(profile, params), params);
  S horizon = period;
  if constexpr (!is_exact_v<S>) horizon *= 1 + kWallEpsilon;
  const BinStep<S> step = evolve_bins(start, params, horizon);
  std::vector<std::pair<S, int>> jumps;
  std::vector<int> count(static_cast<std::size_t>(params.n() + 1), 0);
  for (const Event<S>& e : step.events) {
    if (e.kind != EventKind::CursorJump) continue;
    // Cursor 1 sits on its threshold at time 0; rounding may replay that jump.
    if constexpr (!is_exact_v<S>) {
      if (e.time <= kWallEpsilon * period) continue;
    }
    jumps.emplace_back(e.time, e.index);
    ++count[static_cast<std::size_t>(e.index)];
  }
  for (int i = 1; i <= params.n(); ++i) {
    if (count[static_cast<std::size_t>(i)] != 1) {
      throw SimultaneousJumpError("cursor " + std::to_string(i) + " jumped " + std::to_string(count[static_cast<std::size_t>(i)]) +
                                  " times in one period");
    }
  }
  return order_by_time(std::move(jumps), period);
}

template <Scalar S>
CyclicOrder jump_order_from_phases(const Params<S>& params) {
  const RegionReport<S> region = connected_region(params);
  const StationaryProfile<S> profile{region.z};
  const S& period = profile.period();
  const std::vector<S> s = profile.breakpoints();
  std::vector<std::pair<S, int>> jumps;
  for (int i = 1; i <= params.n(); ++i) {
    S phase = modulo(s[static_cast<std::size_t>(i - 1)], period);
    if (phase == 0 || (!is_exact_v<S> && same_instant(phase, period, period))) phase = period;
    jumps.emplace_back(std::move(phase), i);
  }
  // Cursor 1 jumps at the end of each period; it is first in canonical rotation anyway.
  return order_by_time(std::move(jumps), period);
}

DCGraph f_map(const CyclicOrder& z) {
  const int n = z.n();
  EdgeSet edges;
  for (int i = 1; i <= n; ++i) {
    std::vector<int> run{i};
    for (int m = i + 1; m <= n; ++m) {
      run.push_back(m);
      if (!z.is_chain(run)) break;
      edges.push_back({i, m});
    }
  }
  return DCGraph(n, std::move(edges));
}

namespace {

void keep_chain(std::vector<ChainConstraint>& out, int n, std::vector<int> t) {
  if (t.size() < 3) return;
  for (int x : t) {
    if (x < 1 || x > n) return;
  }
  out.push_back(ChainConstraint{std::move(t)});
}

void sort_unique(std::vector<ChainConstraint>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<CyclicOrder> filter_by_chains(int n, const std::vector<ChainConstraint>& chains) {
  std::vector<CyclicOrder> out;
  for (const CyclicOrder& z : all_cyclic_orders(n)) {
    if (std::all_of(chains.begin(), chains.end(), [&](const ChainConstraint& c) { return z.is_chain(c.tuple); })) {
      out.push_back(z);
    }
  }
  return out;
}

void check_extension_size(const DCGraph& g) {
  if (g.n() > 9) throw std::invalid_argument("circular extensions are enumerated for n <= 9 only, got " + std::to_string(g.n()));
  if (!g.connected()) throw DisconnectedGraphError(g);
}

}  // namespace

std::vector<ChainConstraint> zprime_chains(const DCGraph& g) {
  if (!g.connected()) throw DisconnectedGraphError(g);
  const int n = g.n();
  std::vector<ChainConstraint> out;
  for (const Edge& e : maximal_edges(g)) {
    std::vector<int> run(static_cast<std::size_t>(e.j - e.i + 1));
    std::iota(run.begin(), run.end(), e.i);
    keep_chain(out, n, std::move(run));
    keep_chain(out, n, {e.i, e.i - 1, e.j});
    keep_chain(out, n, {e.j, e.i, e.j + 1});
  }
  sort_unique(out);
  return out;
}

std::vector<ChainConstraint> fiber_chains(const DCGraph& g) {
  std::vector<ChainConstraint> out = zprime_chains(g);
  const int n = g.n();
  for (int i = 1; i <= n; ++i) keep_chain(out, n, {g.b(i), i, g.b(i) + 1});
  sort_unique(out);
  return out;
}

std::vector<CyclicOrder> all_cyclic_orders(int n) {
  if (n < 1) throw std::invalid_argument("cyclic orders need n >= 1");
  std::vector<int> tail(static_cast<std::size_t>(n - 1));
  std::iota(tail.begin(), tail.end(), 2);
  std::vector<CyclicOrder> out;
  do {
    std::vector<int> order{1};
    order.insert(order.end(), tail.begin(), tail.end());
    out.emplace_back(std::move(order));
  } while (std::next_permutation(tail.begin(), tail.end()));
  return out;
}

std::vector<CyclicOrder> zprime_extensions(const DCGraph& g) {
  check_extension_size(g);
  return filter_by_chains(g.n(), zprime_chains(g));
}

std::vector<CyclicOrder> circular_extensions(const DCGraph& g) {
  check_extension_size(g);
  std::vector<CyclicOrder> by_fiber;
  for (const CyclicOrder& z : all_cyclic_orders(g.n())) {
    if (f_map(z) == g) by_fiber.push_back(z);
  }
  if (filter_by_chains(g.n(), fiber_chains(g)) != by_fiber) {
    throw std::logic_error("chain constraints and the fiber of f_map disagree for " + dc_to_dyck(g).word());
  }
  return by_fiber;
}

std::vector<CyclicOrder> ProbeBucket::missing() const {
  std::vector<CyclicOrder> out;
  for (const CyclicOrder& z : extensions) {
    if (!realized.contains(z)) out.push_back(z);
  }
  return out;
}

bool ProbeReport::all_covered() const {
  return std::all_of(buckets.begin(), buckets.end(), [](const ProbeBucket& b) { return b.covered(); });
}

namespace {

constexpr std::uint64_t kChunk = 2048;

struct ChunkTally {
  std::map<std::size_t, std::map<CyclicOrder, std::uint64_t>> orders;  // graph id -> order -> hits
  std::uint64_t disconnected = 0;
  std::uint64_t skipped = 0;
};

Params<double> sample_params(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(std::log(1e-2), std::log(1e2));
  std::vector<double> a, p;
  double level = 0;
  for (int i = 0; i < n; ++i) {
    level += std::exp(unit(rng));
    a.push_back(level);
    p.push_back(std::exp(unit(rng)));
  }
  return Params<double>(a, p);
}

ChunkTally run_chunk(int n, std::uint64_t seed, std::uint64_t chunk, std::uint64_t samples) {
  std::mt19937_64 rng = make_stream(seed, chunk);
  ChunkTally tally;
  for (std::uint64_t k = 0; k < samples; ++k) {
    const Params<double> params = sample_params(n, rng);
    try {
      const RegionReport<double> region = classify(params);
      if (!region.graph.connected()) {
        ++tally.disconnected;
        continue;
      }
      if (region.ambiguous) {
        ++tally.skipped;
        continue;
      }
      ++tally.orders[region.graph_id][jump_order_from_phases(params)];
    } catch (const SimultaneousJumpError&) {
      ++tally.skipped;
    }
  }
  return tally;
}

ProbeReport assemble(int n, std::uint64_t budget, std::uint64_t seed, const std::vector<ChunkTally>& tallies) {
  ProbeReport report;
  report.n = n;
  report.seed = seed;
  report.budget = budget;
  const std::vector<DCGraph> graphs = enumerate_dc(n);
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t id = 0; id < graphs.size(); ++id) {
    if (!graphs[id].connected()) continue;
    slot[id] = report.buckets.size();
    ProbeBucket bucket{graphs[id], circular_extensions(graphs[id]), {}, 0, {}};
    report.buckets.push_back(std::move(bucket));
  }
  for (const ChunkTally& t : tallies) {
    report.disconnected += t.disconnected;
    report.skipped += t.skipped;
    for (const auto& [id, orders] : t.orders) {
      ProbeBucket& b = report.buckets[slot.at(id)];
      for (const auto& [z, hits] : orders) {
        b.hits += hits;
        const bool known = std::find(b.extensions.begin(), b.extensions.end(), z) != b.extensions.end();
        (known ? b.realized : b.foreign)[z] += hits;
      }
    }
  }
  return report;
}

void check_probe_args(int n) {
  if (n < 1 || n > 9) throw std::invalid_argument("conjecture probe needs 1 <= n <= 9, got " + std::to_string(n));
}

}  // namespace

ProbeReport conjecture_probe_all_serial(int n, std::uint64_t budget, std::uint64_t seed) {
  check_probe_args(n);
  const std::uint64_t chunks = (budget + kChunk - 1) / kChunk;
  std::vector<ChunkTally> tallies;
  for (std::uint64_t c = 0; c < chunks; ++c) tallies.push_back(run_chunk(n, seed, c, std::min(kChunk, budget - c * kChunk)));
  return assemble(n, budget, seed, tallies);
}

ProbeReport conjecture_probe_all(int n, std::uint64_t budget, std::uint64_t seed, int jobs) {
  check_probe_args(n);
  const std::uint64_t chunks = (budget + kChunk - 1) / kChunk;
  std::vector<ChunkTally> tallies(chunks);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::uint64_t c = 0; c < chunks; ++c) tallies[c] = run_chunk(n, seed, c, std::min(kChunk, budget - c * kChunk));
  return assemble(n, budget, seed, tallies);
}

ProbeBucket conjecture_probe(const DCGraph& g, std::uint64_t budget, std::uint64_t seed, int jobs) {
  if (!g.connected()) throw DisconnectedGraphError(g);
  ProbeReport all = conjecture_probe_all(g.n(), budget, seed, jobs);
  for (ProbeBucket& b : all.buckets) {
    if (b.graph == g) return std::move(b);
  }
  throw std::logic_error("connected graph missing from the probe buckets");
}

template CyclicOrder jump_order(const Params<double>&);
template CyclicOrder jump_order(const Params<Rational>&);
template CyclicOrder jump_order_from_phases(const Params<double>&);
template CyclicOrder jump_order_from_phases(const Params<Rational>&);

}  // namespace lbm
