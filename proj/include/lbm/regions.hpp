#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lbm/combinatorics.hpp"
#include "lbm/linear_system.hpp"
#include "lbm/params.hpp"

namespace lbm {

/// Relative distance below which a floating gap counts as zero.
inline constexpr double kWallEpsilon = 1e-9;

template <Scalar S>
struct RegionReport {
  DCGraph graph;
  DyckPath dyck;
  std::size_t graph_id = 0;  // position in enumerate_dc(N)
  std::vector<S> z;          // closed-form solution for `graph`
  S speed;
  /// The region inequalities of `graph` hold (exactly, or with floating comparisons).
  bool verified = false;
  /// Wall edges of `graph` (maximal or addable) whose gap vanishes.
  EdgeSet boundary_flags;
  /// Floating mode only: some gap is within kWallEpsilon of zero, so the
  /// region is undecided. Exact mode never sets this.
  bool ambiguous = false;
};

/// z_1 > Z_{i,j} on the maximal edges and z_1 <= Z_{i,j} on the addable ones,
/// with z the closed-form solution for g.
template <Scalar S>
bool in_region(const DCGraph& g, const Params<S>& params);

/// Region of the parameter point. Walls belong to the side without the edge.
template <Scalar S>
RegionReport<S> classify(const Params<S>& params);

template <Scalar S>
struct BoundaryGap {
  S gap;       // z_1 - Z_{i,j}
  S rescaled;  // z_1 - Ztilde_{i,j}, same sign as gap
};

/// Throws std::invalid_argument unless e is a maximal or addable edge of g.
template <Scalar S>
BoundaryGap<S> boundary_gap(const DCGraph& g, const Params<S>& params, const Edge& e);

/// |z_i^{(g1)} - z_i^{(g2)}| <= tol for every i. Throws std::invalid_argument
/// when the graphs differ and their regions are not adjacent.
template <Scalar S>
bool check_continuity(const Params<S>& params, const DCGraph& g1, const DCGraph& g2, const S& tol);

/// One grid axis: name is a coordinate such as "a1" or "p2".
template <Scalar S>
struct SweepAxis {
  std::string name;
  S from;
  S step;
  int count = 1;

  S value(int k) const { return from + step * S(k); }
};

template <Scalar S>
struct SweepSpec {
  int n = 0;
  std::map<std::string, S> fixed;
  std::vector<SweepAxis<S>> axes;  // one or two; the first one varies slowest
  /// When set, p_N = p_total - (p_1 + ... + p_{N-1}) and p_N is not a coordinate.
  std::optional<S> p_total;
};

template <Scalar S>
struct SweepRecord {
  std::vector<S> coords;  // axis values, same order as SweepSpec::axes
  std::optional<RegionReport<S>> report;
  std::string error;  // set when the grid point has invalid parameters
};

/// Parses "p1=0.01:0.99:0.005" (inclusive end) into an axis; throws with the token on error.
template <Scalar S>
SweepAxis<S> parse_axis(const std::string& text);

/// Parameters at the given grid indices; throws std::invalid_argument when invalid.
template <Scalar S>
Params<S> sweep_params(const SweepSpec<S>& spec, const std::vector<int>& index);

/// Row-major grid evaluation.
template <Scalar S>
std::vector<SweepRecord<S>> sweep_serial(const SweepSpec<S>& spec);

/// Same records as sweep_serial, points classified on `jobs` OpenMP threads (0 = default).
template <Scalar S>
std::vector<SweepRecord<S>> sweep_parallel(const SweepSpec<S>& spec, int jobs = 0);

/// Header: axis names..., graph_id, dyck, speed, on_wall, error.
template <Scalar S>
void write_sweep_csv(std::ostream& out, const SweepSpec<S>& spec, const std::vector<SweepRecord<S>>& records);

}  // namespace lbm
