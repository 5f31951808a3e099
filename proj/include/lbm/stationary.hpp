#pragma once

#include <optional>
#include <vector>

#include "lbm/combinatorics.hpp"
#include "lbm/dynamics.hpp"
#include "lbm/params.hpp"

namespace lbm {

/// Stationary traversal times z_i = t(a_i) - t(a_{i-1}) of the traveling wave.
template <Scalar S>
struct StationaryProfile {
  std::vector<S> z;

  /// Times t(a_1), ..., t(a_N) (0-based vector of partial sums of z).
  std::vector<S> breakpoints() const;
  /// Time between two departures from 0, z_1.
  const S& period() const { return z.front(); }
  S speed() const { return S(1 / z.front()); }
};

template <Scalar S>
struct SolveReport {
  StationaryProfile<S> profile;
  int iterations = 0;
  /// A posteriori bound on the sup distance to the true fixed point (0 when certified exactly).
  double certified_error = 0;
  double contraction_factor = 0;
  bool converged = false;
  /// ||s_{k+1} - s_k|| for each iteration, in double precision.
  std::vector<double> step_norms;
  /// Exact mode: graph whose linear system produced the certified profile.
  std::optional<DCGraph> graph;
};

template <Scalar S>
struct BoundingProfiles {
  std::vector<S> lower;  // slowest admissible car: larger times
  std::vector<S> upper;  // a_i / q_N
};

template <Scalar S>
BoundingProfiles<S> bounding_profiles(const Params<S>& params);

/// A breakpoint vector s(1) < ... < s(N) describes the trajectory
/// y(t) = sum_j p_j (t - s(j) + s(1))_+ of a car leaving 0 at time 0.
template <Scalar S>
S trajectory_position(const std::vector<S>& s, const Params<S>& params, const S& t);

/// Inverse of trajectory_position for x >= 0.
template <Scalar S>
S trajectory_time(const std::vector<S>& s, const Params<S>& params, const S& x);

/// Sup over t >= 0 of |y_1(t) - y_2(t)|, exact on the union of breakpoints.
template <Scalar S>
S trajectory_distance(const std::vector<S>& s1, const std::vector<S>& s2, const Params<S>& params);

/// One step of the stationary recursion: times at which the follower of a
/// car with breakpoints s reaches a_1, ..., a_N. Throws unless s is increasing.
template <Scalar S>
std::vector<S> map_step(const std::vector<S>& s, const Params<S>& params);

/// Graph with edges (i,j) such that map_step(s)(i) - s(j) + s(1) > 0.
template <Scalar S>
DCGraph iteration_graph(const std::vector<S>& s, const Params<S>& params);

/// Graph with edges (i,j) such that z_1 > z_{i+1} + ... + z_j, closed downward
/// to absorb rounding.
template <Scalar S>
DCGraph graph_from_profile(const std::vector<S>& z);

/// sup_i |map_step(s)(i) - s(i)| for s the breakpoints of the profile.
template <Scalar S>
S fixed_point_residual(const StationaryProfile<S>& profile, const Params<S>& params);

/// Graph read off a bounded number of floating iterations from the lower
/// bounding profile. Only a starting point for searches; not certified.
template <Scalar S>
DCGraph propose_graph(const Params<S>& params, int max_iterations = 64);

/// Iterates the stationary recursion from the lower bounding profile.
///
/// Floating mode stops once ||s' - s|| <= tol (1 - lambda) / lambda, which
/// bounds the distance to the fixed point by tol. Exact mode starts from
/// propose_graph, solves the linear system of each graph exactly and keeps the
/// first profile (in Stanley-lattice distance from the proposal) that is an
/// exact fixed point; `iterations` then counts the graphs tried.
/// Throws std::invalid_argument when tol <= 0.
template <Scalar S>
SolveReport<S> fixed_point_solve(const Params<S>& params, double tol = 1e-12);

/// Iterates of map_step starting from s0: s0, s1, ..., s_{k_max}.
template <Scalar S>
std::vector<std::vector<S>> iterate_profiles(const std::vector<S>& s0, const Params<S>& params, int k_max);

/// Cars -K..-1 at y(k z_1) for k = 1..K (all positions below a_N), car 0 at 0.
template <Scalar S>
CarConfig<S> canonical_configuration(const StationaryProfile<S>& profile, const Params<S>& params);

/// Sup distance between the configuration after one period and y shifted by
/// one car index. Cars at or beyond a_N count as sitting at a_N.
template <Scalar S>
S shift_error(const CarConfig<S>& y, const Params<S>& params, const S& period);

/// shift_error over the stationary period is at most tol.
template <Scalar S>
bool verify_stationarity(const CarConfig<S>& y, const Params<S>& params, const S& tol);

/// Distances ||ybar_{k0+k} - y_inf|| for k = 1..k_max, where k0 is the first
/// car of y0 at 0, measured on trajectories rebuilt from simulated crossing times.
template <Scalar S>
std::vector<S> convergence_trace(const CarConfig<S>& y0, const Params<S>& params, int k_max);

/// Constant kappa of the exponential convergence bound d_k <= kappa lambda^k
/// (infinite when N = 1, where lambda = 0 and every d_k with k >= 1 vanishes).
template <Scalar S>
double convergence_constant(const Params<S>& params);

}  // namespace lbm
