#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "lbm/params.hpp"

namespace lbm {

/// Law of the rank xi of the particle behind which the next particle lands.
struct MoveDistribution {
  std::vector<long long> support;  // distinct, ascending, positive
  std::vector<double> weights;     // positive, summing to 1

  /// Throws std::invalid_argument on a broken invariant.
  void validate() const;
  long long max_rank() const { return support.back(); }
  std::string to_string() const;  // "15:0.25;25:0.75"
};

/// Atoms floor(s a_i) with weights p_i / q_N (rates are normalized first);
/// colliding atoms merge. Floors are taken exactly on the binary values.
/// Throws std::invalid_argument when s a_1 < 1.
template <Scalar S>
MoveDistribution mu_s(const Params<S>& params, const S& s);

/// Window of the infinite bin model: counts[0] is the front bin.
struct IBMState {
  long long front = 0;
  std::deque<long long> counts;
  std::uint64_t steps = 0;

  /// max_rank particles in bin 0.
  static IBMState flat(long long max_rank);
  /// Adds a particle right of the bin holding the xi-th rightmost particle and
  /// drops bins that can no longer be reached.
  void advance(long long xi, long long max_rank);
};

struct IBMEstimate {
  long long front_displacement = 0;  // after burn-in
  std::uint64_t steps = 0;           // measured steps (after burn-in)
  std::uint64_t burn_in = 0;
  std::uint64_t batches = 0;
  double speed_estimate = 0;
  double ci95 = 0;  // half-width from batch means
};

/// Runs burn_in = 10 max_rank steps, then `steps` measured steps from the flat
/// state. Deterministic given the seed. Throws std::invalid_argument when steps = 0.
IBMEstimate simulate_ibm(const MoveDistribution& dist, std::uint64_t steps, std::uint64_t seed);

struct ExactIBMSpeed {
  Rational speed;
  std::uint64_t preperiod = 0;  // steps before the shape first repeats
  std::uint64_t period = 0;     // steps per cycle of shapes
};

/// Speed of the deterministic model with xi = k, found by cycle detection on
/// the window shape seen from the front.
ExactIBMSpeed deterministic_ibm_speed(long long k);

struct HydroRow {
  double s = 0;
  MoveDistribution atoms;
  IBMEstimate estimate;
  double s_times_v = 0;
  double liquid_speed = 0;
  double gap = 0;  // |s_times_v - liquid_speed|
};

struct HydroTable {
  std::vector<HydroRow> rows;
  /// Gaps never increase along the s sequence.
  bool gaps_monotone = false;
};

/// Rescaled IBM speed next to the liquid bin speed for normalized rates.
/// Replica k (the k-th s value) uses RNG stream k of the seed.
HydroTable hydrolimit_check_serial(const Params<double>& params, const std::vector<double>& s_values, std::uint64_t steps,
                                   std::uint64_t seed);
HydroTable hydrolimit_check(const Params<double>& params, const std::vector<double>& s_values, std::uint64_t steps,
                            std::uint64_t seed, int jobs = 0);

}  // namespace lbm
