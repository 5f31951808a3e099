#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lbm/params.hpp"

namespace lbm {

enum class EventKind { CursorJump, SignCrossing };

const char* to_string(EventKind kind);

/// One discrete event of either model.
///
/// For a cursor jump, `index` is the cursor and `agent` the bin it lands in.
/// For a sign crossing, `index` is the sign (located at a_index) and `agent`
/// the car that reached it.
template <Scalar S>
struct Event {
  S time;
  EventKind kind;
  int index;
  long long agent;
};

template <Scalar S>
using EventLog = std::vector<Event<S>>;

/// Window of the car model.
///
/// Cars are indexed by integers; a smaller index means further down the road.
/// Only cars with position in (0, a_N) are stored: cars lead, lead+1, ... with
/// strictly decreasing positions. Every car before `lead` is at or beyond a_N
/// (its exact position never matters again) and every car from zero_car() on
/// sits at 0.
template <Scalar S>
struct CarConfig {
  long long lead = 0;
  std::vector<S> positions;

  long long zero_car() const { return lead + static_cast<long long>(positions.size()); }

  /// Position of car k, or nullopt when it is at or beyond a_N.
  std::optional<S> position(long long k) const;

  /// Throws std::invalid_argument unless positions are strictly decreasing in (0, a_N).
  void validate(const Params<S>& params) const;

  friend bool operator==(const CarConfig&, const CarConfig&) = default;
};

/// Bin window of the liquid bin model.
///
/// volumes[0] is the front bin, volumes[1] the bin to its left, and so on.
/// All stored volumes are positive and they add up to at least a_N (up to
/// rounding in floating mode); deeper bins never influence a cursor. In canonical form the stored volumes add up
/// to exactly a_N: the deepest bin keeps only the liquid that lies within the
/// first a_N units counted from the right.
template <Scalar S>
struct BinConfig {
  long long front = 0;
  std::vector<S> volumes;

  long long deepest() const { return front - static_cast<long long>(volumes.size()) + 1; }
  /// Volume of bin k (0 right of the front; deeper than the window is unknown, reported as nullopt).
  std::optional<S> volume(long long k) const;

  /// Throws std::invalid_argument on non-positive volumes or too little liquid.
  void validate(const Params<S>& params) const;
  /// Trims bins that hold no liquid of the first a_N units.
  BinConfig canonical(const Params<S>& params) const;

  friend bool operator==(const BinConfig&, const BinConfig&) = default;
};

/// Car k sits at the total volume of bins with index >= k.
template <Scalar S>
CarConfig<S> sigma(const BinConfig<S>& x, const Params<S>& params);

/// Canonical bin window whose image under sigma is y.
template <Scalar S>
BinConfig<S> sigma_inverse(const CarConfig<S>& y, const Params<S>& params);

/// c_i = max{ m : sum_{k >= m} x_k >= a_i }, for i = 1..N.
template <Scalar S>
std::vector<long long> cursors(const BinConfig<S>& x, const Params<S>& params);

/// Speed of car k: q of the greatest sign its predecessor has reached.
template <Scalar S>
S car_speed(const CarConfig<S>& y, const Params<S>& params, long long k);

/// Index of the greatest sign at or below `position` (0 when below a_1).
template <Scalar S>
int sign_index(const Params<S>& params, const S& position);

struct Crossing {
  long long car;
  int sign;
  friend bool operator==(const Crossing&, const Crossing&) = default;
};

template <Scalar S>
struct NextEvent {
  S time;
  std::vector<Crossing> crossings;
};

/// First time at which some car reaches a sign under the current speeds.
template <Scalar S>
NextEvent<S> next_event_time(const CarConfig<S>& y, const Params<S>& params);

template <Scalar S>
struct CarStep {
  CarConfig<S> config;
  EventLog<S> events;
};

/// Runs the car model for time t. Simultaneous crossings are applied as one
/// batch before speeds are recomputed.
template <Scalar S>
CarStep<S> step_cars(const CarConfig<S>& y, const Params<S>& params, const S& t);

template <Scalar S>
struct BinStep {
  BinConfig<S> config;
  EventLog<S> events;
};

struct BinEvolveOptions {
  /// Drop bins outside the first a_N units after each event and at the end.
  bool trim = true;
};

/// Runs the liquid bin model for time t by tracking cursors directly.
template <Scalar S>
BinStep<S> evolve_bins(const BinConfig<S>& x, const Params<S>& params, const S& t, BinEvolveOptions options = {});

/// Configurations at each of the given nondecreasing times.
template <Scalar S>
std::vector<CarConfig<S>> car_snapshots(const CarConfig<S>& y, const Params<S>& params, const std::vector<S>& times);

/// Trace CSV with header time,kind,index,location. For sign crossings the
/// location is the sign position a_index; for cursor jumps it is the bin.
template <Scalar S>
void write_trace_csv(std::ostream& out, const EventLog<S>& events, const Params<S>& params);

}  // namespace lbm
