#include "lbm/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace lbm {

namespace {

// Floating runs treat a car within this distance of a sign as arrived, so
// that near-simultaneous crossings land in one batch. Exact runs use zero.
template <Scalar S>
S arrival_slack(const Params<S>& params) {
  if constexpr (is_exact_v<S>) {
    return S(0);
  } else {
    return 1e-14 * params.a_last();
  }
}

template <Scalar S>
S time_slack(const S& dt) {
  if constexpr (is_exact_v<S>) {
    return S(0);
  } else {
    return 1e-14 * std::max(dt, 1.0);
  }
}

}  // namespace

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::CursorJump:
      return "cursor-jump";
    case EventKind::SignCrossing:
      return "sign-crossing";
  }
  return "unknown";
}

template <Scalar S>
std::optional<S> CarConfig<S>::position(long long k) const {
  if (k < lead) return std::nullopt;
  if (k >= zero_car()) return S(0);
  return positions[static_cast<std::size_t>(k - lead)];
}

template <Scalar S>
void CarConfig<S>::validate(const Params<S>& params) const {
  for (std::size_t m = 0; m < positions.size(); ++m) {
    const S& x = positions[m];
    if (!(x > 0) || !(x < params.a_last())) {
      throw std::invalid_argument("car " + std::to_string(lead + static_cast<long long>(m)) + " at " + to_string(x) +
                                  " lies outside (0, a_N)");
    }
    if (m > 0 && !(x < positions[m - 1])) {
      throw std::invalid_argument("car positions must strictly decrease with the car index");
    }
  }
}

template <Scalar S>
std::optional<S> BinConfig<S>::volume(long long k) const {
  if (k > front) return S(0);
  if (k < deepest()) return std::nullopt;
  return volumes[static_cast<std::size_t>(front - k)];
}

template <Scalar S>
void BinConfig<S>::validate(const Params<S>& params) const {
  if (volumes.empty()) throw std::invalid_argument("bin window is empty");
  S total(0);
  for (std::size_t m = 0; m < volumes.size(); ++m) {
    if (!(volumes[m] > 0)) {
      throw std::invalid_argument("bin " + std::to_string(front - static_cast<long long>(m)) + " has volume " +
                                  to_string(volumes[m]) + ", expected a positive volume");
    }
    total += volumes[m];
  }
  if (total < params.a_last() - arrival_slack(params)) {
    throw std::invalid_argument("bin window holds " + to_string(total) + " units, fewer than a_N = " +
                                to_string(params.a_last()));
  }
}

template <Scalar S>
BinConfig<S> BinConfig<S>::canonical(const Params<S>& params) const {
  validate(params);
  BinConfig out{front, {}};
  S cum(0);
  for (const S& v : volumes) {
    if (cum + v >= params.a_last()) {
      out.volumes.push_back(S(params.a_last() - cum));
      break;
    }
    cum += v;
    out.volumes.push_back(v);
  }
  return out;
}

template <Scalar S>
CarConfig<S> sigma(const BinConfig<S>& x, const Params<S>& params) {
  x.validate(params);
  std::vector<S> partial;
  S cum(0);
  for (const S& v : x.volumes) {
    cum += v;
    if (cum >= params.a_last()) break;
    partial.push_back(cum);
  }
  CarConfig<S> y;
  y.lead = x.front - static_cast<long long>(partial.size()) + 1;
  y.positions.assign(partial.rbegin(), partial.rend());
  return y;
}

template <Scalar S>
BinConfig<S> sigma_inverse(const CarConfig<S>& y, const Params<S>& params) {
  y.validate(params);
  BinConfig<S> x;
  x.front = y.zero_car() - 1;
  S next(0);
  for (auto it = y.positions.rbegin(); it != y.positions.rend(); ++it) {
    x.volumes.push_back(S(*it - next));
    next = *it;
  }
  x.volumes.push_back(S(params.a_last() - next));
  return x;
}

template <Scalar S>
std::vector<long long> cursors(const BinConfig<S>& x, const Params<S>& params) {
  x.validate(params);
  std::vector<long long> c(static_cast<std::size_t>(params.n()), 0);
  int i = 1;
  S cum(0);
  long long k = x.front;
  for (const S& v : x.volumes) {
    cum += v;
    while (i <= params.n() && cum >= params.a(i)) c[static_cast<std::size_t>(i++ - 1)] = k;
    --k;
  }
  // Rounding may leave the window a hair short of a_N: the deepest bin holds the rest.
  while (i <= params.n()) c[static_cast<std::size_t>(i++ - 1)] = k + 1;
  return c;
}

template <Scalar S>
int sign_index(const Params<S>& params, const S& position) {
  int i = 0;
  while (i < params.n() && params.a(i + 1) <= position) ++i;
  return i;
}

template <Scalar S>
S car_speed(const CarConfig<S>& y, const Params<S>& params, long long k) {
  const std::optional<S> ahead = y.position(k - 1);
  if (!ahead) return params.q_total();
  return params.q(sign_index(params, *ahead));
}

namespace {

// Speeds of the stored cars followed by the first car at 0.
template <Scalar S>
std::vector<S> window_speeds(const CarConfig<S>& y, const Params<S>& params) {
  const std::size_t m = y.positions.size();
  std::vector<S> v(m + 1);
  v[0] = params.q_total();
  for (std::size_t c = 1; c <= m; ++c) v[c] = params.q(sign_index(params, y.positions[c - 1]));
  return v;
}

template <Scalar S>
S window_position(const CarConfig<S>& y, std::size_t c) {
  return c < y.positions.size() ? y.positions[c] : S(0);
}

}  // namespace

template <Scalar S>
NextEvent<S> next_event_time(const CarConfig<S>& y, const Params<S>& params) {
  y.validate(params);
  const std::vector<S> v = window_speeds(y, params);
  std::optional<S> best;
  std::vector<Crossing> who;
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (!(v[c] > 0)) continue;
    const S pos = window_position(y, c);
    const int target = sign_index(params, pos) + 1;
    const S dt = (params.a(target) - pos) / v[c];
    const long long car = y.lead + static_cast<long long>(c);
    if (!best || dt < *best) {
      best = dt;
      who.assign(1, Crossing{car, target});
    } else if (dt == *best) {
      who.push_back(Crossing{car, target});
    }
  }
  // The lead car always moves at q_N, so an event always exists.
  return NextEvent<S>{*best, std::move(who)};
}

template <Scalar S>
CarStep<S> step_cars(const CarConfig<S>& start, const Params<S>& params, const S& t) {
  if (t < 0) throw std::invalid_argument("time must be nonnegative, got " + to_string(t));
  start.validate(params);
  CarStep<S> out{start, {}};
  CarConfig<S>& y = out.config;
  const S slack = arrival_slack(params);
  S now(0);
  S remaining = t;
  std::vector<int> target;
  while (true) {
    const std::vector<S> v = window_speeds(y, params);
    target.assign(v.size(), 0);
    std::optional<S> dt;
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (!(v[c] > 0)) continue;
      const S pos = window_position(y, c);
      target[c] = sign_index(params, pos) + 1;
      const S cand = (params.a(target[c]) - pos) / v[c];
      if (!dt || cand < *dt) dt = cand;
    }
    const bool final_leg = *dt > remaining;
    const S advance = final_leg ? remaining : *dt;
    std::vector<S> moved(v.size());
    for (std::size_t c = 0; c < v.size(); ++c) moved[c] = window_position(y, c) + v[c] * advance;
    now += advance;
    remaining -= advance;
    if (!final_leg) {
      for (std::size_t c = 0; c < v.size(); ++c) {
        if (!(v[c] > 0)) continue;
        const S& sign_pos = params.a(target[c]);
        if (sign_pos - moved[c] <= slack) {
          moved[c] = sign_pos;
          out.events.push_back(Event<S>{now, EventKind::SignCrossing, target[c], y.lead + static_cast<long long>(c)});
        }
      }
    }
    // Rebuild the window: admit the car leaving 0, drop cars that reached a_N.
    CarConfig<S> next{y.lead, {}};
    const std::size_t stored = y.positions.size();
    for (std::size_t c = 0; c < stored; ++c) next.positions.push_back(moved[c]);
    if (moved[stored] > 0) next.positions.push_back(moved[stored]);
    std::size_t gone = 0;
    while (gone < next.positions.size() && next.positions[gone] >= params.a_last()) ++gone;
    next.positions.erase(next.positions.begin(), next.positions.begin() + static_cast<std::ptrdiff_t>(gone));
    next.lead += static_cast<long long>(gone);
    y = std::move(next);
    if (final_leg) break;
  }
  return out;
}

namespace {

// Bin window stored deepest first, with cursors tracked as state.
template <Scalar S>
struct BinWork {
  long long base;
  std::vector<S> vol;
  std::vector<long long> cursor;

  long long front() const { return base + static_cast<long long>(vol.size()) - 1; }
  S& at(long long k) { return vol[static_cast<std::size_t>(k - base)]; }

  S right_of(long long k) const {
    S sum(0);
    for (long long m = k + 1; m <= front(); ++m) sum += vol[static_cast<std::size_t>(m - base)];
    return sum;
  }

  void pour(long long k, const S& amount) {
    if (!(amount > 0)) return;
    while (k > front()) vol.push_back(S(0));
    at(k) += amount;
  }

  void trim(const S& a_last) {
    S cum(0);
    for (long long k = front(); k >= base; --k) {
      const S v = at(k);
      if (cum + v >= a_last) {
        at(k) = a_last - cum;
        vol.erase(vol.begin(), vol.begin() + static_cast<std::ptrdiff_t>(k - base));
        base = k;
        return;
      }
      cum += v;
    }
  }
};

}  // namespace

template <Scalar S>
BinStep<S> evolve_bins(const BinConfig<S>& x, const Params<S>& params, const S& t, BinEvolveOptions options) {
  if (t < 0) throw std::invalid_argument("time must be nonnegative, got " + to_string(t));
  x.validate(params);
  const int n = params.n();
  BinWork<S> w;
  w.base = x.deepest();
  w.vol.assign(x.volumes.rbegin(), x.volumes.rend());
  w.cursor = cursors(x, params);
  if (options.trim) w.trim(params.a_last());

  EventLog<S> events;
  S now(0);
  S remaining = t;
  std::vector<S> due(static_cast<std::size_t>(n));
  while (true) {
    std::optional<S> dt;
    for (int i = 1; i <= n; ++i) {
      const long long ci = w.cursor[static_cast<std::size_t>(i - 1)];
      S inflow(0);
      for (int j = 1; j <= n; ++j) {
        if (w.cursor[static_cast<std::size_t>(j - 1)] >= ci) inflow += params.p(j);
      }
      S gap = params.a(i) - w.right_of(ci);
      if (gap < 0) gap = 0;  // rounding only; exact runs keep gap > 0
      due[static_cast<std::size_t>(i - 1)] = gap / inflow;
      if (!dt || due[static_cast<std::size_t>(i - 1)] < *dt) dt = due[static_cast<std::size_t>(i - 1)];
    }
    const bool final_leg = *dt > remaining;
    const S advance = final_leg ? remaining : *dt;
    for (int j = 1; j <= n; ++j) {
      w.pour(w.cursor[static_cast<std::size_t>(j - 1)] + 1, S(params.p(j) * advance));
    }
    now += advance;
    remaining -= advance;
    if (final_leg) break;
    const S slack = time_slack(*dt);
    for (int i = 1; i <= n; ++i) {
      if (due[static_cast<std::size_t>(i - 1)] - *dt <= slack) {
        const long long landed = ++w.cursor[static_cast<std::size_t>(i - 1)];
        events.push_back(Event<S>{now, EventKind::CursorJump, i, landed});
      }
    }
    if (options.trim) w.trim(params.a_last());
  }
  if (options.trim) w.trim(params.a_last());
  BinStep<S> out;
  out.config.front = w.front();
  out.config.volumes.assign(w.vol.rbegin(), w.vol.rend());
  out.events = std::move(events);
  return out;
}

template <Scalar S>
std::vector<CarConfig<S>> car_snapshots(const CarConfig<S>& y, const Params<S>& params, const std::vector<S>& times) {
  std::vector<CarConfig<S>> out;
  CarConfig<S> current = y;
  S clock(0);
  for (const S& t : times) {
    if (t < clock) throw std::invalid_argument("snapshot times must be nondecreasing");
    current = step_cars(current, params, S(t - clock)).config;
    clock = t;
    out.push_back(current);
  }
  return out;
}

template <Scalar S>
void write_trace_csv(std::ostream& out, const EventLog<S>& events, const Params<S>& params) {
  out << "time,kind,index,location\n";
  for (const Event<S>& e : events) {
    out << to_string(e.time) << ',' << to_string(e.kind) << ',' << e.index << ',';
    if (e.kind == EventKind::SignCrossing) {
      out << to_string(params.a(e.index));
    } else {
      out << e.agent;
    }
    out << '\n';
  }
}

#define LBM_INSTANTIATE(S)                                                                                     \
  template struct CarConfig<S>;                                                                                \
  template struct BinConfig<S>;                                                                                \
  template CarConfig<S> sigma(const BinConfig<S>&, const Params<S>&);                                          \
  template BinConfig<S> sigma_inverse(const CarConfig<S>&, const Params<S>&);                                  \
  template std::vector<long long> cursors(const BinConfig<S>&, const Params<S>&);                              \
  template S car_speed(const CarConfig<S>&, const Params<S>&, long long);                                      \
  template int sign_index(const Params<S>&, const S&);                                                         \
  template NextEvent<S> next_event_time(const CarConfig<S>&, const Params<S>&);                                \
  template CarStep<S> step_cars(const CarConfig<S>&, const Params<S>&, const S&);                              \
  template BinStep<S> evolve_bins(const BinConfig<S>&, const Params<S>&, const S&, BinEvolveOptions);          \
  template std::vector<CarConfig<S>> car_snapshots(const CarConfig<S>&, const Params<S>&, const std::vector<S>&); \
  template void write_trace_csv(std::ostream&, const EventLog<S>&, const Params<S>&);

LBM_INSTANTIATE(double)
LBM_INSTANTIATE(Rational)

#undef LBM_INSTANTIATE

}  // namespace lbm
