#include "lbm/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "lbm/linear_system.hpp"

namespace lbm {

namespace {

template <Scalar S>
std::vector<S> partial_sums(const std::vector<S>& z) {
  std::vector<S> s(z.size());
  S acc(0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    acc += z[i];
    s[i] = acc;
  }
  return s;
}

template <Scalar S>
S sup_distance(const std::vector<S>& x, const std::vector<S>& y) {
  S best(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    S diff = abs_value(S(x[i] - y[i]));
    if (diff > best) best = diff;
  }
  return best;
}

template <Scalar S>
void check_breakpoints(const std::vector<S>& s, const Params<S>& params) {
  if (static_cast<int>(s.size()) != params.n()) {
    throw std::invalid_argument("breakpoint vector has " + std::to_string(s.size()) + " entries, expected " +
                                std::to_string(params.n()));
  }
  if (!(s[0] > 0)) throw std::invalid_argument("first breakpoint must be positive, got " + to_string(s[0]));
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) {
      throw std::invalid_argument("breakpoints must increase, got " + to_string(s[i - 1]) + " then " + to_string(s[i]));
    }
  }
}

}  // namespace

template <Scalar S>
std::vector<S> StationaryProfile<S>::breakpoints() const {
  return partial_sums(z);
}

template <Scalar S>
BoundingProfiles<S> bounding_profiles(const Params<S>& params) {
  const int n = params.n();
  BoundingProfiles<S> b;
  b.lower.resize(static_cast<std::size_t>(n));
  b.upper.resize(static_cast<std::size_t>(n));
  b.lower[0] = params.d(1) / params.q(1);
  for (int i = 2; i <= n; ++i) {
    b.lower[static_cast<std::size_t>(i - 1)] = b.lower[static_cast<std::size_t>(i - 2)] + params.d(i) / params.q(i - 1);
  }
  for (int i = 1; i <= n; ++i) b.upper[static_cast<std::size_t>(i - 1)] = params.a(i) / params.q_total();
  return b;
}

template <Scalar S>
S trajectory_position(const std::vector<S>& s, const Params<S>& params, const S& t) {
  S y(0);
  for (int j = 1; j <= params.n(); ++j) {
    S lag = t - s[static_cast<std::size_t>(j - 1)] + s[0];
    if (lag > 0) y += params.p(j) * lag;
  }
  return y;
}

template <Scalar S>
S trajectory_time(const std::vector<S>& s, const Params<S>& params, const S& x) {
  const int n = params.n();
  S y(0);
  for (int k = 1; k <= n; ++k) {
    const S start = s[static_cast<std::size_t>(k - 1)] - s[0];
    if (k == n) return start + (x - y) / params.q(k);
    const S end = s[static_cast<std::size_t>(k)] - s[0];
    S next = y + params.q(k) * (end - start);
    if (next >= x) return start + (x - y) / params.q(k);
    y = next;
  }
  return S(0);  // unreachable: n >= 1
}

template <Scalar S>
S trajectory_distance(const std::vector<S>& s1, const std::vector<S>& s2, const Params<S>& params) {
  S best(0);
  auto probe = [&](const S& t) {
    S diff = abs_value(S(trajectory_position(s1, params, t) - trajectory_position(s2, params, t)));
    if (diff > best) best = diff;
  };
  for (const S& x : s1) probe(S(x - s1[0]));
  for (const S& x : s2) probe(S(x - s2[0]));
  return best;
}

template <Scalar S>
std::vector<S> map_step(const std::vector<S>& s, const Params<S>& params) {
  check_breakpoints(s, params);
  std::vector<S> out(s.size());
  for (int i = 1; i <= params.n(); ++i) out[static_cast<std::size_t>(i - 1)] = trajectory_time(s, params, params.a(i));
  return out;
}

template <Scalar S>
DCGraph iteration_graph(const std::vector<S>& s, const Params<S>& params) {
  const std::vector<S> t = map_step(s, params);
  EdgeSet edges;
  for (int i = 1; i <= params.n(); ++i) {
    for (int j = i + 1; j <= params.n(); ++j) {
      if (t[static_cast<std::size_t>(i - 1)] - s[static_cast<std::size_t>(j - 1)] + s[0] > 0) edges.push_back({i, j});
    }
  }
  return downward_closure(params.n(), edges);
}

template <Scalar S>
DCGraph graph_from_profile(const std::vector<S>& z) {
  const int n = static_cast<int>(z.size());
  EdgeSet edges;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (z[0] > span_sum(z, i, j)) edges.push_back({i, j});
    }
  }
  return downward_closure(n, edges);
}

template <Scalar S>
S fixed_point_residual(const StationaryProfile<S>& profile, const Params<S>& params) {
  const std::vector<S> s = profile.breakpoints();
  return sup_distance(map_step(s, params), s);
}

namespace {

SolveReport<double> solve_float(const Params<double>& params, double tol) {
  SolveReport<double> report;
  const double lambda = params.contraction_factor();
  report.contraction_factor = lambda;
  if (params.n() == 1) {
    report.profile.z = {params.a(1) / params.q(1)};
    report.iterations = 1;
    report.converged = true;
    return report;
  }
  const double threshold = tol * (1 - lambda) / lambda;
  const double estimate = std::ceil(std::log(tol) / std::log(lambda));
  const int cap = 10 * static_cast<int>(std::clamp(estimate, 0.0, 1e7)) + 100;
  std::vector<double> s = bounding_profiles(params).lower;
  for (int it = 1; it <= cap; ++it) {
    std::vector<double> next = map_step(s, params);
    const double norm = sup_distance(next, s);
    report.step_norms.push_back(norm);
    report.iterations = it;
    s = std::move(next);
    if (norm <= threshold) {
      report.converged = true;
      report.certified_error = norm * lambda / (1 - lambda);
      break;
    }
  }
  if (!report.converged) report.certified_error = report.step_norms.back() * lambda / (1 - lambda);
  report.profile.z.resize(s.size());
  report.profile.z[0] = s[0];
  for (std::size_t i = 1; i < s.size(); ++i) report.profile.z[i] = s[i] - s[i - 1];
  return report;
}

const Params<double>& to_float_params(const Params<double>& params) { return params; }
Params<double> to_float_params(const Params<Rational>& params) { return to_float(params); }

bool certifies(const std::vector<Rational>& z, const Params<Rational>& params) {
  for (const Rational& x : z) {
    if (!(x > 0)) return false;
  }
  const std::vector<Rational> s = partial_sums(z);
  return map_step(s, params) == s;
}

SolveReport<Rational> solve_exact(const Params<Rational>& params) {
  const Params<double> approx = to_float(params);
  const DCGraph proposal = propose_graph(approx);

  SolveReport<Rational> report;
  report.contraction_factor = params.contraction_factor();

  // Breadth-first search in the Stanley lattice around the proposed graph.
  std::deque<DCGraph> queue{proposal};
  std::set<DCGraph> seen{proposal};
  while (!queue.empty()) {
    DCGraph g = queue.front();
    queue.pop_front();
    ++report.iterations;
    std::vector<Rational> z = solve_system(g, params);
    if (certifies(z, params)) {
      report.profile.z = std::move(z);
      report.converged = true;
      report.certified_error = 0;
      report.graph = std::move(g);
      return report;
    }
    for (const Edge& e : addable_edges(g)) {
      DCGraph h = with_edge(g, e);
      if (seen.insert(h).second) queue.push_back(std::move(h));
    }
    for (const Edge& e : maximal_edges(g)) {
      DCGraph h = without_edge(g, e);
      if (seen.insert(h).second) queue.push_back(std::move(h));
    }
  }
  throw std::runtime_error("no graph certifies an exact stationary profile");
}

}  // namespace

template <Scalar S>
DCGraph propose_graph(const Params<S>& params, int max_iterations) {
  const Params<double> approx = to_float_params(params);
  std::vector<double> s = bounding_profiles(approx).lower;
  const double floor = 1e-13 * s.back();
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<double> next = map_step(s, approx);
    const double norm = sup_distance(next, s);
    s = std::move(next);
    if (norm <= floor) break;
  }
  std::vector<double> z(s.size());
  z[0] = s[0];
  for (std::size_t i = 1; i < s.size(); ++i) z[i] = s[i] - s[i - 1];
  return graph_from_profile(z);
}

template <Scalar S>
SolveReport<S> fixed_point_solve(const Params<S>& params, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive, got " + to_string(tol));
  if constexpr (is_exact_v<S>) {
    return solve_exact(params);
  } else {
    return solve_float(params, tol);
  }
}

template <Scalar S>
std::vector<std::vector<S>> iterate_profiles(const std::vector<S>& s0, const Params<S>& params, int k_max) {
  std::vector<std::vector<S>> out{s0};
  for (int k = 0; k < k_max; ++k) out.push_back(map_step(out.back(), params));
  return out;
}

template <Scalar S>
CarConfig<S> canonical_configuration(const StationaryProfile<S>& profile, const Params<S>& params) {
  const std::vector<S> s = profile.breakpoints();
  std::vector<S> ahead;
  for (long long k = 1;; ++k) {
    S x = trajectory_position(s, params, S(profile.period() * S(static_cast<long>(k))));
    if (x >= params.a_last()) break;
    ahead.push_back(x);
  }
  CarConfig<S> y;
  y.lead = -static_cast<long long>(ahead.size());
  y.positions.assign(ahead.rbegin(), ahead.rend());
  return y;
}

template <Scalar S>
S shift_error(const CarConfig<S>& y, const Params<S>& params, const S& period) {
  const CarConfig<S> later = step_cars(y, params, period).config;
  auto at = [&](const CarConfig<S>& c, long long k) -> S {
    std::optional<S> x = c.position(k);
    return x ? *x : params.a_last();
  };
  const long long from = std::min(y.lead, later.lead - 1) - 1;
  const long long to = std::max(y.zero_car(), later.zero_car() - 1) + 1;
  S worst(0);
  for (long long k = from; k <= to; ++k) {
    S diff = abs_value(S(at(later, k + 1) - at(y, k)));
    if (diff > worst) worst = diff;
  }
  return worst;
}

template <Scalar S>
bool verify_stationarity(const CarConfig<S>& y, const Params<S>& params, const S& tol) {
  const SolveReport<S> report = fixed_point_solve(params);
  return shift_error(y, params, report.profile.period()) <= tol;
}

template <Scalar S>
std::vector<S> convergence_trace(const CarConfig<S>& y0, const Params<S>& params, int k_max) {
  if (k_max < 1) return {};
  const std::vector<S> stationary = fixed_point_solve(params).profile.breakpoints();
  const long long k0 = y0.zero_car();
  const long long last = k0 + k_max - 1;
  const int n = params.n();
  std::map<long long, std::vector<S>> crossings;
  std::map<long long, int> seen;
  const S chunk = params.a_last() / params.q(1);
  CarConfig<S> current = y0;
  S clock(0);
  while (seen[last] < n) {
    CarStep<S> step = step_cars(current, params, chunk);
    for (const Event<S>& e : step.events) {
      if (e.agent < k0 || e.agent > last) continue;
      auto& times = crossings[e.agent];
      times.resize(static_cast<std::size_t>(n));
      times[static_cast<std::size_t>(e.index - 1)] = clock + e.time;
      ++seen[e.agent];
    }
    current = std::move(step.config);
    clock += chunk;
  }
  std::vector<S> out;
  for (long long pred = k0; pred <= last; ++pred) out.push_back(trajectory_distance(crossings[pred], stationary, params));
  return out;
}

template <Scalar S>
double convergence_constant(const Params<S>& params) {
  if (params.n() == 1) return std::numeric_limits<double>::infinity();
  const BoundingProfiles<S> b = bounding_profiles(params);
  const double qn = to_double(params.q_total());
  const double q1 = to_double(params.q(1));
  return 2 * qn * qn / (qn - q1) * to_double(sup_distance(b.lower, b.upper));
}

#define LBM_INSTANTIATE(S)                                                                                   \
  template struct StationaryProfile<S>;                                                                      \
  template BoundingProfiles<S> bounding_profiles(const Params<S>&);                                          \
  template S trajectory_position(const std::vector<S>&, const Params<S>&, const S&);                         \
  template S trajectory_time(const std::vector<S>&, const Params<S>&, const S&);                             \
  template S trajectory_distance(const std::vector<S>&, const std::vector<S>&, const Params<S>&);            \
  template std::vector<S> map_step(const std::vector<S>&, const Params<S>&);                                 \
  template DCGraph iteration_graph(const std::vector<S>&, const Params<S>&);                                 \
  template DCGraph graph_from_profile(const std::vector<S>&);                                                \
  template S fixed_point_residual(const StationaryProfile<S>&, const Params<S>&);                            \
  template SolveReport<S> fixed_point_solve(const Params<S>&, double);                                       \
  template DCGraph propose_graph(const Params<S>&, int);                                       \
  template std::vector<std::vector<S>> iterate_profiles(const std::vector<S>&, const Params<S>&, int);       \
  template CarConfig<S> canonical_configuration(const StationaryProfile<S>&, const Params<S>&);              \
  template S shift_error(const CarConfig<S>&, const Params<S>&, const S&);                                   \
  template bool verify_stationarity(const CarConfig<S>&, const Params<S>&, const S&);                        \
  template std::vector<S> convergence_trace(const CarConfig<S>&, const Params<S>&, int);                     \
  template double convergence_constant(const Params<S>&);

LBM_INSTANTIATE(double)
LBM_INSTANTIATE(Rational)

#undef LBM_INSTANTIATE

}  // namespace lbm
