#include "lbm/regions.hpp"

#include <omp.h>

#include <algorithm>
#include <deque>
#include <ostream>
#include <set>
#include <stdexcept>

#include "lbm/stationary.hpp"

namespace lbm {

namespace {

std::string edge_text(const Edge& e) { return "(" + std::to_string(e.i) + "," + std::to_string(e.j) + ")"; }

template <Scalar S>
bool near_zero(const S& gap, const S& scale) {
  if constexpr (is_exact_v<S>) {
    return gap == 0;
  } else {
    return std::fabs(gap) <= kWallEpsilon * std::fabs(scale);
  }
}

template <Scalar S>
bool inequalities_hold(const DCGraph& g, const std::vector<S>& z) {
  for (const Edge& e : maximal_edges(g)) {
    if (!(z[0] > span_sum(z, e.i, e.j))) return false;
  }
  for (const Edge& e : addable_edges(g)) {
    if (!(z[0] <= span_sum(z, e.i, e.j))) return false;
  }
  return true;
}

template <Scalar S>
EdgeSet vanishing_gaps(const DCGraph& g, const std::vector<S>& z) {
  EdgeSet flags;
  for (const EdgeSet& family : {maximal_edges(g), addable_edges(g)}) {
    for (const Edge& e : family) {
      if (near_zero(S(z[0] - span_sum(z, e.i, e.j)), z[0])) flags.push_back(e);
    }
  }
  std::sort(flags.begin(), flags.end());
  return flags;
}

template <Scalar S>
RegionReport<S> make_report(const DCGraph& g, const Params<S>& params) {
  std::vector<S> z = solve_system(g, params);
  S v = 1 / z[0];
  const bool ok = inequalities_hold(g, z);
  EdgeSet flags = vanishing_gaps(g, z);
  return RegionReport<S>{g, dc_to_dyck(g), canonical_index(g), std::move(z), std::move(v), ok, std::move(flags), false};
}

}  // namespace

template <Scalar S>
bool in_region(const DCGraph& g, const Params<S>& params) {
  return inequalities_hold(g, solve_system(g, params));
}

template <Scalar S>
RegionReport<S> classify(const Params<S>& params) {
  if constexpr (is_exact_v<S>) {
    const DCGraph proposal = graph_from_profile(fixed_point_solve(params).profile.z);
    // The certified profile is the stationary one, so the strict inequalities
    // on it define the region graph directly.
    RegionReport<S> report = make_report(proposal, params);
    if (!report.verified) throw std::logic_error("exact classification failed to verify its own graph");
    return report;
  } else {
    const DCGraph proposal = propose_graph(params);
    std::deque<DCGraph> queue{proposal};
    std::set<DCGraph> seen{proposal};
    while (!queue.empty()) {
      const DCGraph g = queue.front();
      queue.pop_front();
      RegionReport<S> report = make_report(g, params);
      if (report.verified) {
        report.ambiguous = !report.boundary_flags.empty();
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
    // Rounding defeats every candidate: report the proposal as undecided.
    RegionReport<S> report = make_report(proposal, params);
    report.ambiguous = true;
    return report;
  }
}

template <Scalar S>
BoundaryGap<S> boundary_gap(const DCGraph& g, const Params<S>& params, const Edge& e) {
  const EdgeSet m = maximal_edges(g);
  const EdgeSet big_m = addable_edges(g);
  if (std::find(m.begin(), m.end(), e) == m.end() && std::find(big_m.begin(), big_m.end(), e) == big_m.end()) {
    throw std::invalid_argument(edge_text(e) + " is neither a maximal nor an addable edge of the graph");
  }
  const std::vector<S> z = solve_system(g, params);
  S gap = z[0] - span_sum(z, e.i, e.j);
  S rescaled = gap / gap_denominator(g, params, e.i, e.j);
  return BoundaryGap<S>{std::move(gap), std::move(rescaled)};
}

template <Scalar S>
bool check_continuity(const Params<S>& params, const DCGraph& g1, const DCGraph& g2, const S& tol) {
  if (!(g1 == g2) && !regions_adjacent(g1, g2).adjacent) {
    throw std::invalid_argument("regions of " + dc_to_dyck(g1).word() + " and " + dc_to_dyck(g2).word() +
                                " are not adjacent");
  }
  const std::vector<S> z1 = solve_system(g1, params);
  const std::vector<S> z2 = solve_system(g2, params);
  for (std::size_t i = 0; i < z1.size(); ++i) {
    if (abs_value(S(z1[i] - z2[i])) > tol) return false;
  }
  return true;
}

template <Scalar S>
SweepAxis<S> parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("axis '" + text + "' is not of the form name=from:to:step");
  SweepAxis<S> axis;
  axis.name = text.substr(0, eq);
  const std::string range = text.substr(eq + 1);
  const auto c1 = range.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : range.find(':', c1 + 1);
  if (c2 == std::string::npos) throw std::invalid_argument("axis '" + text + "' is not of the form name=from:to:step");
  const Rational from = parse_rational(range.substr(0, c1));
  const Rational to = parse_rational(range.substr(c1 + 1, c2 - c1 - 1));
  const Rational step = parse_rational(range.substr(c2 + 1));
  if (!(step > 0)) throw std::invalid_argument("axis '" + text + "' needs a positive step");
  if (to < from) throw std::invalid_argument("axis '" + text + "' ends before it starts");
  const Rational span = (to - from) / step;
  mpz_class steps = span.get_num() / span.get_den();
  axis.count = static_cast<int>(steps.get_si()) + 1;
  axis.from = scalar_from_rational<S>(from);
  axis.step = scalar_from_rational<S>(step);
  return axis;
}

namespace {

// Coordinate name -> (is_a, index).
std::pair<bool, int> coordinate(const std::string& name, int n) {
  if (name.size() < 2 || (name[0] != 'a' && name[0] != 'p')) {
    throw std::invalid_argument("unknown coordinate '" + name + "', expected a<i> or p<i>");
  }
  int idx = 0;
  for (std::size_t k = 1; k < name.size(); ++k) {
    if (name[k] < '0' || name[k] > '9') throw std::invalid_argument("unknown coordinate '" + name + "'");
    idx = idx * 10 + (name[k] - '0');
  }
  if (idx < 1 || idx > n) throw std::invalid_argument("coordinate '" + name + "' outside 1.." + std::to_string(n));
  return {name[0] == 'a', idx};
}

template <Scalar S>
std::size_t grid_size(const SweepSpec<S>& spec) {
  std::size_t total = 1;
  for (const auto& axis : spec.axes) total *= static_cast<std::size_t>(axis.count);
  return total;
}

template <Scalar S>
std::vector<int> unflatten(const SweepSpec<S>& spec, std::size_t flat) {
  std::vector<int> index(spec.axes.size());
  for (std::size_t k = spec.axes.size(); k-- > 0;) {
    const auto count = static_cast<std::size_t>(spec.axes[k].count);
    index[k] = static_cast<int>(flat % count);
    flat /= count;
  }
  return index;
}

template <Scalar S>
SweepRecord<S> evaluate(const SweepSpec<S>& spec, std::size_t flat) {
  const std::vector<int> index = unflatten(spec, flat);
  SweepRecord<S> rec;
  for (std::size_t k = 0; k < index.size(); ++k) rec.coords.push_back(spec.axes[k].value(index[k]));
  try {
    rec.report = classify(sweep_params(spec, index));
  } catch (const std::invalid_argument& e) {
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

template <Scalar S>
Params<S> sweep_params(const SweepSpec<S>& spec, const std::vector<int>& index) {
  const int n = spec.n;
  if (n < 1) throw std::invalid_argument("sweep needs N >= 1");
  if (spec.axes.empty() || spec.axes.size() > 2) throw std::invalid_argument("sweep needs one or two axes");
  std::vector<std::optional<S>> a(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n));
  auto assign = [&](const std::string& name, const S& value) {
    const auto [is_a, i] = coordinate(name, n);
    auto& slot = (is_a ? a : p)[static_cast<std::size_t>(i - 1)];
    if (slot) throw std::invalid_argument("coordinate '" + name + "' given twice");
    slot = value;
  };
  for (const auto& [name, value] : spec.fixed) assign(name, value);
  for (std::size_t k = 0; k < spec.axes.size(); ++k) assign(spec.axes[k].name, spec.axes[k].value(index[k]));
  if (spec.p_total) {
    if (p.back()) throw std::invalid_argument("p" + std::to_string(n) + " is implied by the rate total");
    S rest = *spec.p_total;
    for (int i = 0; i + 1 < n; ++i) {
      if (p[static_cast<std::size_t>(i)]) rest -= *p[static_cast<std::size_t>(i)];
    }
    p.back() = rest;
  }
  std::vector<S> av, pv;
  for (int i = 0; i < n; ++i) {
    if (!a[static_cast<std::size_t>(i)]) throw std::invalid_argument("coordinate a" + std::to_string(i + 1) + " missing");
    if (!p[static_cast<std::size_t>(i)]) throw std::invalid_argument("coordinate p" + std::to_string(i + 1) + " missing");
    av.push_back(*a[static_cast<std::size_t>(i)]);
    pv.push_back(*p[static_cast<std::size_t>(i)]);
  }
  return Params<S>(av, pv);
}

template <Scalar S>
std::vector<SweepRecord<S>> sweep_serial(const SweepSpec<S>& spec) {
  sweep_params(spec, std::vector<int>(spec.axes.size(), 0)).n();  // surface spec errors early
  std::vector<SweepRecord<S>> out;
  const std::size_t total = grid_size(spec);
  out.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) out.push_back(evaluate(spec, flat));
  return out;
}

template <Scalar S>
std::vector<SweepRecord<S>> sweep_parallel(const SweepSpec<S>& spec, int jobs) {
  sweep_params(spec, std::vector<int>(spec.axes.size(), 0)).n();
  const std::size_t total = grid_size(spec);
  std::vector<SweepRecord<S>> out(total);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
  for (std::size_t flat = 0; flat < total; ++flat) out[flat] = evaluate(spec, flat);
  return out;
}

template <Scalar S>
void write_sweep_csv(std::ostream& out, const SweepSpec<S>& spec, const std::vector<SweepRecord<S>>& records) {
  for (const auto& axis : spec.axes) out << axis.name << ',';
  out << "graph_id,dyck,speed,on_wall,error\n";
  for (const auto& rec : records) {
    for (const S& c : rec.coords) out << to_string(c) << ',';
    if (rec.report) {
      const RegionReport<S>& r = *rec.report;
      out << r.graph_id << ',' << r.dyck.word() << ',' << to_string(r.speed) << ',' << (r.boundary_flags.empty() ? 0 : 1)
          << ",\n";
    } else {
      std::string msg = rec.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '"', '\'');
      out << ",,,," << '"' << msg << '"' << '\n';
    }
  }
}

#define LBM_INSTANTIATE(S)                                                                                      \
  template bool in_region(const DCGraph&, const Params<S>&);                                                    \
  template RegionReport<S> classify(const Params<S>&);                                                          \
  template BoundaryGap<S> boundary_gap(const DCGraph&, const Params<S>&, const Edge&);                          \
  template bool check_continuity(const Params<S>&, const DCGraph&, const DCGraph&, const S&);                   \
  template SweepAxis<S> parse_axis(const std::string&);                                                         \
  template Params<S> sweep_params(const SweepSpec<S>&, const std::vector<int>&);                                \
  template std::vector<SweepRecord<S>> sweep_serial(const SweepSpec<S>&);                                       \
  template std::vector<SweepRecord<S>> sweep_parallel(const SweepSpec<S>&, int);                                \
  template void write_sweep_csv(std::ostream&, const SweepSpec<S>&, const std::vector<SweepRecord<S>>&);

LBM_INSTANTIATE(double)
LBM_INSTANTIATE(Rational)

#undef LBM_INSTANTIATE

}  // namespace lbm
