#include "lbm/ibm.hpp"

#include <omp.h>

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "lbm/regions.hpp"
#include "lbm/rng.hpp"

namespace lbm {

void MoveDistribution::validate() const {
  if (support.empty() || support.size() != weights.size()) {
    throw std::invalid_argument("move distribution needs matching, non-empty support and weights");
  }
  double total = 0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] < 1) throw std::invalid_argument("support point " + std::to_string(support[k]) + " is not positive");
    if (k > 0 && support[k] <= support[k - 1]) throw std::invalid_argument("support must be strictly increasing");
    if (!(weights[k] > 0)) throw std::invalid_argument("weight " + lbm::to_string(weights[k]) + " is not positive");
    total += weights[k];
  }
  if (std::fabs(total - 1) > 1e-12) throw std::invalid_argument("weights sum to " + lbm::to_string(total) + ", not 1");
}

std::string MoveDistribution::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (k > 0) s += ';';
    s += std::to_string(support[k]) + ':' + lbm::to_string(weights[k]);
  }
  return s;
}

namespace {

Rational as_rational(double x) { return exact_from_double(x); }
const Rational& as_rational(const Rational& x) { return x; }

}  // namespace

template <Scalar S>
MoveDistribution mu_s(const Params<S>& params, const S& s) {
  const Rational scale = as_rational(s);
  std::map<long long, Rational> atoms;
  for (int i = 1; i <= params.n(); ++i) {
    const Rational x = scale * as_rational(params.a(i));
    mpz_class whole;
    mpz_fdiv_q(whole.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    if (whole < 1) {
      throw std::invalid_argument("s = " + to_string(s) + " is below 1/a1: atom floor(s a" + std::to_string(i) + ") is 0");
    }
    atoms[whole.get_si()] += as_rational(params.p(i)) / as_rational(params.q_total());
  }
  MoveDistribution d;
  for (const auto& [k, w] : atoms) {
    d.support.push_back(k);
    d.weights.push_back(to_double(w));
  }
  d.validate();
  return d;
}

IBMState IBMState::flat(long long max_rank) {
  IBMState st;
  st.counts.push_back(max_rank);
  return st;
}

void IBMState::advance(long long xi, long long max_rank) {
  long long cum = 0;
  std::size_t m = 0;
  while (true) {
    cum += counts[m];
    if (cum >= xi) break;
    ++m;
  }
  if (m == 0) {
    counts.push_front(1);
    ++front;
  } else {
    ++counts[m - 1];
  }
  ++steps;
  // Keep the shortest prefix still holding max_rank particles.
  cum = 0;
  std::size_t keep = 0;
  while (cum < max_rank) cum += counts[keep++];
  counts.resize(keep);
}

IBMEstimate simulate_ibm(const MoveDistribution& dist, std::uint64_t steps, std::uint64_t seed) {
  dist.validate();
  if (steps == 0) throw std::invalid_argument("the IBM needs at least one step");
  std::mt19937_64 rng = make_stream(seed, 0);
  std::discrete_distribution<std::size_t> pick(dist.weights.begin(), dist.weights.end());
  const long long k_max = dist.max_rank();
  IBMState st = IBMState::flat(k_max);
  IBMEstimate est;
  est.burn_in = static_cast<std::uint64_t>(10 * k_max);
  for (std::uint64_t n = 0; n < est.burn_in; ++n) st.advance(dist.support[pick(rng)], k_max);

  est.steps = steps;
  est.batches = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(steps))));
  const std::uint64_t batch_len = steps / est.batches;
  const long long origin = st.front;
  std::vector<double> batch_speed;
  long long batch_start = st.front;
  for (std::uint64_t n = 1; n <= steps; ++n) {
    st.advance(dist.support[pick(rng)], k_max);
    if (batch_len > 0 && n % batch_len == 0 && batch_speed.size() < est.batches) {
      batch_speed.push_back(static_cast<double>(st.front - batch_start) / static_cast<double>(batch_len));
      batch_start = st.front;
    }
  }
  est.front_displacement = st.front - origin;
  est.speed_estimate = static_cast<double>(est.front_displacement) / static_cast<double>(steps);
  if (batch_speed.size() > 1) {
    double mean = 0;
    for (double v : batch_speed) mean += v;
    mean /= static_cast<double>(batch_speed.size());
    double var = 0;
    for (double v : batch_speed) var += (v - mean) * (v - mean);
    var /= static_cast<double>(batch_speed.size() - 1);
    est.ci95 = 1.96 * std::sqrt(var / static_cast<double>(batch_speed.size()));
  }
  return est;
}

ExactIBMSpeed deterministic_ibm_speed(long long k) {
  if (k < 1) throw std::invalid_argument("rank must be positive, got " + std::to_string(k));
  IBMState st = IBMState::flat(k);
  std::map<std::vector<long long>, std::pair<std::uint64_t, long long>> seen;  // shape -> (step, front)
  while (true) {
    std::vector<long long> shape(st.counts.begin(), st.counts.end());
    auto [it, fresh] = seen.emplace(std::move(shape), std::make_pair(st.steps, st.front));
    if (!fresh) {
      ExactIBMSpeed out;
      out.preperiod = it->second.first;
      out.period = st.steps - it->second.first;
      out.speed = Rational(static_cast<long>(st.front - it->second.second), static_cast<unsigned long>(out.period));
      out.speed.canonicalize();
      return out;
    }
    st.advance(k, k);
  }
}

namespace {

HydroRow hydro_row(const Params<double>& normalized, double s, double liquid, std::uint64_t steps, std::uint64_t seed,
                   std::uint64_t stream) {
  HydroRow row;
  row.s = s;
  row.atoms = mu_s(normalized, s);
  row.estimate = simulate_ibm(row.atoms, steps, splitmix64(seed ^ splitmix64(stream)));
  row.s_times_v = s * row.estimate.speed_estimate;
  row.liquid_speed = liquid;
  row.gap = std::fabs(row.s_times_v - liquid);
  return row;
}

void finish(HydroTable& table) {
  table.gaps_monotone = true;
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    if (table.rows[k].gap > table.rows[k - 1].gap) table.gaps_monotone = false;
  }
}

}  // namespace

HydroTable hydrolimit_check_serial(const Params<double>& params, const std::vector<double>& s_values, std::uint64_t steps,
                                   std::uint64_t seed) {
  const Params<double> normalized = params.normalized_rates();
  const double liquid = classify(normalized).speed;
  HydroTable table;
  for (std::size_t k = 0; k < s_values.size(); ++k) table.rows.push_back(hydro_row(normalized, s_values[k], liquid, steps, seed, k));
  finish(table);
  return table;
}

HydroTable hydrolimit_check(const Params<double>& params, const std::vector<double>& s_values, std::uint64_t steps,
                            std::uint64_t seed, int jobs) {
  const Params<double> normalized = params.normalized_rates();
  const double liquid = classify(normalized).speed;
  for (double s : s_values) mu_s(normalized, s);  // reject bad s before spawning threads
  HydroTable table;
  table.rows.resize(s_values.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t k = 0; k < s_values.size(); ++k) table.rows[k] = hydro_row(normalized, s_values[k], liquid, steps, seed, k);
  finish(table);
  return table;
}

template MoveDistribution mu_s(const Params<double>&, const double&);
template MoveDistribution mu_s(const Params<Rational>&, const Rational&);

}  // namespace lbm
