#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "lbm/ibm.hpp"
#include "lbm/regions.hpp"
#include "support.hpp"

using namespace lbm;
using lbm::test::rat;

namespace {

// Full history of bin counts, indexed by absolute bin.
struct NaiveIBM {
  std::vector<long long> bins;

  explicit NaiveIBM(long long max_rank) : bins{max_rank} {}

  long long front() const { return static_cast<long long>(bins.size()) - 1; }

  void add(long long xi) {
    long long seen = 0;
    for (std::size_t b = bins.size(); b-- > 0;) {
      seen += bins[b];
      if (seen >= xi) {
        if (b + 1 == bins.size()) bins.push_back(0);
        ++bins[b + 1];
        return;
      }
    }
    FAIL("rank beyond the particle count");
  }
};

}  // namespace

TEST_CASE("move distribution from the parameters") {
  const Params<double> p(std::vector<double>{1.5, 2.5}, std::vector<double>{0.5, 1.5});
  const MoveDistribution mu = mu_s(p, 10.0);
  CHECK(mu.support == std::vector<long long>{15, 25});
  CHECK(mu.weights == std::vector<double>{0.25, 0.75});
  CHECK(mu.to_string() == "15:0.25;25:0.75");
  CHECK(mu.max_rank() == 25);

  const Params<Rational> one({rat(3, 7)}, {rat(2)});
  const MoveDistribution unit = mu_s(one, rat(7, 3));
  CHECK(unit.support == std::vector<long long>{1});
  CHECK(unit.weights == std::vector<double>{1.0});

  const Params<double> close(std::vector<double>{1, 1.4}, std::vector<double>{1, 3});
  const MoveDistribution merged = mu_s(close, 2.0);
  CHECK(merged.support == std::vector<long long>{2});
  CHECK(merged.weights == std::vector<double>{1.0});

  CHECK_THROWS_AS(mu_s(p, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((MoveDistribution{{2, 1}, {0.5, 0.5}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((MoveDistribution{{1, 2}, {0.5, 0.6}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((MoveDistribution{{0}, {1.0}}.validate()), std::invalid_argument);
}

TEST_CASE("window state tracks the full history") {
  std::mt19937_64 rng(31);
  for (long long max_rank : {1, 2, 5, 17}) {
    std::uniform_int_distribution<long long> pick(1, max_rank);
    IBMState s = IBMState::flat(max_rank);
    NaiveIBM naive(max_rank);
    for (int step = 0; step < 3000; ++step) {
      const long long xi = pick(rng);
      s.advance(xi, max_rank);
      naive.add(xi);
      REQUIRE(s.front == naive.front());
      // the window holds at least max_rank particles and matches the tail of the history
      long long held = 0;
      for (std::size_t k = 0; k < s.counts.size(); ++k) {
        CHECK(s.counts[k] == naive.bins[naive.bins.size() - 1 - k]);
        held += s.counts[k];
      }
      CHECK(held >= max_rank);
    }
    CHECK(s.steps == 3000u);
  }
}

TEST_CASE("deterministic ranks") {
  CHECK(deterministic_ibm_speed(1).speed == 1);
  for (long long k = 1; k <= 8; ++k) {
    const ExactIBMSpeed e = deterministic_ibm_speed(k);
    CHECK(e.speed == rat(1, k));
    NaiveIBM naive(k);
    for (std::uint64_t t = 0; t < e.preperiod; ++t) naive.add(k);
    const long long start = naive.front();
    const std::uint64_t cycles = 7;
    for (std::uint64_t t = 0; t < cycles * e.period; ++t) naive.add(k);
    CHECK(rat(static_cast<long>(naive.front() - start), static_cast<long>(cycles * e.period)) == e.speed);
  }
  CHECK_THROWS_AS(deterministic_ibm_speed(0), std::invalid_argument);
}

TEST_CASE("monte carlo estimates") {
  const MoveDistribution unit{{1}, {1.0}};
  const IBMEstimate u = simulate_ibm(unit, 1000, 3);
  CHECK(u.speed_estimate == 1.0);
  CHECK(u.front_displacement == 1000);
  CHECK(u.ci95 == 0.0);
  CHECK(u.burn_in == 10u);
  CHECK(u.batches == 31u);

  for (long long k = 2; k <= 6; ++k) {
    const ExactIBMSpeed e = deterministic_ibm_speed(k);
    REQUIRE(e.preperiod <= static_cast<std::uint64_t>(10 * k));
    const IBMEstimate est = simulate_ibm(MoveDistribution{{k}, {1.0}}, 50 * e.period, 9);
    CHECK(rat(static_cast<long>(est.front_displacement), static_cast<long>(est.steps)) == e.speed);
  }

  const MoveDistribution mixed{{3, 7}, {0.4, 0.6}};
  const IBMEstimate a = simulate_ibm(mixed, 20000, 11);
  const IBMEstimate b = simulate_ibm(mixed, 20000, 11);
  CHECK(a.front_displacement == b.front_displacement);
  CHECK(a.ci95 == b.ci95);
  CHECK(a.speed_estimate > 1.0 / 7);
  CHECK(a.speed_estimate <= 1.0);
  CHECK(a.ci95 > 0);
  CHECK_THROWS_AS(simulate_ibm(mixed, 0, 1), std::invalid_argument);
}

TEST_CASE("hydrodynamic table") {
  const Params<double> p(std::vector<double>{1.5, 2.5}, std::vector<double>{0.5, 1.5});
  const std::vector<double> s_values{5, 10, 20};
  const HydroTable serial = hydrolimit_check_serial(p, s_values, 20000, 4);
  const HydroTable parallel = hydrolimit_check(p, s_values, 20000, 4, 3);
  REQUIRE(serial.rows.size() == 3u);
  REQUIRE(parallel.rows.size() == 3u);
  const double liquid = to_double(classify(to_exact(p).normalized_rates()).speed);
  CHECK(liquid == doctest::Approx(4.0 / 9.0));
  for (std::size_t k = 0; k < 3; ++k) {
    const HydroRow& r = serial.rows[k];
    CHECK(r.s == s_values[k]);
    CHECK(r.liquid_speed == doctest::Approx(liquid).epsilon(1e-12));
    CHECK(r.s_times_v == doctest::Approx(r.s * r.estimate.speed_estimate));
    CHECK(r.gap == doctest::Approx(std::fabs(r.s_times_v - r.liquid_speed)));
    CHECK(r.atoms.to_string() == mu_s(p, r.s).to_string());
    CHECK(parallel.rows[k].estimate.front_displacement == r.estimate.front_displacement);
  }
  CHECK(serial.gaps_monotone == parallel.gaps_monotone);
}
