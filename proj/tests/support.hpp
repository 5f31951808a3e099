#pragma once

// Shared fixtures and brute-force oracles for the test binaries.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lbm/combinatorics.hpp"
#include "lbm/params.hpp"

namespace lbm::test {

inline Rational rat(long num, long den = 1) {
  Rational r(num, static_cast<unsigned long>(den));
  r.canonicalize();
  return r;
}

/// Rational in [1/den, hi] with denominator den.
inline Rational random_rational(std::mt19937_64& rng, long den, long hi) {
  std::uniform_int_distribution<long> k(1, hi * den);
  return rat(k(rng), den);
}

/// Parameters with small-denominator gaps d_i and rates p_i.
inline Params<Rational> random_exact_params(std::mt19937_64& rng, int n, long den = 7, long hi = 4) {
  std::vector<Rational> a, p;
  Rational acc(0);
  for (int i = 0; i < n; ++i) {
    acc += random_rational(rng, den, hi);
    a.push_back(acc);
    p.push_back(random_rational(rng, den, hi));
  }
  return Params<Rational>(a, p);
}

/// Log-uniform gaps and rates in [1/spread, spread].
inline Params<double> random_float_params(std::mt19937_64& rng, int n, double spread = 10) {
  std::uniform_real_distribution<double> u(-std::log(spread), std::log(spread));
  std::vector<double> a, p;
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    acc += std::exp(u(rng));
    a.push_back(acc);
    p.push_back(std::exp(u(rng)));
  }
  return Params<double>(a, p);
}

/// All pairs (i, j), 1 <= i < j <= n.
inline EdgeSet all_pairs(int n) {
  EdgeSet e;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) e.push_back({i, j});
  }
  return e;
}

/// Every subset of E_n closed under nesting, by exhaustive search.
inline std::vector<EdgeSet> brute_force_dc(int n) {
  const EdgeSet pairs = all_pairs(n);
  std::vector<EdgeSet> out;
  for (unsigned long mask = 0; mask < (1UL << pairs.size()); ++mask) {
    EdgeSet chosen;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (mask >> k & 1UL) chosen.push_back(pairs[k]);
    }
    bool closed = true;
    for (const Edge& outer : chosen) {
      for (const Edge& inner : pairs) {
        if (nested_in(inner, outer) && std::find(chosen.begin(), chosen.end(), inner) == chosen.end()) closed = false;
      }
    }
    if (closed) out.push_back(chosen);
  }
  return out;
}

}  // namespace lbm::test
