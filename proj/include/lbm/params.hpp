#pragma once

#include <span>
#include <vector>

#include "lbm/numeric.hpp"

namespace lbm {

/// Model parameters: volume thresholds a_1 < ... < a_N and pouring rates p_i > 0.
///
/// Accessors are 1-based to match the usual indexing of thresholds. Index 0
/// is a sentinel: a(0) = d(0) = q(0) = p(0) = 0.
template <Scalar S>
class Params {
 public:
  /// Throws std::invalid_argument when N = 0, the sizes differ, some a_i or
  /// p_i is not positive, or a is not strictly increasing.
  Params(std::span<const S> a, std::span<const S> p);
  Params(const std::vector<S>& a, const std::vector<S>& p)
      : Params(std::span<const S>(a), std::span<const S>(p)) {}

  int n() const { return static_cast<int>(a_.size()) - 1; }

  const S& a(int i) const { return a_[static_cast<std::size_t>(i)]; }
  const S& p(int i) const { return p_[static_cast<std::size_t>(i)]; }
  /// d_i = a_i - a_{i-1}.
  const S& d(int i) const { return d_[static_cast<std::size_t>(i)]; }
  /// q_i = p_1 + ... + p_i.
  const S& q(int i) const { return q_[static_cast<std::size_t>(i)]; }

  const S& a_last() const { return a_.back(); }
  const S& q_total() const { return q_.back(); }

  std::vector<S> a_values() const { return {a_.begin() + 1, a_.end()}; }
  std::vector<S> p_values() const { return {p_.begin() + 1, p_.end()}; }

  /// 1 - q_1/q_N, the contraction factor of the stationary recursion.
  double contraction_factor() const;

  /// Same thresholds, rates divided by their sum.
  Params normalized_rates() const;

  /// Drops the last threshold and rate (requires N >= 2).
  Params truncated() const;

  friend bool operator==(const Params& x, const Params& y) { return x.a_ == y.a_ && x.p_ == y.p_; }

 private:
  std::vector<S> a_, p_, d_, q_;
};

/// Exact image of floating parameters (each double is read at its exact binary value).
Params<Rational> to_exact(const Params<double>& params);
Params<double> to_float(const Params<Rational>& params);

extern template class Params<double>;
extern template class Params<Rational>;

}  // namespace lbm
