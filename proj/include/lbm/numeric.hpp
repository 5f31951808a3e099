#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>
#include <type_traits>

namespace lbm {

/// Exact arithmetic backend.
using Rational = mpq_class;

/// The two arithmetic backends every numeric routine is instantiated for.
template <typename S>
concept Scalar = std::same_as<S, double> || std::same_as<S, Rational>;

template <Scalar S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

inline double to_double(double x) { return x; }
/// Nearest double (ties to even); mpq_get_d alone truncates.
double to_double(const Rational& x);

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return Rational(abs(x)); }

/// Shortest decimal text that round-trips to the same double.
std::string to_string(double x);
/// "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& x);

/// Parses "9/8", "-3", "0.125", "2.5e-3" as an exact fraction.
/// Decimal notation is read as the exact decimal value, not its binary rounding.
/// Throws std::invalid_argument naming the offending text.
Rational parse_rational(std::string_view text);

/// Same grammar as parse_rational, rounded to the nearest double.
double parse_double(std::string_view text);

/// Exact binary value of a finite double.
Rational exact_from_double(double x);

/// Exact value of the shortest decimal representation of x (1.5 -> 3/2, 0.1 -> 1/10).
Rational decimal_from_double(double x);

template <Scalar S>
S scalar_from_rational(const Rational& r) {
  if constexpr (is_exact_v<S>) {
    return r;
  } else {
    return to_double(r);
  }
}

template <Scalar S>
S parse_scalar(std::string_view text) {
  if constexpr (is_exact_v<S>) {
    return parse_rational(text);
  } else {
    return parse_double(text);
  }
}

}  // namespace lbm
