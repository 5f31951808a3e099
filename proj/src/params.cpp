#include "lbm/params.hpp"

#include <stdexcept>
#include <string>

namespace lbm {

template <Scalar S>
Params<S>::Params(std::span<const S> a, std::span<const S> p) {
  if (a.empty()) throw std::invalid_argument("at least one threshold is required");
  if (a.size() != p.size()) {
    throw std::invalid_argument("a has " + std::to_string(a.size()) + " entries but p has " +
                                std::to_string(p.size()));
  }
  const std::size_t n = a.size();
  a_.assign(n + 1, S(0));
  p_.assign(n + 1, S(0));
  d_.assign(n + 1, S(0));
  q_.assign(n + 1, S(0));
  for (std::size_t i = 1; i <= n; ++i) {
    a_[i] = a[i - 1];
    p_[i] = p[i - 1];
    if (!(p_[i] > 0)) {
      throw std::invalid_argument("p" + std::to_string(i) + " = " + to_string(p_[i]) + " is not positive");
    }
    d_[i] = a_[i] - a_[i - 1];
    if (!(d_[i] > 0)) {
      throw std::invalid_argument(i == 1 ? "a1 = " + to_string(a_[1]) + " is not positive"
                                         : "a is not increasing at a" + std::to_string(i) + " = " +
                                               to_string(a_[i]));
    }
    q_[i] = q_[i - 1] + p_[i];
  }
}

template <Scalar S>
double Params<S>::contraction_factor() const {
  if constexpr (is_exact_v<S>) {
    Rational r = 1 - q_[1] / q_.back();
    return to_double(r);
  } else {
    return 1.0 - q_[1] / q_.back();
  }
}

template <Scalar S>
Params<S> Params<S>::normalized_rates() const {
  std::vector<S> p = p_values();
  for (S& x : p) x = S(x / q_total());
  return Params(a_values(), p);
}

template <Scalar S>
Params<S> Params<S>::truncated() const {
  if (n() < 2) throw std::invalid_argument("cannot drop the only threshold");
  std::vector<S> a = a_values();
  std::vector<S> p = p_values();
  a.pop_back();
  p.pop_back();
  return Params(a, p);
}

Params<Rational> to_exact(const Params<double>& params) {
  std::vector<Rational> a, p;
  for (int i = 1; i <= params.n(); ++i) {
    a.push_back(exact_from_double(params.a(i)));
    p.push_back(exact_from_double(params.p(i)));
  }
  return Params<Rational>(a, p);
}

Params<double> to_float(const Params<Rational>& params) {
  std::vector<double> a, p;
  for (int i = 1; i <= params.n(); ++i) {
    a.push_back(to_double(params.a(i)));
    p.push_back(to_double(params.p(i)));
  }
  return Params<double>(a, p);
}

template class Params<double>;
template class Params<Rational>;

}  // namespace lbm
