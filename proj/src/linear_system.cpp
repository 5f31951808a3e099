#include "lbm/linear_system.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lbm {

namespace {

template <Scalar S>
void check_sizes(const DCGraph& g, const Params<S>& params) {
  if (g.n() != params.n()) {
    throw std::invalid_argument("graph has " + std::to_string(g.n()) + " vertices but there are " +
                                std::to_string(params.n()) + " thresholds");
  }
}

template <Scalar S>
S gamma_unchecked(const DCGraph& g, const Params<S>& params, int i, int j) {
  return (params.q(g.b(i)) - params.q(std::max(j - 1, g.b(i - 1)))) / params.q(g.b(i - 1));
}

// d_j / q_{b(j-1)} and (q_{b(j)} - q_{b(j-1)}) / q_{b(j-1)}, 1-based.
template <Scalar S>
struct Coefficients {
  std::vector<S> u, w;
};

template <Scalar S>
Coefficients<S> coefficients(const DCGraph& g, const Params<S>& params) {
  const int n = params.n();
  Coefficients<S> c{std::vector<S>(static_cast<std::size_t>(n + 1)), std::vector<S>(static_cast<std::size_t>(n + 1))};
  for (int j = 1; j <= n; ++j) {
    const S& below = params.q(g.b(j - 1));
    c.u[static_cast<std::size_t>(j)] = params.d(j) / below;
    c.w[static_cast<std::size_t>(j)] = (params.q(g.b(j)) - below) / below;
  }
  return c;
}

}  // namespace

template <Scalar S>
S gamma(const DCGraph& g, const Params<S>& params, const Edge& e) {
  check_sizes(g, params);
  if (!g.has_edge(e)) {
    throw std::invalid_argument("(" + std::to_string(e.i) + "," + std::to_string(e.j) + ") is not an edge of the graph");
  }
  return gamma_unchecked(g, params, e.i, e.j);
}

template <Scalar S>
std::vector<std::vector<S>> big_gamma_table(const DCGraph& g, const Params<S>& params) {
  check_sizes(g, params);
  const int n = params.n();
  std::vector<std::vector<S>> t(static_cast<std::size_t>(n + 1), std::vector<S>(static_cast<std::size_t>(n + 1), S(0)));
  for (int i = n; i >= 1; --i) {
    auto& row = t[static_cast<std::size_t>(i)];
    row[static_cast<std::size_t>(i)] = 1;
    for (int h = i + 1; h <= g.b(i); ++h) {
      const S weight = gamma_unchecked(g, params, i, h);
      if (weight == 0) continue;
      const auto& next = t[static_cast<std::size_t>(h)];
      for (int j = h; j <= n; ++j) row[static_cast<std::size_t>(j)] += weight * next[static_cast<std::size_t>(j)];
    }
  }
  return t;
}

template <Scalar S>
S big_gamma(const DCGraph& g, const Params<S>& params, int i, int j) {
  if (i < 1 || j < i || j > params.n()) {
    throw std::out_of_range("Gamma index (" + std::to_string(i) + "," + std::to_string(j) + ") outside 1 <= i <= j <= " +
                            std::to_string(params.n()));
  }
  return big_gamma_table(g, params)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

template <Scalar S>
std::vector<S> solve_system(const DCGraph& g, const Params<S>& params) {
  const auto t = big_gamma_table(g, params);
  const Coefficients<S> c = coefficients(g, params);
  const int n = params.n();
  std::vector<S> head(static_cast<std::size_t>(n + 1), S(0)), tail(static_cast<std::size_t>(n + 1), S(0));
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      const S& gij = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (gij == 0) continue;
      head[static_cast<std::size_t>(i)] += gij * c.u[static_cast<std::size_t>(j)];
      tail[static_cast<std::size_t>(i)] += gij * c.w[static_cast<std::size_t>(j)];
    }
  }
  std::vector<S> z(static_cast<std::size_t>(n));
  z[0] = head[1] / (1 + tail[1]);
  for (int i = 2; i <= n; ++i) {
    z[static_cast<std::size_t>(i - 1)] = head[static_cast<std::size_t>(i)] - z[0] * tail[static_cast<std::size_t>(i)];
  }
  return z;
}

template <Scalar S>
S speed(const DCGraph& g, const Params<S>& params) {
  return 1 / solve_system(g, params)[0];
}

template <Scalar S>
std::vector<S> system_residual(const DCGraph& g, const Params<S>& params, const std::vector<S>& z) {
  check_sizes(g, params);
  const int n = params.n();
  if (static_cast<int>(z.size()) != n) throw std::invalid_argument("z has the wrong length");
  std::vector<S> prefix(static_cast<std::size_t>(n + 1), S(0));
  for (int i = 1; i <= n; ++i) prefix[static_cast<std::size_t>(i)] = prefix[static_cast<std::size_t>(i - 1)] + z[static_cast<std::size_t>(i - 1)];
  std::vector<S> r(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    S row = params.a(i);
    for (int j = 1; j <= g.b(i); ++j) {
      row -= params.p(j) * (prefix[static_cast<std::size_t>(i)] - prefix[static_cast<std::size_t>(j)] + z[0]);
    }
    r[static_cast<std::size_t>(i - 1)] = row;
  }
  return r;
}

template <Scalar S>
S span_sum(const std::vector<S>& z, int i, int j) {
  S sum(0);
  for (int k = i + 1; k <= j; ++k) sum += z[static_cast<std::size_t>(k - 1)];
  return sum;
}

template <Scalar S>
S gap_denominator(const DCGraph& g, const Params<S>& params, int i, int j) {
  const auto t = big_gamma_table(g, params);
  const Coefficients<S> c = coefficients(g, params);
  S den(1);
  for (int k = i + 1; k <= j; ++k) {
    for (int l = k; l <= params.n(); ++l) den += t[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] * c.w[static_cast<std::size_t>(l)];
  }
  return den;
}

template <Scalar S>
S rescaled_span(const DCGraph& g, const Params<S>& params, int i, int j) {
  const auto t = big_gamma_table(g, params);
  const Coefficients<S> c = coefficients(g, params);
  S num(0), den(1);
  for (int k = i + 1; k <= j; ++k) {
    for (int l = k; l <= params.n(); ++l) {
      const S& gkl = t[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      num += gkl * c.u[static_cast<std::size_t>(l)];
      den += gkl * c.w[static_cast<std::size_t>(l)];
    }
  }
  return num / den;
}

#define LBM_INSTANTIATE(S)                                                                                  \
  template S gamma(const DCGraph&, const Params<S>&, const Edge&);                                          \
  template std::vector<std::vector<S>> big_gamma_table(const DCGraph&, const Params<S>&);                   \
  template S big_gamma(const DCGraph&, const Params<S>&, int, int);                                         \
  template std::vector<S> solve_system(const DCGraph&, const Params<S>&);                                   \
  template S speed(const DCGraph&, const Params<S>&);                                                       \
  template std::vector<S> system_residual(const DCGraph&, const Params<S>&, const std::vector<S>&);         \
  template S span_sum(const std::vector<S>&, int, int);                                                     \
  template S gap_denominator(const DCGraph&, const Params<S>&, int, int);                                   \
  template S rescaled_span(const DCGraph&, const Params<S>&, int, int);

LBM_INSTANTIATE(double)
LBM_INSTANTIATE(Rational)

#undef LBM_INSTANTIATE

}  // namespace lbm
