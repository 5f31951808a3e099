#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lbm/linear_system.hpp"
#include "support.hpp"

using namespace lbm;
using lbm::test::rat;

namespace {

Params<Rational> fig1() { return Params<Rational>({rat(3, 2), rat(5, 2)}, {rat(1, 2), rat(3, 2)}); }

// Dense Gauss-Jordan on the raw system
//   a_i = sum_{j <= b(i)} p_j (Z_i - Z_j + z_1),  Z_i = z_1 + ... + z_i.
std::vector<Rational> gauss_solve(const DCGraph& g, const Params<Rational>& p) {
  const int n = p.n();
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n + 1)));
  for (int i = 1; i <= n; ++i) {
    auto& row = m[static_cast<std::size_t>(i - 1)];
    for (int j = 1; j <= g.b(i); ++j) {
      // Z_i - Z_j + z_1 as a combination of z_1..z_n
      for (int k = 1; k <= i; ++k) row[static_cast<std::size_t>(k - 1)] += p.p(j);
      for (int k = 1; k <= j; ++k) row[static_cast<std::size_t>(k - 1)] -= p.p(j);
      row[0] += p.p(j);
    }
    row[static_cast<std::size_t>(n)] = p.a(i);
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)] == 0) ++piv;
    std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(c)]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const Rational f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
      for (int k = c; k <= n; ++k) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -= f * m[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
    }
  }
  std::vector<Rational> z;
  for (int i = 0; i < n; ++i) z.push_back(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] / m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);
  return z;
}

// Sum over all increasing paths i -> j of products of edge weights.
Rational paths(const DCGraph& g, const Params<Rational>& p, int i, int j) {
  if (i == j) return rat(1);
  Rational total(0);
  for (int k = i + 1; k <= j; ++k) {
    if (g.has_edge(i, k)) total += gamma(g, p, Edge{i, k}) * paths(g, p, k, j);
  }
  return total;
}

}  // namespace

TEST_CASE("edge weight examples") {
  std::mt19937_64 rng(1);
  for (int n = 2; n <= 5; ++n) {
    const Params<Rational> p = lbm::test::random_exact_params(rng, n);
    const DCGraph line = DCGraph::line(n), full = DCGraph::complete(n);
    for (int i = 1; i < n; ++i) CHECK(gamma(line, p, Edge{i, i + 1}) == p.p(i + 1) / p.q(i));
    for (int j = 2; j <= n; ++j) CHECK(gamma(full, p, Edge{1, j}) == (p.q(n) - p.q(j - 1)) / p.q(1));
  }
  const Params<Rational> ones({rat(1), rat(2), rat(3)}, {rat(1), rat(1), rat(1)});
  CHECK(gamma(DCGraph::complete(3), ones, Edge{2, 3}) == 0);
  CHECK_THROWS_AS(gamma(DCGraph::line(3), ones, Edge{1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(gamma(DCGraph::line(2), ones, Edge{1, 2}), std::invalid_argument);
}

TEST_CASE("path weights match path enumeration and closed forms") {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 5; ++n) {
    const Params<Rational> p = lbm::test::random_exact_params(rng, n);
    for (const DCGraph& g : enumerate_dc(n)) {
      for (int i = 1; i <= n; ++i) {
        CHECK(big_gamma(g, p, i, i) == 1);
        for (int j = i; j <= n; ++j) CHECK(big_gamma(g, p, i, j) == paths(g, p, i, j));
      }
    }
    const DCGraph line = DCGraph::line(n), full = DCGraph::complete(n);
    for (int i = 1; i <= n; ++i) {
      Rational prod(1);
      for (int j = i + 1; j <= n; ++j) {
        prod *= p.p(j) / p.q(j - 1);
        CHECK(big_gamma(line, p, i, j) == prod);
        CHECK(big_gamma(full, p, i, j) == (i == 1 ? (p.q(n) - p.q(j - 1)) / p.q(1) : rat(0)));
      }
    }
  }
  CHECK(big_gamma(DCGraph::empty(2), fig1(), 1, 2) == 0);
  CHECK_THROWS_AS(big_gamma(DCGraph::empty(2), fig1(), 2, 1), std::out_of_range);
  CHECK_THROWS_AS(big_gamma(DCGraph::empty(2), fig1(), 0, 1), std::out_of_range);
}

TEST_CASE("solve examples") {
  CHECK(solve_system(DCGraph::complete(2), fig1()) == std::vector<Rational>{rat(9, 8), rat(1, 2)});
  CHECK(speed(DCGraph::complete(2), fig1()) == rat(8, 9));
  // Vertex 2 is isolated, so z_2 = (d_2 - (q_2 - q_1) z_1) / q_1 = 1, not d_2 / q_1.
  const Params<Rational> p({rat(1), rat(3)}, {rat(1), rat(1)});
  CHECK(solve_system(DCGraph::empty(2), p) == std::vector<Rational>{rat(1), rat(1)});

  // Normalized N = 2: a = (a1, 1), p = (p1, 1 - p1).
  const Params<Rational> n2({rat(3, 5), rat(1)}, {rat(1, 4), rat(3, 4)});
  CHECK(speed(DCGraph::complete(2), n2) == rat(10, 9));
  CHECK(speed(DCGraph::empty(2), n2) == rat(1, 4) / rat(3, 5));
}

TEST_CASE("closed form solves the raw system") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 3; ++rep) {
      const Params<Rational> p = lbm::test::random_exact_params(rng, n);
      for (const DCGraph& g : enumerate_dc(n)) {
        const std::vector<Rational> z = solve_system(g, p);
        CHECK(z == gauss_solve(g, p));
        for (const Rational& r : system_residual(g, p, z)) CHECK(r == 0);
      }
    }
  }
}

TEST_CASE("complete and line graph speed formulas") {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 6; ++n) {
    const Params<Rational> p = lbm::test::random_exact_params(rng, n);
    Rational denom(0);
    for (int j = 1; j <= n; ++j) denom += (p.q(n) - (j > 1 ? p.q(j - 1) : rat(0))) * p.d(j);
    CHECK(speed(DCGraph::complete(n), p) == p.q(n) * p.q(n) / denom);

    Rational num(0), den(0), prod(1);
    for (int j = 0; j < n; ++j) {
      if (j > 0) prod *= p.p(j) / p.q(j);
      num += p.p(j + 1) * prod;
    }
    prod = 1;
    for (int j = 1; j <= n; ++j) {
      prod *= p.p(j) / p.q(j);
      den += p.d(j) * prod;
    }
    CHECK(speed(DCGraph::line(n), p) == num / den);
  }
}

TEST_CASE("vertices outside the reach skip the system") {
  // z_i = d_i / q_i when i has no edge out and (i-1, i) is an edge.
  std::mt19937_64 rng(5);
  const Params<Rational> p = lbm::test::random_exact_params(rng, 5);
  for (const DCGraph& g : enumerate_dc(5)) {
    const std::vector<Rational> z = solve_system(g, p);
    for (int i = 2; i <= 5; ++i) {
      if (g.b(i) == i && g.b(i - 1) == i) CHECK(z[static_cast<std::size_t>(i - 1)] == p.d(i) / p.q(i));
    }
  }
}

TEST_CASE("rescaled span has the sign of the gap") {
  std::mt19937_64 rng(6);
  for (int n = 2; n <= 5; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      const Params<Rational> p = lbm::test::random_exact_params(rng, n);
      for (const DCGraph& g : enumerate_dc(n)) {
        const std::vector<Rational> z = solve_system(g, p);
        for (const Edge& e : lbm::test::all_pairs(n)) {
          const Rational gap = z[0] - span_sum(z, e.i, e.j);
          const Rational den = gap_denominator(g, p, e.i, e.j);
          CHECK(den >= 1);
          // z_1 - Ztilde = gap / den
          CHECK(z[0] - rescaled_span(g, p, e.i, e.j) == gap / den);
        }
      }
    }
  }
}

TEST_CASE("floating and exact agree") {
  std::mt19937_64 rng(7);
  const Params<Rational> p = lbm::test::random_exact_params(rng, 5);
  for (const DCGraph& g : enumerate_dc(5)) {
    const auto ze = solve_system(g, p);
    const auto zf = solve_system(g, to_float(p));
    for (std::size_t k = 0; k < ze.size(); ++k) CHECK(zf[k] == doctest::Approx(to_double(ze[k])).epsilon(1e-13));
  }
}
