#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "lbm/regions.hpp"
#include "support.hpp"

using namespace lbm;
using lbm::test::rat;

namespace {

Params<Rational> fig1() { return Params<Rational>({rat(3, 2), rat(5, 2)}, {rat(1, 2), rat(3, 2)}); }

std::vector<DCGraph> regions_containing(const Params<Rational>& p) {
  std::vector<DCGraph> out;
  for (const DCGraph& g : enumerate_dc(p.n())) {
    if (in_region(g, p)) out.push_back(g);
  }
  return out;
}

}  // namespace

TEST_CASE("classification examples") {
  const RegionReport<Rational> r = classify(fig1());
  CHECK(r.graph == DCGraph::complete(2));
  CHECK(r.dyck.word() == "++--");
  CHECK(r.speed == rat(8, 9));
  CHECK(r.verified);
  CHECK(r.boundary_flags.empty());

  const Params<Rational> wall({rat(1), rat(2), rat(3)}, {rat(1), rat(1), rat(1)});
  const RegionReport<Rational> w = classify(wall);
  CHECK(w.graph == DCGraph::line(3));
  CHECK(w.boundary_flags == EdgeSet{Edge{1, 3}});
  CHECK_FALSE(w.ambiguous);
  const RegionReport<double> wf = classify(to_float(wall));
  CHECK(wf.ambiguous);

  const Params<Rational> loose({rat(3, 10), rat(1)}, {rat(9, 10), rat(1, 10)});
  const RegionReport<Rational> e = classify(loose);
  CHECK(e.graph == DCGraph::empty(2));
  CHECK(e.speed == 3);
}

TEST_CASE("exactly one region contains a generic point") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 150; ++k) {
    const Params<Rational> p = lbm::test::random_exact_params(rng, 1 + k % 5);
    const std::vector<DCGraph> hits = regions_containing(p);
    REQUIRE(hits.size() == 1u);
    const RegionReport<Rational> r = classify(p);
    CHECK(r.graph == hits[0]);
    CHECK(r.graph_id == canonical_index(hits[0]));
    CHECK(r.z == solve_system(hits[0], p));
    CHECK(r.speed == speed(hits[0], p));

    const RegionReport<double> f = classify(to_float(p));
    if (!f.ambiguous) CHECK(f.graph == r.graph);
  }
}

TEST_CASE("boundary gaps") {
  const DCGraph k2 = DCGraph::complete(2);
  const BoundaryGap<Rational> g = boundary_gap(k2, fig1(), Edge{1, 2});
  CHECK(g.gap > 0);
  CHECK(g.gap == rat(5, 8));
  CHECK(g.rescaled > 0);
  CHECK_THROWS_AS(boundary_gap(DCGraph::line(3), fig1(), Edge{1, 2}), std::invalid_argument);

  std::mt19937_64 rng(12);
  for (int k = 0; k < 50; ++k) {
    const Params<Rational> p = lbm::test::random_exact_params(rng, 2 + k % 4);
    const RegionReport<Rational> r = classify(p);
    for (const Edge& e : maximal_edges(r.graph)) CHECK(boundary_gap(r.graph, p, e).gap > 0);
    for (const Edge& e : addable_edges(r.graph)) {
      const BoundaryGap<Rational> b = boundary_gap(r.graph, p, e);
      CHECK(b.gap <= 0);
      CHECK(sgn(b.gap) == sgn(b.rescaled));
    }
  }
}

TEST_CASE("solutions agree across adjacent walls") {
  // a = (1,3), p = (1,1) lies on the K2/empty wall.
  const Params<Rational> p({rat(1), rat(3)}, {rat(1), rat(1)});
  CHECK(check_continuity(p, DCGraph::complete(2), DCGraph::empty(2), rat(0)));
  CHECK_FALSE(check_continuity(fig1(), DCGraph::complete(2), DCGraph::empty(2), rat(0)));

  const Params<Rational> wall({rat(1), rat(2), rat(3)}, {rat(1), rat(1), rat(1)});
  CHECK(check_continuity(wall, DCGraph::line(3), DCGraph::complete(3), rat(0)));
  CHECK_THROWS_AS(check_continuity(wall, DCGraph::empty(3), DCGraph::complete(3), rat(0)), std::invalid_argument);

  // Move onto a random wall by bisection in exact arithmetic, then compare.
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int k = 0; k < 40; ++k) {
    const Params<Rational> p0 = lbm::test::random_exact_params(rng, 3);
    const Params<Rational> p1 = lbm::test::random_exact_params(rng, 3);
    const DCGraph g0 = classify(p0).graph, g1 = classify(p1).graph;
    if (g0 == g1 || !regions_adjacent(g0, g1).adjacent) continue;
    std::vector<Rational> a(3), q(3);
    Rational lo(0), hi(1);
    for (int it = 0; it < 60; ++it) {
      const Rational mid = (lo + hi) / 2;
      for (int i = 0; i < 3; ++i) {
        a[static_cast<std::size_t>(i)] = p0.a(i + 1) + mid * (p1.a(i + 1) - p0.a(i + 1));
        q[static_cast<std::size_t>(i)] = p0.p(i + 1) + mid * (p1.p(i + 1) - p0.p(i + 1));
      }
      (classify(Params<Rational>(a, q)).graph == g0 ? lo : hi) = mid;
    }
    const Params<double> near = to_float(Params<Rational>(a, q));
    CHECK(check_continuity(near, g0, g1, 1e-12));
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("axis parsing") {
  const SweepAxis<Rational> ax = parse_axis<Rational>("p1=0.01:0.99:0.01");
  CHECK(ax.name == "p1");
  CHECK(ax.count == 99);
  CHECK(ax.value(98) == rat(99, 100));
  const SweepAxis<double> one = parse_axis<double>("a1=0.5:0.5:0.1");
  CHECK(one.count == 1);
  CHECK_THROWS_AS(parse_axis<double>("p1=0.1:0.2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis<double>("p1=0.1:x:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis<double>("p1=0.1:0.2:0"), std::invalid_argument);
}

TEST_CASE("sweeps") {
  SweepSpec<double> spec;
  spec.n = 2;
  spec.fixed = {{"a1", 0.3}, {"a2", 1.0}};
  spec.p_total = 1.0;
  spec.axes.push_back(parse_axis<double>("p1=0.01:0.99:0.01"));
  const auto serial = sweep_serial(spec);
  CHECK(serial.size() == 99u);
  const auto parallel = sweep_parallel(spec, 4);
  REQUIRE(parallel.size() == serial.size());
  int k2 = 0, empty = 0;
  for (std::size_t k = 0; k < serial.size(); ++k) {
    REQUIRE(serial[k].report.has_value());
    REQUIRE(parallel[k].report.has_value());
    CHECK(serial[k].coords == parallel[k].coords);
    CHECK(serial[k].report->graph == parallel[k].report->graph);
    CHECK(serial[k].report->speed == parallel[k].report->speed);
    (serial[k].report->graph == DCGraph::complete(2) ? k2 : empty) += 1;
  }
  CHECK(k2 + empty == 99);
  CHECK(k2 > 0);
  CHECK(empty > 0);

  std::ostringstream csv;
  write_sweep_csv(csv, spec, serial);
  CHECK(csv.str().rfind("p1,graph_id,dyck,speed,on_wall,error\n", 0) == 0);

  SweepSpec<double> bad = spec;
  bad.axes[0] = parse_axis<double>("p1=0.5:1.5:0.5");
  const auto rows = sweep_serial(bad);
  CHECK(rows.size() == 3u);
  CHECK(rows[0].error.empty());
  CHECK_FALSE(rows[2].error.empty());

  SweepSpec<double> unknown = spec;
  unknown.axes[0] = parse_axis<double>("q1=0.1:0.2:0.1");
  CHECK_THROWS_AS(sweep_params(unknown, {0}), std::invalid_argument);

  SweepSpec<Rational> grid;
  grid.n = 2;
  grid.fixed = {{"a2", rat(1)}, {"p2", rat(1)}};
  grid.axes.push_back(parse_axis<Rational>("a1=0.1:0.9:0.2"));
  grid.axes.push_back(parse_axis<Rational>("p1=0.5:2:0.5"));
  const auto g = sweep_serial(grid);
  CHECK(g.size() == 20u);
  CHECK(g[1].coords == std::vector<Rational>{rat(1, 10), rat(1)});
  const auto gp = sweep_parallel(grid, 3);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(g[k].report->graph == gp[k].report->graph);
}
