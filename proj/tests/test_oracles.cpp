#include <doctest.h>

#include <cmath>
#include <vector>

#include "dynsparsify/oracles.hpp"
#include "dynsparsify/rng.hpp"

using namespace dynsparsify;
using namespace dynsparsify::oracles;

namespace {

DynGraph build(std::size_t n, const std::vector<Edge>& edges) {
  DynGraph g(n);
  for (const Edge& e : edges) g.insert_edge(e);
  return g;
}

DynGraph random_graph(Rng& rng, std::size_t n, std::size_t tries, bool bipartite = false) {
  DynGraph g(n);
  for (std::size_t t = 0; t < tries; ++t) {
    NodeId a, b;
    if (bipartite) {
      a = NodeId(rng.below(n / 2));
      b = NodeId(n / 2 + rng.below(n - n / 2));
    } else {
      a = NodeId(rng.below(n));
      b = NodeId(rng.below(n));
    }
    if (a != b && !g.has_edge(Edge(a, b))) g.insert_edge(Edge(a, b));
  }
  return g;
}

}  // namespace

TEST_CASE("matching sizes on fixed graphs") {
  DynGraph tri = build(3, {Edge(0, 1), Edge(1, 2), Edge(0, 2)});
  CHECK(max_matching(tri).size() == 1);
  CHECK(max_fractional_matching(tri) == doctest::Approx(1.5));
  CHECK(max_matching_bruteforce(tri) == 1);
  CHECK(max_fractional_bruteforce(tri) == doctest::Approx(1.5));

  DynGraph path = build(3, {Edge(0, 1), Edge(1, 2)});
  CHECK(max_matching(path).size() == 1);
  CHECK(max_fractional_matching(path) == doctest::Approx(1.0));

  DynGraph c5 = build(5, {Edge(0, 1), Edge(1, 2), Edge(2, 3), Edge(3, 4), Edge(0, 4)});
  CHECK(max_matching(c5).size() == 2);
  CHECK(max_fractional_matching(c5) == doctest::Approx(2.5));

  DynGraph bowtie =
      build(5, {Edge(0, 1), Edge(1, 2), Edge(0, 2), Edge(2, 3), Edge(3, 4), Edge(2, 4)});
  CHECK(max_matching(bowtie).size() == 2);

  std::vector<Edge> petersen;
  for (NodeId i = 0; i < 5; ++i) {
    petersen.emplace_back(i, (i + 1) % 5);
    petersen.emplace_back(i, i + 5);
    petersen.emplace_back(i + 5, 5 + (i + 2) % 5);
  }
  CHECK(max_matching(build(10, petersen)).size() == 5);
}

TEST_CASE("matching result edges form a matching of the stated size") {
  Rng rng(41);
  for (int it = 0; it < 20; ++it) {
    DynGraph g = random_graph(rng, 4 + rng.below(8), 20);
    MatchingResult r = max_matching(g);
        std::vector<int> hit(g.node_count(), 0);
    for (const Edge& e : r.edges) {
      CHECK(g.has_edge(e));
      CHECK(++hit[e.u] == 1);
      CHECK(++hit[e.v] == 1);
    }
  }
}

TEST_CASE("blossom agrees with exhaustive search") {
  Rng rng(7);
  for (int it = 0; it < 50; ++it) {
    DynGraph g = random_graph(rng, 3 + rng.below(10), 4 + rng.below(24));
    CHECK(max_matching(g).size() == max_matching_bruteforce(g));
  }
}

TEST_CASE("double-cover fractional size agrees with half-integral search") {
  Rng rng(8);
  int done = 0;
  while (done < 30) {
    DynGraph g = random_graph(rng, 3 + rng.below(6), 3 + rng.below(10));
    if (g.edge_count() > 12) continue;
    ++done;
    CHECK(max_fractional_matching(g) ==
          doctest::Approx(max_fractional_bruteforce(g)).epsilon(1e-9));
  }
}

TEST_CASE("fractional relaxation sandwich and bipartite equality") {
  Rng rng(9);
  for (int it = 0; it < 30; ++it) {
    DynGraph g = random_graph(rng, 4 + rng.below(9), 3 + rng.below(26));
    double mu = double(max_matching(g).size());
    double muf = max_fractional_matching(g);
    CHECK(muf >= mu - 1e-9);
    CHECK(muf <= 1.5 * mu + 1e-9);
  }
  for (int it = 0; it < 30; ++it) {
    DynGraph g = random_graph(rng, 4 + rng.below(9), 3 + rng.below(26), true);
    CHECK(max_fractional_matching(g) == doctest::Approx(double(max_matching(g).size())));
  }
}

TEST_CASE("scale_down caps every node at its reference weight") {
  WeightFn wp(4), wref(4);
  wp.set(Edge(0, 1), 0.6);
  wp.set(Edge(1, 2), 0.6);  // node 1 carries 1.2
  wp.set(Edge(2, 3), 0.2);
  wref.set(Edge(0, 1), 0.4);
  wref.set(Edge(1, 2), 0.4);
  wref.set(Edge(2, 3), 0.4);
  // node caps: wref(1) = 0.8 < 1.2, so both its edges shrink by 1.2/0.8
  WeightFn out = scale_down(wp, wref);
  CHECK(out.value(Edge(0, 1)) == doctest::Approx(0.4));
  CHECK(out.value(Edge(1, 2)) == doctest::Approx(0.4));
  CHECK(out.value(Edge(2, 3)) == doctest::Approx(0.2));
  for (NodeId v = 0; v < 4; ++v) CHECK(out.node_weight(v) <= wref.node_weight(v) + 1e-12);

  // a node with zero reference weight wipes its incident entries
  WeightFn zref(4);
  zref.set(Edge(0, 1), 0.0);
  WeightFn wiped = scale_down(wp, zref);
  CHECK(wiped.value(Edge(0, 1)) == 0.0);
}

TEST_CASE("approximate maximality checker") {
  DynGraph g = build(4, {Edge(0, 1), Edge(1, 2), Edge(2, 3)});
  WeightFn w(4);
  w.set(Edge(0, 1), 0.3);
  w.set(Edge(1, 2), 0.3);
  w.set(Edge(2, 3), 0.3);
  // every edge sits at the ceiling 0.3
  CHECK(is_approximately_maximal(w, g, 0.1, 0.3));
  // higher ceiling: no edge at ceiling, no saturated endpoint
  CHECK_FALSE(is_approximately_maximal(w, g, 0.1, 0.9));

  WeightFn sat(4);
  sat.set(Edge(0, 1), 0.5);
  sat.set(Edge(1, 2), 0.45);
  sat.set(Edge(2, 3), 0.5);
  // nodes 1 and 2 carry 0.95 >= 1 - slack for slack 0.1
  CHECK(is_approximately_maximal(sat, g, 0.1, 0.9));
}

TEST_CASE("orientation verifier accepts valid caps and explains violations") {
  std::vector<Edge> edges{Edge(0, 1), Edge(0, 2), Edge(0, 3)};
  Orientation o;
  for (const Edge& e : edges) o.tail[e] = 0;  // all out of the center
  std::vector<int> level(4, 1);
  std::string why;
  CHECK(verify_orientation(edges, o, 3, 3, level, 1, &why));
  CHECK_FALSE(verify_orientation(edges, o, 3, 2, level, 1, &why));
  CHECK(!why.empty());

  Orientation missing;
  missing.tail[edges[0]] = 0;
  CHECK_FALSE(verify_orientation(edges, missing, 3, 3, level, 1, &why));

  Orientation stranger;
  for (const Edge& e : edges) stranger.tail[e] = 0;
  stranger.tail[Edge(0, 1)] = 2;  // not an endpoint
  CHECK_FALSE(verify_orientation(edges, stranger, 3, 3, level, 1, &why));
}

TEST_CASE("static rerun reproduces a freshly built hierarchy") {
  Rng rng(55);
  for (int it = 0; it < 10; ++it) {
    std::size_t n = 12 + rng.below(20);
    Params p = Params::experiment(n, 0.3, 0.3, 0.3 / 8);  // three levels
    DynGraph g = random_graph(rng, n, n * 2);
    UniformSparsifier us(p, g);
    StaticRerunInput in{n, us.active_edges(), us.dead_edges(), p};
    StaticRerun rr = analogous_static_hierarchy(in);
    CHECK(rr.hierarchy.first_difference(us.hierarchy()) == "");
    for (int i = 0; i <= rr.hierarchy.levels; ++i) CHECK(rr.missing[i].empty());
    for (NodeId v = 0; v < n; ++v) {
      std::int64_t deg = 0;
      for (const Edge& e : us.active_edges())
        if (e.u == v || e.v == v) ++deg;
      CHECK(rr.gamma_mult[0][v] == deg);
    }
  }
}

TEST_CASE("static rerun tracks lazy deletions exactly") {
  Rng rng(56);
  std::size_t n = 30;
  Params p = Params::experiment(n, 0.25, 0.4, 0.05);  // L = 2
  DynGraph g = random_graph(rng, n, 3 * n);
  UniformSparsifier us(p, g);
  std::vector<Edge> pool = sorted_edges(us.active_edges());
  int removed = 0;
  for (const Edge& e : pool) {
    if (removed >= 3) break;
    us.handle_deletion(e);
    ++removed;
    StaticRerunInput in{n, us.active_edges(), us.dead_edges(), p};
    StaticRerun rr = analogous_static_hierarchy(in);
    CHECK(rr.hierarchy.first_difference(us.hierarchy()) == "");
  }
}
