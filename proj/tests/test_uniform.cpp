#include <doctest.h>

#include <cmath>
#include <vector>

#include "dynsparsify/oracles.hpp"
#include "dynsparsify/rng.hpp"
#include "dynsparsify/uniform_sparsifier.hpp"

using namespace dynsparsify;

namespace {

DynGraph build(std::size_t n, const std::vector<Edge>& edges) {
  DynGraph g(n);
  for (const Edge& e : edges) g.insert_edge(e);
  return g;
}

std::int64_t counted_potential(const UniformSparsifier& us) {
  std::int64_t p = std::int64_t(us.passive_edges().size());
  for (const EdgeSet& d : us.dead_edges()) p += std::int64_t(d.size());
  return p;
}

}  // namespace

TEST_CASE("level count is the unique power-of-two bracket") {
  CHECK(compute_levels(0.05, 0.4) == 2);   // lambda = beta/8
  CHECK(compute_levels(0.1, 0.4) == 1);
  CHECK(compute_levels(0.2, 0.4) == 0);    // [beta/2, beta) stays put
  CHECK(compute_levels(0.39, 0.4) == 0);
  CHECK(compute_levels(0.025, 0.4) == 3);
  CHECK_THROWS_AS(compute_levels(0.0, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(compute_levels(0.4, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(compute_levels(0.5, 0.4), std::invalid_argument);
  // the defining inequality, across magnitudes
  for (double beta : {0.9, 0.3, 1e-3}) {
    for (double lam = beta * 0.999; lam > 1e-9; lam *= 0.37) {
      int k = compute_levels(lam, beta);
      CHECK(std::ldexp(lam, k) >= beta / 2);
      CHECK(std::ldexp(lam, k) < beta);
    }
  }
}

TEST_CASE("parameter modes validate their ranges") {
  Params p = Params::experiment(50, 0.3, 0.4, 0.05);
  CHECK(p.peel_threshold() == 3);
  CHECK(Params::experiment(50, 0.25, 0.4, 0.05).peel_threshold() == 4);
  CHECK_THROWS(Params::experiment(50, 0.0, 0.4, 0.05));
  CHECK_THROWS(Params::experiment(50, 0.3, 1.0, 0.05));
  CHECK_THROWS(Params::experiment(50, 0.3, 0.4, 0.4));   // lambda = beta
  CHECK_THROWS(Params::experiment(50, 0.3, 0.4, 0.5));   // lambda > beta
  CHECK_THROWS(Params::experiment(50, 0.3, 0.4, 0.0));

  Params q = Params::paper(1024, 1e-3, 1e-5);
  CHECK(q.beta == doctest::Approx(5e-5));
  CHECK(q.eps == doctest::Approx(2e-8));
  CHECK(q.mode == ParamMode::paper);
  CHECK_THROWS(Params::paper(1024, 2e-3, 1e-5));  // delta above the cap
  CHECK_THROWS(Params::paper(1024, 0.0, 1e-5));
}

TEST_CASE("static build freezes a short path at the ground level") {
  Params p = Params::experiment(3, 0.6, 0.4, 0.05);  // threshold 1, three levels
  DynGraph g = build(3, {Edge(0, 1), Edge(1, 2)});
  UniformSparsifier us(p, g);
  const Hierarchy& h = us.hierarchy();
  REQUIRE(h.levels == 2);
  CHECK(h.frozen[0].size() == 2);
  CHECK(h.edges_at_least[1].empty());
  CHECK(h.nodes_at[0].size() == 3);
  CHECK(h.node_level == std::vector<int>{0, 0, 0});
  // queue seeds 0 and 2, then 1 cascades in
  CHECK(h.peel_stamp == std::vector<std::int64_t>{0, 2, 1});
  WeightFn fw = us.frozen_weights();
  CHECK(fw.value(Edge(0, 1)) == doctest::Approx(0.05));
  CHECK(fw.value(Edge(1, 2)) == doctest::Approx(0.05));
  CHECK(us.check_invariants().all_pass());
}

TEST_CASE("static build pushes a four-cycle one level up") {
  Params p = Params::experiment(4, 0.6, 0.4, 0.05);  // threshold 1
  DynGraph g = build(4, {Edge(0, 1), Edge(1, 2), Edge(2, 3), Edge(0, 3)});
  UniformSparsifier us(p, g);
  const Hierarchy& h = us.hierarchy();
  CHECK(h.nodes_at[0].empty());  // nobody peels at degree two
  CHECK(h.edges_at_least[1] == EdgeSet{Edge(0, 1), Edge(2, 3)});
  CHECK(h.frozen[1] == EdgeSet{Edge(0, 1), Edge(2, 3)});
  CHECK(h.frozen[0].empty());
  CHECK(h.node_level == std::vector<int>{1, 1, 1, 1});
  WeightFn fw = us.frozen_weights();
  CHECK(fw.value(Edge(0, 1)) == doctest::Approx(0.1));  // one doubling
  CHECK(us.sparsifier_edges() == std::vector<Edge>{Edge(0, 1), Edge(2, 3)});
  CHECK(us.check_invariants().all_pass());

  // certified weights respect the lambda-uniform node caps without scaling
  WeightFn cert = us.certified_matching();
  CHECK(cert.value(Edge(0, 1)) == doctest::Approx(0.1));
  for (NodeId v = 0; v < 4; ++v) CHECK(cert.node_weight(v) <= 2 * 0.05 + 1e-12);
}

TEST_CASE("first insertions trigger immediate merges, later ones park") {
  Params p = Params::experiment(8, 0.5, 0.4, 0.1);
  UniformSparsifier us(p);
  CHECK(us.check_invariants().all_pass());
  us.handle_insertion(Edge(0, 1));
  CHECK(us.metrics().last_insert_triggered);
  CHECK(us.passive_edges().empty());
  CHECK(us.active_edges().size() == 1);
  CHECK(us.metrics().potential == 0);

  us.handle_insertion(Edge(2, 3));  // 1 > 0.5 * 1: merges again
  CHECK(us.metrics().last_insert_triggered);
  us.handle_insertion(Edge(4, 5));  // 1 > 0.5 * 2 fails: parks
  CHECK_FALSE(us.metrics().last_insert_triggered);
  CHECK(us.passive_edges().size() == 1);
  CHECK(us.metrics().potential == 1);
  CHECK(us.contains(Edge(4, 5)));
  // passive edges are not exported
  for (const Edge& e : us.sparsifier_edges()) CHECK(e != Edge(4, 5));
  CHECK(us.check_invariants().all_pass());

  CHECK_THROWS_AS(us.handle_insertion(Edge(0, 1)), GraphUpdateError);
}

TEST_CASE("passive deletion only pays one potential unit") {
  Params p = Params::experiment(8, 0.5, 0.4, 0.1);
  UniformSparsifier us(p);
  us.handle_insertion(Edge(0, 1));
  us.handle_insertion(Edge(2, 3));
  us.handle_insertion(Edge(4, 5));
  REQUIRE(us.passive_edges().count(Edge(4, 5)) == 1);
  std::int64_t rebuilds = us.metrics().rebuilds;
  us.handle_deletion(Edge(4, 5));
  CHECK(us.metrics().potential == 0);
  CHECK(us.metrics().last_potential_gain == 0);
  CHECK(us.metrics().last_potential_drop == 1);
  CHECK(us.metrics().rebuilds == rebuilds);
  CHECK_FALSE(us.contains(Edge(4, 5)));
  CHECK_THROWS_AS(us.handle_deletion(Edge(4, 5)), GraphUpdateError);
}

TEST_CASE("active deletion parks the edge dead until volume triggers") {
  Params p = Params::experiment(40, 0.3, 0.4, 0.05);
  Rng rng(17);
  DynGraph g(40);
  while (g.edge_count() < 60) {
    NodeId a = NodeId(rng.below(40)), b = NodeId(rng.below(40));
    if (a != b && !g.has_edge(Edge(a, b))) g.insert_edge(Edge(a, b));
  }
  UniformSparsifier us(p, g);
  REQUIRE(us.check_invariants().all_pass());

  Edge victim = *sorted_edges(us.active_edges()).begin();
  int k = us.edge_level(victim);
  us.handle_deletion(victim);
  const Metrics& m = us.metrics();
  CHECK(m.last_deleted_level == k);
  if (m.last_delete_trigger_level < 0 && !m.last_passive_rebalance) {
    CHECK(m.last_potential_gain == k + 1);
    for (int i = 0; i <= k; ++i) CHECK(us.dead_edges()[i].count(victim) == 1);
    CHECK(us.active_edges().count(victim) == 0);
    // the hierarchy retires it lazily: the level sets still hold it
    CHECK(us.hierarchy().edges_at_least[0].count(victim) == 1);
  }
  for (const Edge& e : us.sparsifier_edges()) CHECK(e != victim);
  CHECK(us.check_invariants().all_pass());
  CHECK(counted_potential(us) == m.potential);
}

TEST_CASE("potential ledger matches the sets through a random stream") {
  Params p = Params::experiment(30, 0.35, 0.4, 0.1);
  UniformSparsifier us(p);
  Rng rng(23);
  EdgeSet present;
  for (int step = 0; step < 800; ++step) {
    NodeId a = NodeId(rng.below(30)), b = NodeId(rng.below(30));
    if (a == b) continue;
    Edge e(a, b);
    std::int64_t before = us.metrics().potential;
    if (present.count(e)) {
      us.handle_deletion(e);
      present.erase(e);
    } else {
      us.handle_insertion(e);
      present.insert(e);
    }
    const Metrics& m = us.metrics();
    CHECK(m.potential == counted_potential(us));
    CHECK(m.potential - before == m.last_potential_gain - m.last_potential_drop);
    CHECK(m.last_potential_gain >= 0);
    CHECK(m.last_potential_drop >= 0);
    if (step % 97 == 0) CHECK(us.check_invariants().all_pass());
  }
  CHECK(us.check_invariants().all_pass());
  // full rebuild clears all lazy state
  us.rebuild(0);
}

TEST_CASE("invariant evaluation notices a corrupted hierarchy") {
  Params p = Params::experiment(20, 0.4, 0.4, 0.05);
  Rng rng(31);
  DynGraph g(20);
  while (g.edge_count() < 30) {
    NodeId a = NodeId(rng.below(20)), b = NodeId(rng.below(20));
    if (a != b && !g.has_edge(Edge(a, b))) g.insert_edge(Edge(a, b));
  }
  UniformSparsifier us(p, g);
  REQUIRE(us.check_invariants().all_pass());

  SUBCASE("frozen edge removed from the export") {
    EdgeSet fa = us.sparsifier_edge_set();
    REQUIRE(!fa.empty());
    fa.erase(*fa.begin());
    InvariantReport r = check_invariant_sets(p, us.active_edges(), us.passive_edges(),
                                             us.dead_edges(), us.hierarchy(),
                                             us.metrics().potential, fa);
    CHECK_FALSE(r.all_pass());
  }
  SUBCASE("potential misstated") {
    InvariantReport r = check_invariant_sets(p, us.active_edges(), us.passive_edges(),
                                             us.dead_edges(), us.hierarchy(),
                                             us.metrics().potential + 1,
                                             us.sparsifier_edge_set());
    CHECK_FALSE(r.all_pass());
  }
  SUBCASE("edge level moved") {
    Hierarchy h = us.hierarchy();
    REQUIRE(!h.edges_at_least[0].empty());
    Edge e = *h.edges_at_least[0].begin();
    h.edge_level[e] += 1;
    InvariantReport r = check_invariant_sets(p, us.active_edges(), us.passive_edges(),
                                             us.dead_edges(), h, us.metrics().potential,
                                             us.sparsifier_edge_set());
    CHECK_FALSE(r.all_pass());
  }
  SUBCASE("passive edge grafted into the active set") {
    UniformSparsifier us2(p);
    us2.handle_insertion(Edge(0, 1));
    us2.handle_insertion(Edge(2, 3));
    us2.handle_insertion(Edge(4, 5));
    us2.handle_insertion(Edge(6, 7));  // 1 > 0.4 * 3 fails: parks
    REQUIRE(!us2.passive_edges().empty());
    EdgeSet active = us2.active_edges();
    active.insert(*us2.passive_edges().begin());
    InvariantReport r = check_invariant_sets(p, active, us2.passive_edges(),
                                             us2.dead_edges(), us2.hierarchy(),
                                             us2.metrics().potential,
                                             us2.sparsifier_edge_set());
    CHECK_FALSE(r.all_pass());
  }
}

TEST_CASE("orientation points down the level structure") {
  Params p = Params::experiment(50, 0.3, 0.4, 0.05);
  Rng rng(47);
  DynGraph g(50);
  while (g.edge_count() < 120) {
    NodeId a = NodeId(rng.below(50)), b = NodeId(rng.below(50));
    if (a != b && !g.has_edge(Edge(a, b))) g.insert_edge(Edge(a, b));
  }
  UniformSparsifier us(p, g);
  Orientation o = us.orientation();
  const Hierarchy& h = us.hierarchy();
  std::vector<Edge> edges = us.sparsifier_edges();
  for (const Edge& e : edges) {
    REQUIRE(o.contains(e));
    NodeId t = o.tail_of(e);
    NodeId head = t == e.u ? e.v : e.u;
    CHECK(h.node_level[t] <= h.node_level[head]);
    if (h.node_level[t] == h.node_level[head] && h.node_level[t] < h.levels)
      CHECK(h.peel_stamp[t] <= h.peel_stamp[head]);
  }
  std::string why;
  bool ok = oracles::verify_orientation(edges, o, p.peel_threshold(),
                                        std::int64_t(std::ceil(2.0 / p.beta * 4)),
                                        h.node_level, h.levels, &why);
  CHECK_MESSAGE(ok, why);
}

TEST_CASE("certified weights stay below the ceiling and the uniform caps") {
  Params p = Params::experiment(60, 0.25, 0.3, 0.3 / 8);
  Rng rng(61);
  DynGraph g(60);
  while (g.edge_count() < 150) {
    NodeId a = NodeId(rng.below(60)), b = NodeId(rng.below(60));
    if (a != b && !g.has_edge(Edge(a, b))) g.insert_edge(Edge(a, b));
  }
  UniformSparsifier us(p, g);
  WeightFn cert = us.certified_matching();
  WeightFn uni(60);
  for (const Edge& e : us.active_edges()) uni.set(e, p.lambda);
  for (const auto& [e, x] : cert.entries()) {
    CHECK(x >= 0.0);
    CHECK(x < p.beta);
    CHECK(us.sparsifier_edge_set().count(e) == 1);
  }
  for (NodeId v = 0; v < 60; ++v) CHECK(cert.node_weight(v) <= uni.node_weight(v) + 1e-9);
}
