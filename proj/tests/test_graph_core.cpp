#include <doctest.h>

#include "dynsparsify/graph.hpp"
#include "dynsparsify/rng.hpp"

using namespace dynsparsify;

TEST_CASE("edge normalizes endpoint order and rejects loops") {
  Edge e(5, 2);
  CHECK(e.u == 2);
  CHECK(e.v == 5);
  CHECK(Edge(2, 5) == e);
  CHECK_THROWS_AS(Edge(3, 3), std::invalid_argument);
}

TEST_CASE("dyn graph membership and error codes") {
  DynGraph g(6);
  g.insert_edge(Edge(0, 1));
  g.insert_edge(Edge(1, 2));
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(Edge(1, 0)));
  CHECK_FALSE(g.has_edge(Edge(0, 2)));

  try {
    g.insert_edge(Edge(0, 1));
    FAIL("duplicate insert accepted");
  } catch (const GraphUpdateError& err) {
    CHECK(err.code == UpdateErrorCode::duplicate_edge);
  }
  try {
    g.erase_edge(Edge(0, 5));
    FAIL("missing erase accepted");
  } catch (const GraphUpdateError& err) {
    CHECK(err.code == UpdateErrorCode::missing_edge);
  }
  try {
    g.insert_edge(Edge(0, 9));
    FAIL("out-of-range insert accepted");
  } catch (const GraphUpdateError& err) {
    CHECK(err.code == UpdateErrorCode::node_out_of_range);
  }

  g.erase_edge(Edge(0, 1));
  CHECK(g.edge_count() == 1);
  CHECK_FALSE(g.has_edge(Edge(0, 1)));
  CHECK(g.degree(1) == 1);
}

TEST_CASE("swap-remove adjacency stays consistent under churn") {
  Rng rng(99);
  DynGraph g(12);
  EdgeSet ref;
  for (int step = 0; step < 2000; ++step) {
    NodeId a = NodeId(rng.below(12)), b = NodeId(rng.below(12));
    if (a == b) continue;
    Edge e(a, b);
    if (ref.count(e)) {
      g.erase_edge(e);
      ref.erase(e);
    } else {
      g.insert_edge(e);
      ref.insert(e);
    }
  }
  CHECK(g.edge_count() == ref.size());
  std::vector<Edge> listed = g.edges();
  CHECK(listed == sorted_edges(ref));
  for (NodeId v = 0; v < 12; ++v) {
    std::size_t d = 0;
    for (const Edge& e : ref)
      if (e.u == v || e.v == v) ++d;
    CHECK(g.degree(v) == d);
  }
}

TEST_CASE("weight function maintains node sums incrementally") {
  Rng rng(3);
  DynGraph g(10);
  WeightFn w(10);
  for (int step = 0; step < 600; ++step) {
    NodeId a = NodeId(rng.below(10)), b = NodeId(rng.below(10));
    if (a == b) continue;
    Edge e(a, b);
    if (g.has_edge(e)) {
      if (rng.chance(0.5)) {
        g.erase_edge(e);
        w.erase(e);
      } else {
        w.set(e, rng.unit() * 0.2);
      }
    } else {
      g.insert_edge(e);
      w.set(e, rng.unit() * 0.2);
    }
  }
  for (NodeId v = 0; v < 10; ++v)
    CHECK(w.node_weight(v) == doctest::Approx(node_weight_recomputed(w, g, v)).epsilon(1e-12));
  double total = 0.0;
  for (const auto& [e, x] : w.entries()) total += x;
  CHECK(w.total() == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("apply_event routes kinds and validates weights") {
  DynGraph g(4);
  WeightFn w(4);
  apply_event(g, w, {UpdateEvent::Kind::insert, 0, 1, 0.5});
  CHECK(g.has_edge(Edge(0, 1)));
  CHECK(w.value(Edge(0, 1)) == 0.5);

  apply_event(g, w, {UpdateEvent::Kind::set_weight, 1, 0, 0.25});
  CHECK(w.value(Edge(0, 1)) == 0.25);

  try {
    apply_event(g, w, {UpdateEvent::Kind::insert, 2, 3, 1.5});
    FAIL("weight above one accepted");
  } catch (const GraphUpdateError& err) {
    CHECK(err.code == UpdateErrorCode::invalid_weight);
  }
  try {
    apply_event(g, w, {UpdateEvent::Kind::set_weight, 2, 3, 0.5});
    FAIL("reweight of absent edge accepted");
  } catch (const GraphUpdateError& err) {
    CHECK(err.code == UpdateErrorCode::missing_edge);
  }
  CHECK_THROWS_AS(apply_event(g, w, {UpdateEvent::Kind::insert, 2, 2, 0.1}), GraphUpdateError);

  apply_event(g, w, {UpdateEvent::Kind::erase, 0, 1, 0.0});
  CHECK_FALSE(g.has_edge(Edge(0, 1)));
  CHECK(w.value(Edge(0, 1)) == 0.0);
  CHECK(w.entry_count() == 0);
}

TEST_CASE("fractional validation flags node overload") {
  DynGraph g(3);
  WeightFn w(3);
  apply_event(g, w, {UpdateEvent::Kind::insert, 0, 1, 0.7});
  apply_event(g, w, {UpdateEvent::Kind::insert, 1, 2, 0.7});
  CHECK_FALSE(validate_fractional(w, g));  // node 1 carries 1.4
  w.set(Edge(1, 2), 0.3);
  CHECK(validate_fractional(w, g));
  w.erase(Edge(1, 2));
  g.erase_edge(Edge(1, 2));
  w.set(Edge(0, 2), 0.1);  // weighted but absent from g
  CHECK_THROWS_AS(validate_fractional(w, g), std::invalid_argument);
}

TEST_CASE("set difference helper counts both directions") {
  EdgeSet a{Edge(0, 1), Edge(1, 2)};
  EdgeSet b{Edge(1, 2), Edge(2, 3), Edge(3, 4)};
  CHECK(symmetric_difference_size(a, b) == 3);
  CHECK(symmetric_difference_size(a, a) == 0);
}
