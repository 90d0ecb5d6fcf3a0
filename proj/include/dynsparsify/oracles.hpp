#ifndef DYNSPARSIFY_ORACLES_HPP
#define DYNSPARSIFY_ORACLES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dynsparsify/graph.hpp"
#include "dynsparsify/uniform_sparsifier.hpp"

namespace dynsparsify::oracles {

struct MatchingResult {
  std::vector<Edge> edges;
  std::size_t size() const { return edges.size(); }
};

// Maximum cardinality matching on a general graph (blossom contraction).
MatchingResult max_matching(const DynGraph& g);

// Exhaustive maximum matching via subset recursion over nodes; n <= ~24.
std::size_t max_matching_bruteforce(const DynGraph& g);

// Maximum fractional matching size. Half-integrality makes it half the
// maximum matching of the bipartite double cover.
double max_fractional_matching(const DynGraph& g);

// Exhaustive search over edge weights in {0, 1/2, 1}; meant for tiny inputs.
double max_fractional_bruteforce(const DynGraph& g);

// Sum over nodes of |w1(v) - w2(v)|.
double dist_nodes(const WeightFn& w1, const WeightFn& w2, std::size_t n);

// Largest pointwise reduction of wp whose node weights fit under those of
// wref: each edge is divided by max(1, wp(u)/wref(u), wp(v)/wref(v)). A node
// with wp(x) = 0 contributes factor 1; wp(x) > 0 with wref(x) = 0 zeroes its
// edges out.
WeightFn scale_down(const WeightFn& wp, const WeightFn& wref);

// Every edge either carries weight >= hi, or has an endpoint x whose node
// weight is >= 1 - slack with all edges at x below hi.
bool is_approximately_maximal(const WeightFn& w, const DynGraph& g, double slack,
                              double hi, double tol = 1e-9);

// Checks that every edge has a direction and out-degrees stay within
// bound_below for nodes under the top level, bound_top at the top level.
bool verify_orientation(std::span<const Edge> edges, const Orientation& o,
                        std::int64_t bound_below, std::int64_t bound_top,
                        const std::vector<int>& node_level, int top_level,
                        std::string* why = nullptr);

struct StaticRerunInput {
  std::size_t n = 0;
  EdgeSet active;
  std::vector<EdgeSet> dead;  // dead[i]: dead edges occupying levels >= i
  Params params;
};

struct StaticRerun {
  Hierarchy hierarchy;
  std::vector<EdgeSet> missing;  // per round: dead edges retired entering it
  // Node weights per round as integer multiples of lambda; rounds 0..levels.
  std::vector<std::vector<std::int64_t>> gamma_mult;
};

// Rebuilds the full hierarchy from scratch out of the current active and dead
// sets, retiring each dead edge after the last round whose dead set holds it.
// With identical tie-breaking this reproduces the incrementally maintained
// hierarchy exactly.
StaticRerun analogous_static_hierarchy(const StaticRerunInput& in);

}  // namespace dynsparsify::oracles

#endif
