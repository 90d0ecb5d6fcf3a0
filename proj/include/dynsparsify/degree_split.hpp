#ifndef DYNSPARSIFY_DEGREE_SPLIT_HPP
#define DYNSPARSIFY_DEGREE_SPLIT_HPP

#include <span>
#include <vector>

#include "dynsparsify/graph.hpp"

namespace dynsparsify {

// Walk of distinct edges: edges[i] joins nodes[i] and nodes[i+1].
struct Walk {
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
};

struct WalkDecomposition {
  std::vector<Walk> walks;
};

// Partitions the edge set into maximal walks. Deterministic: the input is
// canonicalized internally, each walk starts at the lowest-indexed node that
// still has an unused incident edge and grows forward greedily, then grows
// backward from the start node. Runs in O(|edges| + n).
WalkDecomposition decompose_walks(std::span<const Edge> edges, std::size_t n);

// Edges at positions 0, 2, 4, ... of the walk.
std::vector<Edge> even_edges(const Walk& w);

// Union of even-position edges over the maximal-walk partition, sorted.
// Every node keeps between half-minus-one and half-plus-one of its degree.
std::vector<Edge> degree_split(std::span<const Edge> edges, std::size_t n);

}  // namespace dynsparsify

#endif
