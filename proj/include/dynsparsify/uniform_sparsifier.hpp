#ifndef DYNSPARSIFY_UNIFORM_SPARSIFIER_HPP
#define DYNSPARSIFY_UNIFORM_SPARSIFIER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dynsparsify/degree_split.hpp"
#include "dynsparsify/graph.hpp"

namespace dynsparsify {

enum class ParamMode { paper, experiment };

struct Params {
  std::size_t n = 0;
  ParamMode mode = ParamMode::experiment;
  double delta = 0.0;
  double beta = 0.0;
  double eps = 0.0;
  double lambda = 0.0;

  // eps and beta chosen freely in (0, 1).
  static Params experiment(std::size_t n, double eps, double beta, double lambda);
  // beta and eps derived from delta: delta = 20*beta = 5000*eps*log2(n),
  // with 0 < delta <= 1e-3.
  static Params paper(std::size_t n, double delta, double lambda);

  int peel_threshold() const;  // floor(1/eps)
};

// Unique k >= 0 with beta/2 <= 2^k * lambda < beta; throws if lambda is not
// in (0, beta).
int compute_levels(double lambda, double beta);

// Leveled edge partition. Level i holds the edges whose halving stopped
// there; frozen[i] are the ones carrying weight 2^i * lambda.
struct Hierarchy {
  int levels = 0;                        // top level index L
  std::vector<EdgeSet> edges_at_least;   // E restricted to levels >= i, i in [0, L]
  std::vector<NodeSet> nodes_at_least;
  std::vector<NodeSet> nodes_at;         // nodes assigned to level i
  std::vector<EdgeSet> frozen;
  std::unordered_map<Edge, int, EdgeHash> edge_level;
  std::vector<int> node_level;           // size n
  std::vector<std::int64_t> peel_stamp;  // pop order within the node's level; -1 at level L

  bool operator==(const Hierarchy& o) const;
  // Human-readable first difference; empty string when equal.
  std::string first_difference(const Hierarchy& o) const;
};

struct PeelOutcome {
  std::vector<NodeId> peeled;  // FIFO pop order
  NodeSet survivors;
  EdgeSet frozen;              // edges touching a peeled node
  std::vector<Edge> remainder; // edges with both endpoints surviving
};

// Repeatedly removes nodes whose degree to not-yet-removed nodes is at most
// threshold. The queue is seeded in ascending node id and neighbors are
// relaxed in ascending id, so the pop order is a function of the input sets.
PeelOutcome peel_round(const NodeSet& nodes, const EdgeSet& edges, int threshold,
                       std::size_t n);

// Each edge is directed away from its tail.
struct Orientation {
  std::unordered_map<Edge, NodeId, EdgeHash> tail;

  NodeId tail_of(Edge e) const { return tail.at(e); }
  bool contains(Edge e) const { return tail.count(e) > 0; }
};

// Lower level points to higher; equal levels below the top break ties by peel
// stamp (earlier to later); at the top level, by node id.
Orientation orient_by_level(std::span<const Edge> edges,
                            const std::vector<int>& node_level,
                            const std::vector<std::int64_t>& peel_stamp, int top_level);

struct InvariantReport {
  struct Item {
    std::string name;
    bool pass = true;
    std::string detail;
  };
  std::vector<Item> items;

  bool all_pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
  std::string failures() const {
    std::string s;
    for (const auto& it : items)
      if (!it.pass) s += it.name + ": " + it.detail + "\n";
    return s;
  }
};

struct Metrics {
  std::int64_t potential = 0;  // passive count plus all dead-set cardinalities
  std::int64_t updates = 0;
  std::int64_t rebuilds = 0;
  std::int64_t cleanups = 0;
  std::int64_t work = 0;      // edges touched while rebuilding or cleaning
  std::int64_t recourse = 0;  // cumulative churn of the exported edge set

  // Most recent update, for external audits.
  std::int64_t last_potential_gain = 0;
  std::int64_t last_potential_drop = 0;
  std::int64_t last_recourse = 0;
  std::int64_t last_work = 0;
  bool last_insert_triggered = false;
  int last_delete_trigger_level = -1;  // -1 when the dead-volume path did not fire
  bool last_passive_rebalance = false;
  int last_deleted_level = -1;
};

// Maintains a low-arboricity edge subset certifying the matching size of a
// lambda-uniform weighting under insertions and deletions. Edges enter lazily
// (passive) and leave lazily (dead) until volume triggers rebuild the
// affected levels.
class UniformSparsifier {
 public:
  explicit UniformSparsifier(const Params& p);
  UniformSparsifier(const Params& p, const DynGraph& g);

  void handle_insertion(Edge e);
  void handle_deletion(Edge e);

  // Rebuilds levels from 'from' upward out of the current level sets.
  void rebuild(int from);
  // Removes dead edges from levels >= from and clears those dead sets.
  void clean_up(int from);

  std::vector<Edge> sparsifier_edges() const { return sorted_edges(frozen_active_); }
  const EdgeSet& sparsifier_edge_set() const { return frozen_active_; }

  // Weight 2^level * lambda on the frozen edges that are still present.
  WeightFn frozen_weights() const;
  // frozen_weights() scaled down so no node exceeds its lambda-uniform weight.
  WeightFn certified_matching() const;

  Orientation orientation() const;

  InvariantReport check_invariants() const;
  // The two counting invariants only; O(levels).
  bool volume_invariants_hold() const;

  const Hierarchy& hierarchy() const { return h_; }
  const Metrics& metrics() const { return m_; }
  const Params& params() const { return p_; }
  int levels() const { return h_.levels; }

  const EdgeSet& active_edges() const { return active_; }
  const EdgeSet& passive_edges() const { return passive_; }
  const std::vector<EdgeSet>& dead_edges() const { return dead_; }

  bool contains(Edge e) const { return active_.count(e) || passive_.count(e); }
  int edge_level(Edge e) const { return h_.edge_level.at(e); }

 private:
  void full_build();
  void merge_passive_and_rebuild();
  std::int64_t dead_total() const;
  void refresh_frozen_active_with_recourse(const EdgeSet& before);

  Params p_;
  EdgeSet active_;
  EdgeSet passive_;
  std::vector<EdgeSet> dead_;  // dead_[i]: dead edges still occupying levels >= i
  Hierarchy h_;
  EdgeSet frozen_active_;
  Metrics m_;
};

// Pure view-based invariant evaluation; lets tests corrupt individual pieces.
InvariantReport check_invariant_sets(const Params& p, const EdgeSet& active,
                                     const EdgeSet& passive,
                                     const std::vector<EdgeSet>& dead,
                                     const Hierarchy& h, std::int64_t potential,
                                     const EdgeSet& frozen_active);

}  // namespace dynsparsify

#endif
