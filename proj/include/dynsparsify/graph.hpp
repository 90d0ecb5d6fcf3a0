#ifndef DYNSPARSIFY_GRAPH_HPP
#define DYNSPARSIFY_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dynsparsify {

using NodeId = std::uint32_t;

// Unordered node pair, stored with u < v. Self-loops are rejected.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  Edge() = default;
  Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {
    if (a == b) throw std::invalid_argument("edge endpoints must differ");
  }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    std::uint64_t k = (std::uint64_t(e.u) << 32) | std::uint64_t(e.v);
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

using EdgeSet = std::unordered_set<Edge, EdgeHash>;
using NodeSet = std::unordered_set<NodeId>;

enum class UpdateErrorCode {
  self_loop,
  duplicate_edge,
  missing_edge,
  invalid_weight,
  node_out_of_range,
};

struct GraphUpdateError : std::runtime_error {
  UpdateErrorCode code;
  GraphUpdateError(UpdateErrorCode c, const std::string& msg)
      : std::runtime_error(msg), code(c) {}
};

// Fixed node set [0, n); edge set fully dynamic. Neighbor iteration is
// O(degree); membership, insert and delete are expected O(1).
class DynGraph {
 public:
  explicit DynGraph(std::size_t n) : adj_(n), pos_(n) {}

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  bool has_edge(Edge e) const {
    return e.v < adj_.size() && pos_[e.u].count(e.v) > 0;
  }

  void insert_edge(Edge e) {
    check_range(e);
    if (has_edge(e))
      throw GraphUpdateError(UpdateErrorCode::duplicate_edge,
                             "edge already present: " + str(e));
    pos_[e.u].emplace(e.v, adj_[e.u].size());
    adj_[e.u].push_back(e.v);
    pos_[e.v].emplace(e.u, adj_[e.v].size());
    adj_[e.v].push_back(e.u);
    ++edge_count_;
  }

  void erase_edge(Edge e) {
    check_range(e);
    if (!has_edge(e))
      throw GraphUpdateError(UpdateErrorCode::missing_edge,
                             "edge not present: " + str(e));
    unhook(e.u, e.v);
    unhook(e.v, e.u);
    --edge_count_;
  }

  std::size_t degree(NodeId v) const { return adj_.at(v).size(); }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_.at(v); }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adj_.size(); ++u)
      for (NodeId v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void check_range(Edge e) const {
    if (e.v >= adj_.size())
      throw GraphUpdateError(UpdateErrorCode::node_out_of_range,
                             "node id " + std::to_string(e.v) +
                                 " outside [0, " + std::to_string(adj_.size()) + ")");
  }

  static std::string str(Edge e) {
    return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
  }

  void unhook(NodeId a, NodeId b) {
    std::size_t i = pos_[a][b];
    NodeId last = adj_[a].back();
    adj_[a][i] = last;
    pos_[a][last] = i;
    adj_[a].pop_back();
    pos_[a].erase(b);
  }

  std::vector<std::vector<NodeId>> adj_;
  std::vector<std::unordered_map<NodeId, std::size_t>> pos_;
  std::size_t edge_count_ = 0;
};

// Sparse edge weighting with incrementally maintained node sums and total.
class WeightFn {
 public:
  WeightFn() = default;
  explicit WeightFn(std::size_t n) : node_sum_(n, 0.0) {}

  double value(Edge e) const {
    auto it = w_.find(e);
    return it == w_.end() ? 0.0 : it->second;
  }

  bool contains(Edge e) const { return w_.count(e) > 0; }

  void set(Edge e, double x) {
    double& slot = w_[e];
    double d = x - slot;
    slot = x;
    total_ += d;
    if (e.v < node_sum_.size()) {
      node_sum_[e.u] += d;
      node_sum_[e.v] += d;
    }
  }

  void erase(Edge e) {
    auto it = w_.find(e);
    if (it == w_.end()) return;
    total_ -= it->second;
    if (e.v < node_sum_.size()) {
      node_sum_[e.u] -= it->second;
      node_sum_[e.v] -= it->second;
    }
    w_.erase(it);
  }

  double node_weight(NodeId v) const { return node_sum_.at(v); }
  double total() const { return total_; }
  std::size_t node_count() const { return node_sum_.size(); }
  std::size_t entry_count() const { return w_.size(); }

  std::size_t support_size() const {
    std::size_t s = 0;
    for (const auto& [e, x] : w_)
      if (x != 0.0) ++s;
    return s;
  }

  const std::unordered_map<Edge, double, EdgeHash>& entries() const { return w_; }

  // Deterministic export: entries sorted by edge.
  std::vector<std::pair<Edge, double>> sorted_entries() const {
    std::vector<std::pair<Edge, double>> out(w_.begin(), w_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

 private:
  std::unordered_map<Edge, double, EdgeHash> w_;
  std::vector<double> node_sum_;
  double total_ = 0.0;
};

struct UpdateEvent {
  enum class Kind { insert, erase, set_weight };
  Kind kind = Kind::insert;
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;
};

// Applies one event to (g, w). Insert adds the edge and its weight, erase
// removes both, set_weight touches only the weighting.
void apply_event(DynGraph& g, WeightFn& w, const UpdateEvent& ev);

// Checks 0 <= w(e) and w(v) <= 1 + tol for all nodes; throws if some weighted
// edge is absent from g.
bool validate_fractional(const WeightFn& w, const DynGraph& g, double tol = 1e-9);

// Reference node weight, summed fresh from the adjacency of g.
double node_weight_recomputed(const WeightFn& w, const DynGraph& g, NodeId v);

inline std::vector<Edge> sorted_edges(const EdgeSet& s) {
  std::vector<Edge> out(s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<NodeId> sorted_nodes(const NodeSet& s) {
  std::vector<NodeId> out(s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t symmetric_difference_size(const EdgeSet& a, const EdgeSet& b) {
  std::size_t d = 0;
  for (const Edge& e : a)
    if (!b.count(e)) ++d;
  for (const Edge& e : b)
    if (!a.count(e)) ++d;
  return d;
}

}  // namespace dynsparsify

#endif
