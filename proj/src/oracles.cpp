#include "dynsparsify/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "dynsparsify/degree_split.hpp"

namespace dynsparsify::oracles {

namespace {

// Contracted-blossom augmenting search, O(V^3) overall.
struct BlossomMatcher {
  int n;
  std::vector<std::vector<int>> adj;
  std::vector<int> match, parent, base;
  std::vector<char> used, in_blossom;

  explicit BlossomMatcher(const DynGraph& g) : n(int(g.node_count())), adj(n) {
    for (NodeId v = 0; v < g.node_count(); ++v)
      for (NodeId u : g.neighbors(v)) adj[v].push_back(int(u));
    match.assign(n, -1);
  }

  int lca(int a, int b) {
    std::vector<char> seen(n, 0);
    for (;;) {
      a = base[a];
      seen[a] = 1;
      if (match[a] == -1) break;
      a = parent[match[a]];
    }
    for (;;) {
      b = base[b];
      if (seen[b]) return b;
      b = parent[match[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base[v] != b) {
      in_blossom[base[v]] = 1;
      in_blossom[base[match[v]]] = 1;
      parent[v] = child;
      child = match[v];
      v = parent[match[v]];
    }
  }

  int find_augmenting(int root) {
    used.assign(n, 0);
    parent.assign(n, -1);
    base.resize(n);
    for (int i = 0; i < n; ++i) base[i] = i;
    used[root] = 1;
    std::deque<int> q{root};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int to : adj[v]) {
        if (base[v] == base[to] || match[v] == to) continue;
        if (to == root || (match[to] != -1 && parent[match[to]] != -1)) {
          int cur = lca(v, to);
          in_blossom.assign(n, 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n; ++i)
            if (in_blossom[base[i]]) {
              base[i] = cur;
              if (!used[i]) {
                used[i] = 1;
                q.push_back(i);
              }
            }
        } else if (parent[to] == -1) {
          parent[to] = v;
          if (match[to] == -1) return to;
          used[match[to]] = 1;
          q.push_back(match[to]);
        }
      }
    }
    return -1;
  }

  void run() {
    for (int v = 0; v < n; ++v)
      if (match[v] == -1) {
        int u = find_augmenting(v);
        while (u != -1) {
          int pv = parent[u], next = match[pv];
          match[u] = pv;
          match[pv] = u;
          u = next;
        }
      }
  }
};

}  // namespace

MatchingResult max_matching(const DynGraph& g) {
  BlossomMatcher bm(g);
  bm.run();
  MatchingResult r;
  for (int v = 0; v < bm.n; ++v)
    if (bm.match[v] > v) r.edges.emplace_back(NodeId(v), NodeId(bm.match[v]));
  std::sort(r.edges.begin(), r.edges.end());
  return r;
}

std::size_t max_matching_bruteforce(const DynGraph& g) {
  std::size_t n = g.node_count();
  if (n > 24) throw std::invalid_argument("exhaustive matcher capped at 24 nodes");
  std::vector<std::uint32_t> nbr(n, 0);
  for (NodeId v = 0; v < n; ++v)
    for (NodeId u : g.neighbors(v)) nbr[v] |= (1u << u);
  std::unordered_map<std::uint32_t, std::size_t> memo;
  // Processes nodes in increasing id; mask holds the ids already decided.
  auto rec = [&](auto&& self, std::uint32_t mask) -> std::size_t {
    std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
    std::uint32_t free_mask = full & ~mask;
    if (free_mask == 0) return 0;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    int v = std::countr_zero(free_mask);
    std::size_t best = self(self, mask | (1u << v));
    std::uint32_t cands = nbr[v] & free_mask;
    while (cands) {
      int u = std::countr_zero(cands);
      cands &= cands - 1;
      best = std::max(best, 1 + self(self, mask | (1u << v) | (1u << u)));
    }
    memo.emplace(mask, best);
    return best;
  };
  return rec(rec, 0);
}

double max_fractional_matching(const DynGraph& g) {
  std::size_t n = g.node_count();
  DynGraph cover(2 * n);
  for (const Edge& e : g.edges()) {
    cover.insert_edge(Edge(e.u, NodeId(n + e.v)));
    cover.insert_edge(Edge(e.v, NodeId(n + e.u)));
  }
  return double(max_matching(cover).size()) / 2.0;
}

double max_fractional_bruteforce(const DynGraph& g) {
  std::vector<Edge> edges = g.edges();
  if (edges.size() > 14) throw std::invalid_argument("exhaustive search capped at 14 edges");
  std::vector<int> halves(g.node_count(), 0);  // node load in units of 1/2
  int best = 0;
  auto rec = [&](auto&& self, std::size_t i, int total) -> void {
    if (total + 2 * int(edges.size() - i) <= best) return;
    if (i == edges.size()) {
      best = std::max(best, total);
      return;
    }
    const Edge& e = edges[i];
    for (int wgt = 2; wgt >= 0; --wgt) {
      if (halves[e.u] + wgt > 2 || halves[e.v] + wgt > 2) continue;
      halves[e.u] += wgt;
      halves[e.v] += wgt;
      self(self, i + 1, total + wgt);
      halves[e.u] -= wgt;
      halves[e.v] -= wgt;
    }
  };
  rec(rec, 0, 0);
  return double(best) / 2.0;
}

double dist_nodes(const WeightFn& w1, const WeightFn& w2, std::size_t n) {
  double d = 0;
  for (NodeId v = 0; v < n; ++v) d += std::abs(w1.node_weight(v) - w2.node_weight(v));
  return d;
}

WeightFn scale_down(const WeightFn& wp, const WeightFn& wref) {
  WeightFn out(wp.node_count());
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto factor = [&](NodeId x) -> double {
    double px = wp.node_weight(x);
    if (px <= 0) return 1.0;
    double rx = wref.node_weight(x);
    if (rx <= 0) return inf;
    return px / rx;
  };
  for (const auto& [e, val] : wp.entries()) {
    if (val == 0) continue;
    double d = std::max({1.0, factor(e.u), factor(e.v)});
    out.set(e, std::isinf(d) ? 0.0 : val / d);
  }
  return out;
}

bool is_approximately_maximal(const WeightFn& w, const DynGraph& g, double slack,
                              double hi, double tol) {
  auto saturated = [&](NodeId x) {
    if (w.node_weight(x) < 1.0 - slack - tol) return false;
    for (NodeId y : g.neighbors(x))
      if (w.value(Edge(x, y)) >= hi + tol) return false;
    return true;
  };
  for (const Edge& e : g.edges()) {
    if (w.value(e) >= hi - tol) continue;
    if (!saturated(e.u) && !saturated(e.v)) return false;
  }
  return true;
}

bool verify_orientation(std::span<const Edge> edges, const Orientation& o,
                        std::int64_t bound_below, std::int64_t bound_top,
                        const std::vector<int>& node_level, int top_level,
                        std::string* why) {
  std::unordered_map<NodeId, std::int64_t> outdeg;
  for (const Edge& e : edges) {
    if (!o.contains(e)) {
      if (why) {
        std::ostringstream os;
        os << "edge (" << e.u << "," << e.v << ") has no direction";
        *why = os.str();
      }
      return false;
    }
    NodeId t = o.tail_of(e);
    if (t != e.u && t != e.v) {
      if (why) {
        std::ostringstream os;
        os << "edge (" << e.u << "," << e.v << ") directed from non-endpoint " << t;
        *why = os.str();
      }
      return false;
    }
    ++outdeg[t];
  }
  for (const auto& [v, d] : outdeg) {
    std::int64_t cap = node_level[v] == top_level ? bound_top : bound_below;
    if (d > cap) {
      if (why) {
        std::ostringstream os;
        os << "node " << v << " at level " << node_level[v] << " has out-degree " << d
           << " > " << cap;
        *why = os.str();
      }
      return false;
    }
  }
  return true;
}

StaticRerun analogous_static_hierarchy(const StaticRerunInput& in) {
  const Params& p = in.params;
  const int L = compute_levels(p.lambda, p.beta);
  const std::size_t n = in.n;
  if (L >= 62) throw std::invalid_argument("level count too deep for the replay oracle");
  if (in.dead.size() != std::size_t(L) + 1)
    throw std::invalid_argument("dead set count must equal level count plus one");

  StaticRerun r;
  Hierarchy& h = r.hierarchy;
  h.levels = L;
  h.edges_at_least.assign(L + 1, {});
  h.nodes_at_least.assign(L + 1, {});
  h.nodes_at.assign(L + 1, {});
  h.frozen.assign(L + 1, {});
  h.node_level.assign(n, 0);
  h.peel_stamp.assign(n, -1);
  r.missing.assign(L + 1, {});
  r.gamma_mult.assign(L + 1, std::vector<std::int64_t>(n, 0));

  EdgeSet estar = in.active;
  for (const Edge& e : in.dead[0]) estar.insert(e);
  NodeSet alive;
  for (NodeId v = 0; v < n; ++v) alive.insert(v);
  for (const Edge& e : estar) {
    r.gamma_mult[0][e.u] += 1;
    r.gamma_mult[0][e.v] += 1;
  }

  const int threshold = p.peel_threshold();
  for (int i = 0; i <= L; ++i) {
    EdgeSet miss;
    if (i > 0)
      for (const Edge& e : estar)
        if (in.dead[i - 1].count(e) && !in.dead[i].count(e)) miss.insert(e);
    for (const Edge& e : miss) estar.erase(e);
    r.missing[i] = std::move(miss);
    h.edges_at_least[i] = estar;
    h.nodes_at_least[i] = alive;
    for (const Edge& e : estar) h.edge_level[e] = i;

    if (i == L) {
      h.frozen[L] = estar;
      h.nodes_at[L] = alive;
      for (NodeId v : alive) h.node_level[v] = L;
      break;
    }

    PeelOutcome po = peel_round(alive, estar, threshold, n);
    std::int64_t stamp = 0;
    for (NodeId v : po.peeled) {
      h.node_level[v] = i;
      h.peel_stamp[v] = stamp++;
      h.nodes_at[i].insert(v);
    }
    h.frozen[i] = po.frozen;
    alive = po.survivors;

    std::vector<Edge> kept = degree_split(po.remainder, n);
    r.gamma_mult[i + 1] = r.gamma_mult[i];
    for (const Edge& e : po.remainder) {
      r.gamma_mult[i + 1][e.u] -= (std::int64_t(1) << i);
      r.gamma_mult[i + 1][e.v] -= (std::int64_t(1) << i);
    }
    for (const Edge& e : kept) {
      r.gamma_mult[i + 1][e.u] += (std::int64_t(1) << (i + 1));
      r.gamma_mult[i + 1][e.v] += (std::int64_t(1) << (i + 1));
    }
    estar = EdgeSet(kept.begin(), kept.end());
  }
  return r;
}

}  // namespace dynsparsify::oracles
