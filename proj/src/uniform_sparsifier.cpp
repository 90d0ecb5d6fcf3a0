#include "dynsparsify/uniform_sparsifier.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "dynsparsify/log.hpp"
#include "dynsparsify/oracles.hpp"

namespace dynsparsify {

Params Params::experiment(std::size_t n, double eps, double beta, double lambda) {
  if (n == 0) throw std::invalid_argument("empty node set");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps outside (0,1)");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta outside (0,1)");
  if (!(lambda > 0.0 && lambda < beta))
    throw std::invalid_argument("lambda outside (0, beta)");
  Params p;
  p.n = n;
  p.mode = ParamMode::experiment;
  p.eps = eps;
  p.beta = beta;
  p.lambda = lambda;
  p.delta = 20.0 * beta;
  return p;
}

Params Params::paper(std::size_t n, double delta, double lambda) {
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  if (!(delta > 0.0 && delta <= 1e-3))
    throw std::invalid_argument("delta outside (0, 1e-3]");
  Params p;
  p.n = n;
  p.mode = ParamMode::paper;
  p.delta = delta;
  p.beta = delta / 20.0;
  p.eps = delta / (5000.0 * std::log2(double(n)));
  if (!(lambda > 0.0 && lambda < p.beta))
    throw std::invalid_argument("lambda outside (0, beta)");
  if (lambda < delta / (double(n) * double(n)))
    log_info("lambda %.3g below delta/n^2 = %.3g; guarantees assume the floor",
             lambda, delta / (double(n) * double(n)));
  p.lambda = lambda;
  return p;
}

int Params::peel_threshold() const { return int(std::floor(1.0 / eps)); }

int compute_levels(double lambda, double beta) {
  if (!(lambda > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("lambda and beta must be positive");
  if (lambda >= beta) throw std::invalid_argument("lambda must be below beta");
  int k = 0;
  double x = lambda;
  while (x < beta / 2.0) {
    x *= 2.0;
    ++k;
  }
  return k;
}

PeelOutcome peel_round(const NodeSet& nodes, const EdgeSet& edges, int threshold,
                       std::size_t n) {
  std::vector<char> present(n, 0);
  for (NodeId v : nodes) present[v] = 1;

  std::vector<Edge> es = sorted_edges(edges);
  std::vector<std::uint32_t> head(n + 1, 0);
  for (const Edge& e : es) {
    ++head[e.u + 1];
    ++head[e.v + 1];
  }
  for (std::size_t i = 1; i <= n; ++i) head[i] += head[i - 1];
  std::vector<NodeId> nbr(2 * es.size());
  {
    // One sweep over the sorted edges leaves every node's slice ascending:
    // smaller neighbors arrive first (sorted by first endpoint), then larger.
    std::vector<std::uint32_t> fill(head.begin(), head.end() - 1);
    for (const Edge& e : es) {
      nbr[fill[e.u]++] = e.v;
      nbr[fill[e.v]++] = e.u;
    }
  }

  std::vector<std::int64_t> deg(n, 0);
  for (const Edge& e : es) {
    ++deg[e.u];
    ++deg[e.v];
  }

  std::vector<char> removed(n, 0), queued(n, 0);
  std::deque<NodeId> q;
  for (NodeId v = 0; v < n; ++v)
    if (present[v] && deg[v] <= threshold) {
      q.push_back(v);
      queued[v] = 1;
    }

  PeelOutcome out;
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop_front();
    removed[v] = 1;
    out.peeled.push_back(v);
    for (std::uint32_t k = head[v]; k < head[v + 1]; ++k) {
      NodeId w = nbr[k];
      if (removed[w]) continue;
      if (--deg[w] <= threshold && !queued[w]) {
        queued[w] = 1;
        q.push_back(w);
      }
    }
  }

  for (NodeId v : nodes)
    if (!removed[v]) out.survivors.insert(v);
  for (const Edge& e : es) {
    if (removed[e.u] || removed[e.v])
      out.frozen.insert(e);
    else
      out.remainder.push_back(e);
  }
  return out;
}

Orientation orient_by_level(std::span<const Edge> edges,
                            const std::vector<int>& node_level,
                            const std::vector<std::int64_t>& peel_stamp,
                            int top_level) {
  Orientation o;
  o.tail.reserve(edges.size());
  for (const Edge& e : edges) {
    int lu = node_level[e.u], lv = node_level[e.v];
    NodeId t;
    if (lu != lv)
      t = lu < lv ? e.u : e.v;
    else if (lu == top_level)
      t = e.u;  // e.u < e.v by normalization
    else
      t = peel_stamp[e.u] < peel_stamp[e.v] ? e.u : e.v;
    o.tail[e] = t;
  }
  return o;
}

bool Hierarchy::operator==(const Hierarchy& o) const {
  return levels == o.levels && edges_at_least == o.edges_at_least &&
         nodes_at_least == o.nodes_at_least && nodes_at == o.nodes_at &&
         frozen == o.frozen && edge_level == o.edge_level &&
         node_level == o.node_level && peel_stamp == o.peel_stamp;
}

std::string Hierarchy::first_difference(const Hierarchy& o) const {
  std::ostringstream s;
  auto set_diff = [&](const char* what, int i, const EdgeSet& a, const EdgeSet& b) {
    for (const Edge& e : a)
      if (!b.count(e)) {
        s << what << "[" << i << "]: (" << e.u << "," << e.v << ") only on left";
        return true;
      }
    for (const Edge& e : b)
      if (!a.count(e)) {
        s << what << "[" << i << "]: (" << e.u << "," << e.v << ") only on right";
        return true;
      }
    return false;
  };
  if (levels != o.levels) {
    s << "level count " << levels << " vs " << o.levels;
    return s.str();
  }
  for (int i = 0; i <= levels; ++i) {
    if (set_diff("edges_at_least", i, edges_at_least[i], o.edges_at_least[i]))
      return s.str();
    if (set_diff("frozen", i, frozen[i], o.frozen[i])) return s.str();
    if (nodes_at_least[i] != o.nodes_at_least[i]) {
      s << "nodes_at_least[" << i << "] differ";
      return s.str();
    }
    if (nodes_at[i] != o.nodes_at[i]) {
      s << "nodes_at[" << i << "] differ";
      return s.str();
    }
  }
  for (std::size_t v = 0; v < node_level.size(); ++v) {
    if (node_level[v] != o.node_level[v]) {
      s << "node_level[" << v << "]: " << node_level[v] << " vs " << o.node_level[v];
      return s.str();
    }
    if (peel_stamp[v] != o.peel_stamp[v]) {
      s << "peel_stamp[" << v << "]: " << peel_stamp[v] << " vs " << o.peel_stamp[v];
      return s.str();
    }
  }
  if (edge_level != o.edge_level) {
    for (const auto& [e, l] : edge_level) {
      auto it = o.edge_level.find(e);
      if (it == o.edge_level.end()) {
        s << "edge_level: (" << e.u << "," << e.v << ") only on left";
        return s.str();
      }
      if (it->second != l) {
        s << "edge_level[(" << e.u << "," << e.v << ")]: " << l << " vs " << it->second;
        return s.str();
      }
    }
    s << "edge_level: extra entries on right";
    return s.str();
  }
  return "";
}

UniformSparsifier::UniformSparsifier(const Params& p) : p_(p) {
  if (p_.n == 0) throw std::invalid_argument("empty node set");
  if (!(p_.eps > 0.0 && p_.eps < 1.0)) throw std::invalid_argument("eps outside (0,1)");
  int L = compute_levels(p_.lambda, p_.beta);
  h_.levels = L;
  h_.edges_at_least.assign(L + 1, {});
  h_.nodes_at_least.assign(L + 1, {});
  h_.nodes_at.assign(L + 1, {});
  h_.frozen.assign(L + 1, {});
  h_.node_level.assign(p_.n, 0);
  h_.peel_stamp.assign(p_.n, -1);
  dead_.assign(L + 1, {});
  full_build();
}

UniformSparsifier::UniformSparsifier(const Params& p, const DynGraph& g)
    : UniformSparsifier(p) {
  if (g.node_count() != p_.n) throw std::invalid_argument("node count mismatch");
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (p_.lambda * double(g.degree(v)) > 1.0 + 1e-9)
      throw std::invalid_argument(
          "lambda-uniform weighting is not a fractional matching at node " +
          std::to_string(v));
  std::vector<Edge> es = g.edges();
  active_.insert(es.begin(), es.end());
  m_ = Metrics{};
  full_build();
  frozen_active_.clear();
  for (int i = 0; i <= h_.levels; ++i)
    for (const Edge& e : h_.frozen[i])
      if (active_.count(e)) frozen_active_.insert(e);
}

void UniformSparsifier::full_build() {
  h_.edge_level.clear();
  for (int i = 0; i <= h_.levels; ++i) {
    h_.edges_at_least[i].clear();
    h_.nodes_at_least[i].clear();
    h_.nodes_at[i].clear();
    h_.frozen[i].clear();
  }
  for (NodeId v = 0; v < p_.n; ++v) h_.nodes_at_least[0].insert(v);
  h_.edges_at_least[0] = active_;
  rebuild(0);
}

void UniformSparsifier::rebuild(int from) {
  const int L = h_.levels;
  if (from < 0 || from > L)
    throw std::out_of_range("rebuild start level outside [0, levels]");
  for (int i = from; i < L; ++i) {
    const EdgeSet& ei = h_.edges_at_least[i];
    m_.work += std::int64_t(ei.size()) + std::int64_t(h_.nodes_at_least[i].size());
    PeelOutcome po = peel_round(h_.nodes_at_least[i], ei, p_.peel_threshold(), p_.n);
    h_.nodes_at[i].clear();
    std::int64_t stamp = 0;
    for (NodeId v : po.peeled) {
      h_.nodes_at[i].insert(v);
      h_.node_level[v] = i;
      h_.peel_stamp[v] = stamp++;
    }
    h_.frozen[i] = std::move(po.frozen);
    h_.nodes_at_least[i + 1] = std::move(po.survivors);
    for (const Edge& e : ei) h_.edge_level[e] = i;
    std::vector<Edge> kept = degree_split(po.remainder, p_.n);
    m_.work += std::int64_t(kept.size());
    h_.edges_at_least[i + 1] = EdgeSet(kept.begin(), kept.end());
  }
  h_.frozen[L] = h_.edges_at_least[L];
  h_.nodes_at[L] = h_.nodes_at_least[L];
  for (NodeId v : h_.nodes_at[L]) {
    h_.node_level[v] = L;
    h_.peel_stamp[v] = -1;
  }
  for (const Edge& e : h_.edges_at_least[L]) h_.edge_level[e] = L;
  m_.work += std::int64_t(h_.edges_at_least[L].size());
  ++m_.rebuilds;
}

void UniformSparsifier::clean_up(int from) {
  const int L = h_.levels;
  if (from < 0 || from > L)
    throw std::out_of_range("clean-up start level outside [0, levels]");
  for (const Edge& e : dead_[from]) {
    if (from == 0)
      h_.edge_level.erase(e);
    else
      h_.edge_level[e] = from - 1;
  }
  for (int i = from; i <= L; ++i) {
    for (const Edge& e : dead_[i]) {
      h_.edges_at_least[i].erase(e);
      h_.frozen[i].erase(e);
    }
    m_.work += std::int64_t(dead_[i].size());
    dead_[i].clear();
  }
  ++m_.cleanups;
}

std::int64_t UniformSparsifier::dead_total() const {
  std::int64_t s = 0;
  for (const EdgeSet& d : dead_) s += std::int64_t(d.size());
  return s;
}

void UniformSparsifier::refresh_frozen_active_with_recourse(const EdgeSet& before) {
  frozen_active_.clear();
  for (int i = 0; i <= h_.levels; ++i)
    for (const Edge& e : h_.frozen[i])
      if (active_.count(e)) frozen_active_.insert(e);
  m_.last_recourse += std::int64_t(symmetric_difference_size(before, frozen_active_));
}

void UniformSparsifier::merge_passive_and_rebuild() {
  std::int64_t drop = std::int64_t(passive_.size()) + dead_total();
  EdgeSet before = frozen_active_;
  clean_up(0);
  active_.insert(passive_.begin(), passive_.end());
  passive_.clear();
  m_.potential -= drop;
  m_.last_potential_drop += drop;
  full_build();
  refresh_frozen_active_with_recourse(before);
}

void UniformSparsifier::handle_insertion(Edge e) {
  if (contains(e))
    throw GraphUpdateError(UpdateErrorCode::duplicate_edge,
                           "edge already tracked");
  ++m_.updates;
  m_.last_potential_gain = 0;
  m_.last_potential_drop = 0;
  m_.last_recourse = 0;
  m_.last_insert_triggered = false;
  m_.last_delete_trigger_level = -1;
  m_.last_passive_rebalance = false;
  m_.last_deleted_level = -1;
  std::int64_t work0 = m_.work;

  passive_.insert(e);
  m_.potential += 1;
  m_.last_potential_gain = 1;
  if (double(passive_.size()) > p_.eps * double(active_.size())) {
    m_.last_insert_triggered = true;
    merge_passive_and_rebuild();
  }
  m_.recourse += m_.last_recourse;
  m_.last_work = m_.work - work0;
}

void UniformSparsifier::handle_deletion(Edge e) {
  ++m_.updates;
  m_.last_potential_gain = 0;
  m_.last_potential_drop = 0;
  m_.last_recourse = 0;
  m_.last_work = 0;
  m_.last_insert_triggered = false;
  m_.last_delete_trigger_level = -1;
  m_.last_passive_rebalance = false;
  m_.last_deleted_level = -1;
  std::int64_t work0 = m_.work;

  if (passive_.erase(e)) {
    m_.potential -= 1;
    m_.last_potential_drop = 1;
    return;
  }
  if (!active_.count(e))
    throw GraphUpdateError(UpdateErrorCode::missing_edge, "edge not tracked");

  int k = h_.edge_level.at(e);
  m_.last_deleted_level = k;
  active_.erase(e);
  if (frozen_active_.erase(e)) m_.last_recourse += 1;
  for (int i = 0; i <= k; ++i) dead_[i].insert(e);
  m_.potential += k + 1;
  m_.last_potential_gain = k + 1;

  int j = -1;
  for (int i = 0; i <= h_.levels; ++i)
    if (double(dead_[i].size()) > p_.eps * double(h_.edges_at_least[i].size())) {
      j = i;
      break;
    }
  if (j >= 0) {
    m_.last_delete_trigger_level = j;
    std::int64_t drop = 0;
    for (int i = j; i <= h_.levels; ++i) drop += std::int64_t(dead_[i].size());
    EdgeSet before = frozen_active_;
    clean_up(j);
    rebuild(j);
    m_.potential -= drop;
    m_.last_potential_drop += drop;
    refresh_frozen_active_with_recourse(before);
  }

  // Active deletions shrink the lazy budget; restore the passive share the
  // same way an overflowing insertion would.
  if (double(passive_.size()) > p_.eps * double(active_.size())) {
    m_.last_passive_rebalance = true;
    merge_passive_and_rebuild();
  }
  m_.recourse += m_.last_recourse;
  m_.last_work = m_.work - work0;
}

WeightFn UniformSparsifier::frozen_weights() const {
  WeightFn w(p_.n);
  for (int i = 0; i <= h_.levels; ++i)
    for (const Edge& e : h_.frozen[i])
      if (active_.count(e)) w.set(e, std::ldexp(p_.lambda, i));
  return w;
}

WeightFn UniformSparsifier::certified_matching() const {
  WeightFn gamma = frozen_weights();
  WeightFn wa(p_.n);
  for (const Edge& e : active_) wa.set(e, p_.lambda);
  return oracles::scale_down(gamma, wa);
}

Orientation UniformSparsifier::orientation() const {
  std::vector<Edge> fs;
  for (int i = 0; i <= h_.levels; ++i)
    for (const Edge& e : h_.frozen[i]) fs.push_back(e);
  std::sort(fs.begin(), fs.end());
  return orient_by_level(fs, h_.node_level, h_.peel_stamp, h_.levels);
}

bool UniformSparsifier::volume_invariants_hold() const {
  if (double(passive_.size()) > p_.eps * double(active_.size())) return false;
  for (int i = 0; i <= h_.levels; ++i)
    if (double(dead_[i].size()) > p_.eps * double(h_.edges_at_least[i].size()))
      return false;
  return true;
}

InvariantReport UniformSparsifier::check_invariants() const {
  return check_invariant_sets(p_, active_, passive_, dead_, h_, m_.potential,
                              frozen_active_);
}

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

}  // namespace

InvariantReport check_invariant_sets(const Params& p, const EdgeSet& active,
                                     const EdgeSet& passive,
                                     const std::vector<EdgeSet>& dead,
                                     const Hierarchy& h, std::int64_t potential,
                                     const EdgeSet& frozen_active) {
  InvariantReport r;
  const int L = h.levels;
  auto add = [&](const std::string& name, bool pass, std::string detail = "") {
    r.items.push_back({name, pass, std::move(detail)});
  };

  add("passive_volume",
      !(double(passive.size()) > p.eps * double(active.size())),
      std::to_string(passive.size()) + " passive vs " +
          std::to_string(active.size()) + " active");

  {
    bool ok = true;
    std::string det;
    for (int i = 0; i <= L; ++i)
      if (double(dead[i].size()) > p.eps * double(h.edges_at_least[i].size())) {
        ok = false;
        det = "level " + std::to_string(i) + ": " + std::to_string(dead[i].size()) +
              " dead vs " + std::to_string(h.edges_at_least[i].size());
        break;
      }
    add("dead_volume", ok, det);
  }

  {
    bool ok = true;
    std::string det;
    for (int i = 0; ok && i + 1 <= L; ++i)
      for (const Edge& e : dead[i + 1])
        if (!dead[i].count(e)) {
          ok = false;
          det = edge_str(e) + " dead at level " + std::to_string(i + 1) +
                " but not " + std::to_string(i);
          break;
        }
    add("dead_laminar", ok, det);
  }

  {
    bool ok = true;
    std::string det;
    for (const Edge& e : h.edges_at_least[0])
      if (!active.count(e) && !dead[0].count(e)) {
        ok = false;
        det = edge_str(e) + " in base level but neither active nor dead";
        break;
      }
    if (ok)
      for (const Edge& e : active)
        if (!h.edges_at_least[0].count(e)) {
          ok = false;
          det = "active " + edge_str(e) + " missing from base level";
          break;
        }
    if (ok)
      for (const Edge& e : dead[0])
        if (active.count(e)) {
          ok = false;
          det = edge_str(e) + " both active and dead";
          break;
        }
    add("base_partition", ok, det);
  }

  {
    bool ok = true;
    std::string det;
    for (int i = 0; ok && i <= L; ++i) {
      for (const Edge& e : h.frozen[i])
        if (!h.edges_at_least[i].count(e)) {
          ok = false;
          det = "frozen[" + std::to_string(i) + "] edge " + edge_str(e) +
                " outside its level set";
          break;
        }
      if (!ok) break;
      if (i < L)
        for (const Edge& e : h.edges_at_least[i + 1]) {
          if (!h.edges_at_least[i].count(e) || h.frozen[i].count(e)) {
            ok = false;
            det = edge_str(e) + " at level >= " + std::to_string(i + 1) +
                  " breaks nesting";
            break;
          }
        }
      for (const Edge& e : dead[i])
        if (!h.edges_at_least[i].count(e)) {
          ok = false;
          det = "dead " + edge_str(e) + " missing from level " + std::to_string(i);
          break;
        }
    }
    if (ok && h.frozen[L] != h.edges_at_least[L]) {
      ok = false;
      det = "top frozen set differs from top level set";
    }
    add("level_nesting", ok, det);
  }

  {
    bool ok = h.nodes_at_least[0].size() == p.n;
    std::string det = ok ? "" : "base node set incomplete";
    for (int i = 0; ok && i < L; ++i) {
      if (h.nodes_at[i].size() + h.nodes_at_least[i + 1].size() !=
          h.nodes_at_least[i].size()) {
        ok = false;
        det = "node counts at level " + std::to_string(i) + " do not add up";
        break;
      }
      for (NodeId v : h.nodes_at[i])
        if (!h.nodes_at_least[i].count(v) || h.nodes_at_least[i + 1].count(v)) {
          ok = false;
          det = "node " + std::to_string(v) + " misplaced at level " +
                std::to_string(i);
          break;
        }
      for (NodeId v : h.nodes_at_least[i + 1])
        if (!h.nodes_at_least[i].count(v)) {
          ok = false;
          det = "node " + std::to_string(v) + " appears from nowhere at level " +
                std::to_string(i + 1);
          break;
        }
    }
    if (ok && h.nodes_at[L] != h.nodes_at_least[L]) {
      ok = false;
      det = "top node sets differ";
    }
    add("node_partition", ok, det);
  }

  {
    bool ok = true;
    std::string det;
    for (int i = 0; ok && i <= L; ++i)
      for (const Edge& e : h.edges_at_least[i])
        if (!h.nodes_at_least[i].count(e.u) || !h.nodes_at_least[i].count(e.v)) {
          ok = false;
          det = edge_str(e) + " at level " + std::to_string(i) +
                " has an endpoint outside scope";
          break;
        }
    add("edge_endpoints_in_scope", ok, det);
  }

  {
    bool ok = true;
    std::string det;
    for (const auto& [e, l] : h.edge_level) {
      if (l < 0 || l > L || !h.edges_at_least[l].count(e) ||
          (l < L && h.edges_at_least[l + 1].count(e))) {
        ok = false;
        det = edge_str(e) + " has stored level " + std::to_string(l) +
              " inconsistent with the sets";
        break;
      }
    }
    if (ok)
      for (const Edge& e : h.edges_at_least[0])
        if (!h.edge_level.count(e)) {
          ok = false;
          det = edge_str(e) + " lacks a level entry";
          break;
        }
    if (ok && h.edge_level.size() != h.edges_at_least[0].size()) {
      ok = false;
      det = "stale level entries";
    }
    add("edge_level_map", ok, det);
  }

  {
    bool ok = true;
    std::string det;
    for (NodeId v = 0; v < p.n; ++v) {
      int l = h.node_level[v];
      if (l < 0 || l > L || !h.nodes_at[l].count(v)) {
        ok = false;
        det = "node " + std::to_string(v) + " not in its recorded level " +
              std::to_string(l);
        break;
      }
    }
    add("node_level_map", ok, det);
  }

  {
    bool ok = true;
    std::string det;
    for (int i = 0; ok && i <= L; ++i)
      for (const Edge& e : h.frozen[i]) {
        int le = h.edge_level.at(e);
        int lmin = std::min(h.node_level[e.u], h.node_level[e.v]);
        if (le != i || lmin != i) {
          ok = false;
          det = edge_str(e) + " frozen at " + std::to_string(i) + " but level " +
                std::to_string(le) + ", endpoint min " + std::to_string(lmin);
          break;
        }
      }
    add("frozen_level_law", ok, det);
  }

  {
    bool ok = true;
    std::string det;
    for (int i = 0; ok && i <= L; ++i) {
      double wl = std::ldexp(p.lambda, i);
      if (!h.frozen[i].empty() && !(wl < p.beta)) {
        ok = false;
        det = "level " + std::to_string(i) + " weight " + std::to_string(wl) +
              " not below " + std::to_string(p.beta);
      }
    }
    add("frozen_weight_bound", ok, det);
  }

  {
    bool ok = true;
    std::string det;
    std::size_t count = 0;
    for (int i = 0; ok && i <= L; ++i)
      for (const Edge& e : h.frozen[i])
        if (active.count(e)) {
          ++count;
          if (!frozen_active.count(e)) {
            ok = false;
            det = edge_str(e) + " missing from the exported set";
            break;
          }
        }
    if (ok && count != frozen_active.size()) {
      ok = false;
      det = "exported set has extra edges";
    }
    add("frozen_active_sync", ok, det);
  }

  {
    std::int64_t expect = std::int64_t(passive.size());
    for (const EdgeSet& d : dead) expect += std::int64_t(d.size());
    add("potential_count", potential == expect,
        std::to_string(potential) + " vs recount " + std::to_string(expect));
  }

  {
    bool ok = true;
    std::string det;
    for (int i = 0; ok && i < L; ++i) {
      std::vector<char> seen(h.nodes_at[i].size(), 0);
      for (NodeId v : h.nodes_at[i]) {
        std::int64_t s = h.peel_stamp[v];
        if (s < 0 || s >= std::int64_t(seen.size()) || seen[s]) {
          ok = false;
          det = "bad stamp " + std::to_string(s) + " at node " + std::to_string(v);
          break;
        }
        seen[s] = 1;
      }
    }
    if (ok)
      for (NodeId v : h.nodes_at[L])
        if (h.peel_stamp[v] != -1) {
          ok = false;
          det = "top-level node " + std::to_string(v) + " carries a stamp";
          break;
        }
    add("peel_stamps", ok, det);
  }

  return r;
}

}  // namespace dynsparsify
