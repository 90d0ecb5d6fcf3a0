#include "dynsparsify/degree_split.hpp"

#include <deque>

namespace dynsparsify {

namespace {

struct DirEntry {
  NodeId src = 0;
  NodeId dst = 0;
  std::uint32_t id = 0;
};

// Lexicographic sort by two stable counting passes; O(m + n).
std::vector<Edge> canonical_order(std::span<const Edge> edges, std::size_t n) {
  std::vector<Edge> a(edges.begin(), edges.end()), b(a.size());
  std::vector<std::uint32_t> cnt(n + 1, 0);
  for (const Edge& e : a) ++cnt[e.v];
  for (std::size_t i = 1; i <= n; ++i) cnt[i] += cnt[i - 1];
  for (auto it = a.rbegin(); it != a.rend(); ++it) b[--cnt[it->v]] = *it;
  cnt.assign(n + 1, 0);
  for (const Edge& e : b) ++cnt[e.u];
  for (std::size_t i = 1; i <= n; ++i) cnt[i] += cnt[i - 1];
  for (auto it = b.rbegin(); it != b.rend(); ++it) a[--cnt[it->u]] = *it;
  return a;
}

}  // namespace

WalkDecomposition decompose_walks(std::span<const Edge> edges, std::size_t n) {
  std::vector<Edge> es = canonical_order(edges, n);
  const std::size_t m = es.size();

  // Directed copies radix-sorted by (src, dst): per-node incidence lists in
  // ascending neighbor order, independent of the caller's edge order.
  std::vector<DirEntry> dir(2 * m), tmp(2 * m);
  for (std::uint32_t i = 0; i < m; ++i) {
    dir[2 * i] = {es[i].u, es[i].v, i};
    dir[2 * i + 1] = {es[i].v, es[i].u, i};
  }
  std::vector<std::uint32_t> cnt(n + 1, 0);
  for (const DirEntry& d : dir) ++cnt[d.dst];
  for (std::size_t i = 1; i <= n; ++i) cnt[i] += cnt[i - 1];
  for (auto it = dir.rbegin(); it != dir.rend(); ++it) tmp[--cnt[it->dst]] = *it;
  cnt.assign(n + 1, 0);
  for (const DirEntry& d : tmp) ++cnt[d.src];
  std::vector<std::uint32_t> head(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) head[i] = head[i - 1] + cnt[i - 1];
  {
    std::vector<std::uint32_t> fill(head.begin(), head.end() - 1);
    for (const DirEntry& d : tmp) dir[fill[d.src]++] = d;
  }

  std::vector<char> used(m, 0);
  std::vector<std::uint32_t> cursor(head.begin(), head.end() - 1);
  auto next_unused = [&](NodeId x) -> std::int64_t {
    std::uint32_t& c = cursor[x];
    while (c < head[x + 1] && used[dir[c].id]) ++c;
    return c < head[x + 1] ? std::int64_t(c) : -1;
  };

  WalkDecomposition out;
  // Residual degrees only decrease, so the lowest node with an unused
  // incident edge moves monotonically and one sweep suffices.
  NodeId scan = 0;
  while (scan < n) {
    if (next_unused(scan) < 0) {
      ++scan;
      continue;
    }
    NodeId s = scan;
    std::deque<NodeId> path{s};
    std::deque<Edge> wedges;
    NodeId cur = s;
    for (std::int64_t k; (k = next_unused(cur)) >= 0;) {
      used[dir[k].id] = 1;
      path.push_back(dir[k].dst);
      wedges.push_back(es[dir[k].id]);
      cur = dir[k].dst;
    }
    cur = s;
    for (std::int64_t k; (k = next_unused(cur)) >= 0;) {
      used[dir[k].id] = 1;
      path.push_front(dir[k].dst);
      wedges.push_front(es[dir[k].id]);
      cur = dir[k].dst;
    }
    Walk w;
    w.nodes.assign(path.begin(), path.end());
    w.edges.assign(wedges.begin(), wedges.end());
    out.walks.push_back(std::move(w));
  }
  return out;
}

std::vector<Edge> even_edges(const Walk& w) {
  std::vector<Edge> out;
  out.reserve((w.edges.size() + 1) / 2);
  for (std::size_t i = 0; i < w.edges.size(); i += 2) out.push_back(w.edges[i]);
  return out;
}

std::vector<Edge> degree_split(std::span<const Edge> edges, std::size_t n) {
  WalkDecomposition d = decompose_walks(edges, n);
  std::vector<Edge> out;
  for (const Walk& w : d.walks)
    for (std::size_t i = 0; i < w.edges.size(); i += 2) out.push_back(w.edges[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dynsparsify
