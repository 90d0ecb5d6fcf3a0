#include "dynsparsify/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dynsparsify/oracles.hpp"
#include "dynsparsify/rng.hpp"

namespace dynsparsify {

namespace {

NodeId parse_node(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  long long v = -1;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw TraceError(line, "bad node id '" + tok + "'");
  }
  if (used != tok.size() || v < 0 || v > 0xffffffffLL)
    throw TraceError(line, "bad node id '" + tok + "'");
  return NodeId(v);
}

double parse_weight(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw TraceError(line, "bad weight '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(x)) throw TraceError(line, "bad weight '" + tok + "'");
  return x;
}

}  // namespace

std::vector<UpdateEvent> parse_trace(std::istream& in) {
  std::vector<UpdateEvent> events;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) {
      if (t[0] == '#') break;
      tok.push_back(t);
    }
    if (tok.empty()) continue;
    UpdateEvent ev;
    if (tok[0] == "+") {
      if (tok.size() != 4) throw TraceError(lineno, "insert takes: + u v weight");
      ev.kind = UpdateEvent::Kind::insert;
      ev.u = parse_node(tok[1], lineno);
      ev.v = parse_node(tok[2], lineno);
      ev.weight = parse_weight(tok[3], lineno);
    } else if (tok[0] == "-") {
      if (tok.size() != 3) throw TraceError(lineno, "delete takes: - u v");
      ev.kind = UpdateEvent::Kind::erase;
      ev.u = parse_node(tok[1], lineno);
      ev.v = parse_node(tok[2], lineno);
    } else if (tok[0] == "w") {
      if (tok.size() != 4) throw TraceError(lineno, "reweight takes: w u v weight");
      ev.kind = UpdateEvent::Kind::set_weight;
      ev.u = parse_node(tok[1], lineno);
      ev.v = parse_node(tok[2], lineno);
      ev.weight = parse_weight(tok[3], lineno);
    } else {
      throw TraceError(lineno, "unknown op '" + tok[0] + "'");
    }
    if (ev.u == ev.v) throw TraceError(lineno, "self loop");
    events.push_back(ev);
  }
  return events;
}

std::vector<UpdateEvent> parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
  return parse_trace(in);
}

void write_trace(std::ostream& out, std::span<const UpdateEvent> events) {
  char buf[64];
  for (const UpdateEvent& ev : events) {
    switch (ev.kind) {
      case UpdateEvent::Kind::insert:
        std::snprintf(buf, sizeof buf, "%.17g", ev.weight);
        out << "+ " << ev.u << ' ' << ev.v << ' ' << buf << '\n';
        break;
      case UpdateEvent::Kind::erase:
        out << "- " << ev.u << ' ' << ev.v << '\n';
        break;
      case UpdateEvent::Kind::set_weight:
        std::snprintf(buf, sizeof buf, "%.17g", ev.weight);
        out << "w " << ev.u << ' ' << ev.v << ' ' << buf << '\n';
        break;
    }
  }
}

void write_trace_file(const std::string& path, std::span<const UpdateEvent> events) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file '" + path + "' for writing");
  write_trace(out, events);
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

std::size_t infer_node_count(std::span<const UpdateEvent> events) {
  std::size_t n = 0;
  for (const UpdateEvent& ev : events) n = std::max({n, std::size_t(ev.u) + 1, std::size_t(ev.v) + 1});
  return n;
}

TraceKind trace_kind_from_string(const std::string& s) {
  if (s == "random-insert-delete") return TraceKind::random_insert_delete;
  if (s == "decremental") return TraceKind::decremental;
  if (s == "sliding-window") return TraceKind::sliding_window;
  if (s == "weight-churn") return TraceKind::weight_churn;
  throw std::invalid_argument("unknown trace kind '" + s + "'");
}

WeightDist weight_dist_from_string(const std::string& s) {
  if (s == "constant") return WeightDist::constant;
  if (s == "log-uniform") return WeightDist::log_uniform;
  if (s == "mixed") return WeightDist::mixed;
  throw std::invalid_argument("unknown weight distribution '" + s + "'");
}

std::string to_string(TraceKind k) {
  switch (k) {
    case TraceKind::random_insert_delete: return "random-insert-delete";
    case TraceKind::decremental: return "decremental";
    case TraceKind::sliding_window: return "sliding-window";
    case TraceKind::weight_churn: return "weight-churn";
  }
  return "?";
}

std::string to_string(WeightDist d) {
  switch (d) {
    case WeightDist::constant: return "constant";
    case WeightDist::log_uniform: return "log-uniform";
    case WeightDist::mixed: return "mixed";
  }
  return "?";
}

MaximalStrategy maximal_strategy_from_string(const std::string& s) {
  if (s == "water-fill") return MaximalStrategy::water_fill;
  if (s == "fractional-oracle") return MaximalStrategy::fractional_oracle;
  if (s == "greedy-residual") return MaximalStrategy::greedy_residual;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

namespace {

struct StreamState {
  const TraceSpec& spec;
  Rng rng;
  std::vector<Edge> present;
  std::unordered_map<Edge, std::size_t, EdgeHash> pos;
  WeightFn weights;
  std::vector<std::int64_t> degree;
  std::int64_t degree_cap = 0;

  explicit StreamState(const TraceSpec& s)
      : spec(s), rng(s.seed), weights(s.n), degree(s.n, 0) {
    if (s.uniform_lambda > 0)
      degree_cap = std::int64_t(1.0 / s.uniform_lambda + 1e-9);
  }

  bool uniform() const { return spec.uniform_lambda > 0; }

  double draw_weight() {
    switch (spec.wdist) {
      case WeightDist::constant:
        return 0.5;
      case WeightDist::log_uniform:
        return spec.wmin * std::pow(1.0 / spec.wmin, rng.unit());
      case WeightDist::mixed:
        if (rng.chance(0.5)) return spec.wmin * std::pow(1.0 / spec.wmin, rng.unit());
        return rng.chance(0.5) ? 0.5 : 0.05;
    }
    return 0.5;
  }

  std::optional<Edge> sample_pair() {
    std::size_t n = spec.n;
    for (int tries = 0; tries < 64; ++tries) {
      NodeId u, v;
      if (spec.bipartite) {
        std::size_t half = n / 2;
        if (half == 0 || half == n) return std::nullopt;
        u = NodeId(rng.below(half));
        v = NodeId(half + rng.below(n - half));
      } else {
        u = NodeId(rng.below(n));
        v = NodeId(rng.below(n));
        if (u == v) continue;
      }
      Edge e(u, v);
      if (pos.count(e)) continue;
      if (uniform()) {
        if (degree[e.u] >= degree_cap || degree[e.v] >= degree_cap) continue;
      }
      return e;
    }
    return std::nullopt;
  }

  // Weight for a fresh insert; nothing feasible returns nullopt.
  std::optional<double> insert_weight(Edge e) {
    if (uniform()) return spec.uniform_lambda;
    double cap = std::min(1.0 - weights.node_weight(e.u), 1.0 - weights.node_weight(e.v));
    double x = std::min(draw_weight(), cap);
    if (x <= 1e-12) return std::nullopt;
    return x;
  }

  void note_insert(Edge e, double w) {
    pos[e] = present.size();
    present.push_back(e);
    weights.set(e, w);
    ++degree[e.u];
    ++degree[e.v];
  }

  void note_erase(Edge e) {
    std::size_t i = pos.at(e);
    pos.erase(e);
    present[i] = present.back();
    if (i + 1 != present.size()) pos[present[i]] = i;
    present.pop_back();
    weights.erase(e);
    --degree[e.u];
    --degree[e.v];
  }

  Edge random_present() { return present[rng.below(present.size())]; }
};

}  // namespace

std::vector<UpdateEvent> generate_trace(const TraceSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("trace needs at least two nodes");
  if (spec.uniform_lambda < 0 || spec.uniform_lambda > 1)
    throw std::invalid_argument("uniform weight must lie in [0, 1]");
  if (spec.kind == TraceKind::weight_churn && spec.uniform_lambda > 0)
    throw std::invalid_argument("weight churn is undefined for uniform-weight streams");

  StreamState st(spec);
  std::vector<UpdateEvent> out;
  out.reserve(spec.length);

  auto emit_insert = [&]() -> bool {
    auto e = st.sample_pair();
    if (!e) return false;
    auto w = st.insert_weight(*e);
    if (!w) return false;
    st.note_insert(*e, *w);
    out.push_back({UpdateEvent::Kind::insert, e->u, e->v, *w});
    return true;
  };
  auto emit_erase = [&](Edge e) {
    st.note_erase(e);
    out.push_back({UpdateEvent::Kind::erase, e.u, e.v, 0.0});
  };

  switch (spec.kind) {
    case TraceKind::random_insert_delete: {
      while (out.size() < spec.length) {
        bool want_insert = st.present.empty() || st.rng.chance(0.55);
        if (want_insert && emit_insert()) continue;
        if (!st.present.empty())
          emit_erase(st.random_present());
        else
          break;
      }
      break;
    }
    case TraceKind::decremental: {
      std::size_t target = spec.length / 2;
      while (out.size() < target && emit_insert()) {
      }
      std::vector<Edge> order = st.present;
      for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[st.rng.below(i)]);
      for (const Edge& e : order) emit_erase(e);
      break;
    }
    case TraceKind::sliding_window: {
      std::size_t window = spec.window ? spec.window : std::max<std::size_t>(1, spec.length / 4);
      std::deque<Edge> fifo;
      while (out.size() < spec.length) {
        auto e = st.sample_pair();
        if (!e) break;
        auto w = st.insert_weight(*e);
        if (!w) break;
        st.note_insert(*e, *w);
        out.push_back({UpdateEvent::Kind::insert, e->u, e->v, *w});
        fifo.push_back(*e);
        if (fifo.size() > window && out.size() < spec.length) {
          Edge old = fifo.front();
          fifo.pop_front();
          emit_erase(old);
        }
      }
      break;
    }
    case TraceKind::weight_churn: {
      std::size_t build = std::max<std::size_t>(1, spec.length / 4);
      while (out.size() < build && emit_insert()) {
      }
      while (out.size() < spec.length) {
        double roll = st.rng.unit();
        if (roll < 0.8 && !st.present.empty()) {
          Edge e = st.random_present();
          double cur = st.weights.value(e);
          double cap = std::min(1.0 - (st.weights.node_weight(e.u) - cur),
                                1.0 - (st.weights.node_weight(e.v) - cur));
          double x = std::max(0.0, std::min(st.draw_weight(), cap));
          st.weights.set(e, x);
          out.push_back({UpdateEvent::Kind::set_weight, e.u, e.v, x});
        } else if (roll < 0.9) {
          if (!emit_insert() && !st.present.empty()) emit_erase(st.random_present());
        } else if (!st.present.empty()) {
          emit_erase(st.random_present());
        } else if (!emit_insert()) {
          break;
        }
      }
      break;
    }
  }
  return out;
}

std::optional<WeightFn> gen_approx_maximal(const DynGraph& g, double alpha, double beta,
                                           MaximalStrategy strategy, std::uint64_t seed) {
  WeightFn w(g.node_count());
  std::vector<Edge> order = g.edges();
  Rng rng(seed);
  auto shuffle = [&]() {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);
  };
  switch (strategy) {
    case MaximalStrategy::water_fill: {
      shuffle();
      for (const Edge& e : order) {
        double x = std::min({beta, 1.0 - w.node_weight(e.u), 1.0 - w.node_weight(e.v)});
        if (x > 0) w.set(e, x);
      }
      break;
    }
    case MaximalStrategy::greedy_residual: {
      shuffle();
      for (const Edge& e : order) {
        double x = std::min(1.0 - w.node_weight(e.u), 1.0 - w.node_weight(e.v));
        if (x > 0) w.set(e, x);
      }
      break;
    }
    case MaximalStrategy::fractional_oracle: {
      std::size_t n = g.node_count();
      DynGraph cover(2 * n);
      for (const Edge& e : g.edges()) {
        cover.insert_edge(Edge(e.u, NodeId(n + e.v)));
        cover.insert_edge(Edge(e.v, NodeId(n + e.u)));
      }
      EdgeSet matched;
      for (const Edge& me : oracles::max_matching(cover).edges) matched.insert(me);
      for (const Edge& e : g.edges()) {
        int hits = int(matched.count(Edge(e.u, NodeId(n + e.v)))) +
                   int(matched.count(Edge(e.v, NodeId(n + e.u))));
        if (hits > 0) w.set(e, double(hits) / 2.0);
      }
      break;
    }
  }
  if (!oracles::is_approximately_maximal(w, g, alpha, beta)) return std::nullopt;
  return w;
}

}  // namespace dynsparsify
