#include "dynsparsify/graph.hpp"

namespace dynsparsify {

void apply_event(DynGraph& g, WeightFn& w, const UpdateEvent& ev) {
  if (ev.u == ev.v)
    throw GraphUpdateError(UpdateErrorCode::self_loop,
                           "self-loop at node " + std::to_string(ev.u));
  Edge e(ev.u, ev.v);
  switch (ev.kind) {
    case UpdateEvent::Kind::insert:
      if (ev.weight < 0.0 || ev.weight > 1.0)
        throw GraphUpdateError(UpdateErrorCode::invalid_weight,
                               "weight outside [0,1]: " + std::to_string(ev.weight));
      g.insert_edge(e);
      w.set(e, ev.weight);
      break;
    case UpdateEvent::Kind::erase:
      g.erase_edge(e);
      w.erase(e);
      break;
    case UpdateEvent::Kind::set_weight:
      if (ev.weight < 0.0 || ev.weight > 1.0)
        throw GraphUpdateError(UpdateErrorCode::invalid_weight,
                               "weight outside [0,1]: " + std::to_string(ev.weight));
      if (!g.has_edge(e))
        throw GraphUpdateError(UpdateErrorCode::missing_edge,
                               "weight change on absent edge");
      w.set(e, ev.weight);
      break;
  }
}

bool validate_fractional(const WeightFn& w, const DynGraph& g, double tol) {
  for (const auto& [e, x] : w.entries()) {
    if (!g.has_edge(e))
      throw std::invalid_argument("weighted edge not in graph");
    if (x < -tol) return false;
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (w.node_weight(v) > 1.0 + tol) return false;
  return true;
}

double node_weight_recomputed(const WeightFn& w, const DynGraph& g, NodeId v) {
  double s = 0.0;
  for (NodeId u : g.neighbors(v)) s += w.value(Edge(u, v));
  return s;
}

}  // namespace dynsparsify
