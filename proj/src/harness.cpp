#include "dynsparsify/harness.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dynsparsify/oracles.hpp"

namespace dynsparsify {

CheckConfig CheckConfig::none() {
  CheckConfig c;
  c.volume_each_event = false;
  c.sandwich_each_event = false;
  c.full_invariants = false;
  c.equivalence = false;
  c.drift = false;
  c.orientation = false;
  c.certificate = false;
  c.mu_oracle = false;
  return c;
}

CheckConfig CheckConfig::all() {
  CheckConfig c;
  c.volume_each_event = true;
  c.sandwich_each_event = true;
  c.full_invariants = true;
  c.equivalence = true;
  c.drift = true;
  c.orientation = true;
  c.certificate = true;
  c.mu_oracle = false;  // opt-in: exact oracles are exponential-ish in spirit, cubic in size
  return c;
}

CheckConfig CheckConfig::from_list(const std::string& list) {
  if (list.empty() || list == "default") return CheckConfig{};
  if (list == "all") return all();
  if (list == "none") return none();
  CheckConfig c = none();
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    if (name == "volume")
      c.volume_each_event = true;
    else if (name == "sandwich")
      c.sandwich_each_event = true;
    else if (name == "invariants")
      c.full_invariants = true;
    else if (name == "equivalence")
      c.equivalence = true;
    else if (name == "drift")
      c.drift = true;
    else if (name == "orientation")
      c.orientation = true;
    else if (name == "certificate")
      c.certificate = true;
    else if (name == "mu")
      c.mu_oracle = true;
    else
      throw std::invalid_argument("unknown check '" + name + "'");
  }
  return c;
}

namespace {

using Clock = std::chrono::steady_clock;

void fail(RunReport& rep, std::size_t event, std::string name, std::string detail) {
  rep.failures.push_back({event, std::move(name), std::move(detail)});
}

[[noreturn]] void misuse(std::size_t event, const std::string& what) {
  throw std::runtime_error("event " + std::to_string(event + 1) + ": " + what);
}

struct PotentialSnapshot {
  std::int64_t potential = 0;
  std::int64_t passive = 0;
  std::vector<std::int64_t> dead;
};

PotentialSnapshot snapshot(const UniformSparsifier& us) {
  PotentialSnapshot s;
  s.potential = us.metrics().potential;
  s.passive = std::int64_t(us.passive_edges().size());
  for (const auto& d : us.dead_edges()) s.dead.push_back(std::int64_t(d.size()));
  return s;
}

std::int64_t counted_potential(const UniformSparsifier& us) {
  std::int64_t c = std::int64_t(us.passive_edges().size());
  for (const auto& d : us.dead_edges()) c += std::int64_t(d.size());
  return c;
}

void audit_potential(const UniformSparsifier& us, const PotentialSnapshot& pre, bool was_insert,
                     std::size_t idx, RunReport& rep) {
  const Metrics& m = us.metrics();
  const int L = us.levels();
  std::int64_t pot = m.potential;
  auto bad = [&](const std::string& what) {
    std::ostringstream os;
    os << what << " (gain " << m.last_potential_gain << ", drop " << m.last_potential_drop
       << ", potential " << pre.potential << " -> " << pot << ")";
    fail(rep, idx + 1, "potential_audit", os.str());
  };

  if (counted_potential(us) != pot) {
    bad("potential counter differs from set sizes");
    return;
  }
  if (pot - pre.potential != m.last_potential_gain - m.last_potential_drop) {
    bad("gain minus drop does not explain the potential change");
    return;
  }

  if (was_insert) {
    if (m.last_potential_gain != 1) return bad("insertion must gain exactly 1");
    if (m.last_insert_triggered) {
      if (pot != 0) return bad("triggered merge must clear the potential");
      if (m.last_potential_drop != pre.potential + 1)
        return bad("merge drop must equal all passive and dead edges");
    } else if (m.last_potential_drop != 0) {
      return bad("untriggered insertion must not drop");
    }
    return;
  }

  int k = m.last_deleted_level;
  if (k < 0) {
    // The edge was passive; it just leaves.
    if (m.last_potential_gain != 0 || m.last_potential_drop != 1)
      return bad("passive removal must drop exactly 1");
    if (m.last_delete_trigger_level >= 0 || m.last_passive_rebalance)
      return bad("passive removal must not trigger rebuilds");
    return;
  }

  std::int64_t gain = m.last_potential_gain;
  if (gain != k + 1) return bad("deletion at level k must gain k+1");
  if (gain > L + 1) return bad("deletion gain above L+1");

  int j = m.last_delete_trigger_level;
  if (m.last_passive_rebalance) {
    if (pot != 0) return bad("rebalance must clear the potential");
    if (m.last_potential_drop != pre.potential + gain)
      return bad("rebalance drop must equal everything held");
    return;
  }
  if (j >= 0) {
    std::int64_t expect = 0;
    for (int i = j; i <= L; ++i) expect += pre.dead[std::size_t(i)] + (i <= k ? 1 : 0);
    if (m.last_potential_drop != expect) return bad("dead-volume drop must equal the cleared sets");
    return;
  }
  if (m.last_potential_drop != 0) return bad("untriggered deletion must not drop");
}

std::int64_t below_cap(const Params& p) { return p.peel_threshold(); }

std::int64_t top_cap(const Params& p, int L) {
  double linear = 1.0 + 4.0 * p.eps * double(L);
  double power = std::pow(1.0 + 2.0 * p.eps, double(L));
  return std::int64_t(std::ceil((2.0 / p.beta) * std::max(linear, power)));
}

void check_drift(const oracles::StaticRerun& rerun, const Params& p, double tol, std::size_t idx,
                 RunReport& rep) {
  const Hierarchy& h = rerun.hierarchy;
  for (int i = 0; i < h.levels; ++i) {
    const auto& lo = rerun.gamma_mult[std::size_t(i)];
    const auto& hi = rerun.gamma_mult[std::size_t(i) + 1];
    for (std::size_t v = 0; v < lo.size(); ++v) {
      if (h.nodes_at_least[std::size_t(i) + 1].count(NodeId(v))) {
        double ratio = double(hi[v]) / double(lo[v]);
        if (ratio < 1.0 - 2.0 * p.eps - tol || ratio > 1.0 + 2.0 * p.eps + tol) {
          std::ostringstream os;
          os << "node " << v << " weight ratio " << ratio << " out of [1-2eps, 1+2eps] at round "
             << i;
          fail(rep, idx, "drift", os.str());
          return;
        }
      } else if (hi[v] != lo[v]) {
        std::ostringstream os;
        os << "settled node " << v << " changed weight at round " << i;
        fail(rep, idx, "drift", os.str());
        return;
      }
    }
  }
}

void uniform_checkpoint(const UniformSparsifier& us, const CheckConfig& cfg, std::size_t idx,
                        RunReport& rep) {
  if (cfg.full_invariants) {
    ++rep.checks_run;
    InvariantReport ir = us.check_invariants();
    if (!ir.all_pass()) fail(rep, idx, "invariants", ir.failures());
  }
  if (cfg.equivalence || cfg.drift) {
    oracles::StaticRerunInput in{us.params().n, us.active_edges(), us.dead_edges(), us.params()};
    oracles::StaticRerun rerun = oracles::analogous_static_hierarchy(in);
    if (cfg.equivalence) {
      ++rep.checks_run;
      std::string diff = us.hierarchy().first_difference(rerun.hierarchy);
      if (!diff.empty()) fail(rep, idx, "equivalence", diff);
    }
    if (cfg.drift) {
      ++rep.checks_run;
      check_drift(rerun, us.params(), cfg.tol, idx, rep);
    }
  }
  if (cfg.orientation) {
    ++rep.checks_run;
    const Hierarchy& h = us.hierarchy();
    EdgeSet all;
    for (const auto& f : h.frozen) all.insert(f.begin(), f.end());
    std::vector<Edge> edges = sorted_edges(all);
    Orientation o = us.orientation();
    std::string why;
    if (!oracles::verify_orientation(edges, o, below_cap(us.params()),
                                     top_cap(us.params(), h.levels), h.node_level, h.levels,
                                     &why))
      fail(rep, idx, "orientation", why);
  }
}

void uniform_certificate(const UniformSparsifier& us, const WeightFn& w, const CheckConfig& cfg,
                         std::size_t idx, RunReport& rep) {
  const Params& p = us.params();
  WeightFn hp = us.certified_matching();
  rep.size_w = w.total();
  rep.size_certificate = hp.total();
  ++rep.checks_run;

  for (const auto& [e, val] : hp.entries()) {
    if (val >= p.beta) {
      std::ostringstream os;
      os << "certificate weight " << val << " at (" << e.u << "," << e.v << ") reached beta";
      fail(rep, idx, "certificate", os.str());
      return;
    }
    if (val < -cfg.tol) {
      fail(rep, idx, "certificate", "negative certificate weight");
      return;
    }
  }
  for (NodeId v = 0; v < p.n; ++v) {
    if (hp.node_weight(v) > w.node_weight(v) + cfg.tol) {
      std::ostringstream os;
      os << "certificate exceeds the uniform weight at node " << v;
      fail(rep, idx, "certificate", os.str());
      return;
    }
  }
  double slack = 1.0 + 60.0 * p.eps * std::log2(p.beta / p.lambda);
  if (w.total() > slack * hp.total() + cfg.tol) {
    std::ostringstream os;
    os << "size(w) = " << w.total() << " above " << slack << " * size(h') = "
       << slack * hp.total();
    fail(rep, idx, "certificate_size", os.str());
  }
  if (hp.total() > 0) rep.ratio_size = w.total() / hp.total();
}

void matching_ratio(const DynGraph& g, const std::vector<Edge>& sparsifier, std::size_t n,
                    RunReport& rep) {
  DynGraph s(n);
  for (const Edge& e : sparsifier) s.insert_edge(e);
  rep.mu_graph = std::int64_t(oracles::max_matching(g).size());
  rep.mu_sparsifier = std::int64_t(oracles::max_matching(s).size());
  if (*rep.mu_sparsifier > 0) rep.ratio_mu = double(*rep.mu_graph) / double(*rep.mu_sparsifier);
}

}  // namespace

RunReport run_uniform_stream(const Params& p, std::span<const UpdateEvent> events,
                             const CheckConfig& cfg) {
  RunReport rep;
  rep.mode = "uniform";
  rep.n = p.n;
  rep.eps = p.eps;
  rep.beta = p.beta;
  rep.lambda = p.lambda;

  UniformSparsifier us(p);
  DynGraph g(p.n);
  WeightFn w(p.n);
  rep.recourse_series.reserve(events.size());

  auto started = Clock::now();
  for (std::size_t idx = 0; idx < events.size(); ++idx) {
    const UpdateEvent& ev = events[idx];
    if (ev.kind == UpdateEvent::Kind::set_weight)
      misuse(idx, "uniform mode cannot apply reweight events");
    bool is_insert = ev.kind == UpdateEvent::Kind::insert;
    if (is_insert && std::abs(ev.weight - p.lambda) > 1e-12)
      misuse(idx, "uniform mode requires every inserted weight to equal lambda");

    try {
      apply_event(g, w, is_insert ? UpdateEvent{ev.kind, ev.u, ev.v, p.lambda} : ev);
    } catch (const GraphUpdateError& e) {
      misuse(idx, e.what());
    }
    Edge e(ev.u, ev.v);
    if (is_insert && (w.node_weight(e.u) > 1.0 + cfg.tol || w.node_weight(e.v) > 1.0 + cfg.tol))
      misuse(idx, "insert would push a node weight above 1");

    PotentialSnapshot pre;
    if (cfg.volume_each_event) pre = snapshot(us);
    if (is_insert)
      us.handle_insertion(e);
    else
      us.handle_deletion(e);
    ++rep.events_applied;
    rep.recourse_series.push_back(us.metrics().last_recourse);

    if (cfg.volume_each_event) {
      ++rep.checks_run;
      if (!us.volume_invariants_hold())
        fail(rep, idx + 1, "volume_invariants", "a lazy set outgrew its budget");
      audit_potential(us, pre, is_insert, idx, rep);
    }
    if (cfg.check_every && (idx + 1) % cfg.check_every == 0 && idx + 1 != events.size())
      uniform_checkpoint(us, cfg, idx + 1, rep);
  }

  uniform_checkpoint(us, cfg, events.size(), rep);
  if (cfg.certificate) uniform_certificate(us, w, cfg, events.size(), rep);
  if (cfg.mu_oracle && g.edge_count() > 0)
    matching_ratio(g, us.sparsifier_edges(), p.n, rep);
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - started).count();

  rep.total_recourse = us.metrics().recourse;
  rep.total_work = us.metrics().work;
  rep.rebuilds = us.metrics().rebuilds;
  rep.cleanups = us.metrics().cleanups;
  rep.sparsifier_size = us.sparsifier_edge_set().size();
  rep.edge_count = g.edge_count();
  rep.orientation_cap = std::max(below_cap(p), top_cap(p, us.levels()));
  return rep;
}

namespace {

void general_checkpoint(const GeneralSparsifier& gs, const CheckConfig& cfg, std::size_t idx,
                        RunReport& rep) {
  if (cfg.full_invariants) {
    ++rep.checks_run;
    InvariantReport ir = gs.check_invariants();
    if (!ir.all_pass()) fail(rep, idx, "invariants", ir.failures());
  }
  if (cfg.equivalence || cfg.drift) {
    for (int j = 0; j < gs.bracket_count(); ++j) {
      const UniformSparsifier* lp = gs.level(j);
      if (!lp) continue;
      oracles::StaticRerunInput in{lp->params().n, lp->active_edges(), lp->dead_edges(),
                                   lp->params()};
      oracles::StaticRerun rerun = oracles::analogous_static_hierarchy(in);
      if (cfg.equivalence) {
        ++rep.checks_run;
        std::string diff = lp->hierarchy().first_difference(rerun.hierarchy);
        if (!diff.empty())
          fail(rep, idx, "equivalence", "bracket " + std::to_string(j) + ": " + diff);
      }
      if (cfg.drift) {
        ++rep.checks_run;
        check_drift(rerun, lp->params(), cfg.tol, idx, rep);
      }
    }
  }
  if (cfg.orientation) {
    ++rep.checks_run;
    // Heavy edges all point away from their lower endpoint.
    std::unordered_map<NodeId, std::int64_t> hout;
    for (const Edge& e : gs.heavy_edges()) ++hout[e.u];
    std::int64_t hcap = std::int64_t(std::ceil(1.0 / gs.discretization().beta));
    for (const auto& [v, d] : hout)
      if (d > hcap) {
        std::ostringstream os;
        os << "node " << v << " sends out " << d << " heavy edges, cap " << hcap;
        fail(rep, idx, "orientation", os.str());
        return;
      }
    for (int j = 0; j < gs.bracket_count(); ++j) {
      const UniformSparsifier* lp = gs.level(j);
      if (!lp) continue;
      const Hierarchy& h = lp->hierarchy();
      EdgeSet all;
      for (const auto& f : h.frozen) all.insert(f.begin(), f.end());
      std::vector<Edge> edges = sorted_edges(all);
      Orientation o = lp->orientation();
      std::string why;
      if (!oracles::verify_orientation(edges, o, below_cap(lp->params()),
                                       top_cap(lp->params(), h.levels), h.node_level, h.levels,
                                       &why)) {
        fail(rep, idx, "orientation", "bracket " + std::to_string(j) + ": " + why);
        return;
      }
    }
  }
}

void general_certificate(const GeneralSparsifier& gs, const CheckConfig& cfg, std::size_t idx,
                         RunReport& rep) {
  WeightFn ph = gs.phi();
  const WeightFn& w = gs.weights();
  const WeightFn& what = gs.discretized();
  rep.size_w = w.total();
  rep.size_certificate = ph.total();
  ++rep.checks_run;

  EdgeSet es = gs.sparsifier_edge_set();
  for (const auto& [e, val] : ph.entries()) {
    if (!es.count(e)) {
      fail(rep, idx, "certificate", "certificate uses an edge outside the sparsifier");
      return;
    }
    if (val < -cfg.tol) {
      fail(rep, idx, "certificate", "negative certificate weight");
      return;
    }
  }
  for (NodeId v = 0; v < NodeId(ph.node_count()); ++v) {
    if (ph.node_weight(v) > what.node_weight(v) + cfg.tol) {
      std::ostringstream os;
      os << "certificate exceeds the discretized weight at node " << v;
      fail(rep, idx, "certificate", os.str());
      return;
    }
    if (ph.node_weight(v) > 1.0 + cfg.tol) {
      std::ostringstream os;
      os << "certificate weight above 1 at node " << v;
      fail(rep, idx, "certificate", os.str());
      return;
    }
  }
  if (w.total() >= 1.0) {
    double beta = gs.discretization().beta;
    double slack = (1.0 + 3.0 * beta) *
                   (1.0 + 120.0 * rep.eps * std::log2(double(gs.graph().node_count())));
    if (w.total() > slack * ph.total() + cfg.tol) {
      std::ostringstream os;
      os << "size(w) = " << w.total() << " above " << slack
         << " * size(phi) = " << slack * ph.total();
      fail(rep, idx, "certificate_size", os.str());
    }
  }
  if (ph.total() > 0) rep.ratio_size = w.total() / ph.total();
}

}  // namespace

RunReport run_general_stream(std::size_t n, double eps, double beta,
                             std::span<const UpdateEvent> events, const CheckConfig& cfg) {
  RunReport rep;
  rep.mode = "general";
  rep.n = n;
  rep.eps = eps;
  rep.beta = beta;

  GeneralSparsifier gs(n, eps, beta);
  rep.recourse_series.reserve(events.size());

  auto started = Clock::now();
  for (std::size_t idx = 0; idx < events.size(); ++idx) {
    try {
      gs.apply(events[idx]);
    } catch (const GraphUpdateError& e) {
      misuse(idx, e.what());
    }
    ++rep.events_applied;
    rep.recourse_series.push_back(gs.metrics().last_recourse);

    if (cfg.volume_each_event) {
      ++rep.checks_run;
      if (!gs.volume_invariants_hold())
        fail(rep, idx + 1, "volume_invariants", "a lazy set outgrew its budget");
    }
    if (cfg.sandwich_each_event) {
      ++rep.checks_run;
      if (auto bad = gs.sandwich_violation(cfg.tol))
        fail(rep, idx + 1, "sandwich", *bad);
    }
    if (cfg.check_every && (idx + 1) % cfg.check_every == 0 && idx + 1 != events.size())
      general_checkpoint(gs, cfg, idx + 1, rep);
  }

  general_checkpoint(gs, cfg, events.size(), rep);
  if (cfg.certificate) general_certificate(gs, cfg, events.size(), rep);
  if (cfg.mu_oracle && gs.graph().edge_count() > 0)
    matching_ratio(gs.graph(), gs.sparsifier_edges(), n, rep);
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - started).count();

  rep.total_recourse = gs.metrics().recourse;
  rep.total_work = gs.metrics().work;
  for (int j = 0; j < gs.bracket_count(); ++j)
    if (const UniformSparsifier* lp = gs.level(j)) {
      rep.rebuilds += lp->metrics().rebuilds;
      rep.cleanups += lp->metrics().cleanups;
    }
  rep.sparsifier_size = gs.sparsifier_edge_set().size();
  rep.edge_count = gs.graph().edge_count();
  rep.orientation_cap = gs.orientation_bound();
  return rep;
}

std::string RunReport::to_json(bool include_timings) const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["mode"] = mode;
  nlohmann::json params;
  params["n"] = n;
  params["eps"] = eps;
  params["beta"] = beta;
  if (mode == "uniform") params["lambda"] = lambda;
  j["params"] = std::move(params);
  j["events"] = events_applied;

  nlohmann::json checks;
  checks["run"] = checks_run;
  nlohmann::json fl = nlohmann::json::array();
  for (const CheckFailure& f : failures)
    fl.push_back({{"event", f.event}, {"name", f.name}, {"detail", f.detail}});
  checks["failures"] = std::move(fl);
  j["checks"] = std::move(checks);

  j["recourse"] = {{"total", total_recourse}, {"series", recourse_series}};
  j["work"] = {{"total", total_work}};
  j["structure"] = {{"sparsifier_size", sparsifier_size},
                    {"edges", edge_count},
                    {"rebuilds", rebuilds},
                    {"cleanups", cleanups},
                    {"orientation_cap", orientation_cap}};

  nlohmann::json cert;
  cert["size_w"] = size_w;
  cert["size_certificate"] = size_certificate;
  if (ratio_size) cert["ratio_size"] = *ratio_size;
  if (mu_graph) cert["mu_graph"] = *mu_graph;
  if (mu_sparsifier) cert["mu_sparsifier"] = *mu_sparsifier;
  if (ratio_mu) cert["ratio_mu"] = *ratio_mu;
  j["certificate"] = std::move(cert);

  if (include_timings) j["timings_ms"] = {{"wall", wall_ms}};
  return j.dump(2);
}

}  // namespace dynsparsify
