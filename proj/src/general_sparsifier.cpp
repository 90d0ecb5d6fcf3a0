#include "dynsparsify/general_sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dynsparsify {

Discretization::Discretization(std::size_t n, double beta) : n(n), beta(beta) {
  if (n < 2) throw std::invalid_argument("discretization needs at least two nodes");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  double lo = beta / (double(n) * double(n));
  thresholds.push_back(lo);
  while (thresholds.back() * (1.0 + beta) < beta)
    thresholds.push_back(thresholds.back() * (1.0 + beta));
  K = int(thresholds.size()) - 1;
  thresholds.push_back(beta);
}

int Discretization::classify(double x) const {
  if (x < thresholds.front()) return kZero;
  if (x >= beta) return kHeavy;
  int i = int(std::log(x / thresholds.front()) / std::log1p(beta));
  i = std::clamp(i, 0, K);
  // The log is only a hint; the table is the authority at bracket boundaries.
  while (i > 0 && x < thresholds[std::size_t(i)]) --i;
  while (i < K && x >= thresholds[std::size_t(i) + 1]) ++i;
  return i;
}

double Discretization::rounded(int cls, double x) const {
  if (cls == kZero) return 0.0;
  if (cls == kHeavy) return x;
  return thresholds.at(std::size_t(cls));
}

GeneralSparsifier::GeneralSparsifier(std::size_t n, double eps, double beta)
    : n_(n),
      eps_(eps),
      beta_(beta),
      disc_(n, beta),
      g_(n),
      w_(n),
      what_(n),
      levels_(std::size_t(disc_.K) + 1) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
}

UniformSparsifier& GeneralSparsifier::ensure_level(int j) {
  auto& slot = levels_.at(std::size_t(j));
  if (!slot)
    slot = std::make_unique<UniformSparsifier>(
        Params::experiment(n_, eps_, beta_, disc_.threshold(j)));
  return *slot;
}

void GeneralSparsifier::structural_move(Edge e, int from, int to) {
  if (from == Discretization::kHeavy) {
    heavy_.erase(e);
    what_.erase(e);
    ++m_.last_recourse;
  } else if (from != Discretization::kZero) {
    auto& lvl = *levels_.at(std::size_t(from));
    lvl.handle_deletion(e);
    what_.erase(e);
    m_.last_recourse += lvl.metrics().last_recourse;
    m_.last_work += lvl.metrics().last_work;
  }
  if (to == Discretization::kHeavy) {
    heavy_.insert(e);
    what_.set(e, w_.value(e));
    ++m_.last_recourse;
  } else if (to != Discretization::kZero) {
    what_.set(e, disc_.threshold(to));
    auto& lvl = ensure_level(to);
    lvl.handle_insertion(e);
    m_.last_recourse += lvl.metrics().last_recourse;
    m_.last_work += lvl.metrics().last_work;
  }
}

void GeneralSparsifier::apply(const UpdateEvent& ev) {
  apply_event(g_, w_, ev);
  Edge e(ev.u, ev.v);
  ++m_.updates;
  m_.last_recourse = 0;
  m_.last_work = 0;
  switch (ev.kind) {
    case UpdateEvent::Kind::insert: {
      int h = disc_.classify(ev.weight);
      home_[e] = h;
      structural_move(e, Discretization::kZero, h);
      break;
    }
    case UpdateEvent::Kind::erase: {
      int h = home_.at(e);
      home_.erase(e);
      structural_move(e, h, Discretization::kZero);
      break;
    }
    case UpdateEvent::Kind::set_weight: {
      int from = home_.at(e);
      int to = disc_.classify(ev.weight);
      if (from == to) {
        // Same bracket: the discretized weight moves only for heavy edges,
        // and the exported edge set never changes.
        if (from == Discretization::kHeavy) what_.set(e, ev.weight);
      } else {
        home_[e] = to;
        structural_move(e, from, to);
      }
      break;
    }
  }
  m_.recourse += m_.last_recourse;
  m_.work += m_.last_work;
}

EdgeSet GeneralSparsifier::sparsifier_edge_set() const {
  EdgeSet s = heavy_;
  for (const auto& lp : levels_)
    if (lp)
      for (const Edge& e : lp->sparsifier_edge_set()) s.insert(e);
  return s;
}

std::vector<Edge> GeneralSparsifier::sparsifier_edges() const {
  return sorted_edges(sparsifier_edge_set());
}

WeightFn GeneralSparsifier::phi() const {
  WeightFn out(n_);
  for (const Edge& e : heavy_) out.set(e, what_.value(e));
  for (const auto& lp : levels_)
    if (lp)
      for (const auto& [e, val] : lp->certified_matching().entries()) out.set(e, val);
  return out;
}

Orientation GeneralSparsifier::union_orientation() const {
  Orientation o;
  for (const Edge& e : heavy_) o.tail.emplace(e, e.u);
  for (const auto& lp : levels_)
    if (lp)
      for (const auto& [e, t] : lp->orientation().tail) o.tail.emplace(e, t);
  return o;
}

std::int64_t GeneralSparsifier::orientation_bound() const {
  std::int64_t b = std::int64_t(std::ceil(1.0 / beta_));
  for (const auto& lp : levels_) {
    if (!lp) continue;
    int L = lp->levels();
    std::int64_t below = std::int64_t(1.0 / eps_);
    std::int64_t top = std::int64_t(std::ceil((2.0 / beta_) * (1.0 + 4.0 * eps_ * L)));
    b += std::max(below, top);
  }
  return b;
}

std::optional<std::string> GeneralSparsifier::sandwich_violation(double tol) const {
  double floor_cap = disc_.threshold(0);
  for (const auto& [e, h] : home_) {
    double x = w_.value(e);
    double hat = what_.contains(e) ? what_.value(e) : 0.0;
    bool good;
    if (h == Discretization::kZero)
      good = x < floor_cap && hat == 0.0;
    else if (h == Discretization::kHeavy)
      good = x >= beta_ && hat == x;
    else
      good = hat <= x && x <= (1.0 + beta_) * hat + floor_cap + tol && hat == disc_.threshold(h);
    if (!good) {
      std::ostringstream os;
      os << "sandwich broken at edge (" << e.u << "," << e.v << "): w=" << x << " what=" << hat
         << " class=" << h;
      return os.str();
    }
  }
  return std::nullopt;
}

bool GeneralSparsifier::volume_invariants_hold() const {
  for (const auto& lp : levels_)
    if (lp && !lp->volume_invariants_hold()) return false;
  return true;
}

InvariantReport GeneralSparsifier::check_invariants() const {
  InvariantReport rep;
  auto add = [&](const std::string& name, bool pass, std::string detail = "") {
    rep.items.push_back({name, pass, std::move(detail)});
  };
  constexpr double tol = 1e-9;

  bool wv = validate_fractional(w_, g_, tol) && w_.entry_count() == g_.edge_count();
  add("weights_valid", wv, wv ? "" : "node weights exceed 1 or weight support mismatches graph");

  {
    bool ok = home_.size() == g_.edge_count();
    std::string detail;
    for (const Edge& e : g_.edges()) {
      if (!ok) break;
      auto it = home_.find(e);
      if (it == home_.end()) {
        ok = false;
        std::ostringstream os;
        os << "edge (" << e.u << "," << e.v << ") has no bracket";
        detail = os.str();
      }
    }
    add("homes_complete", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (const auto& [e, h] : home_) {
      int fresh = disc_.classify(w_.value(e));
      if (fresh != h) {
        ok = false;
        std::ostringstream os;
        os << "edge (" << e.u << "," << e.v << ") weight " << w_.value(e) << " classifies to "
           << fresh << " but lives in " << h;
        detail = os.str();
        break;
      }
    }
    add("classification_current", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (const auto& [e, h] : home_) {
      bool good;
      if (h == Discretization::kZero)
        good = !what_.contains(e);
      else if (h == Discretization::kHeavy)
        good = what_.contains(e) && what_.value(e) == w_.value(e);
      else
        good = what_.contains(e) && what_.value(e) == disc_.threshold(h);
      if (!good) {
        ok = false;
        std::ostringstream os;
        os << "discretized entry wrong for edge (" << e.u << "," << e.v << ")";
        detail = os.str();
        break;
      }
    }
    if (ok && what_.entry_count() > home_.size()) {
      ok = false;
      detail = "discretized support has stale entries";
    }
    add("discretized_support", ok, detail);
  }

  {
    auto bad = sandwich_violation(tol);
    add("sandwich", !bad.has_value(), bad.value_or(""));
  }

  {
    std::vector<std::int64_t> hdeg(n_, 0);
    for (const Edge& e : heavy_) {
      ++hdeg[e.u];
      ++hdeg[e.v];
    }
    auto cap = std::int64_t(1.0 / beta_ + tol);
    bool ok = true;
    std::string detail;
    for (NodeId v = 0; v < n_; ++v)
      if (hdeg[v] > cap) {
        ok = false;
        std::ostringstream os;
        os << "node " << v << " carries " << hdeg[v] << " heavy edges, cap " << cap;
        detail = os.str();
        break;
      }
    add("heavy_degree", ok, detail);
  }

  {
    std::vector<EdgeSet> expected(std::size_t(disc_.K) + 1);
    for (const auto& [e, h] : home_)
      if (h >= 0) expected[std::size_t(h)].insert(e);
    bool ok = true;
    std::string detail;
    for (int j = 0; j <= disc_.K && ok; ++j) {
      const auto& lp = levels_[std::size_t(j)];
      if (!lp) {
        if (!expected[std::size_t(j)].empty()) {
          ok = false;
          detail = "bracket " + std::to_string(j) + " holds edges but was never instantiated";
        }
        continue;
      }
      EdgeSet present = lp->active_edges();
      for (const Edge& e : lp->passive_edges()) present.insert(e);
      if (present != expected[std::size_t(j)]) {
        ok = false;
        detail = "bracket " + std::to_string(j) + " membership differs from the bracket map";
      }
    }
    add("bracket_membership", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (int j = 0; j <= disc_.K; ++j) {
      const auto& lp = levels_[std::size_t(j)];
      if (!lp) continue;
      InvariantReport sub = lp->check_invariants();
      if (!sub.all_pass()) {
        ok = false;
        detail = "bracket " + std::to_string(j) + ": " + sub.failures();
        break;
      }
    }
    add("level_structures", ok, detail);
  }

  {
    WeightFn ph = phi();
    EdgeSet es = sparsifier_edge_set();
    bool ok = true;
    std::string detail;
    for (const auto& [e, val] : ph.entries()) {
      if (!es.count(e)) {
        ok = false;
        detail = "certificate uses an edge outside the sparsifier";
        break;
      }
      if (val < -tol) {
        ok = false;
        detail = "negative certificate weight";
        break;
      }
      if (!heavy_.count(e) && val >= beta_) {
        ok = false;
        detail = "bracket certificate weight reached beta";
        break;
      }
    }
    if (ok)
      for (NodeId v = 0; v < n_; ++v) {
        if (ph.node_weight(v) > what_.node_weight(v) + tol) {
          ok = false;
          std::ostringstream os;
          os << "certificate exceeds discretized weight at node " << v;
          detail = os.str();
          break;
        }
        if (ph.node_weight(v) > 1.0 + tol) {
          ok = false;
          std::ostringstream os;
          os << "certificate weight above 1 at node " << v;
          detail = os.str();
          break;
        }
      }
    add("certificate_valid", ok, detail);
  }

  return rep;
}

std::string GeneralSparsifier::snapshot_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["n"] = n_;
  j["eps"] = eps_;
  j["beta"] = beta_;
  j["brackets"] = disc_.K + 1;
  j["edges"] = g_.edge_count();
  j["size_w"] = w_.total();
  j["size_what"] = what_.total();
  j["heavy"] = heavy_.size();

  auto edges = sparsifier_edges();
  nlohmann::json es = nlohmann::json::array();
  for (const Edge& e : edges) es.push_back({e.u, e.v});
  j["sparsifier_edges"] = std::move(es);

  nlohmann::json pj = nlohmann::json::array();
  for (const auto& [e, val] : phi().sorted_entries()) pj.push_back({e.u, e.v, val});
  j["phi"] = std::move(pj);

  nlohmann::json lv = nlohmann::json::array();
  for (int k = 0; k <= disc_.K; ++k) {
    const auto& lp = levels_[std::size_t(k)];
    if (!lp) continue;
    std::size_t dead = 0;
    for (const auto& d : lp->dead_edges()) dead = std::max(dead, d.size());
    nlohmann::json one;
    one["bracket"] = k;
    one["lambda"] = disc_.threshold(k);
    one["levels"] = lp->levels();
    one["active"] = lp->active_edges().size();
    one["passive"] = lp->passive_edges().size();
    one["dead"] = dead;
    one["frozen_active"] = lp->sparsifier_edge_set().size();
    one["potential"] = lp->metrics().potential;
    one["rebuilds"] = lp->metrics().rebuilds;
    one["cleanups"] = lp->metrics().cleanups;
    lv.push_back(std::move(one));
  }
  j["levels"] = std::move(lv);
  return j.dump(2);
}

}  // namespace dynsparsify
