#ifndef DYNSPARSIFY_GENERAL_SPARSIFIER_HPP
#define DYNSPARSIFY_GENERAL_SPARSIFIER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dynsparsify/graph.hpp"
#include "dynsparsify/uniform_sparsifier.hpp"

namespace dynsparsify {

// Geometric weight brackets covering [beta/n^2, beta); weights at or above
// beta stay as they are, weights below the first threshold round to zero.
struct Discretization {
  static constexpr int kZero = -1;
  static constexpr int kHeavy = -2;

  std::size_t n = 0;
  double beta = 0.0;
  int K = 0;                       // largest j with threshold(j) < beta
  std::vector<double> thresholds;  // threshold(j) = (beta/n^2)*(1+beta)^j, j in [0, K+1];
                                   // the last entry is clamped to beta

  Discretization(std::size_t n, double beta);

  double threshold(int j) const { return thresholds.at(std::size_t(j)); }
  // kZero, kHeavy, or the bracket i with threshold(i) <= x < threshold(i+1).
  int classify(double x) const;
  // The discretized value for a weight in the given class.
  double rounded(int cls, double x) const;
};

struct GeneralMetrics {
  std::int64_t updates = 0;
  std::int64_t recourse = 0;  // cumulative churn of the exported edge set
  std::int64_t work = 0;
  std::int64_t last_recourse = 0;
  std::int64_t last_work = 0;
};

// Splits an arbitrary fractional matching into weight brackets, runs a
// uniform sparsifier per bracket, and exports the union of their outputs
// together with the edges too heavy to need sparsifying.
class GeneralSparsifier {
 public:
  GeneralSparsifier(std::size_t n, double eps, double beta);

  // Insert, delete, or reweight one edge; throws GraphUpdateError on misuse.
  void apply(const UpdateEvent& ev);

  const DynGraph& graph() const { return g_; }
  const WeightFn& weights() const { return w_; }
  const WeightFn& discretized() const { return what_; }
  const Discretization& discretization() const { return disc_; }
  const GeneralMetrics& metrics() const { return m_; }

  // kZero, kHeavy, or the bracket index the edge currently lives in.
  int home_of(Edge e) const { return home_.at(e); }
  const EdgeSet& heavy_edges() const { return heavy_; }
  // Instantiated bracket instance, or nullptr if no edge reached it yet.
  const UniformSparsifier* level(int j) const { return levels_.at(std::size_t(j)).get(); }
  int bracket_count() const { return disc_.K + 1; }

  std::vector<Edge> sparsifier_edges() const;
  EdgeSet sparsifier_edge_set() const;
  // Certified fractional matching on the sparsifier: the heavy edges keep
  // their weights, each bracket contributes its scaled-down frozen weights.
  WeightFn phi() const;
  Orientation union_orientation() const;
  // Out-degree cap the union orientation is checked against.
  std::int64_t orientation_bound() const;

  InvariantReport check_invariants() const;
  bool volume_invariants_hold() const;
  // First violation of the per-edge rounding bracket bounds, if any.
  std::optional<std::string> sandwich_violation(double tol = 1e-9) const;

  std::string snapshot_json() const;

 private:
  UniformSparsifier& ensure_level(int j);
  void structural_move(Edge e, int from, int to);

  std::size_t n_;
  double eps_;
  double beta_;
  Discretization disc_;
  DynGraph g_;
  WeightFn w_;
  WeightFn what_;  // discretized weights, support excludes the zero class
  std::unordered_map<Edge, int, EdgeHash> home_;
  EdgeSet heavy_;
  std::vector<std::unique_ptr<UniformSparsifier>> levels_;
  GeneralMetrics m_;
};

}  // namespace dynsparsify

#endif
