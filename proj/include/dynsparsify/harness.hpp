#ifndef DYNSPARSIFY_HARNESS_HPP
#define DYNSPARSIFY_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynsparsify/general_sparsifier.hpp"
#include "dynsparsify/graph.hpp"
#include "dynsparsify/uniform_sparsifier.hpp"

namespace dynsparsify {

// Which checks the replay runs. Per-event checks are cheap counting laws;
// checkpoint checks walk the whole structure every check_every events and at
// the end of the stream; certificate checks run once at the end.
struct CheckConfig {
  bool volume_each_event = true;    // counting invariants plus potential audit
  bool sandwich_each_event = false; // rounding bracket bounds after every event
  bool full_invariants = true;      // structural invariant sweep at checkpoints
  bool equivalence = false;         // from-scratch rebuild comparison at checkpoints
  bool drift = false;               // per-round node weight drift at checkpoints
  bool orientation = false;         // out-degree bounds at checkpoints
  bool certificate = true;          // certificate laws at stream end
  bool mu_oracle = false;           // exact matching ratio at stream end; small n only
  std::size_t check_every = 100;
  double tol = 1e-9;

  static CheckConfig none();
  static CheckConfig all();
  // Comma-separated names (volume, sandwich, invariants, equivalence, drift,
  // orientation, certificate, mu), or "all", "none", "default".
  static CheckConfig from_list(const std::string& list);
};

struct CheckFailure {
  std::size_t event = 0;  // events applied when the failure was detected
  std::string name;
  std::string detail;
};

struct RunReport {
  int schema_version = 1;
  std::string mode;  // "uniform" or "general"
  std::size_t n = 0;
  double eps = 0.0;
  double beta = 0.0;
  double lambda = 0.0;  // uniform mode only
  std::size_t events_applied = 0;
  std::size_t checks_run = 0;
  std::vector<CheckFailure> failures;
  std::vector<std::int64_t> recourse_series;
  std::int64_t total_recourse = 0;
  std::int64_t total_work = 0;
  std::int64_t rebuilds = 0;
  std::int64_t cleanups = 0;
  std::size_t sparsifier_size = 0;
  std::size_t edge_count = 0;
  std::int64_t orientation_cap = 0;
  double size_w = 0.0;
  double size_certificate = 0.0;
  std::optional<double> ratio_size;           // size_w / size_certificate
  std::optional<std::int64_t> mu_graph;       // exact matching sizes, when the oracle ran
  std::optional<std::int64_t> mu_sparsifier;
  std::optional<double> ratio_mu;
  double wall_ms = 0.0;

  bool ok() const { return failures.empty(); }
  std::string to_json(bool include_timings = true) const;
};

// Replays insert/delete events into a uniform sparsifier, validating against
// a shadow graph. Reweight events and weights other than p.lambda are
// rejected. Throws on malformed streams; check failures land in the report.
RunReport run_uniform_stream(const Params& p, std::span<const UpdateEvent> events,
                             const CheckConfig& cfg);

// Replays a full event stream (inserts, deletes, reweights) into a general
// sparsifier.
RunReport run_general_stream(std::size_t n, double eps, double beta,
                             std::span<const UpdateEvent> events, const CheckConfig& cfg);

}  // namespace dynsparsify

#endif
