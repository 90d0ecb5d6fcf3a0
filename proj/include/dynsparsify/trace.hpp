#ifndef DYNSPARSIFY_TRACE_HPP
#define DYNSPARSIFY_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynsparsify/graph.hpp"

namespace dynsparsify {

struct TraceError : std::runtime_error {
  std::size_t line;
  TraceError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
};

// One event per line: `+ u v weight`, `- u v`, `w u v weight`. Lines starting
// with '#' and blank lines are skipped.
std::vector<UpdateEvent> parse_trace(std::istream& in);
std::vector<UpdateEvent> parse_trace_file(const std::string& path);
void write_trace(std::ostream& out, std::span<const UpdateEvent> events);
void write_trace_file(const std::string& path, std::span<const UpdateEvent> events);

// Smallest node count that makes every event id legal.
std::size_t infer_node_count(std::span<const UpdateEvent> events);

enum class TraceKind { random_insert_delete, decremental, sliding_window, weight_churn };
enum class WeightDist { constant, log_uniform, mixed };

TraceKind trace_kind_from_string(const std::string& s);
WeightDist weight_dist_from_string(const std::string& s);
std::string to_string(TraceKind k);
std::string to_string(WeightDist d);

struct TraceSpec {
  std::size_t n = 0;
  TraceKind kind = TraceKind::random_insert_delete;
  std::size_t length = 0;
  std::uint64_t seed = 0;
  WeightDist wdist = WeightDist::log_uniform;
  bool bipartite = false;      // edges only between [0, n/2) and [n/2, n)
  double uniform_lambda = 0.0; // > 0: all weights equal this and degrees stay under 1/lambda
  std::size_t window = 0;      // sliding_window size; 0 picks length/4
  double wmin = 1e-6;          // log-uniform draw floor
};

// Deterministic expansion; identical spec gives identical events. The stream
// keeps every node weight at most 1, so it may fall short of the requested
// length when no further event is feasible.
std::vector<UpdateEvent> generate_trace(const TraceSpec& spec);

enum class MaximalStrategy { water_fill, fractional_oracle, greedy_residual };
MaximalStrategy maximal_strategy_from_string(const std::string& s);

// Best-effort construction of a fractional matching in which every edge
// either weighs at least beta or has an endpoint saturated to 1 - alpha whose
// edges all weigh under beta. The result is checker-gated: returns nothing
// when the strategy's output fails the property.
std::optional<WeightFn> gen_approx_maximal(const DynGraph& g, double alpha, double beta,
                                           MaximalStrategy strategy, std::uint64_t seed);

}  // namespace dynsparsify

#endif
