#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynsparsify/harness.hpp"
#include "dynsparsify/log.hpp"
#include "dynsparsify/trace.hpp"

namespace {

using namespace dynsparsify;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text << '\n';
}

struct RunFlags {
  std::string trace;
  std::size_t n = 0;
  std::string mode = "experiment";
  double eps = 0.2;
  double beta = 0.2;
  double delta = 1e-3;
  double uniform = 0.0;
  std::string checks = "default";
  std::size_t check_every = 100;
  std::string out;
  bool no_timings = false;
  bool mu = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_checks) {
  cmd->add_option("--trace", f.trace, "trace file to replay")->required();
  cmd->add_option("--n", f.n, "node count; inferred from the trace when omitted");
  cmd->add_option("--mode", f.mode, "parameter mode: experiment or paper")
      ->check(CLI::IsMember({"experiment", "paper"}));
  cmd->add_option("--eps", f.eps, "peeling accuracy (experiment mode)");
  cmd->add_option("--beta", f.beta, "weight ceiling (experiment mode)");
  cmd->add_option("--delta", f.delta, "accuracy knob deriving eps and beta (paper mode)");
  cmd->add_option("--uniform", f.uniform,
                  "uniform edge weight; switches to the single-instance sparsifier");
  if (with_checks) {
    cmd->add_option("--checks", f.checks,
                    "comma list: volume,sandwich,invariants,equivalence,drift,orientation,"
                    "certificate,mu or all/none/default");
    cmd->add_option("--check-every", f.check_every, "events between checkpoint checks");
  }
  cmd->add_option("--out", f.out, "write the JSON report here instead of stdout");
  cmd->add_flag("--no-timings", f.no_timings, "omit wall-clock fields from the report");
}

RunReport replay(const RunFlags& f, const CheckConfig& cfg) {
  std::vector<UpdateEvent> events = parse_trace_file(f.trace);
  std::size_t n = f.n;
  if (n == 0) {
    n = std::max<std::size_t>(infer_node_count(events), 2);
    log_info("inferred n = %zu from the trace", n);
  }
  if (f.uniform > 0.0) {
    Params p = f.mode == "paper" ? Params::paper(n, f.delta, f.uniform)
                                 : Params::experiment(n, f.eps, f.beta, f.uniform);
    return run_uniform_stream(p, events, cfg);
  }
  double eps = f.eps, beta = f.beta;
  if (f.mode == "paper") {
    Params derived = Params::paper(n, f.delta, f.delta / 40.0);
    eps = derived.eps;
    beta = derived.beta;
  }
  return run_general_stream(n, eps, beta, events, cfg);
}

int cmd_gen(const TraceSpec& spec, const std::string& path) {
  std::vector<UpdateEvent> events = generate_trace(spec);
  if (path.empty() || path == "-") {
    write_trace(std::cout, events);
  } else {
    write_trace_file(path, events);
  }
  log_info("wrote %zu events", events.size());
  return 0;
}

int cmd_run(const RunFlags& f) {
  CheckConfig cfg = CheckConfig::from_list(f.checks);
  cfg.check_every = f.check_every;
  if (f.mu) cfg.mu_oracle = true;
  RunReport rep = replay(f, cfg);
  write_text(f.out, rep.to_json(!f.no_timings));
  for (const CheckFailure& fl : rep.failures)
    std::cerr << "check failed at event " << fl.event << ": " << fl.name << ": " << fl.detail
              << '\n';
  return rep.ok() ? 0 : 1;
}

int cmd_verify(const RunFlags& f) {
  CheckConfig cfg = CheckConfig::all();
  cfg.check_every = f.check_every;
  cfg.mu_oracle = f.mu;
  RunReport rep = replay(f, cfg);
  if (!f.out.empty()) write_text(f.out, rep.to_json(!f.no_timings));
  std::cout << "events   " << rep.events_applied << "\n"
            << "checks   " << rep.checks_run << "\n"
            << "edges    " << rep.edge_count << "\n"
            << "sparsifier " << rep.sparsifier_size << "\n";
  if (rep.ratio_size) std::cout << "size ratio " << *rep.ratio_size << "\n";
  if (rep.ratio_mu) std::cout << "matching ratio " << *rep.ratio_mu << "\n";
  for (const CheckFailure& fl : rep.failures)
    std::cout << "FAIL at event " << fl.event << ": " << fl.name << ": " << fl.detail << '\n';
  std::cout << (rep.ok() ? "VERIFY PASS" : "VERIFY FAIL") << std::endl;
  return rep.ok() ? 0 : 1;
}

int cmd_bench(const RunFlags& f, int repeat) {
  nlohmann::json out;
  nlohmann::json runs = nlohmann::json::array();
  std::vector<double> walls;
  for (int r = 0; r < repeat; ++r) {
    RunReport rep = replay(f, CheckConfig::none());
    walls.push_back(rep.wall_ms);
    runs.push_back({{"wall_ms", rep.wall_ms},
                    {"recourse", rep.total_recourse},
                    {"work", rep.total_work},
                    {"events", rep.events_applied},
                    {"sparsifier_size", rep.sparsifier_size}});
  }
  std::sort(walls.begin(), walls.end());
  out["runs"] = std::move(runs);
  out["median_wall_ms"] = walls[walls.size() / 2];
  write_text(f.out, out.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic fractional-matching sparsifier harness"};
  app.require_subcommand(1);

  TraceSpec spec;
  std::string gen_kind = "random-insert-delete";
  std::string gen_wdist = "log-uniform";
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate an update trace");
  gen->add_option("--n", spec.n, "node count")->required();
  gen->add_option("--len", spec.length, "number of events")->required();
  gen->add_option("--kind", gen_kind,
                  "random-insert-delete, decremental, sliding-window, weight-churn");
  gen->add_option("--seed", spec.seed, "generator seed");
  gen->add_option("--wdist", gen_wdist, "constant, log-uniform, mixed");
  gen->add_flag("--bipartite", spec.bipartite, "draw edges across a fixed bipartition");
  gen->add_option("--uniform", spec.uniform_lambda, "give every edge this weight");
  gen->add_option("--window", spec.window, "sliding-window width");
  gen->add_option("--wmin", spec.wmin, "log-uniform draw floor");
  gen->add_option("--trace", gen_out, "output path; stdout when omitted");

  RunFlags runf;
  CLI::App* run = app.add_subcommand("run", "replay a trace with configurable checks");
  add_run_flags(run, runf, true);
  run->add_flag("--mu", runf.mu, "compare exact matching sizes at the end (slow)");

  RunFlags verf;
  CLI::App* verify = app.add_subcommand("verify", "replay with every check enabled");
  add_run_flags(verify, verf, false);
  verify->add_option("--check-every", verf.check_every, "events between checkpoint checks");
  verify->add_flag("--mu", verf.mu, "compare exact matching sizes at the end (slow)");

  RunFlags benf;
  int repeat = 3;
  CLI::App* bench = app.add_subcommand("bench", "replay without checks and time it");
  add_run_flags(bench, benf, false);
  bench->add_option("--repeat", repeat, "number of timed repetitions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      spec.kind = trace_kind_from_string(gen_kind);
      spec.wdist = weight_dist_from_string(gen_wdist);
      return cmd_gen(spec, gen_out);
    }
    if (run->parsed()) return cmd_run(runf);
    if (verify->parsed()) return cmd_verify(verf);
    if (bench->parsed()) return cmd_bench(benf, repeat);
  } catch (const TraceError& e) {
    std::cerr << "trace error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
