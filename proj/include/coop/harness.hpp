#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coop/checkpoint.hpp"
#include "coop/es.hpp"
#include "coop/rollout.hpp"
#include "coop/run_log.hpp"
#include "coop/svg.hpp"

namespace coop {

// Front-end operations behind the train/eval/compare CLI. Everything here is
// deterministic in (options, seed): the log and checkpoint bytes do not
// depend on thread count or timing (the wallclock column aside).

struct TrainOptions {
  std::string env = "cartpole";
  LayerKind layer_kind = LayerKind::Cooperator;
  ModulationKind modulation = ModulationKind::Cooperation;
  ContextMixing mixing = ContextMixing::NeighborMean;
  std::size_t d_msg = 16;
  std::size_t hidden = 8;
  EsConfig es;
  std::filesystem::path out_dir;
};

struct TrainResult {
  RunLog log;
  Checkpoint checkpoint;
  double iter0_mean = 0.0;   // population mean at generation 0
  double best_so_far = 0.0;  // best raw fitness seen across generations
  std::filesystem::path log_path;
  std::filesystem::path checkpoint_path;
  std::filesystem::path curve_path;
};

inline AgentConfig agent_config_from(const TrainOptions& opt) {
  AgentConfig cfg;
  cfg.layer.n_components = kObsDim;
  cfg.layer.d_msg = opt.d_msg;
  cfg.layer.d_action = 1;
  cfg.layer.layer_kind = opt.layer_kind;
  cfg.layer.modulation = opt.modulation;
  cfg.layer.context_mixing = opt.mixing;
  cfg.policy.d_msg = opt.d_msg;
  cfg.policy.hidden = opt.hidden;
  cfg.policy.d_action = 1;
  validate(cfg);
  return cfg;
}

namespace harness_detail {

inline ChartSeries curve_series(const RunLog& log, bool best,
                                const std::string& label,
                                const std::string& color) {
  ChartSeries s;
  s.label = label;
  s.color = color;
  for (const RunLogRow& row : log.rows) {
    s.xs.push_back(static_cast<double>(row.iter));
    s.ys.push_back(best ? row.best : row.mean);
  }
  return s;
}

}  // namespace harness_detail

// Train on cart-pole with ES and write {log.csv, final.ckpt, curve.svg} to
// the output directory. A zero-iteration run still evaluates the initial
// population once so the log has its generation-0 row; the checkpoint then
// holds the untouched initial genome.
inline TrainResult run_train(const TrainOptions& opt) {
  if (opt.env != "cartpole") {
    throw std::invalid_argument("train: unknown env '" + opt.env +
                                "' (supported: cartpole)");
  }
  if (opt.out_dir.empty()) {
    throw std::invalid_argument("train: output directory is required");
  }
  const AgentConfig agent_cfg = agent_config_from(opt);
  EsConfig es_cfg = opt.es;
  validate(es_cfg);

  std::filesystem::create_directories(opt.out_dir);

  EsState state;
  state.center.assign(genome_size(agent_cfg), 0.0);

  const FitnessFn fitness = [&agent_cfg, &es_cfg](
                                const std::vector<double>& genome,
                                std::uint64_t eval_seed) {
    return evaluate_candidate(agent_cfg, genome, es_cfg.episodes_per_eval,
                              eval_seed, false);
  };

  TrainResult result;
  result.best_so_far = -std::numeric_limits<double>::infinity();
  const std::uint64_t evals_per_gen =
      static_cast<std::uint64_t>(es_cfg.population) * es_cfg.episodes_per_eval;

  const auto record = [&](std::uint64_t iter, const GenStats& stats,
                          std::uint64_t ms) {
    RunLogRow row;
    row.iter = iter;
    row.best = stats.best;
    row.mean = stats.mean;
    row.stddev = stats.stddev;
    row.evals = iter * evals_per_gen;
    row.wallclock_ms = ms;
    result.log.rows.push_back(row);
    result.best_so_far = std::max(result.best_so_far, stats.best);
    if (iter == 0) result.iter0_mean = stats.mean;
  };

  if (es_cfg.iterations == 0) {
    const auto start = std::chrono::steady_clock::now();
    const GenStats stats =
        population_stats(es_evaluate_population(state, es_cfg, fitness));
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    record(0, stats, static_cast<std::uint64_t>(ms));
  } else {
    for (std::size_t iter = 0; iter < es_cfg.iterations; ++iter) {
      const auto start = std::chrono::steady_clock::now();
      const GenStats stats = es_step(state, es_cfg, fitness);
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      record(iter, stats, static_cast<std::uint64_t>(ms));
    }
  }

  result.checkpoint.agent = agent_cfg;
  result.checkpoint.es = es_cfg;
  result.checkpoint.seed = es_cfg.base_seed;
  result.checkpoint.iteration = state.iteration;
  result.checkpoint.genome = state.center;

  result.log_path = opt.out_dir / "log.csv";
  result.checkpoint_path = opt.out_dir / "final.ckpt";
  result.curve_path = opt.out_dir / "curve.svg";
  write_run_log(result.log_path, result.log);
  save_checkpoint(result.checkpoint_path, result.checkpoint);

  const std::string title = std::string(to_string(opt.layer_kind)) + " / " +
                            std::string(to_string(opt.modulation)) +
                            " on cartpole";
  write_svg(result.curve_path,
            line_chart_svg(title, "generation", "fitness",
                           {harness_detail::curve_series(result.log, true,
                                                         "best", "#1f77b4"),
                            harness_detail::curve_series(result.log, false,
                                                         "mean", "#ff7f0e")}));
  return result;
}

struct EvalOptions {
  std::filesystem::path ckpt_path;
  std::size_t episodes = 100;
  bool shuffle = false;
  std::uint64_t seed = 0;
  std::filesystem::path out_file;  // empty -> no report file
};

struct EvalResult {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t episodes = 0;
  std::string report;
};

// Evaluate a checkpointed agent over K fresh episodes; per-episode seeds are
// derived from the eval seed. With shuffle, each episode draws its own
// observation permutation (from the same episode seed the dynamics use).
inline EvalResult run_eval(const EvalOptions& opt) {
  if (opt.episodes == 0) {
    throw std::invalid_argument("eval: episodes must be >= 1");
  }
  const Checkpoint ckpt = load_checkpoint(opt.ckpt_path);

  std::vector<double> returns(opt.episodes, 0.0);
  for (std::size_t e = 0; e < opt.episodes; ++e) {
    returns[e] = run_episode(ckpt.agent, ckpt.genome,
                             derive_seed(opt.seed, e), opt.shuffle);
  }
  double sum = 0.0;
  for (double r : returns) sum += r;
  const double mean = sum / static_cast<double>(opt.episodes);
  double sq = 0.0;
  for (double r : returns) sq += (r - mean) * (r - mean);
  const double stddev = std::sqrt(sq / static_cast<double>(opt.episodes));

  EvalResult result;
  result.mean = mean;
  result.stddev = stddev;
  result.episodes = opt.episodes;
  result.report =
      "ckpt=" + opt.ckpt_path.string() +
      " layer=" + std::string(to_string(ckpt.agent.layer.layer_kind)) +
      " modulation=" + std::string(to_string(ckpt.agent.layer.modulation)) +
      " episodes=" + std::to_string(opt.episodes) +
      " shuffle=" + (opt.shuffle ? std::string("1") : std::string("0")) +
      " seed=" + std::to_string(opt.seed) +
      " mean=" + runlog_detail::format_double(mean) +
      " std=" + runlog_detail::format_double(stddev) + "\n";

  if (!opt.out_file.empty()) {
    std::ofstream out(opt.out_file, std::ios::binary);
    if (!out) {
      throw std::runtime_error("eval: cannot open report file " +
                               opt.out_file.string());
    }
    out << result.report;
  }
  return result;
}

struct CompareOptions {
  std::filesystem::path run_a;  // training run directory (log.csv + final.ckpt)
  std::filesystem::path run_b;
  std::filesystem::path out_dir;
};

struct CompareResult {
  std::size_t params_a = 0;
  std::size_t params_b = 0;
  double best_a = 0.0;
  double best_b = 0.0;
  std::string table;
  std::filesystem::path overlay_path;
  std::filesystem::path table_path;
};

// Side-by-side report of two training runs. Parameter parity between the
// two agents is a hard requirement: unequal genome lengths abort with a
// diagnostic listing both counts.
inline CompareResult run_compare(const CompareOptions& opt) {
  const Checkpoint ckpt_a = load_checkpoint(opt.run_a / "final.ckpt");
  const Checkpoint ckpt_b = load_checkpoint(opt.run_b / "final.ckpt");
  const RunLog log_a = read_run_log(opt.run_a / "log.csv");
  const RunLog log_b = read_run_log(opt.run_b / "log.csv");

  CompareResult result;
  result.params_a = ckpt_a.genome.size();
  result.params_b = ckpt_b.genome.size();
  if (result.params_a != result.params_b) {
    throw std::runtime_error(
        "compare: parameter-count mismatch: " + opt.run_a.string() + " has " +
        std::to_string(result.params_a) + ", " + opt.run_b.string() + " has " +
        std::to_string(result.params_b));
  }

  const auto best_of = [](const RunLog& log) {
    double best = -std::numeric_limits<double>::infinity();
    for (const RunLogRow& row : log.rows) best = std::max(best, row.best);
    return best;
  };
  result.best_a = best_of(log_a);
  result.best_b = best_of(log_b);

  const auto name_of = [](const Checkpoint& c) {
    std::string name(to_string(c.agent.layer.layer_kind));
    if (c.agent.layer.layer_kind == LayerKind::Cooperator) {
      name += "/" + std::string(to_string(c.agent.layer.modulation));
    }
    return name;
  };
  const std::string name_a = name_of(ckpt_a);
  const std::string name_b = name_of(ckpt_b);

  const auto last_mean = [](const RunLog& log) {
    return log.rows.empty() ? 0.0 : log.rows.back().mean;
  };
  result.table =
      "run,layer,params,iterations,best,final_mean\n"
      "a," + name_a + "," + std::to_string(result.params_a) + "," +
      std::to_string(ckpt_a.iteration) + "," +
      runlog_detail::format_double(result.best_a) + "," +
      runlog_detail::format_double(last_mean(log_a)) + "\n" +
      "b," + name_b + "," + std::to_string(result.params_b) + "," +
      std::to_string(ckpt_b.iteration) + "," +
      runlog_detail::format_double(result.best_b) + "," +
      runlog_detail::format_double(last_mean(log_b)) + "\n";

  std::filesystem::create_directories(opt.out_dir);
  result.overlay_path = opt.out_dir / "compare.svg";
  result.table_path = opt.out_dir / "compare.csv";
  write_svg(result.overlay_path,
            line_chart_svg("best fitness: " + name_a + " vs " + name_b,
                           "generation", "fitness",
                           {harness_detail::curve_series(log_a, true,
                                                         "a: " + name_a,
                                                         "#1f77b4"),
                            harness_detail::curve_series(log_b, true,
                                                         "b: " + name_b,
                                                         "#d62728")}));
  std::ofstream table_out(result.table_path, std::ios::binary);
  if (!table_out) {
    throw std::runtime_error("compare: cannot open " +
                             result.table_path.string());
  }
  table_out << result.table;
  return result;
}

}  // namespace coop
