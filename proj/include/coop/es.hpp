#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "coop/rng.hpp"

namespace coop {

// Isotropic evolution strategies with antithetic sampling and rank-based
// fitness shaping.
//
// Determinism contract: every random draw is keyed by (base_seed, iteration,
// pair index) and the update is a reduction in fixed candidate order, so the
// center after any number of iterations is bit-identical whether candidates
// are evaluated serially or by any number of worker threads.
struct EsConfig {
  std::size_t population = 64;  // even; candidates come in +/- pairs
  double sigma = 0.5;
  double learning_rate = 0.1;
  std::size_t iterations = 0;
  std::size_t episodes_per_eval = 2;
  std::uint64_t base_seed = 0;
  std::size_t threads = 1;  // worker count; never affects results
};

inline void validate(const EsConfig& cfg) {
  if (cfg.population < 2 || cfg.population % 2 != 0) {
    throw std::invalid_argument("EsConfig: population must be even and >= 2");
  }
  if (!(cfg.sigma > 0.0)) {
    throw std::invalid_argument("EsConfig: sigma must be > 0");
  }
  if (cfg.learning_rate < 0.0) {
    throw std::invalid_argument("EsConfig: learning_rate must be >= 0");
  }
  if (cfg.episodes_per_eval == 0) {
    throw std::invalid_argument("EsConfig: episodes_per_eval must be >= 1");
  }
}

struct GenStats {
  double best = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct EsState {
  std::vector<double> center;
  std::size_t iteration = 0;
  std::vector<GenStats> history;  // one record per completed iteration
};

// Seed scheme (frozen): stream 1 keys the perturbation draws, stream 2 the
// fitness evaluations. All candidates of one generation share the same
// evaluation seed (common random numbers across the population).
inline std::uint64_t es_noise_seed(const EsConfig& cfg, std::size_t iteration,
                                   std::size_t pair) {
  return derive_seed(cfg.base_seed, 1, iteration, pair);
}

inline std::uint64_t es_eval_seed(const EsConfig& cfg, std::size_t iteration) {
  return derive_seed(cfg.base_seed, 2, iteration);
}

// Centered-rank fitness shaping: weight_i = rank_i/(n-1) - 0.5, ranks
// ascending (worst = 0), ties broken by index order. Weights sum to zero and
// depend only on the ordering, so any strictly monotone transform of the
// fitness vector leaves them unchanged. -inf sentinels are legal and rank
// first (worst); NaN is a caller bug and rejected.
inline std::vector<double> rank_shape(const std::vector<double>& fitnesses) {
  const std::size_t n = fitnesses.size();
  if (n < 2) {
    throw std::invalid_argument("rank_shape: need at least two fitnesses");
  }
  for (double f : fitnesses) {
    if (std::isnan(f)) {
      throw std::invalid_argument("rank_shape: NaN fitness");
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (fitnesses[a] != fitnesses[b]) return fitnesses[a] < fitnesses[b];
    return a < b;
  });
  std::vector<double> weights(n, 0.0);
  for (std::size_t rank = 0; rank < n; ++rank) {
    weights[order[rank]] =
        static_cast<double>(rank) / static_cast<double>(n - 1) - 0.5;
  }
  return weights;
}

// Best/mean/std of one generation's raw fitnesses. -inf sentinels from
// crashed rollouts are excluded from mean and std so one bad candidate does
// not wipe out the record; best is the plain maximum.
inline GenStats population_stats(const std::vector<double>& fitnesses) {
  GenStats stats;
  stats.best = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t finite = 0;
  for (double f : fitnesses) {
    stats.best = std::max(stats.best, f);
    if (std::isfinite(f)) {
      sum += f;
      ++finite;
    }
  }
  if (finite == 0) {
    stats.mean = -std::numeric_limits<double>::infinity();
    stats.stddev = 0.0;
    return stats;
  }
  stats.mean = sum / static_cast<double>(finite);
  double sq = 0.0;
  for (double f : fitnesses) {
    if (std::isfinite(f)) {
      const double d = f - stats.mean;
      sq += d * d;
    }
  }
  stats.stddev = std::sqrt(sq / static_cast<double>(finite));
  return stats;
}

// (genome, eval_seed) -> fitness. Must be a pure function of its arguments.
using FitnessFn =
    std::function<double(const std::vector<double>&, std::uint64_t)>;

namespace detail {

// Static-partition parallel loop. Results must be written by index; chunk
// boundaries depend only on (n, threads), never on timing.
inline void parallel_for(std::size_t n, std::size_t threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = n * w / workers;
      const std::size_t hi = n * (w + 1) / workers;
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline std::vector<std::vector<double>> draw_perturbations(
    const EsConfig& cfg, std::size_t iteration, std::size_t dim) {
  const std::size_t half = cfg.population / 2;
  std::vector<std::vector<double>> eps(half, std::vector<double>(dim));
  for (std::size_t pair = 0; pair < half; ++pair) {
    RngState rng{es_noise_seed(cfg, iteration, pair)};
    for (std::size_t d = 0; d < dim; ++d) eps[pair][d] = rng_gaussian(rng);
  }
  return eps;
}

}  // namespace detail

// Evaluate the current generation's population without updating the center.
// Candidate order is frozen: 2j = center + sigma*eps_j, 2j+1 = center -
// sigma*eps_j.
inline std::vector<double> es_evaluate_population(const EsState& state,
                                                  const EsConfig& cfg,
                                                  const FitnessFn& fitness_fn) {
  validate(cfg);
  const std::size_t dim = state.center.size();
  const auto eps = detail::draw_perturbations(cfg, state.iteration, dim);
  const std::uint64_t eval_seed = es_eval_seed(cfg, state.iteration);

  std::vector<double> fitnesses(cfg.population, 0.0);
  detail::parallel_for(cfg.population, cfg.threads, [&](std::size_t k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const std::vector<double>& e = eps[k / 2];
    std::vector<double> genome(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      genome[d] = state.center[d] + sign * cfg.sigma * e[d];
    }
    fitnesses[k] = fitness_fn(genome, eval_seed);
  });
  return fitnesses;
}

// One ES generation: evaluate the antithetic population, rank-shape the
// fitnesses, move the center along the weighted perturbations, append the
// history record. Returns the generation's raw-fitness stats.
inline GenStats es_step(EsState& state, const EsConfig& cfg,
                        const FitnessFn& fitness_fn) {
  const std::size_t dim = state.center.size();
  const std::vector<double> fitnesses =
      es_evaluate_population(state, cfg, fitness_fn);
  const auto eps = detail::draw_perturbations(cfg, state.iteration, dim);

  const std::vector<double> weights = rank_shape(fitnesses);
  const double step = cfg.learning_rate /
                      (static_cast<double>(cfg.population) * cfg.sigma);
  std::vector<double> delta(dim, 0.0);
  for (std::size_t k = 0; k < cfg.population; ++k) {
    const double coeff = weights[k] * ((k % 2 == 0) ? 1.0 : -1.0);
    const std::vector<double>& e = eps[k / 2];
    for (std::size_t d = 0; d < dim; ++d) delta[d] += coeff * e[d];
  }
  for (std::size_t d = 0; d < dim; ++d) {
    state.center[d] += step * delta[d];
  }

  const GenStats stats = population_stats(fitnesses);
  state.history.push_back(stats);
  ++state.iteration;
  return stats;
}

}  // namespace coop
