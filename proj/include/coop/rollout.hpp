#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "coop/cartpole.hpp"
#include "coop/policy.hpp"
#include "coop/rng.hpp"

namespace coop {

namespace detail {
// Stream key separating the per-episode shuffle draw from the dynamics seed.
inline constexpr std::uint64_t kShuffleStream = 0x73687566ULL;
}  // namespace detail

// One cart-pole episode, returning the undiscounted return. The previous
// action starts at zero. With shuffle, a single permutation is drawn from
// the episode seed and applied to every observation of the episode; the
// dynamics seed is unaffected, so shuffled and unshuffled runs share
// identical trajectories when the agent is permutation-invariant.
inline double run_episode(const AgentConfig& cfg,
                          std::span<const double> genome,
                          std::uint64_t episode_seed, bool shuffle = false) {
  Agent agent = make_agent(cfg, genome);
  CartPoleState state = cartpole_reset(episode_seed);
  PermSpec perm = PermSpec::identity();
  if (shuffle) {
    RngState rng{derive_seed(episode_seed, detail::kShuffleStream)};
    perm = PermSpec::draw(rng);
  }

  double episode_return = 0.0;
  Observation obs = observe(state);
  for (;;) {
    const Observation fed = shuffle ? permute_observation(obs, perm) : obs;
    const std::vector<double> action = agent_act(agent, fed.values);
    const StepResult step = cartpole_step(state, action[0]);
    episode_return += step.reward;
    state = step.state;
    obs = step.obs;
    if (step.done) break;
  }
  return episode_return;
}

// Mean return over a fixed number of episodes with seeds derived from
// eval_seed. A rollout that fails (non-finite state) scores -inf; the
// sentinel is returned, not propagated, so the optimizer can rank it last.
// Contract violations (wrong genome length, bad config) still throw.
inline double evaluate_candidate(const AgentConfig& cfg,
                                 std::span<const double> genome,
                                 std::size_t episodes, std::uint64_t eval_seed,
                                 bool shuffle = false) {
  if (episodes == 0) {
    throw std::invalid_argument("evaluate_candidate: episodes must be >= 1");
  }
  double sum = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    try {
      sum += run_episode(cfg, genome, derive_seed(eval_seed, e), shuffle);
    } catch (const std::runtime_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  }
  return sum / static_cast<double>(episodes);
}

}  // namespace coop
