#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coop/layer.hpp"

namespace coop {

// Two-layer tanh MLP mapping the pooled message to a bounded action.
struct PolicyConfig {
  std::size_t d_msg = 16;
  std::size_t hidden = 8;
  std::size_t d_action = 1;
};

inline std::size_t policy_param_count(const PolicyConfig& cfg) {
  return cfg.d_msg * cfg.hidden + cfg.hidden  // W1, b1
         + cfg.hidden * cfg.d_action + cfg.d_action;  // W2, b2
}

// Flat layout: W1 (d_msg x hidden, row-major), b1, W2 (hidden x d_action,
// row-major), b2.
struct PolicyParams {
  PolicyConfig config;
  std::vector<double> theta;
};

inline PolicyParams load_policy_params(const PolicyConfig& cfg,
                                       std::vector<double> theta) {
  if (theta.size() != policy_param_count(cfg)) {
    throw std::invalid_argument(
        "load_policy_params: expected " +
        std::to_string(policy_param_count(cfg)) + " parameters, got " +
        std::to_string(theta.size()));
  }
  return PolicyParams{cfg, std::move(theta)};
}

// a = tanh(W2^T tanh(W1^T msg + b1) + b2); every component lands in (-1, 1).
inline std::vector<double> policy_forward(const PolicyParams& params,
                                          std::span<const double> msg) {
  const PolicyConfig& cfg = params.config;
  if (msg.size() != cfg.d_msg) {
    throw std::invalid_argument("policy_forward: expected " +
                                std::to_string(cfg.d_msg) +
                                " message values, got " +
                                std::to_string(msg.size()));
  }
  const std::vector<double>& th = params.theta;
  const std::size_t off_w1 = 0;
  const std::size_t off_b1 = off_w1 + cfg.d_msg * cfg.hidden;
  const std::size_t off_w2 = off_b1 + cfg.hidden;
  const std::size_t off_b2 = off_w2 + cfg.hidden * cfg.d_action;

  std::vector<double> hidden(cfg.hidden, 0.0);
  for (std::size_t j = 0; j < cfg.hidden; ++j) {
    double acc = th[off_b1 + j];
    for (std::size_t k = 0; k < cfg.d_msg; ++k) {
      acc += th[off_w1 + k * cfg.hidden + j] * msg[k];
    }
    hidden[j] = std::tanh(acc);
  }
  std::vector<double> action(cfg.d_action, 0.0);
  for (std::size_t o = 0; o < cfg.d_action; ++o) {
    double acc = th[off_b2 + o];
    for (std::size_t j = 0; j < cfg.hidden; ++j) {
      acc += th[off_w2 + j * cfg.d_action + o] * hidden[j];
    }
    action[o] = std::tanh(acc);
  }
  return action;
}

// Full agent = sensory layer + policy head. The genome evolved by ES is the
// layer parameters followed by the policy parameters, one flat vector.
struct AgentConfig {
  LayerConfig layer;
  PolicyConfig policy;
};

inline void validate(const AgentConfig& cfg) {
  validate(cfg.layer);
  if (cfg.layer.d_msg != cfg.policy.d_msg) {
    throw std::invalid_argument("AgentConfig: layer/policy d_msg mismatch");
  }
  if (cfg.layer.d_action != cfg.policy.d_action) {
    throw std::invalid_argument("AgentConfig: layer/policy d_action mismatch");
  }
}

inline std::size_t genome_size(const AgentConfig& cfg) {
  return param_count(cfg.layer) + policy_param_count(cfg.policy);
}

struct Agent {
  LayerParams layer;
  PolicyParams policy;
  std::vector<double> prev_action;  // zero before the first act of an episode
};

inline Agent make_agent(const AgentConfig& cfg,
                        std::span<const double> genome) {
  validate(cfg);
  if (genome.size() != genome_size(cfg)) {
    throw std::invalid_argument(
        "make_agent: expected genome of " + std::to_string(genome_size(cfg)) +
        ", got " + std::to_string(genome.size()));
  }
  const std::size_t layer_len = param_count(cfg.layer);
  Agent agent{
      load_params(cfg.layer,
                  std::vector<double>(genome.begin(), genome.begin() + layer_len)),
      load_policy_params(
          cfg.policy, std::vector<double>(genome.begin() + layer_len, genome.end())),
      std::vector<double>(cfg.layer.d_action, 0.0)};
  return agent;
}

// One agent step: message from the layer (fed the previous action), action
// from the policy head, previous action updated for the next step.
inline std::vector<double> agent_act(Agent& agent,
                                     std::span<const double> obs) {
  const Message msg = layer_forward(agent.layer, obs, agent.prev_action);
  std::vector<double> action = policy_forward(agent.policy, msg);
  agent.prev_action = action;
  return action;
}

}  // namespace coop
