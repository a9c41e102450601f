#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "coop/layer.hpp"

namespace coop {

// Naive re-implementation of layer_forward used as a test oracle.
//
// Constraint: no shared code with the production path. Everything below is
// written out as scalar loops against the documented flat parameter layout;
// the modulation formulas, positional encoding and softmax are restated
// inline rather than calling the library versions.
inline Message reference_forward(const LayerParams& params,
                                 std::span<const double> obs,
                                 std::span<const double> prev_action) {
  const LayerConfig& cfg = params.config;
  const std::size_t n = cfg.n_components;
  const std::size_t dm = cfg.d_msg;
  const std::size_t da = cfg.d_action;
  if (obs.size() != n) {
    throw std::invalid_argument("reference_forward: bad observation length");
  }
  if (prev_action.size() != da) {
    throw std::invalid_argument("reference_forward: bad prev_action length");
  }
  if (dm % 2 != 0) {
    throw std::invalid_argument("reference_forward: d_msg must be even");
  }
  const std::vector<double>& th = params.theta;

  // Flat layout: W1 (dm x (1+da), row-major), b1 (dm), W2 (dm x 1), b2 (dm).
  const std::size_t off_w1 = 0;
  const std::size_t off_b1 = off_w1 + dm * (1 + da);
  const std::size_t off_w2 = off_b1 + dm;
  const std::size_t off_b2 = off_w2 + dm;

  // First encoder (R or K): tanh(W1 [obs_i; prev_action] + b1).
  std::vector<std::vector<double>> first(n, std::vector<double>(dm, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dm; ++k) {
      double s = th[off_b1 + k];
      s += th[off_w1 + k * (1 + da) + 0] * obs[i];
      for (std::size_t j = 0; j < da; ++j) {
        s += th[off_w1 + k * (1 + da) + 1 + j] * prev_action[j];
      }
      first[i][k] = std::tanh(s);
    }
  }

  // Second encoder (D or V): tanh(W2 obs_i + b2).
  std::vector<std::vector<double>> second(n, std::vector<double>(dm, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dm; ++k) {
      second[i][k] = std::tanh(th[off_b2 + k] + th[off_w2 + k] * obs[i]);
    }
  }

  // Positional row at index 0, written from the formula.
  std::vector<double> u(dm, 0.0);
  for (std::size_t k = 0; 2 * k < dm; ++k) {
    const double denom = std::pow(
        10000.0, static_cast<double>(2 * k) / static_cast<double>(dm));
    u[2 * k] = std::sin(0.0 / denom);
    u[2 * k + 1] = std::cos(0.0 / denom);
  }

  Message msg(dm, 0.0);

  if (cfg.layer_kind == LayerKind::Cooperator) {
    for (std::size_t k = 0; k < dm; ++k) {
      double pooled = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double dmix = 0.0;
        if (cfg.context_mixing == ContextMixing::NeighborMean) {
          if (n > 1) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
              if (j != i) s += second[j][k];
            }
            dmix = s / static_cast<double>(n - 1);
          }
        } else {
          dmix = second[i][k];
        }
        const double rr = first[i][k];
        const double cc = rr + dmix + u[k];
        double m = 0.0;
        switch (cfg.modulation) {
          case ModulationKind::Cooperation: {
            const double pre =
                rr * rr + 2.0 * rr + 2.0 * cc * (1.0 + std::fabs(rr));
            m = pre > 0.0 ? pre : 0.0;
            break;
          }
          case ModulationKind::TM1: {
            double rc = rr * cc;
            if (rc > 500.0) rc = 500.0;
            if (rc < -500.0) rc = -500.0;
            m = 0.5 * rr * (1.0 + std::exp(rc));
            break;
          }
          case ModulationKind::TM2:
            m = rr + rr * cc;
            break;
          case ModulationKind::TM3:
            m = rr * (1.0 + std::tanh(rr * cc));
            break;
          case ModulationKind::TM4: {
            double rc = rr * cc;
            if (rc > 500.0) rc = 500.0;
            if (rc < -500.0) rc = -500.0;
            m = rr * std::exp2(rc);
            break;
          }
        }
        pooled += m;
      }
      msg[k] = pooled / static_cast<double>(n);
    }
    return msg;
  }

  // Transformer: scores, naive softmax, value mixing, tanh.
  std::vector<double> scores(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double dot = 0.0;
    for (std::size_t k = 0; k < dm; ++k) dot += u[k] * first[i][k];
    scores[i] = dot / std::sqrt(static_cast<double>(dm));
  }
  double mx = scores[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (scores[i] > mx) mx = scores[i];
  }
  std::vector<double> attn(n, 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    attn[i] = std::exp(scores[i] - mx);
    z += attn[i];
  }
  for (std::size_t i = 0; i < n; ++i) attn[i] /= z;
  for (std::size_t k = 0; k < dm; ++k) {
    double mixed = 0.0;
    for (std::size_t i = 0; i < n; ++i) mixed += attn[i] * second[i][k];
    msg[k] = std::tanh(mixed);
  }
  return msg;
}

}  // namespace coop
