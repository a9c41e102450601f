#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coop/matrix.hpp"
#include "coop/modulation.hpp"
#include "coop/positional.hpp"

namespace coop {

// Permutation-invariant sensory layer, in two flavours behind one interface.
//
// Both flavours process each observation component with the same pair of
// per-component encoders (weight sharing is what makes the layer
// permutation-equivariant before pooling):
//
//   Cooperator:  the first encoder produces the drive R, the second the
//                distal opinion D. Context C = P + D~ + U is assembled per
//                row and combined with R through a modulatory transfer
//                function; the rows are mean-pooled into the message.
//   Transformer: the first encoder produces keys K, the second values V.
//                A single fixed query attends over the N components with
//                scaled dot-product attention; the mixed values pass
//                through tanh.
//
// The fixed query and the universal context U are both the index-0
// positional encoding row, broadcast identically to every component. They
// carry no parameters and do not move when the input is permuted, which is
// what keeps the final message permutation-invariant.
enum class LayerKind { Cooperator, Transformer };

// How the distal opinions D are mixed into each row's context:
//   NeighborMean - row i receives the mean of the other rows' D (default),
//   Rowwise      - row i receives its own D row.
enum class ContextMixing { Rowwise, NeighborMean };

struct LayerConfig {
  std::size_t n_components = 5;  // N sensors
  std::size_t d_msg = 16;        // width of R, D, C and the message
  std::size_t d_action = 1;
  LayerKind layer_kind = LayerKind::Cooperator;
  ModulationKind modulation = ModulationKind::Cooperation;
  ContextMixing context_mixing = ContextMixing::NeighborMean;
};

inline void validate(const LayerConfig& cfg) {
  if (cfg.n_components < 1) {
    throw std::invalid_argument("LayerConfig: n_components must be >= 1");
  }
  if (cfg.d_msg == 0 || cfg.d_msg % 2 != 0) {
    throw std::invalid_argument("LayerConfig: d_msg must be even and > 0");
  }
}

// Learnable parameters per flavour: one encoder of d_msg x (1 + d_action)
// weights plus bias (R or K) and one of d_msg x 1 weights plus bias (D or
// V). The expressions are identical, so the two flavours always have the
// same count at equal dimensions.
inline std::size_t param_count(const LayerConfig& cfg) {
  return cfg.d_msg * (1 + cfg.d_action) + cfg.d_msg  // W_R/W_K, b_R/b_K
         + cfg.d_msg + cfg.d_msg;                    // W_D/W_V, b_D/b_V
}

// Flat parameter layout (frozen; the ES genome and the checkpoint payload
// both use it):
//   [0, A)            first encoder weights, d_msg x (1 + d_action), row-major
//   [A, A + d_msg)    first encoder bias
//   [.., .. + d_msg)  second encoder weights, d_msg x 1
//   [.., .. + d_msg)  second encoder bias
struct LayerParams {
  LayerConfig config;
  std::vector<double> theta;
};

inline LayerParams load_params(const LayerConfig& cfg,
                               std::vector<double> theta) {
  validate(cfg);
  if (theta.size() != param_count(cfg)) {
    throw std::invalid_argument(
        "load_params: expected " + std::to_string(param_count(cfg)) +
        " parameters, got " + std::to_string(theta.size()));
  }
  return LayerParams{cfg, std::move(theta)};
}

inline std::vector<double> flatten_params(const LayerParams& params) {
  return params.theta;
}

// The pooled layer output: d_msg values, invariant under any permutation of
// the input components.
using Message = std::vector<double>;

namespace detail {

struct ThetaLayout {
  std::size_t w1 = 0;  // first encoder weights
  std::size_t b1 = 0;
  std::size_t w2 = 0;  // second encoder weights
  std::size_t b2 = 0;
};

inline ThetaLayout theta_layout(const LayerConfig& cfg) {
  ThetaLayout l;
  l.w1 = 0;
  l.b1 = l.w1 + cfg.d_msg * (1 + cfg.d_action);
  l.w2 = l.b1 + cfg.d_msg;
  l.b2 = l.w2 + cfg.d_msg;
  return l;
}

inline void check_forward_args(const LayerConfig& cfg,
                               std::span<const double> obs,
                               std::span<const double> prev_action) {
  if (obs.size() != cfg.n_components) {
    throw std::invalid_argument(
        "layer: expected " + std::to_string(cfg.n_components) +
        " observation components, got " + std::to_string(obs.size()));
  }
  if (prev_action.size() != cfg.d_action) {
    throw std::invalid_argument(
        "layer: expected " + std::to_string(cfg.d_action) +
        " previous-action components, got " +
        std::to_string(prev_action.size()));
  }
}

}  // namespace detail

// Per-component encoders. Row i of the result pair depends only on obs[i]
// (and the shared prev_action), so permuting the input permutes the rows
// identically.
//
//   R row i = tanh(W1 * [obs[i]; prev_action] + b1)   (K for Transformer)
//   D row i = tanh(W2 * [obs[i]] + b2)                (V for Transformer)
inline std::pair<Matrix, Matrix> encode_rd(const LayerParams& params,
                                           std::span<const double> obs,
                                           std::span<const double> prev_action) {
  const LayerConfig& cfg = params.config;
  detail::check_forward_args(cfg, obs, prev_action);
  const auto lay = detail::theta_layout(cfg);
  const std::vector<double>& th = params.theta;
  const std::size_t in1 = 1 + cfg.d_action;

  Matrix r(cfg.n_components, cfg.d_msg);
  Matrix d(cfg.n_components, cfg.d_msg);
  for (std::size_t i = 0; i < cfg.n_components; ++i) {
    for (std::size_t k = 0; k < cfg.d_msg; ++k) {
      double acc = th[lay.b1 + k] + th[lay.w1 + k * in1] * obs[i];
      for (std::size_t j = 0; j < cfg.d_action; ++j) {
        acc += th[lay.w1 + k * in1 + 1 + j] * prev_action[j];
      }
      r(i, k) = std::tanh(acc);
      d(i, k) = std::tanh(th[lay.b2 + k] + th[lay.w2 + k] * obs[i]);
    }
  }
  return {std::move(r), std::move(d)};
}

// Context assembly, C = P + D~ + U:
//   P  - proximal context, the unit's own drive row (identity map of R),
//   D~ - distal context, NeighborMean: mean of the other rows' D
//        (zero when N = 1), Rowwise: the row's own D,
//   U  - universal context, positional_row(d_msg, 0) broadcast to all rows.
inline Matrix build_context(const Matrix& r, const Matrix& d,
                            const LayerConfig& cfg) {
  if (r.rows != cfg.n_components || r.cols != cfg.d_msg || d.rows != r.rows ||
      d.cols != r.cols) {
    throw std::invalid_argument("build_context: R/D shape mismatch");
  }
  const std::vector<double> u = positional_row(cfg.d_msg, 0);
  const std::size_t n = cfg.n_components;

  Matrix ctx(n, cfg.d_msg);
  if (cfg.context_mixing == ContextMixing::NeighborMean) {
    std::vector<double> col_sum(cfg.d_msg, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < cfg.d_msg; ++k) col_sum[k] += d(i, k);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < cfg.d_msg; ++k) {
        const double dmix =
            n > 1 ? (col_sum[k] - d(i, k)) / static_cast<double>(n - 1) : 0.0;
        ctx(i, k) = r(i, k) + dmix + u[k];
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < cfg.d_msg; ++k) {
        ctx(i, k) = r(i, k) + d(i, k) + u[k];
      }
    }
  }
  return ctx;
}

// Numerically-stable softmax (max-shifted).
inline std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) {
    throw std::invalid_argument("softmax: empty input");
  }
  double max_logit = logits[0];
  for (double v : logits) max_logit = std::max(max_logit, v);
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

// Attention weights of the Transformer flavour: softmax(q K^T / sqrt(d_msg))
// with the parameter-free fixed query q = positional_row(d_msg, 0).
inline std::vector<double> attention_weights(const LayerParams& params,
                                             std::span<const double> obs,
                                             std::span<const double> prev_action) {
  const LayerConfig& cfg = params.config;
  const auto [keys, values] = encode_rd(params, obs, prev_action);
  (void)values;
  const std::vector<double> q = positional_row(cfg.d_msg, 0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.d_msg));
  std::vector<double> scores(cfg.n_components, 0.0);
  for (std::size_t i = 0; i < cfg.n_components; ++i) {
    double dot = 0.0;
    for (std::size_t k = 0; k < cfg.d_msg; ++k) dot += q[k] * keys(i, k);
    scores[i] = dot * scale;
  }
  return softmax(scores);
}

// Forward pass to the pooled message.
//
//   Cooperator:  m(i,k) = modulate(kind, R(i,k), C(i,k)),
//                message[k] = mean_i m(i,k)
//   Transformer: message = tanh(softmax(q K^T / sqrt(d_msg)) V)
inline Message layer_forward(const LayerParams& params,
                             std::span<const double> obs,
                             std::span<const double> prev_action) {
  const LayerConfig& cfg = params.config;
  const std::size_t n = cfg.n_components;

  if (cfg.layer_kind == LayerKind::Cooperator) {
    const auto [r, d] = encode_rd(params, obs, prev_action);
    const Matrix ctx = build_context(r, d, cfg);
    Message msg(cfg.d_msg, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < cfg.d_msg; ++k) {
        msg[k] += modulate(cfg.modulation, r(i, k), ctx(i, k));
      }
    }
    for (double& v : msg) v /= static_cast<double>(n);
    return msg;
  }

  const auto [keys, values] = encode_rd(params, obs, prev_action);
  const std::vector<double> q = positional_row(cfg.d_msg, 0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.d_msg));
  std::vector<double> scores(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double dot = 0.0;
    for (std::size_t k = 0; k < cfg.d_msg; ++k) dot += q[k] * keys(i, k);
    scores[i] = dot * scale;
  }
  const std::vector<double> attn = softmax(scores);
  Message msg(cfg.d_msg, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < cfg.d_msg; ++k) {
      msg[k] += attn[i] * values(i, k);
    }
  }
  for (double& v : msg) v = std::tanh(v);
  return msg;
}

inline std::string_view to_string(LayerKind kind) {
  return kind == LayerKind::Cooperator ? "cooperator" : "transformer";
}

inline std::optional<LayerKind> parse_layer_kind(std::string_view name) {
  if (name == "cooperator") return LayerKind::Cooperator;
  if (name == "transformer") return LayerKind::Transformer;
  return std::nullopt;
}

inline std::string_view to_string(ContextMixing mixing) {
  return mixing == ContextMixing::NeighborMean ? "neighbor_mean" : "rowwise";
}

inline std::optional<ContextMixing> parse_context_mixing(std::string_view name) {
  if (name == "neighbor_mean") return ContextMixing::NeighborMean;
  if (name == "rowwise") return ContextMixing::Rowwise;
  return std::nullopt;
}

}  // namespace coop
