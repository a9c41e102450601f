#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coop/es.hpp"
#include "coop/policy.hpp"

namespace coop {

// Checkpoint file format:
//
//   "COOPCKPT1\n"                                 magic, 10 bytes
//   key=value;key=value;...\n                     one text header line
//   genome as little-endian IEEE-754 doubles      len * 8 bytes
//
// The header is text so a checkpoint can be inspected with head(1); the
// payload is binary so training resumes bit-exactly. Doubles in the header
// (sigma, lr) are shortest round-trip formatted and reparse to the same bits.
inline constexpr std::string_view kCheckpointMagic = "COOPCKPT1\n";

struct CheckpointError : std::runtime_error {
  enum class Kind { BadMagic, BadHeader, Truncated, LengthMismatch };
  Kind kind;
  CheckpointError(Kind k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
};

struct Checkpoint {
  AgentConfig agent;
  EsConfig es;  // iterations field records how many were run
  std::uint64_t seed = 0;
  std::size_t iteration = 0;
  std::vector<double> genome;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_header_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw CheckpointError(CheckpointError::Kind::BadHeader,
                          "checkpoint header: bad value for field '" +
                              std::string(key) + "'");
  }
  return v;
}

inline std::uint64_t parse_header_u64(std::string_view key,
                                      std::string_view text) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw CheckpointError(CheckpointError::Kind::BadHeader,
                          "checkpoint header: bad value for field '" +
                              std::string(key) + "'");
  }
  return v;
}

}  // namespace detail

inline void save_checkpoint(const std::filesystem::path& path,
                            const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("save_checkpoint: cannot open " + path.string());
  }
  out.write(kCheckpointMagic.data(),
            static_cast<std::streamsize>(kCheckpointMagic.size()));

  std::string header;
  const auto add = [&header](std::string_view key, const std::string& value) {
    if (!header.empty()) header += ';';
    header += std::string(key) + "=" + value;
  };
  add("layer", std::string(to_string(ckpt.agent.layer.layer_kind)));
  add("modulation", std::string(to_string(ckpt.agent.layer.modulation)));
  add("mixing", std::string(to_string(ckpt.agent.layer.context_mixing)));
  add("n_components", std::to_string(ckpt.agent.layer.n_components));
  add("d_msg", std::to_string(ckpt.agent.layer.d_msg));
  add("d_action", std::to_string(ckpt.agent.layer.d_action));
  add("hidden", std::to_string(ckpt.agent.policy.hidden));
  add("pop", std::to_string(ckpt.es.population));
  add("sigma", detail::format_double(ckpt.es.sigma));
  add("lr", detail::format_double(ckpt.es.learning_rate));
  add("episodes_per_eval", std::to_string(ckpt.es.episodes_per_eval));
  add("seed", std::to_string(ckpt.seed));
  add("iteration", std::to_string(ckpt.iteration));
  add("len", std::to_string(ckpt.genome.size()));
  header += '\n';
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  for (double v : ckpt.genome) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int b = 0; b < 8; ++b) {
      bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
    out.write(bytes, 8);
  }
  if (!out) {
    throw std::runtime_error("save_checkpoint: write failed for " +
                             path.string());
  }
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_checkpoint: cannot open " + path.string());
  }
  std::string magic(kCheckpointMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (in.gcount() != static_cast<std::streamsize>(magic.size()) ||
      magic != kCheckpointMagic) {
    throw CheckpointError(CheckpointError::Kind::BadMagic,
                          "load_checkpoint: bad magic in " + path.string());
  }

  std::string header;
  if (!std::getline(in, header)) {
    throw CheckpointError(CheckpointError::Kind::Truncated,
                          "load_checkpoint: missing header line");
  }

  std::map<std::string, std::string, std::less<>> fields;
  std::size_t pos = 0;
  while (pos < header.size()) {
    std::size_t end = header.find(';', pos);
    if (end == std::string::npos) end = header.size();
    const std::string_view item(header.data() + pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw CheckpointError(CheckpointError::Kind::BadHeader,
                            "checkpoint header: malformed item '" +
                                std::string(item) + "'");
    }
    fields.emplace(std::string(item.substr(0, eq)),
                   std::string(item.substr(eq + 1)));
    pos = end + 1;
  }
  const auto field = [&fields](std::string_view key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) {
      throw CheckpointError(CheckpointError::Kind::BadHeader,
                            "checkpoint header: missing field '" +
                                std::string(key) + "'");
    }
    return it->second;
  };

  Checkpoint ckpt;
  const auto layer_kind = parse_layer_kind(field("layer"));
  if (!layer_kind) {
    throw CheckpointError(CheckpointError::Kind::BadHeader,
                          "checkpoint header: bad value for field 'layer'");
  }
  const auto modulation = parse_modulation(field("modulation"));
  if (!modulation) {
    throw CheckpointError(CheckpointError::Kind::BadHeader,
                          "checkpoint header: bad value for field 'modulation'");
  }
  const auto mixing = parse_context_mixing(field("mixing"));
  if (!mixing) {
    throw CheckpointError(CheckpointError::Kind::BadHeader,
                          "checkpoint header: bad value for field 'mixing'");
  }
  ckpt.agent.layer.layer_kind = *layer_kind;
  ckpt.agent.layer.modulation = *modulation;
  ckpt.agent.layer.context_mixing = *mixing;
  ckpt.agent.layer.n_components =
      detail::parse_header_u64("n_components", field("n_components"));
  ckpt.agent.layer.d_msg = detail::parse_header_u64("d_msg", field("d_msg"));
  ckpt.agent.layer.d_action =
      detail::parse_header_u64("d_action", field("d_action"));
  ckpt.agent.policy.d_msg = ckpt.agent.layer.d_msg;
  ckpt.agent.policy.d_action = ckpt.agent.layer.d_action;
  ckpt.agent.policy.hidden =
      detail::parse_header_u64("hidden", field("hidden"));
  ckpt.es.population = detail::parse_header_u64("pop", field("pop"));
  ckpt.es.sigma = detail::parse_header_double("sigma", field("sigma"));
  ckpt.es.learning_rate = detail::parse_header_double("lr", field("lr"));
  ckpt.es.episodes_per_eval =
      detail::parse_header_u64("episodes_per_eval", field("episodes_per_eval"));
  ckpt.es.base_seed = detail::parse_header_u64("seed", field("seed"));
  ckpt.seed = ckpt.es.base_seed;
  ckpt.iteration = detail::parse_header_u64("iteration", field("iteration"));
  const std::size_t len = detail::parse_header_u64("len", field("len"));

  std::vector<char> payload(std::istreambuf_iterator<char>(in), {});
  if (payload.size() % 8 != 0) {
    throw CheckpointError(CheckpointError::Kind::Truncated,
                          "load_checkpoint: payload is torn (not a whole "
                          "number of doubles)");
  }
  const std::size_t count = payload.size() / 8;
  if (count != len) {
    throw CheckpointError(
        CheckpointError::Kind::LengthMismatch,
        "load_checkpoint: header says " + std::to_string(len) +
            " genome values, payload holds " + std::to_string(count));
  }
  const std::size_t expected = genome_size(ckpt.agent);
  if (len != expected) {
    throw CheckpointError(
        CheckpointError::Kind::LengthMismatch,
        "load_checkpoint: header field 'len' (" + std::to_string(len) +
            ") does not match the configured genome size (" +
            std::to_string(expected) + ")");
  }

  ckpt.genome.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(
                  static_cast<unsigned char>(payload[i * 8 + b]))
              << (8 * b);
    }
    ckpt.genome[i] = std::bit_cast<double>(bits);
  }
  return ckpt;
}

}  // namespace coop
