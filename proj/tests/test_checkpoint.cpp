#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <vector>

#include "coop/checkpoint.hpp"
#include "coop/rng.hpp"

using namespace coop;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "coop_ckpt_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Checkpoint sample_checkpoint(RngState& rng) {
  Checkpoint ckpt;
  ckpt.agent.layer.n_components = 5;
  ckpt.agent.layer.d_msg = 8;
  ckpt.agent.layer.d_action = 1;
  ckpt.agent.layer.layer_kind = LayerKind::Cooperator;
  ckpt.agent.layer.modulation = ModulationKind::TM3;
  ckpt.agent.layer.context_mixing = ContextMixing::NeighborMean;
  ckpt.agent.policy.d_msg = 8;
  ckpt.agent.policy.hidden = 4;
  ckpt.agent.policy.d_action = 1;
  ckpt.es.population = 16;
  ckpt.es.sigma = 0.37;
  ckpt.es.learning_rate = 0.011;
  ckpt.es.episodes_per_eval = 2;
  ckpt.es.base_seed = 99;
  ckpt.seed = 99;
  ckpt.iteration = 42;
  ckpt.genome.resize(genome_size(ckpt.agent));
  for (double& v : ckpt.genome) v = rng_gaussian(rng);
  return ckpt;
}

std::vector<char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(in), {});
}

void write_bytes(const std::filesystem::path& path,
                 const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("checkpoint round trip is bit exact") {
  RngState rng{81};
  const Checkpoint ckpt = sample_checkpoint(rng);
  const auto path = temp_file("round_trip.ckpt");
  save_checkpoint(path, ckpt);
  const Checkpoint loaded = load_checkpoint(path);

  CHECK(loaded.genome == ckpt.genome);
  CHECK(loaded.agent.layer.layer_kind == ckpt.agent.layer.layer_kind);
  CHECK(loaded.agent.layer.modulation == ckpt.agent.layer.modulation);
  CHECK(loaded.agent.layer.context_mixing == ckpt.agent.layer.context_mixing);
  CHECK(loaded.agent.layer.n_components == ckpt.agent.layer.n_components);
  CHECK(loaded.agent.layer.d_msg == ckpt.agent.layer.d_msg);
  CHECK(loaded.agent.layer.d_action == ckpt.agent.layer.d_action);
  CHECK(loaded.agent.policy.hidden == ckpt.agent.policy.hidden);
  CHECK(loaded.es.population == ckpt.es.population);
  CHECK(loaded.es.sigma == ckpt.es.sigma);
  CHECK(loaded.es.learning_rate == ckpt.es.learning_rate);
  CHECK(loaded.es.episodes_per_eval == ckpt.es.episodes_per_eval);
  CHECK(loaded.seed == ckpt.seed);
  CHECK(loaded.iteration == ckpt.iteration);

  // Saving the loaded checkpoint reproduces the file byte for byte.
  const auto path2 = temp_file("round_trip2.ckpt");
  save_checkpoint(path2, loaded);
  CHECK(read_bytes(path) == read_bytes(path2));
}

TEST_CASE("truncating the payload by one double is a length mismatch") {
  RngState rng{82};
  const auto path = temp_file("truncated.ckpt");
  save_checkpoint(path, sample_checkpoint(rng));
  auto bytes = read_bytes(path);
  bytes.resize(bytes.size() - 8);
  write_bytes(path, bytes);
  try {
    (void)load_checkpoint(path);
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.kind == CheckpointError::Kind::LengthMismatch);
  }
}

TEST_CASE("a torn payload is reported as truncated") {
  RngState rng{83};
  const auto path = temp_file("torn.ckpt");
  save_checkpoint(path, sample_checkpoint(rng));
  auto bytes = read_bytes(path);
  bytes.resize(bytes.size() - 3);
  write_bytes(path, bytes);
  try {
    (void)load_checkpoint(path);
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.kind == CheckpointError::Kind::Truncated);
  }
}

TEST_CASE("altered magic is rejected") {
  RngState rng{84};
  const auto path = temp_file("badmagic.ckpt");
  save_checkpoint(path, sample_checkpoint(rng));
  auto bytes = read_bytes(path);
  bytes[0] = 'X';
  write_bytes(path, bytes);
  try {
    (void)load_checkpoint(path);
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.kind == CheckpointError::Kind::BadMagic);
  }
}

TEST_CASE("header errors name the failing field") {
  RngState rng{85};
  const Checkpoint ckpt = sample_checkpoint(rng);
  const auto path = temp_file("badheader.ckpt");
  save_checkpoint(path, ckpt);
  auto bytes = read_bytes(path);

  // Corrupt the modulation value inside the header line.
  const std::string needle = "modulation=tm3";
  const std::string replacement = "modulation=xxx";
  std::string text(bytes.begin(), bytes.end());
  const std::size_t pos = text.find(needle);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, needle.size(), replacement);
  write_bytes(path, std::vector<char>(text.begin(), text.end()));

  try {
    (void)load_checkpoint(path);
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.kind == CheckpointError::Kind::BadHeader);
    CHECK(std::string(e.what()).find("modulation") != std::string::npos);
  }
}

TEST_CASE("missing header field is named") {
  const auto path = temp_file("missing.ckpt");
  std::ofstream out(path, std::ios::binary);
  out << kCheckpointMagic << "layer=cooperator;d_msg=8\n";
  out.close();
  try {
    (void)load_checkpoint(path);
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.kind == CheckpointError::Kind::BadHeader);
    CHECK(std::string(e.what()).find("modulation") != std::string::npos);
  }
}
