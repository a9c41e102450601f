// coop - train, evaluate and compare permutation-invariant cart-pole agents.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "coop/coop.hpp"

namespace {

std::size_t worker_threads(std::size_t flag_value) {
  // COOP_THREADS overrides the flag; results are identical either way.
  if (const char* env = std::getenv("COOP_THREADS")) {
    const long n = std::atol(env);
    if (n >= 1) return static_cast<std::size_t>(n);
  }
  if (flag_value >= 1) return flag_value;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

struct LayerChoice {
  std::string layer = "cooperator";
  std::string modulation = "cooperation";
  std::string mixing = "neighbor_mean";
};

void apply_layer_choice(const LayerChoice& choice, coop::TrainOptions& opt) {
  const auto kind = coop::parse_layer_kind(choice.layer);
  if (!kind) {
    throw CLI::ValidationError("--layer", "unknown layer '" + choice.layer +
                                              "' (cooperator|transformer)");
  }
  const auto mod = coop::parse_modulation(choice.modulation);
  if (!mod) {
    throw CLI::ValidationError("--modulation",
                               "unknown modulation '" + choice.modulation +
                                   "' (cooperation|tm1|tm2|tm3|tm4)");
  }
  const auto mix = coop::parse_context_mixing(choice.mixing);
  if (!mix) {
    throw CLI::ValidationError("--mixing", "unknown mixing '" + choice.mixing +
                                               "' (neighbor_mean|rowwise)");
  }
  opt.layer_kind = *kind;
  opt.modulation = *mod;
  opt.mixing = *mix;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permutation-invariant sensory layers on cart-pole swing-up"};
  app.require_subcommand(1);

  // ---- train ----
  auto* train = app.add_subcommand("train", "run ES training");
  coop::TrainOptions train_opt;
  LayerChoice train_choice;
  std::string train_out;
  std::size_t train_threads = 0;
  train->add_option("--env", train_opt.env, "environment (cartpole)");
  train->add_option("--layer", train_choice.layer, "cooperator|transformer");
  train->add_option("--modulation", train_choice.modulation,
                    "cooperation|tm1|tm2|tm3|tm4");
  train->add_option("--mixing", train_choice.mixing,
                    "neighbor_mean|rowwise distal context mixing");
  train->add_option("--iters", train_opt.es.iterations, "ES generations");
  train->add_option("--pop", train_opt.es.population,
                    "population size (even)");
  train->add_option("--sigma", train_opt.es.sigma, "perturbation scale");
  train->add_option("--lr", train_opt.es.learning_rate, "learning rate");
  train->add_option("--episodes-per-eval", train_opt.es.episodes_per_eval,
                    "episodes per fitness evaluation");
  train->add_option("--seed", train_opt.es.base_seed, "base seed");
  train->add_option("--d-msg", train_opt.d_msg, "message width (even)");
  train->add_option("--hidden", train_opt.hidden, "policy hidden width");
  train->add_option("--threads", train_threads,
                    "worker threads (0 = hardware)");
  train->add_option("--out", train_out, "output directory")->required();

  // ---- eval ----
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  coop::EvalOptions eval_opt;
  std::string eval_ckpt;
  std::string eval_out = "eval.txt";
  eval->add_option("--ckpt", eval_ckpt, "checkpoint file")->required();
  eval->add_option("--episodes", eval_opt.episodes, "test episodes");
  eval->add_flag("--shuffle", eval_opt.shuffle,
                 "shuffle observation components per episode");
  eval->add_option("--seed", eval_opt.seed, "evaluation seed");
  eval->add_option("--out", eval_out, "report file");

  // ---- compare ----
  auto* compare = app.add_subcommand(
      "compare", "compare two runs (directories or fresh trainings)");
  std::string cmp_a, cmp_b, cmp_out;
  LayerChoice choice_a;
  LayerChoice choice_b{"transformer", "cooperation", "neighbor_mean"};
  coop::TrainOptions cmp_train;
  std::size_t cmp_threads = 0;
  compare->add_option("--a", cmp_a, "run directory A");
  compare->add_option("--b", cmp_b, "run directory B");
  compare->add_option("--layer-a", choice_a.layer, "layer for fresh run A");
  compare->add_option("--modulation-a", choice_a.modulation,
                      "modulation for fresh run A");
  compare->add_option("--layer-b", choice_b.layer, "layer for fresh run B");
  compare->add_option("--modulation-b", choice_b.modulation,
                      "modulation for fresh run B");
  compare->add_option("--iters", cmp_train.es.iterations, "ES generations");
  compare->add_option("--pop", cmp_train.es.population, "population size");
  compare->add_option("--sigma", cmp_train.es.sigma, "perturbation scale");
  compare->add_option("--lr", cmp_train.es.learning_rate, "learning rate");
  compare->add_option("--episodes-per-eval", cmp_train.es.episodes_per_eval,
                      "episodes per fitness evaluation");
  compare->add_option("--seed", cmp_train.es.base_seed, "base seed");
  compare->add_option("--d-msg", cmp_train.d_msg, "message width");
  compare->add_option("--hidden", cmp_train.hidden, "policy hidden width");
  compare->add_option("--threads", cmp_threads, "worker threads");
  compare->add_option("--out", cmp_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      apply_layer_choice(train_choice, train_opt);
      train_opt.out_dir = train_out;
      train_opt.es.threads = worker_threads(train_threads);
      const coop::TrainResult result = coop::run_train(train_opt);
      std::cout << "wrote " << result.log_path.string() << ", "
                << result.checkpoint_path.string() << ", "
                << result.curve_path.string() << "\n"
                << "generations=" << result.log.rows.size()
                << " best=" << result.best_so_far
                << " iter0_mean=" << result.iter0_mean << "\n";
    } else if (*eval) {
      eval_opt.ckpt_path = eval_ckpt;
      eval_opt.out_file = eval_out;
      const coop::EvalResult result = coop::run_eval(eval_opt);
      std::cout << result.report;
    } else if (*compare) {
      coop::CompareOptions cmp;
      cmp.out_dir = cmp_out;
      const bool have_dirs = !cmp_a.empty() && !cmp_b.empty();
      if (have_dirs) {
        cmp.run_a = cmp_a;
        cmp.run_b = cmp_b;
      } else {
        // Fresh-training mode: same budget and seed for both sides.
        cmp_train.es.threads = worker_threads(cmp_threads);
        coop::TrainOptions opt_a = cmp_train;
        apply_layer_choice(choice_a, opt_a);
        opt_a.out_dir = std::filesystem::path(cmp_out) / "a";
        coop::TrainOptions opt_b = cmp_train;
        apply_layer_choice(choice_b, opt_b);
        opt_b.out_dir = std::filesystem::path(cmp_out) / "b";
        coop::run_train(opt_a);
        coop::run_train(opt_b);
        cmp.run_a = opt_a.out_dir;
        cmp.run_b = opt_b.out_dir;
      }
      const coop::CompareResult result = coop::run_compare(cmp);
      std::cout << result.table << "wrote " << result.overlay_path.string()
                << ", " << result.table_path.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
