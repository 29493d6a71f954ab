#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "trajgan/cli.hpp"
#include "trajgan/error.hpp"
#include "trajgan/log.hpp"

namespace {

using trajgan::ExperimentConfig;

ExperimentConfig resolve_config(const std::string& config_path) {
  if (config_path.empty()) return ExperimentConfig{};
  return trajgan::load_config(config_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Map-conditioned adversarial trajectory forecasting toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_config_flag = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path, "Experiment config file");
  };

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic corpus");
  add_config_flag(gen);
  std::size_t gen_n = 100;
  double gen_mix = 0.5;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Number of scenes")->required();
  gen->add_option("--mix", gen_mix, "Fraction of straight scenes");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output directory")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train on a corpus directory");
  add_config_flag(tr);
  std::string tr_corpus, tr_out;
  std::uint64_t tr_seed = 0;
  bool tr_seed_set = false;
  tr->add_option("--corpus", tr_corpus, "Corpus directory")->required();
  tr->add_option("--out", tr_out, "Output directory")->required();
  tr->add_option("--seed", tr_seed, "Training seed override")
      ->each([&](const std::string&) { tr_seed_set = true; });

  // predict
  auto* pr = app.add_subcommand("predict", "Predict one scene");
  add_config_flag(pr);
  std::string pr_ckpt, pr_scene, pr_map, pr_out, pr_svg;
  std::uint64_t pr_seed = 0;
  bool pr_seed_set = false;
  pr->add_option("--checkpoint", pr_ckpt, "Model checkpoint")->required();
  pr->add_option("--scene", pr_scene, "Scene CSV")->required();
  pr->add_option("--map", pr_map, "Map JSON")->required();
  pr->add_option("--out", pr_out, "Prediction CSV path")->required();
  pr->add_option("--svg", pr_svg, "Optional SVG render path");
  pr->add_option("--seed", pr_seed, "Evaluation seed override")
      ->each([&](const std::string&) { pr_seed_set = true; });

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Evaluate on a corpus directory");
  add_config_flag(ev);
  std::string ev_ckpt, ev_corpus, ev_out;
  std::uint64_t ev_seed = 0;
  bool ev_seed_set = false;
  ev->add_option("--checkpoint", ev_ckpt, "Model checkpoint")->required();
  ev->add_option("--corpus", ev_corpus, "Corpus directory")->required();
  ev->add_option("--out", ev_out, "Output directory")->required();
  ev->add_option("--seed", ev_seed, "Evaluation seed override")
      ->each([&](const std::string&) { ev_seed_set = true; });

  // plot
  auto* pl = app.add_subcommand("plot", "Render a scene to SVG");
  add_config_flag(pl);
  std::string pl_scene, pl_map, pl_out;
  std::uint64_t pl_seed = 11;
  pl->add_option("--scene", pl_scene, "Scene CSV")->required();
  pl->add_option("--map", pl_map, "Map JSON")->required();
  pl->add_option("--out", pl_out, "Output SVG path")->required();
  pl->add_option("--seed", pl_seed, "Target sampler seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    ExperimentConfig config = resolve_config(config_path);
    if (gen->parsed()) {
      trajgan::cli::cmd_gen_data(gen_n, gen_mix, gen_seed, gen_out, config);
    } else if (tr->parsed()) {
      if (tr_seed_set) config.train_seed = tr_seed;
      trajgan::cli::cmd_train(config, tr_corpus, tr_out);
    } else if (pr->parsed()) {
      const std::uint64_t seed = pr_seed_set ? pr_seed : config.eval_seed;
      trajgan::cli::cmd_predict(pr_ckpt, pr_scene, pr_map, seed, config,
                                pr_out, pr_svg);
    } else if (ev->parsed()) {
      if (ev_seed_set) config.eval_seed = ev_seed;
      trajgan::cli::cmd_evaluate(ev_ckpt, ev_corpus, config, ev_out);
    } else if (pl->parsed()) {
      trajgan::cli::cmd_plot(pl_scene, pl_map, pl_seed, config, pl_out);
    }
  } catch (const trajgan::ConfigError& e) {
    trajgan::log_error(e.what());
    return 1;
  } catch (const trajgan::DataError& e) {
    trajgan::log_error(e.what());
    return 2;
  } catch (const trajgan::NumericError& e) {
    trajgan::log_error(e.what());
    return 3;
  } catch (const std::exception& e) {
    trajgan::log_error(e.what());
    return 3;
  }
  return 0;
}
