#include "trajgan/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "trajgan/checkpoint.hpp"
#include "trajgan/error.hpp"
#include "trajgan/log.hpp"
#include "trajgan/svg.hpp"
#include "trajgan/synthetic.hpp"
#include "trajgan/train.hpp"

namespace trajgan::cli {

namespace fs = std::filesystem;

Corpus load_corpus(const std::string& dir, const WindowConfig& window) {
  if (!fs::is_directory(dir)) {
    throw DataError("corpus directory not found: " + dir);
  }
  const fs::path map_path = fs::path(dir) / "map.json";
  if (!fs::exists(map_path)) {
    throw DataError("corpus map not found: " + map_path.string());
  }
  Corpus corpus;
  corpus.map = std::make_shared<DrivableArea>(read_map_json(map_path.string()));

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw DataError("corpus has no scene files: " + dir);
  }
  corpus.scenes.reserve(files.size());
  for (const auto& file : files) {
    corpus.scenes.push_back(read_scene_csv(file, corpus.map, window));
  }
  return corpus;
}

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory " + dir + ": " + ec.message());
}

std::string scene_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%05zu", index);
  return buf;
}

}  // namespace

void cmd_gen_data(std::size_t n, double straight_mix, std::uint64_t seed,
                  const std::string& out_dir, const ExperimentConfig& config) {
  if (straight_mix < 0.0 || straight_mix > 1.0) {
    throw ConfigError("gen-data: straight mix must be within [0,1]");
  }
  ensure_dir(out_dir);
  Rng rng(seed);
  Rng label_rng = rng.fork(1);

  const std::size_t n_straight = static_cast<std::size_t>(
      std::llround(straight_mix * static_cast<double>(n)));
  std::vector<ScenarioKind> kinds;
  kinds.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_straight) {
      kinds.push_back(rng.bernoulli(0.5) ? ScenarioKind::kStraight
                                         : ScenarioKind::kBrake);
    } else {
      kinds.push_back(rng.bernoulli(0.5) ? ScenarioKind::kCurve
                                         : ScenarioKind::kTurnWithTraffic);
    }
  }
  for (std::size_t i = kinds.size(); i > 1; --i) {
    std::swap(kinds[i - 1], kinds[rng.uniform_int(i)]);
  }

  const std::size_t grid =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::ceil(std::sqrt(
                                       static_cast<double>(std::max<std::size_t>(
                                           n, 1))))));
  constexpr double kSpacing = 500.0;

  DrivableArea corpus_map;
  nlohmann::json manifest;
  manifest["scenes"] = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Scene scene = generate_synthetic_scene(seed + i, kinds[i], config.window);
    const Vec2 offset{static_cast<double>(i % grid) * kSpacing,
                      static_cast<double>(i / grid) * kSpacing};
    scene = translate_scene(scene, offset);
    scene.scene_id = scene_file_name(i);
    const std::string file = scene_file_name(i) + ".csv";
    write_scene_csv((fs::path(out_dir) / file).string(), scene);
    for (const auto& poly : scene.map->polygons) {
      corpus_map.polygons.push_back(poly);
    }
    const auto label = classify_curvature(scene.agent(), label_rng);
    manifest["scenes"].push_back(
        {{"file", file},
         {"scene_id", scene.scene_id},
         {"kind", scenario_kind_name(kinds[i])},
         {"label", curvature_name(label.label)}});
  }
  write_map_json((fs::path(out_dir) / "map.json").string(), corpus_map);
  std::ofstream os((fs::path(out_dir) / "manifest.json").string(),
                   std::ios::trunc);
  if (!os) throw DataError("cannot write manifest in " + out_dir);
  os << manifest.dump(2) << '\n';
  log_info("wrote " + std::to_string(n) + " scenes to " + out_dir);
}

void cmd_train(const ExperimentConfig& config, const std::string& corpus_dir,
               const std::string& out_dir) {
  ensure_dir(out_dir);
  const Corpus corpus = load_corpus(corpus_dir, config.window);
  const auto result = train::train(config.train_config(), corpus.scenes);

  train::write_metrics_csv((fs::path(out_dir) / "metrics.csv").string(),
                           result.log);
  ad::ParamMap best = result.best_params;
  best.emplace_back(
      "meta/window",
      model::Tensor::leaf({3}, {static_cast<double>(result.window.t_obs),
                                static_cast<double>(result.window.t_pred),
                                result.window.hz}));
  best.emplace_back(
      "meta/dims",
      model::Tensor::leaf(
          {4}, {static_cast<double>(config.dims.embed_dim),
                static_cast<double>(config.dims.hidden_dim),
                static_cast<double>(config.dims.heads),
                static_cast<double>(config.dims.z_dim)}));
  ad::save_checkpoint((fs::path(out_dir) / "model.ckpt").string(), best);
  save_config((fs::path(out_dir) / "config.ini").string(), config);
  log_info("best validation ade " + format_double(result.best_val_ade));
}

void cmd_predict(const std::string& checkpoint_path,
                 const std::string& scene_path, const std::string& map_path,
                 std::uint64_t seed, const ExperimentConfig& config,
                 const std::string& out_csv, const std::string& svg_path) {
  const auto loaded = model::load_model(checkpoint_path);
  if (loaded.window.t_obs != config.window.t_obs ||
      loaded.window.t_pred != config.window.t_pred ||
      loaded.window.hz != config.window.hz) {
    throw DataError(
        "checkpoint window (" + std::to_string(loaded.window.t_obs) + "/" +
        std::to_string(loaded.window.t_pred) +
        ") is incompatible with the configured scene window (" +
        std::to_string(config.window.t_obs) + "/" +
        std::to_string(config.window.t_pred) + ")");
  }
  auto map = std::make_shared<DrivableArea>(read_map_json(map_path));
  const Scene scene = read_scene_csv(scene_path, map, loaded.window);

  train::EvalConfig eval = config.eval_config();
  eval.seed = seed;
  TargetPointSet targets;
  const auto prediction =
      train::predict_scene(loaded.model, scene, eval, &targets);

  std::ofstream os(out_csv, std::ios::trunc);
  if (!os) throw DataError("cannot open prediction output: " + out_csv);
  os << "frame,x,y\n";
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    os << scene.t_obs + static_cast<int>(i) << ','
       << format_double(prediction[i].x) << ','
       << format_double(prediction[i].y) << '\n';
  }
  if (!os) throw DataError("write failed: " + out_csv);

  if (!svg_path.empty()) {
    SceneRenderOptions options;
    options.prediction = prediction;
    options.target_points = targets.global_points();
    std::ofstream svg(svg_path, std::ios::trunc);
    if (!svg) throw DataError("cannot open SVG output: " + svg_path);
    svg << render_scene_svg(scene, options);
  }
}

void cmd_evaluate(const std::string& checkpoint_path,
                  const std::string& corpus_dir,
                  const ExperimentConfig& config, const std::string& out_dir) {
  ensure_dir(out_dir);
  const auto loaded = model::load_model(checkpoint_path);
  const Corpus corpus = load_corpus(corpus_dir, loaded.window);
  const auto report =
      train::evaluate(loaded.model, corpus.scenes, config.eval_config());

  write_report_csv((fs::path(out_dir) / "report.csv").string(), report);
  write_report_json((fs::path(out_dir) / "aggregates.json").string(), report);

  auto boxplot = [&](const char* metric, const std::string& file,
                     const std::optional<Aggregate>& straight,
                     const std::optional<Aggregate>& curve) {
    std::vector<BoxplotSeries> series;
    if (straight) series.push_back({"straight", *straight});
    if (curve) series.push_back({"curve", *curve});
    std::ofstream os((fs::path(out_dir) / file).string(), std::ios::trunc);
    if (!os) throw DataError("cannot write boxplot in " + out_dir);
    os << render_boxplot_svg(metric, "m", series);
  };
  boxplot("ADE", "boxplot_ade.svg", report.straight_ade, report.curve_ade);
  boxplot("FDE", "boxplot_fde.svg", report.straight_fde, report.curve_fde);
}

void cmd_plot(const std::string& scene_path, const std::string& map_path,
              std::uint64_t seed, const ExperimentConfig& config,
              const std::string& out_svg) {
  auto map = std::make_shared<DrivableArea>(read_map_json(map_path));
  const Scene scene = read_scene_csv(scene_path, map, config.window);
  Rng rng(train::scene_stream_id(seed, scene.scene_id));
  const auto targets =
      extract_target_points(scene, config.sampler, config.dynamics_decay, rng);
  SceneRenderOptions options;
  options.target_points = targets.global_points();
  std::ofstream os(out_svg, std::ios::trunc);
  if (!os) throw DataError("cannot open SVG output: " + out_svg);
  os << render_scene_svg(scene, options);
}

}  // namespace trajgan::cli
