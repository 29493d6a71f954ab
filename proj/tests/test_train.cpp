#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trajgan/error.hpp"
#include "trajgan/synthetic.hpp"
#include "trajgan/train.hpp"

using namespace trajgan;
using model::Tensor;

namespace {

std::vector<Scene> small_corpus(std::size_t n, std::uint64_t seed = 100) {
  std::vector<Scene> scenes;
  for (std::size_t i = 0; i < n; ++i) {
    const auto kind = i % 2 ? ScenarioKind::kCurve : ScenarioKind::kStraight;
    scenes.push_back(generate_synthetic_scene(seed + i, kind));
    scenes.back().scene_id = "c" + std::to_string(i);
  }
  return scenes;
}

train::TrainConfig quick_config() {
  train::TrainConfig config;
  config.epochs = 2;
  config.batch_size = 4;
  config.eval_interval = 2;
  config.dims = {4, 8, 2, 2};
  config.augment_enabled = false;
  config.class_balance = true;
  config.seed = 5;
  return config;
}

std::vector<double> flatten_params(const std::vector<Tensor>& params) {
  std::vector<double> out;
  for (const auto& p : params) {
    out.insert(out.end(), p.values().begin(), p.values().end());
  }
  return out;
}

Tensor rows_tensor(const std::vector<Vec2>& pts) {
  std::vector<double> v;
  for (const auto& p : pts) {
    v.push_back(p.x);
    v.push_back(p.y);
  }
  return Tensor::leaf({pts.size(), 2}, std::move(v));
}

}  // namespace

TEST_CASE("plateau scheduler halves exactly at window boundaries") {
  train::PlateauScheduler sched(0.001, {0.5, 5000});
  // Non-improving validation stream reported every 250 iterations.
  for (long iter = 250; iter <= 12000; iter += 250) {
    sched.observe(iter, 1.0);
    if (iter < 5000) CHECK(sched.lr() == 0.001);
    if (iter >= 5000 && iter < 10000) CHECK(sched.lr() == 0.0005);
    if (iter >= 10000) CHECK(sched.lr() == 0.00025);
  }
}

TEST_CASE("scheduler never raises the rate and resets on improvement") {
  train::PlateauScheduler sched(0.01, {0.5, 1000});
  double metric = 10.0;
  double last_lr = sched.lr();
  for (long iter = 100; iter <= 20000; iter += 100) {
    if (iter % 700 == 0) metric *= 0.95;  // keeps improving inside windows
    sched.observe(iter, metric);
    CHECK(sched.lr() <= last_lr);
    last_lr = sched.lr();
  }
  CHECK(sched.lr() == 0.01);  // improvements kept every window alive

  train::PlateauScheduler stuck(0.01, {0.5, 1000});
  stuck.observe(100, 5.0);
  stuck.observe(600, 4.0);   // improvement at 600 re-anchors the window
  stuck.observe(1500, 4.0);  // 900 < window, no decay yet
  CHECK(stuck.lr() == 0.01);
  stuck.observe(1600, 4.0);  // 1000 past the improvement: decay
  CHECK(stuck.lr() == 0.005);
}

TEST_CASE("training on a tiny corpus runs and logs") {
  const auto corpus = small_corpus(6);
  const auto result = train::train(quick_config(), corpus);
  CHECK(!result.log.empty());
  CHECK(result.log.front().iteration >= 1);
  CHECK(std::isfinite(result.best_val_ade));
  for (const auto& row : result.log) {
    CHECK(std::isfinite(row.g_loss));
    CHECK(std::isfinite(row.d_loss));
    CHECK(row.lr > 0.0);
  }
  CHECK(result.window.t_obs == 20);
}

TEST_CASE("training is bitwise deterministic") {
  const auto corpus = small_corpus(6);
  const auto a = train::train(quick_config(), corpus);
  const auto b = train::train(quick_config(), corpus);
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].iteration == b.log[i].iteration);
    CHECK(a.log[i].g_loss == b.log[i].g_loss);
    CHECK(a.log[i].d_loss == b.log[i].d_loss);
    CHECK(a.log[i].val_ade == b.log[i].val_ade);
    CHECK(a.log[i].val_fde == b.log[i].val_fde);
  }
  const auto pa = flatten_params(a.model.generator_side());
  const auto pb = flatten_params(b.model.generator_side());
  CHECK(pa == pb);
}

TEST_CASE("empty corpus and single-class corpora are config errors") {
  CHECK_THROWS_AS(train::train(quick_config(), {}), ConfigError);
  std::vector<Scene> curves;
  for (int i = 0; i < 4; ++i) {
    curves.push_back(generate_synthetic_scene(200 + i, ScenarioKind::kCurve));
    curves.back().scene_id = "k" + std::to_string(i);
  }
  CHECK_THROWS_AS(train::train(quick_config(), curves), ConfigError);

  // With class balance off the same corpus trains fine.
  auto config = quick_config();
  config.class_balance = false;
  config.epochs = 1;
  CHECK_NOTHROW(train::train(config, curves));
}

TEST_CASE("discriminator and generator updates are isolated") {
  Rng rng(9);
  auto m = model::make_model({4, 8, 2, 2}, rng);
  ad::Adam adam_g(m.generator_side(), 0.01);
  ad::Adam adam_d(m.discriminator_side(), 0.01);

  const auto scene = generate_synthetic_scene(300, ScenarioKind::kCurve);
  std::vector<Vec2> obs_pts, gt_pts;
  for (int f = 0; f < scene.t_obs; ++f) {
    obs_pts.push_back(scene.agent().at_frame_replicated(f));
  }
  for (int f = scene.t_obs; f < scene.horizon(); ++f) {
    gt_pts.push_back(scene.agent().at_frame_replicated(f));
  }
  const Tensor obs = rows_tensor(obs_pts);
  const Tensor gt = rows_tensor(gt_pts);

  Rng srng(1);
  const auto targets = extract_target_points(scene, {}, 0.9, srng);
  const auto social = model::social_forward(m.encoder, scene);
  const Tensor z = model::draw_noise(2, srng);
  const Tensor y_hat =
      model::generate(m.generator, targets, social.target_context, z,
                      scene.t_pred);

  // Discriminator step: generator side must not move.
  const auto gen_before = flatten_params(m.generator_side());
  adam_g.zero_grad();
  adam_d.zero_grad();
  const Tensor d_real =
      model::discriminate(m.discriminator, ad::concat_rows({obs, gt}));
  const Tensor d_fake = model::discriminate(
      m.discriminator, ad::concat_rows({obs, y_hat.detach()}));
  ad::backward(model::discriminator_loss(d_real, d_fake));
  adam_d.step();
  CHECK(flatten_params(m.generator_side()) == gen_before);

  // Generator step: discriminator side must not move even though its
  // leaves receive gradients through the live fake branch.
  const auto dis_before = flatten_params(m.discriminator_side());
  const Tensor d_fake_live =
      model::discriminate(m.discriminator, ad::concat_rows({obs, y_hat}));
  ad::backward(model::generator_loss({1.4, 1.0, 1.5}, d_fake_live, y_hat, gt));
  adam_g.step();
  CHECK(flatten_params(m.discriminator_side()) == dis_before);
}

TEST_CASE("short single-scene run reduces the error") {
  std::vector<Scene> corpus{generate_synthetic_scene(400,
                                                     ScenarioKind::kCurve)};
  corpus[0].scene_id = "solo";
  train::TrainConfig config;
  config.epochs = 400;
  config.batch_size = 1;
  config.eval_interval = 50;
  config.dims = {16, 32, 4, 8};
  config.augment_enabled = false;
  config.class_balance = false;
  config.seed = 3;
  const auto result = train::train(config, corpus);
  REQUIRE(result.log.size() >= 2);
  const double first = result.log.front().val_ade;
  const double best = result.best_val_ade;
  CHECK(best < first * 0.5);
  CHECK(best < 1.0);
}

TEST_CASE("numeric blowup aborts naming the op and iteration") {
  const auto corpus = small_corpus(4, 500);
  auto config = quick_config();
  config.loss_weights.ade = 1e308;
  try {
    train::train(config, corpus);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("iteration") != std::string::npos);
    CHECK(msg.find("non-finite") != std::string::npos);
  }
}

TEST_CASE("evaluate leaves parameters untouched and is deterministic") {
  Rng rng(11);
  auto m = model::make_model({4, 8, 2, 2}, rng);
  const auto corpus = small_corpus(5, 600);
  const auto before = flatten_params(m.generator_side());
  train::EvalConfig config;
  const auto r1 = train::evaluate(m, corpus, config);
  const auto r2 = train::evaluate(m, corpus, config);
  CHECK(flatten_params(m.generator_side()) == before);
  REQUIRE(r1.rows.size() == corpus.size());
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].ade == r2.rows[i].ade);
    CHECK(r1.rows[i].fde == r2.rows[i].fde);
    CHECK(r1.rows[i].label == r2.rows[i].label);
    CHECK(r1.rows[i].ade >= 0.0);
    CHECK(r1.rows[i].fde >= 0.0);
  }
}

TEST_CASE("evaluation order does not change per-scene results") {
  Rng rng(12);
  const auto m = model::make_model({4, 8, 2, 2}, rng);
  auto corpus = small_corpus(4, 700);
  train::EvalConfig config;
  const auto base = train::evaluate(m, corpus, config);
  std::swap(corpus[0], corpus[3]);
  const auto swapped = train::evaluate(m, corpus, config);
  for (const auto& row : base.rows) {
    bool found = false;
    for (const auto& other : swapped.rows) {
      if (other.scene_id == row.scene_id) {
        CHECK(other.ade == row.ade);
        CHECK(other.fde == row.fde);
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("metrics csv round-trips through the documented header") {
  std::vector<train::MetricsRow> log{{250, 1.5, 0.7, 0.001, 3.25, 6.5},
                                     {500, 1.25, 0.8, 0.001, 3.0, 6.0}};
  const std::string path = "metrics_fmt.csv";
  train::write_metrics_csv(path, log);
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  CHECK(line == "iteration,g_loss,d_loss,lr,val_ade,val_fde");
  std::getline(is, line);
  CHECK(line == "250,1.5,0.7,0.001,3.25,6.5");
  std::remove(path.c_str());
}
