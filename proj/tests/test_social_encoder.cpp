#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gradcheck.hpp"
#include "trajgan/error.hpp"
#include "trajgan/social_encoder.hpp"
#include "trajgan/synthetic.hpp"

using namespace trajgan;
using model::EncoderParams;
using model::Tensor;

namespace {

EncoderParams zero_encoder(std::size_t embed, std::size_t hidden,
                           std::size_t heads) {
  EncoderParams p;
  p.embed = ad::zero_linear(2, embed);
  p.cell = ad::zero_lstm(embed, hidden);
  const std::size_t head_dim = hidden / heads;
  for (std::size_t h = 0; h < heads; ++h) {
    p.mhsa.w_query.push_back(Tensor::zeros({hidden, head_dim}, true));
    p.mhsa.w_key.push_back(Tensor::zeros({hidden, head_dim}, true));
    p.mhsa.w_value.push_back(Tensor::zeros({hidden, head_dim}, true));
  }
  p.mhsa.w_out = Tensor::zeros({hidden, hidden}, true);
  return p;
}

DisplacementTrack random_disp(Rng& rng, std::size_t steps) {
  DisplacementTrack t;
  t.origin = {rng.uniform(-5, 5), rng.uniform(-5, 5)};
  for (std::size_t i = 0; i < steps; ++i) {
    t.deltas.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
  }
  return t;
}

Scene tiny_scene(std::uint64_t seed, std::size_t n_others) {
  WindowConfig window{4, 3, 10.0};
  Rng rng(seed);
  Scene scene;
  scene.scene_id = "tiny" + std::to_string(seed);
  scene.t_obs = window.t_obs;
  scene.t_pred = window.t_pred;
  scene.hz = window.hz;
  auto make_track = [&](const std::string& id, Role role) {
    AgentTrack t;
    t.track_id = id;
    t.role = role;
    Vec2 p{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    for (int f = 0; f < scene.horizon(); ++f) {
      t.positions.push_back({f, p.x, p.y});
      p = p + Vec2{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    }
    return t;
  };
  scene.tracks.push_back(make_track("agent", Role::kAgent));
  for (std::size_t i = 0; i < n_others; ++i) {
    scene.tracks.push_back(
        make_track("other" + std::to_string(i), Role::kOther));
  }
  auto area = std::make_shared<DrivableArea>();
  area->polygons.push_back({{-100, -100}, {100, -100}, {100, 100}, {-100, 100}});
  scene.map = std::move(area);
  return scene;
}

}  // namespace

TEST_CASE("zero parameters give zero hidden states") {
  const auto params = zero_encoder(3, 4, 2);
  Rng rng(1);
  const auto hidden =
      model::encode_motion(params, {random_disp(rng, 5), random_disp(rng, 5)});
  for (std::size_t i = 0; i < hidden.numel(); ++i) CHECK(hidden[i] == 0.0);
}

TEST_CASE("per-agent encoding is independent of the batch") {
  Rng rng(2);
  const auto params = model::make_encoder(3, 4, 2, rng);
  const auto track = random_disp(rng, 6);
  std::vector<DisplacementTrack> batch{track};
  for (int i = 0; i < 4; ++i) batch.push_back(random_disp(rng, 6));
  const auto solo = model::encode_motion(params, {track});
  const auto full = model::encode_motion(params, batch);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(full.at(0, j) == solo.at(0, j));
  }
}

TEST_CASE("tracks must share observed length") {
  Rng rng(2);
  const auto params = model::make_encoder(3, 4, 2, rng);
  CHECK_THROWS_AS(
      model::encode_motion(params, {random_disp(rng, 5), random_disp(rng, 7)}),
      DimensionError);
  CHECK_THROWS_AS(model::encode_motion(params, {}), DimensionError);
}

TEST_CASE("encoder gradient matches finite differences") {
  Rng rng(3);
  auto params = model::make_encoder(3, 4, 2, rng);
  const auto t1 = random_disp(rng, 4);
  const auto t2 = random_disp(rng, 4);
  auto forward = [&] {
    return ad::sum(model::encode_motion(params, {t1, t2}));
  };
  ad::ParamMap named;
  params.embed.append_params(named, "");
  params.cell.append_params(named, "");
  std::vector<Tensor> leaves;
  for (auto& [_, t] : named) leaves.push_back(t);
  CHECK(testutil::max_grad_rel_error(forward, leaves) < 1e-6);
}

TEST_CASE("single agent attends only to itself") {
  Rng rng(4);
  const auto params = model::make_encoder(3, 8, 2, rng);
  std::vector<double> hv(8);
  for (double& x : hv) x = rng.uniform(-1, 1);
  const Tensor hidden = Tensor::leaf({1, 8}, hv);
  const auto ctx = model::mhsa(params, hidden, 0);
  CHECK(ctx.attention.numel() == 1);
  CHECK(ctx.attention[0] == doctest::Approx(1.0).epsilon(1e-15));

  // Manual recomputation: context = concat_h(v_h) * w_out + h.
  std::vector<Tensor> values;
  for (std::size_t h = 0; h < params.mhsa.heads(); ++h) {
    values.push_back(ad::matmul(hidden, params.mhsa.w_value[h]));
  }
  const Tensor expected =
      ad::add(ad::matmul(ad::concat_cols(values), params.mhsa.w_out), hidden);
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(ctx.target_context[j] ==
          doctest::Approx(expected.at(0, j)).epsilon(1e-12));
  }
}

TEST_CASE("identical rows attract uniform attention") {
  Rng rng(5);
  const auto params = model::make_encoder(3, 8, 4, rng);
  std::vector<double> row(8);
  for (double& x : row) x = rng.uniform(-1, 1);
  std::vector<double> hv;
  for (int i = 0; i < 5; ++i) hv.insert(hv.end(), row.begin(), row.end());
  const auto ctx = model::mhsa(params, Tensor::leaf({5, 8}, hv), 0);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(ctx.attention.at(i, j) == doctest::Approx(0.2).epsilon(1e-12));
    }
  }
}

TEST_CASE("attention rows sum to one") {
  Rng rng(6);
  const auto params = model::make_encoder(3, 8, 2, rng);
  std::vector<double> hv(7 * 8);
  for (double& x : hv) x = rng.uniform(-2, 2);
  const auto ctx = model::mhsa(params, Tensor::leaf({7, 8}, hv), 3);
  for (std::size_t i = 0; i < 7; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 7; ++j) {
      CHECK(ctx.attention.at(i, j) >= 0.0);
      s += ctx.attention.at(i, j);
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
}

TEST_CASE("permuting other agents leaves the target context unchanged") {
  Rng rng(7);
  const auto params = model::make_encoder(3, 8, 2, rng);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 6; ++i) {
    std::vector<double> r(8);
    for (double& x : r) x = rng.uniform(-1, 1);
    rows.push_back(std::move(r));
  }
  auto stack = [&](const std::vector<std::size_t>& order) {
    std::vector<double> hv;
    for (auto i : order) hv.insert(hv.end(), rows[i].begin(), rows[i].end());
    return Tensor::leaf({order.size(), 8}, hv);
  };
  const auto base = model::mhsa(params, stack({0, 1, 2, 3, 4, 5}), 0);
  const auto permuted = model::mhsa(params, stack({0, 4, 2, 5, 1, 3}), 0);
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(std::abs(base.target_context[j] - permuted.target_context[j]) <
          1e-12);
  }
  // Equivariance: row for the agent moved from slot 1 to slot 4.
  const auto moved = model::mhsa(params, stack({0, 4, 2, 5, 1, 3}), 0);
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(std::abs(base.per_agent.at(1, j) - moved.per_agent.at(4, j)) <
          1e-12);
  }
}

TEST_CASE("same parameters handle any agent count") {
  Rng rng(8);
  const auto params = model::make_encoder(3, 8, 4, rng);
  for (std::size_t n : {1ul, 2ul, 17ul, 64ul}) {
    std::vector<double> hv(n * 8);
    for (double& x : hv) x = rng.uniform(-1, 1);
    const auto ctx = model::mhsa(params, Tensor::leaf({n, 8}, hv), n / 2);
    CHECK(ctx.per_agent.shape()[0] == n);
    CHECK(ctx.target_context.numel() == 8);
  }
}

TEST_CASE("agent-only scene goes through the single-agent path") {
  Rng rng(9);
  const auto params = model::make_encoder(16, 32, 4, rng);
  const auto scene = tiny_scene(1, 0);
  const auto ctx = model::social_forward(params, scene);
  CHECK(ctx.per_agent.shape()[0] == 1);
  CHECK(ctx.target_row == 0);
}

TEST_CASE("social forward is deterministic") {
  Rng rng(10);
  const auto params = model::make_encoder(16, 32, 4, rng);
  const auto scene = tiny_scene(2, 3);
  const auto a = model::social_forward(params, scene);
  const auto b = model::social_forward(params, scene);
  CHECK(a.target_context.values() == b.target_context.values());
}

TEST_CASE("a distant static agent still changes the context") {
  Rng rng(11);
  const auto params = model::make_encoder(16, 32, 4, rng);
  Scene scene = tiny_scene(3, 0);

  Scene with_other = scene;
  AgentTrack far_track;
  far_track.track_id = "far";
  far_track.role = Role::kOther;
  for (int f = 0; f < scene.horizon(); ++f) {
    far_track.positions.push_back({f, 5000.0, 5000.0});
  }
  with_other.tracks.push_back(far_track);

  const auto base = model::social_forward(params, scene);
  const auto other = model::social_forward(params, with_other);
  double max_diff = 0.0;
  for (std::size_t j = 0; j < 32; ++j) {
    max_diff = std::max(max_diff, std::abs(base.target_context[j] -
                                           other.target_context[j]));
  }
  CHECK(max_diff > 0.0);
}

TEST_CASE("agents observed for under two frames are skipped") {
  Rng rng(12);
  const auto params = model::make_encoder(16, 32, 4, rng);
  Scene scene = tiny_scene(4, 1);
  AgentTrack late;
  late.track_id = "late";
  late.role = Role::kOther;
  // Single observed frame, rest in the future.
  late.positions.push_back({scene.t_obs - 1, 1.0, 1.0});
  late.positions.push_back({scene.t_obs + 1, 2.0, 2.0});
  scene.tracks.push_back(late);
  const auto ctx = model::social_forward(params, scene);
  CHECK(ctx.per_agent.shape()[0] == 2);  // agent + the one full other
}

TEST_CASE("end-to-end social forward gradient") {
  Rng rng(13);
  auto params = model::make_encoder(3, 4, 2, rng);
  const auto scene = tiny_scene(5, 2);
  auto forward = [&] {
    return ad::sum(model::social_forward(params, scene).target_context);
  };
  ad::ParamMap named;
  params.append_params(named, "");
  std::vector<Tensor> leaves;
  for (auto& [_, t] : named) leaves.push_back(t);
  CHECK(testutil::max_grad_rel_error(forward, leaves) < 1e-5);
}
