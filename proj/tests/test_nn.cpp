#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "gradcheck.hpp"
#include "trajgan/checkpoint.hpp"
#include "trajgan/error.hpp"
#include "trajgan/nn.hpp"

using namespace trajgan;
using ad::Tensor;

namespace {

std::vector<Tensor> cell_params(const ad::LstmCell& cell) {
  return {cell.w_input, cell.w_recurrent, cell.bias};
}

}  // namespace

TEST_CASE("zero lstm cell maps everything to zero state") {
  const auto cell = ad::zero_lstm(3, 4);
  const Tensor x = Tensor::leaf({3}, {1.5, -2.0, 0.25});
  auto [h, c] = cell.step(x, Tensor::zeros({4}), Tensor::zeros({4}));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(h[i] == 0.0);
    CHECK(c[i] == 0.0);
  }
}

TEST_CASE("lstm step is deterministic") {
  Rng rng(5);
  const auto cell = ad::make_lstm(3, 4, rng);
  const Tensor x = Tensor::leaf({3}, {0.1, 0.2, -0.3});
  const Tensor h0 = Tensor::leaf({4}, {0.4, -0.1, 0.0, 0.2});
  const Tensor c0 = Tensor::leaf({4}, {0.1, 0.1, -0.5, 0.0});
  auto [h1, c1] = cell.step(x, h0, c0);
  auto [h2, c2] = cell.step(x, h0, c0);
  CHECK(h1.values() == h2.values());
  CHECK(c1.values() == c2.values());
}

TEST_CASE("lstm forget-gate bias starts at one") {
  Rng rng(5);
  const auto cell = ad::make_lstm(3, 4, rng);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(cell.bias[i] == 0.0);          // input gate
    CHECK(cell.bias[4 + i] == 1.0);      // forget gate
    CHECK(cell.bias[8 + i] == 0.0);      // cell candidate
    CHECK(cell.bias[12 + i] == 0.0);     // output gate
  }
}

TEST_CASE("lstm step gradient matches finite differences") {
  Rng rng(11);
  auto cell = ad::make_lstm(3, 4, rng);
  Tensor x = Tensor::leaf({3}, {0.3, -0.6, 0.9}, true);
  Tensor h0 = Tensor::leaf({4}, {0.2, 0.0, -0.4, 0.1}, true);
  Tensor c0 = Tensor::leaf({4}, {0.0, 0.5, -0.1, 0.3}, true);
  auto forward = [&] {
    auto [h, c] = cell.step(x, h0, c0);
    return ad::sum(ad::add(h, c));
  };
  std::vector<Tensor> leaves = cell_params(cell);
  leaves.push_back(x);
  leaves.push_back(h0);
  leaves.push_back(c0);
  CHECK(testutil::max_grad_rel_error(forward, leaves) < 1e-6);
}

TEST_CASE("lstm dimension mismatch") {
  const auto cell = ad::zero_lstm(3, 4);
  CHECK_THROWS_AS(cell.step(Tensor::zeros({5}), Tensor::zeros({4}),
                            Tensor::zeros({4})),
                  DimensionError);
  CHECK_THROWS_AS(cell.step(Tensor::zeros({3}), Tensor::zeros({2}),
                            Tensor::zeros({4})),
                  DimensionError);
}

TEST_CASE("linear rows agree with the vector path") {
  Rng rng(17);
  const auto lin = ad::make_linear(3, 5, rng);
  const Tensor x = Tensor::leaf({3}, {0.2, -0.7, 1.1});
  const Tensor rows = Tensor::leaf({2, 3}, {0.2, -0.7, 1.1, 0.0, 0.4, -0.2});
  const Tensor single = lin.apply(x);
  const Tensor batch = lin.apply_rows(rows);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(batch.at(0, j) == doctest::Approx(single[j]).epsilon(1e-15));
  }
}

TEST_CASE("adam first-step update matches the analytic value") {
  const Tensor p = Tensor::leaf({1}, {5.0}, true);
  ad::Adam adam({p}, 0.001);
  ad::backward(ad::scale(p, 1.0));  // gradient of p -> 1
  adam.step();
  // First step: m_hat = v_hat = 1 -> delta = -lr / (1 + eps).
  const double expected = 5.0 - 0.001 * (1.0 / (1.0 + 1e-8));
  CHECK(p[0] == doctest::Approx(expected).epsilon(1e-15));
  CHECK(adam.step_count() == 1);
  CHECK_FALSE(p.has_grad());
}

TEST_CASE("adam with zero gradient leaves parameters unchanged") {
  const Tensor p = Tensor::leaf({2}, {1.0, -2.0}, true);
  ad::Adam adam({p}, 0.01);
  ad::backward(ad::scale(ad::sum(ad::mul(p, p)), 0.0));
  adam.step();
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -2.0);
}

TEST_CASE("equal gradients and states produce identical updates") {
  const Tensor a = Tensor::leaf({1}, {0.7}, true);
  const Tensor b = Tensor::leaf({1}, {0.7}, true);
  ad::Adam adam({a, b}, 0.05);
  for (int i = 0; i < 3; ++i) {
    ad::backward(ad::mul(ad::add(a, b), Tensor::scalar(1.5)));
    adam.step();
    CHECK(a[0] == b[0]);
  }
}

TEST_CASE("adam with lr zero freezes parameters") {
  Rng rng(23);
  const Tensor p = Tensor::leaf({3}, {0.1, 0.2, 0.3}, true);
  ad::Adam adam({p}, 0.0);
  for (int i = 0; i < 2; ++i) {
    Tensor proj = Tensor::leaf({3}, {rng.normal(), rng.normal(), rng.normal()});
    ad::backward(ad::sum(ad::mul(p, proj)));
    adam.step();
  }
  CHECK(p.values() == std::vector<double>{0.1, 0.2, 0.3});
}

TEST_CASE("adam rejects a parameter without a gradient") {
  const Tensor p = Tensor::leaf({1}, {1.0}, true);
  ad::Adam adam({p}, 0.001);
  CHECK_THROWS_AS(adam.step(), ContractError);
}

TEST_CASE("checkpoint round-trips bit-exactly") {
  Rng rng(31);
  ad::ParamMap params;
  std::vector<double> v1(12), v2(7);
  for (double& x : v1) x = rng.normal() * 1e3;
  for (double& x : v2) x = rng.normal() * 1e-7;
  v2[0] = -0.0;
  params.emplace_back("gen/w", Tensor::leaf({3, 4}, v1, true));
  params.emplace_back("dis/b", Tensor::leaf({7}, v2, true));

  const std::string path = "ckpt_roundtrip.bin";
  ad::save_checkpoint(path, params);
  const auto loaded = ad::load_checkpoint(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].first == "gen/w");
  CHECK(loaded[0].second.shape() == std::vector<std::size_t>{3, 4});
  CHECK(loaded[0].second.values() == v1);
  CHECK(loaded[1].second.values() == v2);
  CHECK(std::signbit(loaded[1].second[0]));

  // Byte-identical re-save.
  const std::string path2 = "ckpt_roundtrip2.bin";
  ad::save_checkpoint(path2, loaded);
  auto slurp = [](const std::string& p) {
    std::FILE* f = std::fopen(p.c_str(), "rb");
    REQUIRE(f != nullptr);
    std::string data;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) {
      data.append(buf, got);
    }
    std::fclose(f);
    return data;
  };
  CHECK(slurp(path) == slurp(path2));
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("checkpoint rejects foreign files") {
  const std::string path = "not_a_ckpt.bin";
  std::FILE* f = std::fopen(path.c_str(), "wb");
  std::fputs("hello world", f);
  std::fclose(f);
  CHECK_THROWS_AS(ad::load_checkpoint(path), DataError);
  std::remove(path.c_str());
}

TEST_CASE("assign_params validates names and shapes") {
  const Tensor target = Tensor::leaf({2}, {0.0, 0.0}, true);
  ad::ParamMap targets{{"w", target}};
  ad::ParamMap wrong_name{{"v", Tensor::leaf({2}, {1.0, 2.0})}};
  CHECK_THROWS_AS(ad::assign_params(targets, wrong_name), DataError);
  ad::ParamMap wrong_shape{{"w", Tensor::leaf({3}, {1.0, 2.0, 3.0})}};
  CHECK_THROWS_AS(ad::assign_params(targets, wrong_shape), DataError);
  ad::ParamMap good{{"w", Tensor::leaf({2}, {1.0, 2.0})}};
  ad::assign_params(targets, good);
  CHECK(target.values() == std::vector<double>{1.0, 2.0});
}
