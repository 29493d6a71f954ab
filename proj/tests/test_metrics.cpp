#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trajgan/error.hpp"
#include "trajgan/metrics.hpp"
#include "trajgan/synthetic.hpp"

using namespace trajgan;

TEST_CASE("identical trajectories score zero") {
  const std::vector<Vec2> y{{0, 0}, {1, 1}, {2, 2}};
  CHECK(ade(y, y) == 0.0);
  CHECK(fde(y, y) == 0.0);
}

TEST_CASE("constant offset gives the analytic value") {
  std::vector<Vec2> y, y_hat;
  for (int t = 0; t < 30; ++t) {
    y.push_back({t * 0.5, 2.0});
    y_hat.push_back({t * 0.5 + 3.0, 6.0});
  }
  CHECK(ade(y_hat, y) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(fde(y_hat, y) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("final-point distance") {
  const std::vector<Vec2> y{{0, 0}, {0, 0}};
  const std::vector<Vec2> y_hat{{0, 0}, {0, 7}};
  CHECK(fde(y_hat, y) == 7.0);
}

TEST_CASE("random pairs match the per-frame oracle") {
  Rng rng(1);
  for (int round = 0; round < 1000; ++round) {
    std::vector<Vec2> y, y_hat;
    const int frames = 30;
    for (int t = 0; t < frames; ++t) {
      y.push_back({rng.uniform(-50, 50), rng.uniform(-50, 50)});
      y_hat.push_back({rng.uniform(-50, 50), rng.uniform(-50, 50)});
    }
    double sum = 0.0;
    for (int t = 0; t < frames; ++t) {
      sum += std::hypot(y_hat[t].x - y[t].x, y_hat[t].y - y[t].y);
    }
    CHECK(std::abs(ade(y_hat, y) - sum / frames) <= 1e-12);
    const double last =
        std::hypot(y_hat.back().x - y.back().x, y_hat.back().y - y.back().y);
    CHECK(std::abs(fde(y_hat, y) - last) <= 1e-12);
  }
}

TEST_CASE("length mismatch is an error") {
  const std::vector<Vec2> a{{0, 0}};
  const std::vector<Vec2> b{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(ade(a, b), DimensionError);
  CHECK_THROWS_AS(fde(a, b), DimensionError);
  CHECK_THROWS_AS(ade({}, {}), DimensionError);
}

TEST_CASE("fde appears among the distances averaged by ade") {
  Rng rng(2);
  std::vector<Vec2> y, y_hat;
  for (int t = 0; t < 10; ++t) {
    y.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    y_hat.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
  }
  double max_frame = 0.0;
  for (int t = 0; t < 10; ++t) {
    max_frame = std::max(max_frame, (y_hat[t] - y[t]).norm());
  }
  CHECK(ade(y_hat, y) <= max_frame + 1e-12);
  CHECK(fde(y_hat, y) <= max_frame + 1e-12);
}

TEST_CASE("metrics are invariant under a rigid transform") {
  Rng rng(3);
  std::vector<Vec2> y, y_hat, ry, ry_hat;
  const Vec2 pivot{4.0, -2.0};
  const double angle = 0.77;
  const Vec2 shift{13.0, 5.0};
  for (int t = 0; t < 12; ++t) {
    y.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
    y_hat.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
    ry.push_back(rotate_about(y.back(), pivot, angle) + shift);
    ry_hat.push_back(rotate_about(y_hat.back(), pivot, angle) + shift);
  }
  CHECK(std::abs(ade(y_hat, y) - ade(ry_hat, ry)) < 1e-9);
  CHECK(std::abs(fde(y_hat, y) - fde(ry_hat, ry)) < 1e-9);
}

TEST_CASE("constant velocity is exact on uniform motion") {
  const Scene scene = generate_synthetic_scene(4, ScenarioKind::kStraight);
  const auto pred = constant_velocity_baseline(scene);
  const auto gt = ground_truth_future(scene);
  CHECK(fde(pred, gt) < 1e-9);
  CHECK(ade(pred, gt) < 1e-9);
}

TEST_CASE("constant velocity extrapolates the last displacement") {
  WindowConfig window{3, 4, 10.0};
  Scene scene;
  scene.t_obs = window.t_obs;
  scene.t_pred = window.t_pred;
  scene.hz = window.hz;
  AgentTrack agent;
  agent.track_id = "a";
  agent.role = Role::kAgent;
  // Last delta (2, 1); ground truth stays at the last observed point.
  agent.positions = {{0, 0.0, 0.0}, {1, 1.0, 0.5}, {2, 3.0, 1.5},
                     {3, 3.0, 1.5}, {4, 3.0, 1.5}, {5, 3.0, 1.5},
                     {6, 3.0, 1.5}};
  scene.tracks.push_back(agent);
  scene.map = std::make_shared<DrivableArea>();
  const auto pred = constant_velocity_baseline(scene);
  REQUIRE(pred.size() == 4);
  CHECK(pred[0] == Vec2{5.0, 2.5});
  CHECK(pred[3] == Vec2{11.0, 5.5});
  const auto gt = ground_truth_future(scene);
  CHECK(fde(pred, gt) ==
        doctest::Approx(std::hypot(8.0, 4.0)).epsilon(1e-12));
}

TEST_CASE("aggregates are recomputable from the rows") {
  Rng rng(5);
  std::vector<EvalRow> rows;
  for (int i = 0; i < 101; ++i) {
    EvalRow row;
    row.scene_id = "s" + std::to_string(i);
    row.label = i % 3 == 0 ? Curvature::kStraight : Curvature::kCurve;
    row.ade = rng.uniform(0, 10);
    row.fde = rng.uniform(0, 20);
    rows.push_back(row);
  }
  const auto report = make_report(rows);

  // Median oracle: sort and interpolate by hand.
  std::vector<double> curve_ade;
  for (const auto& row : rows) {
    if (row.label == Curvature::kCurve) curve_ade.push_back(row.ade);
  }
  std::sort(curve_ade.begin(), curve_ade.end());
  const double pos = 0.5 * (curve_ade.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double median =
      curve_ade[lo] + (pos - lo) * (curve_ade[lo + 1] - curve_ade[lo]);
  REQUIRE(report.curve_ade.has_value());
  CHECK(report.curve_ade->median == doctest::Approx(median).epsilon(1e-12));
  CHECK(report.curve_ade->count == curve_ade.size());
  CHECK(report.overall_ade.count == rows.size());
  CHECK(report.straight_ade.has_value());
}

TEST_CASE("single-class corpus omits the missing aggregate with a note") {
  std::vector<EvalRow> rows;
  for (int i = 0; i < 5; ++i) {
    rows.push_back({"s" + std::to_string(i), Curvature::kStraight, 1.0, 2.0});
  }
  const auto report = make_report(rows);
  CHECK(report.straight_ade.has_value());
  CHECK_FALSE(report.curve_ade.has_value());

  const std::string path = "report_oneclass.json";
  write_report_json(path, report);
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  CHECK(ss.str().find("curve class absent") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("report csv carries the full-scale reference header and rows") {
  std::vector<EvalRow> rows{{"sA", Curvature::kStraight, 1.25, 2.5},
                            {"sB", Curvature::kCurve, 3.0, 4.0}};
  const auto report = make_report(rows);
  const std::string path = "report_rows.csv";
  write_report_csv(path, report);
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  CHECK(line.find("1.67") != std::string::npos);
  CHECK(line.find("3.82") != std::string::npos);
  std::getline(is, line);
  CHECK(line == "scene_id,label,ade,fde");
  std::getline(is, line);
  CHECK(line == "sA,straight,1.25,2.5");
  std::getline(is, line);
  CHECK(line == "sB,curve,3,4");
  std::remove(path.c_str());
}
