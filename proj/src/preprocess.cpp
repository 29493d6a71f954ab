#include "trajgan/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trajgan/error.hpp"

namespace trajgan {

std::vector<Vec2> DisplacementTrack::reconstruct() const {
  std::vector<Vec2> out;
  out.reserve(deltas.size() + 1);
  Vec2 p = origin;
  out.push_back(p);
  for (const auto& d : deltas) {
    p = p + d;
    out.push_back(p);
  }
  return out;
}

DisplacementTrack to_displacements(const AgentTrack& track, int frame_begin,
                                   int frame_end) {
  if (frame_end <= frame_begin) {
    throw DimensionError("to_displacements: empty frame range");
  }
  std::vector<Vec2> filled;
  filled.reserve(static_cast<std::size_t>(frame_end - frame_begin));
  for (int f = frame_begin; f < frame_end; ++f) {
    filled.push_back(track.at_frame_replicated(f));
  }
  DisplacementTrack out;
  out.origin = filled.front();
  for (std::size_t i = 1; i < filled.size(); ++i) {
    out.deltas.push_back(filled[i] - filled[i - 1]);
  }
  return out;
}

const char* curvature_name(Curvature c) {
  return c == Curvature::kStraight ? "straight" : "curve";
}

namespace {

struct Line {
  Vec2 point;
  Vec2 dir;  // unit
};

// Total-least-squares line through a point subset (principal axis), so
// vertical trajectories are handled the same as horizontal ones.
Line fit_line(const std::vector<Vec2>& pts, const std::vector<std::size_t>& idx) {
  Vec2 c{0.0, 0.0};
  for (auto i : idx) c = c + pts[i];
  c = c * (1.0 / static_cast<double>(idx.size()));
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (auto i : idx) {
    const Vec2 d = pts[i] - c;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  // Leading eigenvector of the 2x2 scatter matrix.
  const double tr = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  const double lambda = 0.5 * tr + std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  Vec2 dir{lambda - syy, sxy};
  if (dir.norm() < 1e-12) dir = {sxy, lambda - sxx};
  if (dir.norm() < 1e-12) dir = {1.0, 0.0};
  return {c, dir * (1.0 / dir.norm())};
}

double perp_distance(const Line& line, Vec2 p) {
  return std::abs(cross(line.dir, p - line.point));
}

// Partial Fisher-Yates draw of k distinct indices out of n.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_int(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

CurvatureLabel classify_curvature(const AgentTrack& track, Rng& rng,
                                  const RansacConfig& config) {
  std::vector<Vec2> pts;
  pts.reserve(track.positions.size());
  for (const auto& p : track.positions) pts.push_back({p.x, p.y});
  const std::size_t n = pts.size();
  if (n < 5) {
    throw DataError("classify_curvature: track too short (" +
                    std::to_string(n) + " points)");
  }

  bool degenerate = true;
  for (const auto& p : pts) {
    if ((p - pts.front()).norm() > 1e-9) {
      degenerate = false;
      break;
    }
  }
  if (degenerate) {
    return {Curvature::kStraight, 1.0, 0.0};
  }

  const std::size_t sample_size = std::max<std::size_t>(
      2, static_cast<std::size_t>(
             std::llround(config.min_samples_frac * static_cast<double>(n))));
  Line best{};
  std::size_t best_inliers = 0;
  bool have_best = false;
  for (int trial = 0; trial < config.max_trials; ++trial) {
    const auto idx = sample_indices(n, sample_size, rng);
    const Line line = fit_line(pts, idx);
    std::size_t inliers = 0;
    for (const auto& p : pts) {
      if (perp_distance(line, p) <= config.tolerance_m) ++inliers;
    }
    if (!have_best || inliers > best_inliers) {
      best = line;
      best_inliers = inliers;
      have_best = true;
    }
  }

  std::size_t run = 0, max_run = 0;
  for (const auto& p : pts) {
    if (perp_distance(best, p) > config.tolerance_m) {
      ++run;
      max_run = std::max(max_run, run);
    } else {
      run = 0;
    }
  }
  CurvatureLabel out;
  out.inlier_fraction =
      static_cast<double>(best_inliers) / static_cast<double>(n);
  out.max_consecutive_outlier_fraction =
      static_cast<double>(max_run) / static_cast<double>(n);
  out.label = out.max_consecutive_outlier_fraction >= config.consecutive_frac
                  ? Curvature::kCurve
                  : Curvature::kStraight;
  return out;
}

std::vector<std::vector<std::size_t>> balanced_batches(
    const std::vector<Curvature>& labels, int batch_size, Rng& rng) {
  std::vector<std::size_t> straight_pool, curve_pool;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Curvature::kStraight ? straight_pool : curve_pool)
        .push_back(i);
  }
  if (straight_pool.empty()) {
    throw ConfigError("balanced_batches: straight class is empty");
  }
  if (curve_pool.empty()) {
    throw ConfigError("balanced_batches: curve class is empty");
  }
  const int straight_per_batch =
      static_cast<int>(std::llround(0.3 * batch_size));
  const int curve_per_batch = batch_size - straight_per_batch;

  auto shuffled = [&rng](std::vector<std::size_t> v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[rng.uniform_int(i)]);
    }
    return v;
  };
  auto draw = [&](std::vector<std::size_t>& queue,
                  const std::vector<std::size_t>& pool) {
    if (queue.empty()) queue = shuffled(pool);
    const std::size_t v = queue.back();
    queue.pop_back();
    return v;
  };

  const std::size_t n_batches =
      (labels.size() + static_cast<std::size_t>(batch_size) - 1) /
      static_cast<std::size_t>(batch_size);
  std::vector<std::size_t> sq, cq;
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t b = 0; b < n_batches; ++b) {
    std::vector<std::size_t> batch;
    batch.reserve(static_cast<std::size_t>(batch_size));
    for (int i = 0; i < straight_per_batch; ++i)
      batch.push_back(draw(sq, straight_pool));
    for (int i = 0; i < curve_per_batch; ++i)
      batch.push_back(draw(cq, curve_pool));
    batches.push_back(std::move(batch));
  }
  return batches;
}

Scene augment(const Scene& scene, Rng& rng, const AugmentConfig& config) {
  Scene out = scene;

  if (config.rotate) {
    const double theta = rng.uniform() * 2.0 * std::numbers::pi;
    const Vec2 pivot = scene.agent_last_observed();
    for (auto& track : out.tracks) {
      for (auto& p : track.positions) {
        const Vec2 r = rotate_about({p.x, p.y}, pivot, theta);
        p.x = r.x;
        p.y = r.y;
      }
    }
    auto map = std::make_shared<DrivableArea>(*scene.map);
    for (auto& poly : map->polygons) {
      for (auto& v : poly) v = rotate_about(v, pivot, theta);
    }
    out.map = std::move(map);
  }

  if (config.drop) {
    for (auto& track : out.tracks) {
      Vec2 last_kept{track.positions.front().x, track.positions.front().y};
      bool first = true;
      for (auto& p : track.positions) {
        if (p.frame >= out.t_obs) break;
        if (!first && rng.bernoulli(config.drop_prob)) {
          p.x = last_kept.x;
          p.y = last_kept.y;
        } else {
          last_kept = {p.x, p.y};
        }
        first = false;
      }
    }
  }

  if (config.noise) {
    for (auto& track : out.tracks) {
      for (auto& p : track.positions) {
        if (p.frame >= out.t_obs) break;
        p.x += rng.normal(0.0, config.noise_sigma);
        p.y += rng.normal(0.0, config.noise_sigma);
      }
    }
  }

  return out;
}

}  // namespace trajgan
