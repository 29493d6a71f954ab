#pragma once

#include <vector>

#include "trajgan/rng.hpp"
#include "trajgan/scene.hpp"

namespace trajgan {

// Per-frame displacement representation of a track segment. origin plus the
// running sum of deltas reproduces the (gap-filled) absolute positions.
struct DisplacementTrack {
  Vec2 origin;
  std::vector<Vec2> deltas;

  std::vector<Vec2> reconstruct() const;
};

// Displacements over frames [frame_begin, frame_end); gaps are pre-filled by
// last-frame replication.
DisplacementTrack to_displacements(const AgentTrack& track, int frame_begin,
                                   int frame_end);

enum class Curvature { kStraight, kCurve };

const char* curvature_name(Curvature c);

struct CurvatureLabel {
  Curvature label = Curvature::kStraight;
  double inlier_fraction = 1.0;
  double max_consecutive_outlier_fraction = 0.0;
};

struct RansacConfig {
  double tolerance_m = 2.0;        // perpendicular inlier distance
  int max_trials = 30;
  double min_samples_frac = 0.6;   // per-trial sample size as share of points
  double consecutive_frac = 0.2;   // outlier run that makes a curve
};

// Labels a trajectory straight or curve: a first-degree model is RANSAC
// fitted, and a run of >= 20% consecutive points beyond the tolerance makes
// the track a curve. Coincident-point tracks are straight by convention.
CurvatureLabel classify_curvature(const AgentTrack& track, Rng& rng,
                                  const RansacConfig& config = {});

// Class-balanced index batches for one epoch: each batch holds
// round(0.3*batch) straight samples, the rest curve, redrawing within the
// epoch whenever a class runs out.
std::vector<std::vector<std::size_t>> balanced_batches(
    const std::vector<Curvature>& labels, int batch_size, Rng& rng);

struct AugmentConfig {
  bool rotate = true;
  bool noise = true;
  bool drop = true;
  double noise_sigma = 0.25;  // metres, per coordinate, observed frames only
  double drop_prob = 0.1;

  bool operator==(const AugmentConfig&) const = default;
};

// Training-time augmentation: whole-scene rotation (tracks, ground truth and
// map) about the AGENT's last observed position, observation dropout with
// last-kept-frame replication, then white position noise on observations.
Scene augment(const Scene& scene, Rng& rng, const AugmentConfig& config);

}  // namespace trajgan
