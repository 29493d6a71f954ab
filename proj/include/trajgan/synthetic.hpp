#pragma once

#include <cstdint>
#include <string>

#include "trajgan/rng.hpp"
#include "trajgan/scene.hpp"

namespace trajgan {

enum class ScenarioKind { kStraight, kCurve, kBrake, kTurnWithTraffic };

std::string scenario_kind_name(ScenarioKind k);
ScenarioKind parse_scenario_kind(const std::string& name);

// True when the construction yields a curved target trajectory.
bool scenario_is_curved(ScenarioKind k);

// Deterministic desk-scale scenario: a kinematically smooth AGENT over the
// full window, an AV, 0-6 OTHER agents (possibly partial tracks) and a
// corridor of drivable quads covering the AGENT path with margin ahead.
Scene generate_synthetic_scene(std::uint64_t seed, ScenarioKind kind,
                               const WindowConfig& config = {});

// Rigid translation of every track and map polygon (used to lay corpora out
// on a grid so corridors do not overlap).
Scene translate_scene(const Scene& scene, Vec2 offset);

}  // namespace trajgan
