#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gestauth/eval/synth.hpp"
#include "gestauth/trace.hpp"

namespace gestauth::eval {

enum class AttackLevel { type1 = 1, type2, type3, type4 };

std::string_view to_string(AttackLevel level);
AttackLevel attack_level_from_int(int level);

struct AttackSpec {
  AttackLevel level = AttackLevel::type1;
  int observations = 1;  // 1 or 4; type3 and type4 need 4
  int count = 5;         // attempts produced per call
  // Mimicry noise at one observation. Both shrink as 1/sqrt(observations).
  double dynamics_noise = 0.15;  // relative error on duration, speed and pressure
  double shape_noise = 0.16;     // rough-shape control point error, fraction of drawing extent

  bool operator==(const AttackSpec&) const = default;
};

/// Throws invalid_value unless the observation count fits the level.
void validate_attack_spec(const AttackSpec& spec);

/// Timing and pressure of the victim's first strokes, averaged over the
/// observed samples on a uniform grid of normalized time.
struct ObservedDynamics {
  double duration_ms = 0.0;
  double stagger_ms = 0.0;
  std::vector<double> progress;  // arc-length fraction
  std::vector<double> pressure;
};

ObservedDynamics observe_dynamics(std::span<const GestureSample> observed, int grid = 64);

/// `count` forged attempts against the victim. Only the first
/// spec.observations victim samples are visible to the attacker.
std::vector<GestureSample> mimic_attack(std::span<const GestureSample> victim_samples, const AttackSpec& spec,
                                        std::uint64_t attacker_seed);

/// Upper bound on the positional jitter of a type4 forgery drawn by
/// `attacker`, in the victim's screen units.
double type4_jitter_amplitude(const PersonaSpec& attacker, const GestureSample& victim);

/// The attacker persona mimic_attack derives from `attacker_seed`.
PersonaSpec attacker_persona(std::uint64_t attacker_seed);

}  // namespace gestauth::eval
