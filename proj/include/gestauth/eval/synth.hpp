#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gestauth/preprocess.hpp"
#include "gestauth/trace.hpp"

namespace gestauth::eval {

using Rng = std::mt19937_64;

/// splitmix64-style mixing used to derive independent streams from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Screen of the emulated device, portrait, pixels.
inline constexpr double kScreenWidth = 800.0;
inline constexpr double kScreenHeight = 1280.0;

/// The path a persona draws for one curve password, in a unit box. Finger k
/// of a multi-finger drawing follows the path warped by finger_warps[k].
struct CurveArchetype {
  std::vector<Point> control;
  bool closed = false;
  std::array<Eigen::Matrix2d, kMaxFingers> finger_warps;
};

struct MotorProfile {
  double duration_ms = 1000.0;
  double duration_cv = 0.05;
  double ease = 0.5;            // 0 constant speed, 1 minimum-jerk profile
  double wobble = 0.1;          // periodic speed modulation amplitude
  double wobble_cycles = 2.0;
  double wobble_phase = 0.0;
  double pressure_mean = 0.5;
  double pressure_trend = 0.0;  // change from start to end of a stroke
  double pressure_bump = 0.1;   // mid-stroke swell
  double pressure_noise = 0.015;
  double jitter = 0.003;        // positional noise, fraction of drawing size
  double shape_noise = 0.02;    // control point perturbation, unit box
  double size_px = 300.0;
  double size_cv = 0.05;
  double interval_ms = 16.0;
};

struct HandSpan {
  // Start offset of finger k relative to finger 1, hand frame, pixels.
  std::array<Point, kMaxFingers> offsets;
  double spread_noise_px = 2.0;
  double stagger_ms = 15.0;
};

struct PersonaSpec {
  std::uint64_t seed = 0;
  std::vector<CurveArchetype> curves;
  MotorProfile motor;
  HandSpan hand;
};

/// Deterministic persona drawn from `seed` with `curve_count` archetypes.
PersonaSpec make_persona(std::uint64_t seed, int curve_count);

CurveArchetype make_archetype(Rng& rng);
MotorProfile make_motor_profile(Rng& rng);
HandSpan make_hand_span(Rng& rng);

/// Arc-length parameterized polyline.
class ArcPath {
 public:
  explicit ArcPath(Coords points);

  static ArcPath catmull_rom(const std::vector<Point>& control, bool closed, int samples_per_segment = 24);

  Point at(double fraction) const;  // fraction of total arc length in [0,1]
  double length() const { return cumulative_.back(); }
  const Coords& points() const { return points_; }

 private:
  Coords points_;
  std::vector<double> cumulative_;
};

/// Event timestamps and arc-length progress in [0,1] for one stroke.
struct Timing {
  std::vector<std::int64_t> t;
  std::vector<double> progress;
};

Timing make_timing(const MotorProfile& motor, double duration_ms, std::int64_t start_ms, Rng& rng);

std::vector<double> make_pressure(const MotorProfile& motor, const std::vector<double>& tau, Rng& rng);

/// Positional noise of one stroke: two slow sinusoids per axis plus a small
/// bounded white component. |at(t) - 0| never exceeds bound().
class Tremor {
 public:
  static Tremor make(double amplitude, Rng& rng);

  Point at(double t_ms, Rng& rng) const;
  double bound() const;

  /// Bound of any Tremor::make(amplitude, ...).
  static double max_bound(double amplitude);

 private:
  std::array<double, 4> amp_{};
  std::array<double, 4> freq_{};  // Hz
  std::array<double, 4> phase_{};
  double white_ = 0.0;
};

/// Placement of a drawing on the screen: rotation about the origin of the
/// unit-box path, then translation.
struct Placement {
  double angle = 0.0;
  Point offset = Point::Zero();
  double size_px = 300.0;
};

Placement random_placement(double size_px, Rng& rng);

/// Renders one drawing of `archetype` with `fingers` fingers.
GestureSample render_sample(const PersonaSpec& persona, const CurveArchetype& archetype, int fingers,
                            const std::string& sample_id, Rng& rng);

/// Corpus with labels "p<persona>:<prefix><curve>". Persona i uses seed
/// mix_seed(base_seed, i).
SampleCorpus synth_persona_corpus(const std::vector<PersonaSpec>& personas, int curves_per_persona,
                                  int samples_per_curve, int fingers = 1, const std::string& curve_prefix = "c");

std::vector<PersonaSpec> make_personas(std::uint64_t base_seed, int count, int curves_per_persona);

/// Random curves from throwaway personas, for use as enrollment decoys.
std::vector<GestureSample> synth_decoys(int fingers, int count, std::uint64_t seed);

struct SynthSpec {
  std::uint64_t seed = 2024;
  int personas = 30;
  int curves_per_persona = 3;
  int samples_per_curve = 20;
  int multi_curves_per_persona = 3;  // 0 disables the multi-finger part
  int multi_fingers = 2;

  bool operator==(const SynthSpec&) const = default;
};

SynthSpec parse_synth_spec(const std::string& json_text);

/// Single-finger passwords labelled "...:s<k>" followed by multi-finger
/// passwords labelled "...:m<k>", drawn by the same personas.
SampleCorpus synth_corpus(const SynthSpec& spec);

}  // namespace gestauth::eval
