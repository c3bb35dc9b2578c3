#include "gestauth/eval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "gestauth/error.hpp"
#include "json.hpp"

namespace gestauth::eval {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double normal(Rng& rng, double sd) { return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng) : 0.0; }

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

std::string label_for(std::size_t persona, const std::string& prefix, int curve) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "p%02zu:%s%d", persona, prefix.c_str(), curve + 1);
  return buf;
}

std::string sample_id_for(std::size_t persona, const std::string& prefix, int curve, int k) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "p%02zu-%s%d-%03d", persona, prefix.c_str(), curve + 1, k);
  return buf;
}

void append_password(SampleCorpus& corpus, const PersonaSpec& persona, std::size_t persona_index, int curve_index,
                     int samples, int fingers, const std::string& prefix) {
  const auto& archetype = persona.curves.at(static_cast<std::size_t>(curve_index));
  Rng rng(mix_seed(persona.seed, 0x1000u + static_cast<std::uint64_t>(curve_index) * 8u +
                                     static_cast<std::uint64_t>(fingers)));
  for (int k = 0; k < samples; ++k) {
    corpus.samples.push_back(
        render_sample(persona, archetype, fingers, sample_id_for(persona_index, prefix, curve_index, k), rng));
    corpus.labels.push_back(label_for(persona_index, prefix, curve_index));
  }
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ArcPath::ArcPath(Coords points) : points_(std::move(points)) {
  if (points_.cols() < 2) throw Error(ErrorKind::invalid_value, "path needs at least 2 points");
  cumulative_.resize(static_cast<std::size_t>(points_.cols()), 0.0);
  for (Eigen::Index i = 1; i < points_.cols(); ++i) {
    cumulative_[static_cast<std::size_t>(i)] =
        cumulative_[static_cast<std::size_t>(i - 1)] + (points_.col(i) - points_.col(i - 1)).norm();
  }
}

ArcPath ArcPath::catmull_rom(const std::vector<Point>& control, bool closed, int samples_per_segment) {
  const auto n = static_cast<long>(control.size());
  if (n < 2) throw Error(ErrorKind::invalid_value, "catmull-rom needs at least 2 control points");
  auto at = [&](long i) -> Point {
    if (closed) return control[static_cast<std::size_t>(((i % n) + n) % n)];
    if (i < 0) return 2.0 * control[0] - control[1];
    if (i >= n) return 2.0 * control[static_cast<std::size_t>(n - 1)] - control[static_cast<std::size_t>(n - 2)];
    return control[static_cast<std::size_t>(i)];
  };
  const long segments = closed ? n : n - 1;
  Coords pts(2, segments * samples_per_segment + 1);
  Eigen::Index col = 0;
  for (long s = 0; s < segments; ++s) {
    const Point p0 = at(s - 1), p1 = at(s), p2 = at(s + 1), p3 = at(s + 2);
    for (int k = 0; k < samples_per_segment; ++k) {
      const double u = static_cast<double>(k) / samples_per_segment;
      const double u2 = u * u, u3 = u2 * u;
      pts.col(col++) = 0.5 * ((2.0 * p1) + (-p0 + p2) * u + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u2 +
                              (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * u3);
    }
  }
  pts.col(col) = at(segments);
  return ArcPath(std::move(pts));
}

Point ArcPath::at(double fraction) const {
  const double target = std::clamp(fraction, 0.0, 1.0) * length();
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.begin()) return points_.col(0);
  if (it == cumulative_.end()) return points_.col(points_.cols() - 1);
  const auto hi = static_cast<Eigen::Index>(it - cumulative_.begin());
  const double seg = cumulative_[static_cast<std::size_t>(hi)] - cumulative_[static_cast<std::size_t>(hi - 1)];
  const double w = seg > 0.0 ? (target - cumulative_[static_cast<std::size_t>(hi - 1)]) / seg : 0.0;
  return (1.0 - w) * points_.col(hi - 1) + w * points_.col(hi);
}

Tremor Tremor::make(double amplitude, Rng& rng) {
  Tremor t;
  for (std::size_t k = 0; k < 4; ++k) {
    t.amp_[k] = uniform(rng, 0.3, 0.6) * amplitude;
    t.freq_[k] = uniform(rng, 2.0, 6.0);
    t.phase_[k] = uniform(rng, 0.0, 2.0 * kPi);
  }
  t.white_ = 0.1 * amplitude;
  return t;
}

Point Tremor::at(double t_ms, Rng& rng) const {
  Point p = Point::Zero();
  for (std::size_t k = 0; k < 4; ++k) {
    p[static_cast<Eigen::Index>(k / 2)] += amp_[k] * std::sin(2.0 * kPi * freq_[k] * t_ms / 1000.0 + phase_[k]);
  }
  if (white_ > 0.0) p += Point(uniform(rng, -white_, white_), uniform(rng, -white_, white_));
  return p;
}

double Tremor::bound() const {
  return std::hypot(amp_[0] + amp_[1] + white_, amp_[2] + amp_[3] + white_);
}

double Tremor::max_bound(double amplitude) { return std::sqrt(2.0) * 1.3 * amplitude; }

CurveArchetype make_archetype(Rng& rng) {
  CurveArchetype a;
  const int k = std::uniform_int_distribution<int>(4, 7)(rng);
  a.closed = uniform(rng, 0.0, 1.0) < 0.3;
  Point p = Point::Zero();
  double heading = uniform(rng, 0.0, 2.0 * kPi);
  a.control.push_back(p);
  for (int i = 1; i < k; ++i) {
    const double turn = uniform(rng, 25.0, 140.0) * kPi / 180.0;
    heading += uniform(rng, 0.0, 1.0) < 0.5 ? turn : -turn;
    p += uniform(rng, 0.35, 0.7) * Point(std::cos(heading), std::sin(heading));
    a.control.push_back(p);
  }
  // Fit into the unit box, keeping the aspect ratio.
  Point lo = a.control.front(), hi = a.control.front();
  for (const auto& c : a.control) {
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  const double extent = std::max((hi - lo).maxCoeff(), 1e-6);
  for (auto& c : a.control) c = (c - lo) / extent;

  a.finger_warps[0] = Eigen::Matrix2d::Identity();
  for (std::size_t f = 1; f < kMaxFingers; ++f) {
    Eigen::Matrix2d scale = Eigen::Vector2d(uniform(rng, 0.85, 1.15), uniform(rng, 0.85, 1.15)).asDiagonal();
    a.finger_warps[f] = rotation(uniform(rng, -0.17, 0.17)) * scale;
  }
  return a;
}

MotorProfile make_motor_profile(Rng& rng) {
  MotorProfile m;
  m.duration_ms = uniform(rng, 700.0, 1800.0);
  m.duration_cv = uniform(rng, 0.03, 0.07);
  m.ease = uniform(rng, 0.0, 1.0);
  m.wobble = uniform(rng, 0.0, 0.3);
  m.wobble_cycles = uniform(rng, 1.0, 3.0);
  m.wobble_phase = uniform(rng, 0.0, 2.0 * kPi);
  m.pressure_mean = uniform(rng, 0.25, 0.85);
  m.pressure_trend = uniform(rng, -0.25, 0.25);
  m.pressure_bump = uniform(rng, -0.1, 0.2);
  m.pressure_noise = uniform(rng, 0.01, 0.02);
  m.jitter = uniform(rng, 0.002, 0.004);
  m.shape_noise = uniform(rng, 0.015, 0.03);
  m.size_px = uniform(rng, 200.0, 420.0);
  m.size_cv = uniform(rng, 0.03, 0.08);
  m.interval_ms = 16.0;
  return m;
}

HandSpan make_hand_span(Rng& rng) {
  HandSpan h;
  const double direction = uniform(rng, -0.35, 0.35);
  const Point along(std::cos(direction), std::sin(direction));
  const Point across(-along.y(), along.x());
  h.offsets[0] = Point::Zero();
  double reach = 0.0;
  for (std::size_t f = 1; f < kMaxFingers; ++f) {
    reach += uniform(rng, 55.0, 110.0);
    h.offsets[f] = reach * along + normal(rng, 15.0) * across;
  }
  h.spread_noise_px = uniform(rng, 1.5, 3.0);
  h.stagger_ms = uniform(rng, 8.0, 30.0);
  return h;
}

PersonaSpec make_persona(std::uint64_t seed, int curve_count) {
  PersonaSpec p;
  p.seed = seed;
  Rng rng(mix_seed(seed, 0));
  p.motor = make_motor_profile(rng);
  p.hand = make_hand_span(rng);
  for (int c = 0; c < curve_count; ++c) p.curves.push_back(make_archetype(rng));
  return p;
}

std::vector<PersonaSpec> make_personas(std::uint64_t base_seed, int count, int curves_per_persona) {
  std::vector<PersonaSpec> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(make_persona(mix_seed(base_seed, static_cast<std::uint64_t>(i)), curves_per_persona));
  }
  return out;
}

Timing make_timing(const MotorProfile& motor, double duration_ms, std::int64_t start_ms, Rng& rng) {
  const double interval = std::max(2.0, motor.interval_ms);
  const int n = std::max(8, static_cast<int>(std::lround(duration_ms / interval)) + 1);
  Timing timing;
  timing.t.reserve(static_cast<std::size_t>(n));
  timing.t.push_back(start_ms);
  std::uniform_int_distribution<int> wiggle(-2, 2);
  for (int j = 1; j < n; ++j) {
    const auto step = std::max<std::int64_t>(1, std::lround(interval) + wiggle(rng));
    timing.t.push_back(timing.t.back() + step);
  }

  // Progress is the normalized integral of the speed profile.
  constexpr int kGrid = 512;
  std::vector<double> cumulative(kGrid + 1, 0.0);
  auto speed = [&](double tau) {
    const double bell = 30.0 * tau * tau * (1.0 - tau) * (1.0 - tau);
    const double v = (1.0 - motor.ease) + motor.ease * bell +
                     motor.wobble * std::sin(2.0 * kPi * motor.wobble_cycles * tau + motor.wobble_phase);
    return std::max(0.05, v);
  };
  for (int g = 1; g <= kGrid; ++g) {
    const double a = static_cast<double>(g - 1) / kGrid, b = static_cast<double>(g) / kGrid;
    cumulative[static_cast<std::size_t>(g)] =
        cumulative[static_cast<std::size_t>(g - 1)] + 0.5 * (speed(a) + speed(b)) / kGrid;
  }
  const double total_t = static_cast<double>(timing.t.back() - timing.t.front());
  for (const auto t : timing.t) {
    const double tau = static_cast<double>(t - timing.t.front()) / total_t;
    const double pos = tau * kGrid;
    const auto g = std::min(kGrid - 1, static_cast<int>(pos));
    const double w = pos - g;
    const double value = (1.0 - w) * cumulative[static_cast<std::size_t>(g)] + w * cumulative[static_cast<std::size_t>(g + 1)];
    timing.progress.push_back(value / cumulative.back());
  }
  return timing;
}

std::vector<double> make_pressure(const MotorProfile& motor, const std::vector<double>& tau, Rng& rng) {
  std::vector<double> p;
  p.reserve(tau.size());
  for (const double s : tau) {
    const double v = motor.pressure_mean + motor.pressure_trend * (s - 0.5) + motor.pressure_bump * std::sin(kPi * s) +
                     normal(rng, motor.pressure_noise);
    p.push_back(std::clamp(v, 0.02, 1.0));
  }
  return p;
}

Placement random_placement(double size_px, Rng& rng) {
  Placement pl;
  pl.size_px = size_px;
  pl.angle = uniform(rng, 0.0, 2.0 * kPi);
  const double margin = 0.25;
  pl.offset = Point(uniform(rng, margin * kScreenWidth, (1.0 - margin) * kScreenWidth),
                    uniform(rng, margin * kScreenHeight, (1.0 - margin) * kScreenHeight));
  return pl;
}

GestureSample render_sample(const PersonaSpec& persona, const CurveArchetype& archetype, int fingers,
                            const std::string& sample_id, Rng& rng) {
  if (fingers < 1 || fingers > static_cast<int>(kMaxFingers)) {
    throw Error(ErrorKind::invalid_value, "finger count out of range");
  }
  const MotorProfile& motor = persona.motor;
  const double size = motor.size_px * std::max(0.5, 1.0 + normal(rng, motor.size_cv));
  const Placement placement = random_placement(size, rng);
  const Eigen::Matrix2d r = rotation(placement.angle);
  const double duration = std::max(200.0, motor.duration_ms * (1.0 + normal(rng, motor.duration_cv)));

  std::vector<Point> control = archetype.control;
  for (auto& c : control) c += Point(normal(rng, motor.shape_noise), normal(rng, motor.shape_noise));
  Point centre = Point::Zero();
  for (const auto& c : control) centre += c;
  centre /= static_cast<double>(control.size());

  std::vector<TouchEvent> events;
  for (int f = 0; f < fingers; ++f) {
    std::vector<Point> warped;
    for (const auto& c : control) warped.push_back(centre + archetype.finger_warps[static_cast<std::size_t>(f)] * (c - centre));
    const ArcPath path = ArcPath::catmull_rom(warped, archetype.closed);
    const Point start_shift = warped.front() - control.front();

    const std::int64_t start =
        f == 0 ? 0
               : std::lround(f * persona.hand.stagger_ms) + std::uniform_int_distribution<int>(0, 3)(rng);
    const Timing timing = make_timing(motor, duration * (1.0 + normal(rng, 0.01)), start, rng);
    std::vector<double> tau;
    const double span_t = static_cast<double>(timing.t.back() - timing.t.front());
    for (const auto t : timing.t) tau.push_back(static_cast<double>(t - timing.t.front()) / span_t);
    const std::vector<double> pressure = make_pressure(motor, tau, rng);

    const Point hand_offset = persona.hand.offsets[static_cast<std::size_t>(f)] +
                              Point(normal(rng, persona.hand.spread_noise_px), normal(rng, persona.hand.spread_noise_px));
    const Tremor tremor = Tremor::make(motor.jitter * size, rng);
    for (std::size_t j = 0; j < timing.t.size(); ++j) {
      // Finger f starts hand_offset away from finger 1's start point.
      const Point local = (path.at(timing.progress[j]) - start_shift - control.front()) * size + hand_offset;
      const Point screen = r * local + placement.offset + tremor.at(static_cast<double>(timing.t[j]), rng);
      TouchEvent e;
      e.finger_id = f;
      e.x = screen.x();
      e.y = screen.y();
      e.t = timing.t[j];
      e.pressure = pressure[j];
      e.size = std::clamp(0.3 + normal(rng, 0.02), 0.0, 1.0);
      events.push_back(e);
    }
  }
  return assemble_sample(sample_id, "synthetic", events);
}

SampleCorpus synth_persona_corpus(const std::vector<PersonaSpec>& personas, int curves_per_persona,
                                  int samples_per_curve, int fingers, const std::string& curve_prefix) {
  if (curves_per_persona < 1 || samples_per_curve < 1) throw Error(ErrorKind::invalid_value, "counts must be positive");
  SampleCorpus corpus;
  for (std::size_t i = 0; i < personas.size(); ++i) {
    for (int c = 0; c < curves_per_persona; ++c) {
      append_password(corpus, personas[i], i, c, samples_per_curve, fingers, curve_prefix);
    }
  }
  return corpus;
}

std::vector<GestureSample> synth_decoys(int fingers, int count, std::uint64_t seed) {
  std::vector<GestureSample> out;
  for (int i = 0; i < count; ++i) {
    const PersonaSpec persona = make_persona(mix_seed(seed, static_cast<std::uint64_t>(i)), 1);
    Rng rng(mix_seed(persona.seed, 77));
    out.push_back(render_sample(persona, persona.curves.front(), fingers, "decoy-" + std::to_string(i), rng));
  }
  return out;
}

SynthSpec parse_synth_spec(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::malformed_input, "synth spec is not a JSON object");
  SynthSpec s;
  s.seed = j.value("seed", s.seed);
  s.personas = j.value("personas", s.personas);
  s.curves_per_persona = j.value("curves_per_persona", s.curves_per_persona);
  s.samples_per_curve = j.value("samples_per_curve", s.samples_per_curve);
  s.multi_curves_per_persona = j.value("multi_curves_per_persona", s.multi_curves_per_persona);
  s.multi_fingers = j.value("multi_fingers", s.multi_fingers);
  if (s.personas < 1 || s.samples_per_curve < 1 || s.curves_per_persona < 0 || s.multi_curves_per_persona < 0 ||
      s.multi_fingers < 2 || s.multi_fingers > static_cast<int>(kMaxFingers)) {
    throw Error(ErrorKind::invalid_value, "synth spec values out of range");
  }
  return s;
}

SampleCorpus synth_corpus(const SynthSpec& spec) {
  const auto personas =
      make_personas(spec.seed, spec.personas, spec.curves_per_persona + spec.multi_curves_per_persona);
  SampleCorpus corpus;
  for (std::size_t i = 0; i < personas.size(); ++i) {
    for (int c = 0; c < spec.curves_per_persona; ++c) {
      append_password(corpus, personas[i], i, c, spec.samples_per_curve, 1, "s");
    }
  }
  for (std::size_t i = 0; i < personas.size(); ++i) {
    for (int c = 0; c < spec.multi_curves_per_persona; ++c) {
      // Multi-finger passwords use the persona's later archetypes; labels
      // count from m1.
      const int curve = spec.curves_per_persona + c;
      const auto& archetype = personas[i].curves[static_cast<std::size_t>(curve)];
      Rng rng(mix_seed(personas[i].seed, 0x2000u + static_cast<std::uint64_t>(c)));
      for (int k = 0; k < spec.samples_per_curve; ++k) {
        corpus.samples.push_back(
            render_sample(personas[i], archetype, spec.multi_fingers, sample_id_for(i, "m", c, k), rng));
        corpus.labels.push_back(label_for(i, "m", c));
      }
    }
  }
  return corpus;
}

}  // namespace gestauth::eval
