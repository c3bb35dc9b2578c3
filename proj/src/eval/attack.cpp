#include "gestauth/eval/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gestauth/error.hpp"
#include "gestauth/preprocess.hpp"

namespace gestauth::eval {

namespace {

constexpr double kPi = std::numbers::pi;

double normal(Rng& rng, double sd) { return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng) : 0.0; }

// Linear interpolation of a series sampled on a uniform grid over [0,1].
double grid_at(const std::vector<double>& series, double tau) {
  const double pos = std::clamp(tau, 0.0, 1.0) * static_cast<double>(series.size() - 1);
  const auto i = std::min(series.size() - 2, static_cast<std::size_t>(pos));
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * series[i] + w * series[i + 1];
}

double extent(const Coords& c) { return (c.rowwise().maxCoeff() - c.rowwise().minCoeff()).maxCoeff(); }

std::vector<double> normalized_times(const std::vector<std::int64_t>& t) {
  std::vector<double> tau;
  const double span = std::max<double>(1.0, static_cast<double>(t.back() - t.front()));
  for (const auto v : t) tau.push_back(static_cast<double>(v - t.front()) / span);
  return tau;
}

std::vector<std::int64_t> event_times(double duration_ms, std::int64_t start_ms, Rng& rng) {
  const int n = std::max(8, static_cast<int>(std::lround(duration_ms / 16.0)) + 1);
  std::vector<std::int64_t> t{start_ms};
  std::uniform_int_distribution<int> wiggle(-2, 2);
  for (int j = 1; j < n; ++j) t.push_back(t.back() + std::max(1, 16 + wiggle(rng)));
  return t;
}

// Timing and pressure imitating the observed victim, with mimicry error.
struct Imitation {
  std::vector<std::int64_t> t;
  std::vector<double> progress;
  std::vector<double> pressure;
};

Imitation imitate(const ObservedDynamics& dyn, double noise, std::int64_t start_ms, Rng& rng) {
  Imitation im;
  im.t = event_times(dyn.duration_ms * std::max(0.3, 1.0 + normal(rng, noise)), start_ms, rng);
  // A smooth monotone warp of normalized time models speed-profile error.
  const double warp = std::clamp(normal(rng, 0.5 * noise), -0.3, 0.3);
  const double gain = 1.0 + normal(rng, noise);
  for (const double tau : normalized_times(im.t)) {
    const double warped = tau + warp * std::sin(kPi * tau) / kPi;
    im.progress.push_back(grid_at(dyn.progress, warped));
    im.pressure.push_back(std::clamp(gain * grid_at(dyn.pressure, tau) + normal(rng, 0.015), 0.02, 1.0));
  }
  const double last = im.progress.back();
  for (auto& p : im.progress) p = last > 0.0 ? std::clamp(p / last, 0.0, 1.0) : 0.0;
  return im;
}

Imitation own_motion(const MotorProfile& motor, std::int64_t start_ms, Rng& rng) {
  Imitation im;
  const Timing timing = make_timing(motor, std::max(200.0, motor.duration_ms * (1.0 + normal(rng, motor.duration_cv))),
                                    start_ms, rng);
  im.t = timing.t;
  im.progress = timing.progress;
  im.pressure = make_pressure(motor, normalized_times(timing.t), rng);
  return im;
}

void emit(std::vector<TouchEvent>& events, int finger, const ArcPath& path, const Point& shift,
          const Imitation& im, const Tremor& tremor, Rng& rng) {
  for (std::size_t j = 0; j < im.t.size(); ++j) {
    TouchEvent e;
    e.finger_id = finger;
    const Point p = path.at(im.progress[j]) + shift + tremor.at(static_cast<double>(im.t[j]), rng);
    e.x = p.x();
    e.y = p.y();
    e.t = im.t[j];
    e.pressure = im.pressure[j];
    e.size = 0.3;
    events.push_back(e);
  }
}

// Arc-length spaced points of a polyline.
std::vector<Point> rough_points(const Coords& polyline, int count) {
  const ArcPath path(polyline);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back(path.at(static_cast<double>(i) / (count - 1)));
  return out;
}

// Start of stroke k keeps the victim's direction from stroke 1 but the
// attacker's own finger spacing.
Point attacker_start(const GestureSample& victim, std::size_t k, const PersonaSpec& attacker) {
  const Point first(victim.strokes[0].events.front().x, victim.strokes[0].events.front().y);
  if (k == 0) return first;
  const Point vk(victim.strokes[k].events.front().x, victim.strokes[k].events.front().y);
  const Point dir = vk - first;
  const double n = dir.norm();
  const double reach = attacker.hand.offsets[std::min(k, kMaxFingers - 1)].norm();
  if (n <= 0.0) return first + Point(reach, 0.0);
  return first + dir / n * reach;
}

std::string attack_id(AttackLevel level, std::uint64_t seed, int k) {
  return "attack-t" + std::to_string(static_cast<int>(level)) + "-" + std::to_string(seed % 100000) + "-" +
         std::to_string(k);
}

}  // namespace

std::string_view to_string(AttackLevel level) {
  switch (level) {
    case AttackLevel::type1: return "type1";
    case AttackLevel::type2: return "type2";
    case AttackLevel::type3: return "type3";
    case AttackLevel::type4: return "type4";
  }
  return "unknown";
}

AttackLevel attack_level_from_int(int level) {
  if (level < 1 || level > 4) throw Error(ErrorKind::invalid_value, "attack level must be 1..4");
  return static_cast<AttackLevel>(level);
}

void validate_attack_spec(const AttackSpec& spec) {
  if (spec.observations != 1 && spec.observations != 4) {
    throw Error(ErrorKind::invalid_value, "observations must be 1 or 4");
  }
  if ((spec.level == AttackLevel::type3 || spec.level == AttackLevel::type4) && spec.observations != 4) {
    throw Error(ErrorKind::invalid_value, "type3 and type4 attacks need 4 observations");
  }
  if (spec.count < 1) throw Error(ErrorKind::invalid_value, "attack count must be positive");
  if (spec.dynamics_noise < 0.0 || spec.shape_noise < 0.0) {
    throw Error(ErrorKind::invalid_value, "attack noise must be non-negative");
  }
}

ObservedDynamics observe_dynamics(std::span<const GestureSample> observed, int grid) {
  if (observed.empty()) throw Error(ErrorKind::invalid_value, "no observed samples");
  if (grid < 2) throw Error(ErrorKind::invalid_value, "grid too small");
  ObservedDynamics dyn;
  dyn.progress.assign(static_cast<std::size_t>(grid), 0.0);
  dyn.pressure.assign(static_cast<std::size_t>(grid), 0.0);
  for (const auto& sample : observed) {
    const Stroke& s = sample.strokes.front();
    const Coords c = stroke_coords(s);
    std::vector<double> arc{0.0};
    for (Eigen::Index i = 1; i < c.cols(); ++i) arc.push_back(arc.back() + (c.col(i) - c.col(i - 1)).norm());
    std::vector<std::int64_t> t;
    for (const auto& e : s.events) t.push_back(e.t);
    const auto tau = normalized_times(t);
    dyn.duration_ms += static_cast<double>(t.back() - t.front());
    if (sample.strokes.size() > 1) {
      dyn.stagger_ms += static_cast<double>(sample.strokes.back().first_touch() - s.first_touch()) /
                        static_cast<double>(sample.strokes.size() - 1);
    }
    for (int g = 0; g < grid; ++g) {
      const double x = static_cast<double>(g) / (grid - 1);
      auto it = std::lower_bound(tau.begin(), tau.end(), x);
      std::size_t hi = std::min<std::size_t>(tau.size() - 1, static_cast<std::size_t>(it - tau.begin()));
      std::size_t lo = hi == 0 ? 0 : hi - 1;
      const double span = tau[hi] - tau[lo];
      const double w = span > 0.0 ? std::clamp((x - tau[lo]) / span, 0.0, 1.0) : 0.0;
      const double total = arc.back() > 0.0 ? arc.back() : 1.0;
      dyn.progress[static_cast<std::size_t>(g)] += ((1.0 - w) * arc[lo] + w * arc[hi]) / total;
      dyn.pressure[static_cast<std::size_t>(g)] +=
          (1.0 - w) * s.events[lo].pressure + w * s.events[hi].pressure;
    }
  }
  const double n = static_cast<double>(observed.size());
  dyn.duration_ms /= n;
  dyn.stagger_ms /= n;
  for (auto& v : dyn.progress) v /= n;
  for (auto& v : dyn.pressure) v /= n;
  return dyn;
}

PersonaSpec attacker_persona(std::uint64_t attacker_seed) { return make_persona(mix_seed(attacker_seed, 0xA77AC), 1); }

double type4_jitter_amplitude(const PersonaSpec& attacker, const GestureSample& victim) {
  return Tremor::max_bound(attacker.motor.jitter * extent(stroke_coords(victim.strokes.front())));
}

std::vector<GestureSample> mimic_attack(std::span<const GestureSample> victim_samples, const AttackSpec& spec,
                                        std::uint64_t attacker_seed) {
  if (victim_samples.empty()) throw Error(ErrorKind::invalid_value, "mimic attack needs victim samples");
  validate_attack_spec(spec);
  for (const auto& s : victim_samples) validate_sample(s);
  const std::size_t fingers = victim_samples.front().finger_count();
  const PersonaSpec attacker = attacker_persona(attacker_seed);
  Rng rng(mix_seed(attacker.seed, 0x3000u + static_cast<std::uint64_t>(spec.level)));
  const int fingers_i = static_cast<int>(fingers);

  std::vector<GestureSample> out;
  if (spec.level == AttackLevel::type1) {
    for (int k = 0; k < spec.count; ++k) {
      out.push_back(render_sample(attacker, attacker.curves.front(), fingers_i,
                                  attack_id(spec.level, attacker_seed, k), rng));
    }
    return out;
  }

  const auto visible = victim_samples.first(std::min<std::size_t>(victim_samples.size(),
                                                                  static_cast<std::size_t>(spec.observations)));
  const double decay = 1.0 / std::sqrt(static_cast<double>(spec.observations));
  const double dyn_noise = spec.dynamics_noise * decay;
  const double shape_noise = spec.shape_noise * decay;
  const GestureSample& model = visible.front();
  const double victim_size = extent(stroke_coords(model.strokes.front()));

  for (int k = 0; k < spec.count; ++k) {
    std::vector<TouchEvent> events;
    if (spec.level == AttackLevel::type2) {
      // Own shape, imitated dynamics.
      const ObservedDynamics dyn = observe_dynamics(visible);
      const CurveArchetype& arch = attacker.curves.front();
      const Placement pl = random_placement(victim_size, rng);
      Eigen::Matrix2d r;
      r << std::cos(pl.angle), -std::sin(pl.angle), std::sin(pl.angle), std::cos(pl.angle);
      for (std::size_t f = 0; f < fingers; ++f) {
        std::vector<Point> ctrl;
        for (const auto& c : arch.control) {
          const Point local = arch.finger_warps[f] * (c - arch.control.front()) * victim_size + attacker.hand.offsets[f];
          ctrl.push_back(r * local + pl.offset);
        }
        const ArcPath path = ArcPath::catmull_rom(ctrl, arch.closed);
        const auto start = static_cast<std::int64_t>(std::lround(static_cast<double>(f) * dyn.stagger_ms));
        const Imitation im = imitate(dyn, dyn_noise, start, rng);
        emit(events, static_cast<int>(f), path, Point::Zero(), im, Tremor::make(attacker.motor.jitter * victim_size, rng),
             rng);
      }
    } else {
      for (std::size_t f = 0; f < fingers; ++f) {
        const Coords victim_poly = stroke_coords(model.strokes[f]);
        const Point victim_start = victim_poly.col(0);
        const Point start_at = attacker_start(model, f, attacker);
        const auto start =
            f == 0 ? std::int64_t{0} : static_cast<std::int64_t>(std::lround(static_cast<double>(f) * attacker.hand.stagger_ms));
        const Imitation im = own_motion(attacker.motor, start, rng);
        if (spec.level == AttackLevel::type3) {
          // Rough shape: a few perturbed landmarks of the victim's curve.
          const double sd = shape_noise * victim_size;
          auto pts = rough_points(victim_poly, 6);
          for (auto& p : pts) p += Point(normal(rng, sd), normal(rng, sd));
          const ArcPath path = ArcPath::catmull_rom(pts, false);
          emit(events, static_cast<int>(f), path, start_at - victim_start, im,
               Tremor::make(attacker.motor.jitter * victim_size, rng), rng);
        } else {
          // Exact shape traced with the attacker's own motion. Tremor is
          // bounded, so the forgery stays within type4_jitter_amplitude of
          // the victim's outline.
          const ArcPath path(victim_poly);
          emit(events, static_cast<int>(f), path, start_at - victim_start, im,
               Tremor::make(attacker.motor.jitter * victim_size, rng), rng);
        }
      }
    }
    out.push_back(assemble_sample(attack_id(spec.level, attacker_seed, k), "synthetic", events));
  }
  return out;
}

}  // namespace gestauth::eval
