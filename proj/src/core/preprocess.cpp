#include "gestauth/preprocess.hpp"

#include <algorithm>

namespace gestauth {

namespace {

Eigen::Index effective_eta(int eta, Eigen::Index length) {
  if (eta < 1) throw Error(ErrorKind::invalid_value, "eta must be positive");
  const Eigen::Index cap = std::max<Eigen::Index>(1, length / 2);
  return std::min<Eigen::Index>(eta, cap);
}

AdjustedCurve make_curve(const Stroke& stroke, Coords adjusted, Eigen::Index eta_s, Eigen::Index eta_e) {
  AdjustedCurve curve;
  curve.finger_id = stroke.finger_id;
  curve.avg_start = average_point(adjusted, eta_s, false);
  curve.avg_end = average_point(adjusted, eta_e, true);
  curve.normalized = normalize(adjusted);
  curve.adjusted = std::move(adjusted);
  curve.timestamps.reserve(stroke.size());
  curve.pressures.resize(static_cast<Eigen::Index>(stroke.size()));
  for (std::size_t j = 0; j < stroke.size(); ++j) {
    curve.timestamps.push_back(stroke.events[j].t);
    curve.pressures(static_cast<Eigen::Index>(j)) = stroke.events[j].pressure;
  }
  return curve;
}

}  // namespace

Coords stroke_coords(const Stroke& stroke) {
  Coords c(2, static_cast<Eigen::Index>(stroke.size()));
  for (std::size_t j = 0; j < stroke.size(); ++j) {
    c(0, static_cast<Eigen::Index>(j)) = stroke.events[j].x;
    c(1, static_cast<Eigen::Index>(j)) = stroke.events[j].y;
  }
  return c;
}

AdjustedCurve adjust_single(const Stroke& stroke, const AdjustConfig& cfg) {
  const auto l = static_cast<Eigen::Index>(stroke.size());
  if (l < 2) throw Error(ErrorKind::too_short, "stroke too short to orient");
  const Eigen::Index eta_s = effective_eta(cfg.eta_s, l);
  const Eigen::Index eta_e = effective_eta(cfg.eta_e, l);

  const Coords raw = stroke_coords(stroke);
  const Point centroid = raw.rowwise().mean();
  const Coords centred = raw.colwise() - centroid;

  const Point start = average_point(centred, eta_s, false);
  const Point end = average_point(centred, eta_e, true);
  const double radius = centred.colwise().norm().maxCoeff();
  const double xi = cfg.xi.value_or(cfg.xi_fraction * 2.0 * radius);

  Point arrow = end - start;
  if (arrow.norm() <= xi) {
    arrow = 0.5 * (start + end);  // anchor point
    if (arrow.norm() <= 1e-12 * std::max(1.0, radius)) {
      throw Error(ErrorKind::degenerate_geometry, "degenerate curve, cannot orient");
    }
  }
  Coords adjusted = rotation_onto_x_axis(arrow) * centred;
  return make_curve(stroke, std::move(adjusted), eta_s, eta_e);
}

std::vector<AdjustedCurve> adjust_multi(const GestureSample& sample, const AdjustConfig& cfg) {
  const auto& strokes = sample.strokes;
  if (strokes.size() < 2) throw Error(ErrorKind::invalid_value, "multi-curve adjustment needs at least 2 strokes");

  std::vector<Coords> raw;
  raw.reserve(strokes.size());
  double extent = 0.0;
  for (const auto& s : strokes) {
    if (s.size() < 2) throw Error(ErrorKind::too_short, "stroke too short to orient");
    raw.push_back(stroke_coords(s));
    extent = std::max(extent, raw.back().cwiseAbs().maxCoeff());
  }

  const Point origin = average_point(raw[0], effective_eta(cfg.eta_s, raw[0].cols()), false);
  const Point second = average_point(raw[1], effective_eta(cfg.eta_s, raw[1].cols()), false) - origin;
  if (second.norm() <= 1e-12 * std::max(1.0, extent)) {
    throw Error(ErrorKind::degenerate_geometry, "degenerate multi-curve geometry");
  }
  const Eigen::Matrix2d rotation = rotation_onto_x_axis(second);

  std::vector<AdjustedCurve> curves;
  curves.reserve(strokes.size());
  for (std::size_t i = 0; i < strokes.size(); ++i) {
    const auto l = raw[i].cols();
    Coords adjusted = rotation * (raw[i].colwise() - origin);
    curves.push_back(make_curve(strokes[i], std::move(adjusted), effective_eta(cfg.eta_s, l),
                                effective_eta(cfg.eta_e, l)));
  }
  return curves;
}

std::vector<AdjustedCurve> adjust_sample(const GestureSample& sample, const AdjustConfig& cfg) {
  if (sample.strokes.size() == 1) return {adjust_single(sample.strokes.front(), cfg)};
  return adjust_multi(sample, cfg);
}

}  // namespace gestauth
