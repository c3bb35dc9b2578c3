#include "gestauth/features.hpp"

#include <cmath>
#include <numbers>

namespace gestauth {

namespace {

// Batched events share a timestamp; floor the step at 1 ms.
double step_ms(std::span<const std::int64_t> t, Eigen::Index j) {
  const auto dt = t[static_cast<std::size_t>(j)] - t[static_cast<std::size_t>(j - 1)];
  return dt > 0 ? static_cast<double>(dt) : 1.0;
}

Point normalized_start(const AdjustedCurve& curve) {
  Point out;
  for (int axis = 0; axis < 2; ++axis) {
    const double lo = curve.adjusted.row(axis).minCoeff();
    const double hi = curve.adjusted.row(axis).maxCoeff();
    const double span = hi - lo;
    const double magnitude = std::max(std::abs(lo), std::abs(hi));
    out(axis) = span > 1e-9 * std::max(1.0, magnitude) ? (curve.avg_start(axis) - lo) / span : 0.5;
  }
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> HandGeometry::pairs(int finger_count) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= finger_count; ++i) {
    for (int j = i + 1; j <= finger_count; ++j) out.emplace_back(i, j);
  }
  return out;
}

double HandGeometry::distance(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 1 || j > finger_count || i == j) throw Error(ErrorKind::invalid_value, "finger pair out of range");
  // Index of (i, j) in lexicographic pair order.
  const int before = (i - 1) * finger_count - (i - 1) * i / 2;
  return distances(before + (j - i - 1));
}

Eigen::VectorXd curvature_series(const Coords& c) {
  const Eigen::Index l = c.cols();
  if (l < 3) throw Error(ErrorKind::too_short, "curvature needs at least 3 points");
  Eigen::VectorXd kappa(l - 2);
  for (Eigen::Index j = 1; j + 1 < l; ++j) {
    const double dx = (c(0, j + 1) - c(0, j - 1)) / 2.0;
    const double dy = (c(1, j + 1) - c(1, j - 1)) / 2.0;
    const double px = c(0, j + 1) - 2.0 * c(0, j) + c(0, j - 1);
    const double py = c(1, j + 1) - 2.0 * c(1, j) + c(1, j - 1);
    const double speed_sq = dx * dx + dy * dy;
    kappa(j - 1) = speed_sq > 0.0 ? (4.0 * py * dx - 4.0 * px * dy) / std::pow(speed_sq, 1.5) : 0.0;
  }
  return kappa;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> velocity_series(const Coords& c,
                                                            std::span<const std::int64_t> timestamps) {
  const Eigen::Index l = c.cols();
  if (l < 2) throw Error(ErrorKind::too_short, "velocity needs at least 2 points");
  if (static_cast<Eigen::Index>(timestamps.size()) != l) {
    throw Error(ErrorKind::invalid_value, "timestamp count differs from point count");
  }
  Eigen::VectorXd vx(l - 1), vy(l - 1);
  for (Eigen::Index j = 1; j < l; ++j) {
    const double dt = step_ms(timestamps, j);
    vx(j - 1) = (c(0, j) - c(0, j - 1)) / dt;
    vy(j - 1) = (c(1, j) - c(1, j - 1)) / dt;
  }
  return {std::move(vx), std::move(vy)};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> acceleration_series(const Eigen::VectorXd& vx,
                                                                const Eigen::VectorXd& vy,
                                                                std::span<const std::int64_t> timestamps) {
  // Velocity index k corresponds to event k + 1; acceleration uses the step
  // ending at the later event.
  const Eigen::Index n = vx.size();
  if (n < 2) throw Error(ErrorKind::too_short, "acceleration needs at least 3 points");
  if (vy.size() != n || static_cast<Eigen::Index>(timestamps.size()) != n + 1) {
    throw Error(ErrorKind::invalid_value, "velocity/timestamp lengths disagree");
  }
  Eigen::VectorXd ax(n - 1), ay(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double dt = step_ms(timestamps, k + 1);
    ax(k - 1) = (vx(k) - vx(k - 1)) / dt;
    ay(k - 1) = (vy(k) - vy(k - 1)) / dt;
  }
  return {std::move(ax), std::move(ay)};
}

Eigen::VectorXd direction_series(const Coords& c) {
  const Eigen::Index l = c.cols();
  if (l < 2) throw Error(ErrorKind::too_short, "direction needs at least 2 points");
  Eigen::VectorXd dir(l - 1);
  double previous = 0.0;
  for (Eigen::Index j = 0; j + 1 < l; ++j) {
    const double dx = c(0, j + 1) - c(0, j);
    const double dy = c(1, j + 1) - c(1, j);
    if (dx == 0.0 && dy == 0.0) {
      dir(j) = previous;
      continue;
    }
    double a = std::atan2(dy, dx);
    if (a == -std::numbers::pi) a = std::numbers::pi;  // keep values in (-pi, pi]
    dir(j) = previous = a;
  }
  return dir;
}

FeatureSeriesSet extract_features(const AdjustedCurve& curve) {
  if (curve.size() < 3) throw Error(ErrorKind::too_short, "stroke too short for feature extraction");
  FeatureSeriesSet f;
  f[Feature::x_coord] = curve.normalized.row(0).transpose();
  f[Feature::y_coord] = curve.normalized.row(1).transpose();
  f[Feature::curvature] = curvature_series(curve.normalized);
  auto [vx, vy] = velocity_series(curve.normalized, curve.timestamps);
  auto [ax, ay] = acceleration_series(vx, vy, curve.timestamps);
  f[Feature::x_velocity] = std::move(vx);
  f[Feature::y_velocity] = std::move(vy);
  f[Feature::x_acceleration] = std::move(ax);
  f[Feature::y_acceleration] = std::move(ay);
  f[Feature::direction] = direction_series(curve.normalized);
  f[Feature::pressure] = curve.pressures;
  return f;
}

HandGeometry hand_geometry(std::span<const AdjustedCurve> curves, HandGeometryFrame frame) {
  const int m = static_cast<int>(curves.size());
  if (m < 2) throw Error(ErrorKind::invalid_value, "hand geometry undefined for single curve");
  std::vector<Point> starts;
  for (const auto& c : curves) {
    starts.push_back(frame == HandGeometryFrame::adjusted ? c.avg_start : normalized_start(c));
  }
  HandGeometry g;
  g.finger_count = m;
  const auto pairs = HandGeometry::pairs(m);
  g.distances.resize(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    g.distances(static_cast<Eigen::Index>(k)) = (starts[i - 1] - starts[j - 1]).norm();
  }
  return g;
}

}  // namespace gestauth
