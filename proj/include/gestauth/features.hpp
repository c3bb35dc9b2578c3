#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "gestauth/preprocess.hpp"

namespace gestauth {

// Positional: the classifier weight vector is indexed in this order.
enum class Feature : int {
  x_coord = 0,
  y_coord,
  curvature,
  x_velocity,
  y_velocity,
  x_acceleration,
  y_acceleration,
  direction,
  pressure,
};

inline constexpr int kFeatureCount = 9;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "x_coord",        "y_coord",        "curvature", "x_velocity", "y_velocity",
    "x_acceleration", "y_acceleration", "direction", "pressure"};

struct FeatureSeriesSet {
  std::array<Eigen::VectorXd, kFeatureCount> series;

  Eigen::VectorXd& operator[](Feature f) { return series[static_cast<std::size_t>(f)]; }
  const Eigen::VectorXd& operator[](Feature f) const { return series[static_cast<std::size_t>(f)]; }

  bool operator==(const FeatureSeriesSet& other) const {
    for (std::size_t k = 0; k < series.size(); ++k) {
      if (series[k].size() != other.series[k].size() || series[k] != other.series[k]) return false;
    }
    return true;
  }
};

// Pair distances in lexicographic order (1,2), (1,3), ..., (M-1,M).
struct HandGeometry {
  int finger_count = 0;
  Eigen::VectorXd distances;

  static std::vector<std::pair<int, int>> pairs(int finger_count);
  double distance(int i, int j) const;  // 1-based finger positions, symmetric
};

enum class HandGeometryFrame {
  adjusted,    // shared post-rotation screen frame
  normalized,  // per-curve normalized start points
};

Eigen::VectorXd curvature_series(const Coords& normalized);

std::pair<Eigen::VectorXd, Eigen::VectorXd> velocity_series(const Coords& normalized,
                                                            std::span<const std::int64_t> timestamps);

std::pair<Eigen::VectorXd, Eigen::VectorXd> acceleration_series(const Eigen::VectorXd& x_velocity,
                                                                const Eigen::VectorXd& y_velocity,
                                                                std::span<const std::int64_t> timestamps);

Eigen::VectorXd direction_series(const Coords& normalized);

FeatureSeriesSet extract_features(const AdjustedCurve& curve);

HandGeometry hand_geometry(std::span<const AdjustedCurve> curves,
                           HandGeometryFrame frame = HandGeometryFrame::adjusted);

}  // namespace gestauth
