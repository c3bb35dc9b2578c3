#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "gestauth/error.hpp"
#include "gestauth/trace.hpp"

namespace gestauth {

using Point = Eigen::Vector2d;
using Coords = Eigen::Matrix2Xd;  // one column per touch event

struct AdjustConfig {
  int eta_s = 3;  // events averaged for the start point
  int eta_e = 3;  // events averaged for the end point
  // Closed-curve threshold in screen units. When unset it is xi_fraction times
  // the diameter of the smallest centroid-centred circle enclosing the curve.
  std::optional<double> xi;
  double xi_fraction = 0.1;

  bool operator==(const AdjustConfig&) const = default;
};

struct AdjustedCurve {
  int finger_id = 0;
  Coords adjusted;    // screen units, after translation and rotation
  Coords normalized;  // per-axis min-max scaled into [0,1]
  std::vector<std::int64_t> timestamps;
  Eigen::VectorXd pressures;
  Point avg_start = Point::Zero();  // in adjusted coordinates
  Point avg_end = Point::Zero();

  Eigen::Index size() const { return adjusted.cols(); }
};

/// Mean of the first (or last) `count` columns.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> average_point(const Eigen::MatrixBase<Derived>& coords,
                                                            Eigen::Index count, bool from_end) {
  static_assert(Derived::RowsAtCompileTime == 2, "coordinates are 2 x l");
  if (count < 1 || count > coords.cols()) {
    throw Error(ErrorKind::invalid_value, "average_point: count exceeds sequence length");
  }
  const Eigen::Index first = from_end ? coords.cols() - count : 0;
  return coords.middleCols(first, count).rowwise().mean();
}

/// Rotation taking `direction` onto the +x axis:
///   x'' =  x' cos a + y' sin a,   y'' = -x' sin a + y' cos a,  a = atan2(dy, dx).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> rotation_onto_x_axis(const Eigen::Matrix<Scalar, 2, 1>& direction) {
  using std::atan2, std::cos, std::sin;
  const Scalar angle = atan2(direction.y(), direction.x());
  const Scalar c = cos(angle);
  const Scalar s = sin(angle);
  Eigen::Matrix<Scalar, 2, 2> r;
  r << c, s, -s, c;
  return r;
}

/// Min-max scales one axis into [0,1]. A (numerically) constant axis maps to 0.5.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> normalize_axis(const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Scalar lo = values.minCoeff();
  const Scalar hi = values.maxCoeff();
  const Scalar magnitude = std::max(std::abs(lo), std::abs(hi));
  const Scalar span = hi - lo;
  if (!(span > Scalar(1e-9) * std::max(Scalar(1), magnitude))) {
    return Vec::Constant(values.size(), Scalar(0.5));
  }
  Vec out = ((values.array() - lo) / span).matrix();
  return out.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, Eigen::Dynamic> normalize(const Eigen::MatrixBase<Derived>& coords) {
  static_assert(Derived::RowsAtCompileTime == 2, "coordinates are 2 x l");
  if (coords.cols() == 0) throw Error(ErrorKind::invalid_value, "normalize: empty sequence");
  Eigen::Matrix<typename Derived::Scalar, 2, Eigen::Dynamic> out(2, coords.cols());
  out.row(0) = normalize_axis(coords.row(0).transpose()).transpose();
  out.row(1) = normalize_axis(coords.row(1).transpose()).transpose();
  return out;
}

Coords stroke_coords(const Stroke& stroke);

/// Single-curve canonicalization: centroid to origin, then rotate so the
/// start->end arrow (or, for nearly closed curves, the origin->anchor arrow)
/// points along +x.
AdjustedCurve adjust_single(const Stroke& stroke, const AdjustConfig& cfg = {});

/// Multi-curve canonicalization: one rigid motion for all curves, placing
/// curve 1's start at the origin and curve 2's start on the +x axis.
std::vector<AdjustedCurve> adjust_multi(const GestureSample& sample, const AdjustConfig& cfg = {});

/// Dispatches on finger count.
std::vector<AdjustedCurve> adjust_sample(const GestureSample& sample, const AdjustConfig& cfg = {});

}  // namespace gestauth
