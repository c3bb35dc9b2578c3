#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "gestauth/error.hpp"
#include "gestauth/features.hpp"

namespace gestauth {

// d(0) is the constant 1 that pairs with the bias weight; d(1..9) are the
// per-feature DTW distances in Feature order.
using DistanceVector = Eigen::Matrix<double, kFeatureCount + 1, 1>;

namespace detail {

inline bool outside_band(Eigen::Index i, Eigen::Index j, std::optional<Eigen::Index> band,
                         Eigen::Index length_gap) {
  if (!band) return false;
  const Eigen::Index width = std::max(*band, length_gap);
  return std::abs(i - j) > width;
}

}  // namespace detail

/// Unnormalized DTW with absolute-difference ground cost and the symmetric
/// step set {(1,0), (0,1), (1,1)}, anchored at both ends. Keeps two rows of
/// length min(n1, n2).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dtw_distance(const Eigen::DenseBase<DerivedA>& a_in, const Eigen::DenseBase<DerivedB>& b_in,
                                       std::optional<Eigen::Index> band = std::nullopt) {
  using Scalar = typename DerivedA::Scalar;
  if (a_in.size() == 0 || b_in.size() == 0) throw Error(ErrorKind::invalid_value, "dtw: empty series");

  // Rows run over the longer series, columns over the shorter one.
  const bool a_longer = a_in.size() >= b_in.size();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rows_s =
      a_longer ? Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(a_in.derived().reshaped())
               : Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(b_in.derived().reshaped());
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cols_s =
      a_longer ? Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(b_in.derived().reshaped())
               : Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(a_in.derived().reshaped());
  const Eigen::Index n = rows_s.size();
  const Eigen::Index m = cols_s.size();
  const Eigen::Index gap = n - m;
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();

  std::vector<Scalar> prev(static_cast<std::size_t>(m), inf);
  std::vector<Scalar> curr(static_cast<std::size_t>(m), inf);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (detail::outside_band(i, j, band, gap)) {
        curr[uj] = inf;
        continue;
      }
      const Scalar cell = std::abs(rows_s(i) - cols_s(j));
      Scalar best;
      if (i == 0 && j == 0) {
        best = Scalar(0);
      } else {
        best = inf;
        if (i > 0) best = std::min(best, prev[uj]);
        if (j > 0) best = std::min(best, curr[uj - 1]);
        if (i > 0 && j > 0) best = std::min(best, prev[uj - 1]);
      }
      curr[uj] = cell + best;
    }
    std::swap(prev, curr);
  }
  return prev[static_cast<std::size_t>(m - 1)];
}

/// Full cumulative cost matrix (n1 x n2), for diagnostics and tests.
Eigen::MatrixXd dtw_cost_matrix(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Optimal warping path as 0-based (i, j) pairs from (0,0) to (n1-1, n2-1).
/// Ties between predecessors resolve towards the diagonal.
std::vector<std::pair<Eigen::Index, Eigen::Index>> dtw_path(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

DistanceVector distance_vector(const FeatureSeriesSet& candidate, const FeatureSeriesSet& reference,
                               std::optional<Eigen::Index> band = std::nullopt);

}  // namespace gestauth
